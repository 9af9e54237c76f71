#pragma once

#include "ilsuite/approx/params.hpp"

namespace ilsuite {

/// Orthogonal weight matrix scaled by `gain`: orthonormal rows when rows <= cols,
/// orthonormal columns otherwise. Signs follow diag(R) of the QR factorisation.
Matrix init_orthogonal(int rows, int cols, double gain, Rng& rng);

}  // namespace ilsuite
