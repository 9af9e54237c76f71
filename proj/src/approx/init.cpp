#include "ilsuite/approx/init.hpp"

#include "ilsuite/error.hpp"

namespace ilsuite {

Matrix init_orthogonal(int rows, int cols, double gain, Rng& rng) {
  if (rows < 1 || cols < 1) throw ConfigError("init_orthogonal: dimensions must be positive");
  if (!(gain > 0.0)) throw ConfigError("init_orthogonal: gain must be positive");

  const bool wide = rows <= cols;
  const int tall_rows = wide ? cols : rows;
  const int tall_cols = wide ? rows : cols;

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix gaussian(tall_rows, tall_cols);
  for (Eigen::Index j = 0; j < gaussian.cols(); ++j)
    for (Eigen::Index i = 0; i < gaussian.rows(); ++i) gaussian(i, j) = normal(rng);

  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(tall_rows, tall_cols);
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < tall_cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  q *= gain;
  if (wide) return q.transpose();
  return q;
}

}  // namespace ilsuite
