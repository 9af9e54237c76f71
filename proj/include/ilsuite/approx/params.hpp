#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ilsuite {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Flat mutable views over every trainable array of a model, in a fixed order.
/// Gradient sets expose the same layout so optimisers can zip the two lists.
using ParamViews = std::vector<std::span<double>>;

inline std::span<double> view_of(Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
inline std::span<double> view_of(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

inline void append_views(ParamViews& dst, const ParamViews& src) { dst.insert(dst.end(), src.begin(), src.end()); }

/// Derive an independent generator from a parent seed and a stream label.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x1f2e3d4cu};
  return Rng(seq);
}

}  // namespace ilsuite
