#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "quantizer/errors.hpp"
#include "quantizer/numerics.hpp"

namespace quantizer {

/// Relative modulus |Z^k| / max_j |Z^j| below which a point is outside chart k.
inline constexpr double kChartMembershipTolerance = 1e-12;

/// A point of CP^n in homogeneous coordinates Z^0..Z^n (0-based slots).
class HomogeneousPoint {
 public:
  explicit HomogeneousPoint(CVector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw std::invalid_argument("HomogeneousPoint: need at least 2 coordinates");
    if (coords_.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("HomogeneousPoint: zero vector");
  }

  int dimension() const { return static_cast<int>(coords_.size()) - 1; }
  const CVector& coords() const { return coords_; }
  cplx operator[](Eigen::Index i) const { return coords_(i); }

  /// Index of the largest-modulus coordinate (first one on ties).
  int dominant_chart() const {
    Eigen::Index idx = 0;
    coords_.cwiseAbs().maxCoeff(&idx);
    return static_cast<int>(idx);
  }

  bool in_chart(int k) const {
    return std::abs(coords_(k)) / coords_.cwiseAbs().maxCoeff() > kChartMembershipTolerance;
  }

  /// Representative with unit norm and the dominant entry real positive.
  /// Removes the R+ x U(1) ambiguity deterministically.
  CVector canonical() const {
    const auto k = dominant_chart();
    const cplx phase = coords_(k) / std::abs(coords_(k));
    return coords_ / (coords_.norm() * phase);
  }

 private:
  CVector coords_;
};

/// 1 - |<a,b>|^2 / (|a|^2 |b|^2): zero iff the points coincide in CP^n.
inline double projective_distance(const HomogeneousPoint& a, const HomogeneousPoint& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("projective_distance: dimension mismatch");
  const double overlap = std::norm(a.coords().dot(b.coords())) /
                         (a.coords().squaredNorm() * b.coords().squaredNorm());
  return std::max(0.0, 1.0 - overlap);
}

inline bool equivalent(const HomogeneousPoint& a, const HomogeneousPoint& b, double tol = 1e-12) {
  if (a.dimension() != b.dimension()) return false;
  return (a.canonical() - b.canonical()).norm() <= tol;
}

/// Affine coordinates z^j = Z^j / Z^k, j != k, increasing j with slot k omitted.
struct ChartPoint {
  int chart = 0;
  CVector z;

  int dimension() const { return static_cast<int>(z.size()); }
};

namespace detail {
inline void check_chart_index(int n, int k) {
  if (k < 0 || k > n) throw std::out_of_range("chart index " + std::to_string(k) + " outside 0.." + std::to_string(n));
}
}  // namespace detail

inline HomogeneousPoint lift(const ChartPoint& p) {
  const int n = p.dimension();
  detail::check_chart_index(n, p.chart);
  CVector Z(n + 1);
  for (int j = 0, a = 0; j <= n; ++j) Z(j) = (j == p.chart) ? cplx(1.0, 0.0) : p.z(a++);
  return HomogeneousPoint(std::move(Z));
}

inline ChartPoint to_chart(const HomogeneousPoint& p, int k) {
  const int n = p.dimension();
  detail::check_chart_index(n, k);
  if (!p.in_chart(k)) throw ChartUndefined("point lies outside chart " + std::to_string(k));
  ChartPoint out{k, CVector(n)};
  const cplx Zk = p[k];
  for (int j = 0, a = 0; j <= n; ++j) {
    if (j != k) out.z(a++) = p[j] / Zk;
  }
  return out;
}

inline ChartPoint transition(const ChartPoint& p, int target) {
  if (target == p.chart) return p;
  return to_chart(lift(p), target);
}

/// Holomorphic Jacobian d z_(target) / d z_(source) at p (rows: target
/// coordinates, cols: source coordinates, both in ChartPoint order).
inline CMatrix transition_jacobian(const ChartPoint& p, int target) {
  const int n = p.dimension();
  detail::check_chart_index(n, target);
  if (target == p.chart) return CMatrix::Identity(n, n);
  const HomogeneousPoint Z = lift(p);
  if (!Z.in_chart(target)) throw ChartUndefined("point lies outside chart " + std::to_string(target));
  const cplx Zt = Z[target];
  CMatrix J = CMatrix::Zero(n, n);
  // w^a = Z^a / Z^t with Z^k = 1 fixed; only Z^b, b != k, vary.
  for (int a = 0, row = 0; a <= n; ++a) {
    if (a == target) continue;
    for (int b = 0, col = 0; b <= n; ++b) {
      if (b == p.chart) continue;
      cplx v = 0.0;
      if (a == b) v += 1.0 / Zt;
      if (b == target) v -= Z[a] / (Zt * Zt);
      J(row, col) = v;
      ++col;
    }
    ++row;
  }
  return J;
}

/// Points distributed uniformly for Fubini-Study volume: normalized complex
/// Gaussian vectors. Sample i depends only on (seed, i).
inline HomogeneousPoint sample_fs_point(int n, std::uint64_t seed, std::uint64_t index) {
  auto rng = numerics::substream(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector Z(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    Z(j) = cplx(re, im);
  }
  Z /= Z.norm();
  return HomogeneousPoint(std::move(Z));
}

inline std::vector<HomogeneousPoint> sample_fs_uniform(int n, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_fs_uniform: n must be >= 1");
  std::vector<HomogeneousPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_fs_point(n, seed, i));
  return out;
}

}  // namespace quantizer
