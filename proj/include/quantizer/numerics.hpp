#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace quantizer {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

namespace numerics {

/// SplitMix64 generator; satisfies UniformRandomBitGenerator so it plugs
/// into the <random> distributions. Small state makes per-sample streams cheap.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for sample `index` under `seed`. Results never depend
/// on how samples are distributed across workers.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t a = mix();
  SplitMix64 mix2(a + index * 0xd1b54a32d192ed03ULL);
  return SplitMix64(mix2());
}

/// Derive a seed for a named sub-computation so unrelated estimates sharing a
/// user seed do not reuse samples.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 mix(seed + 0x243f6a8885a308d3ULL * (tag + 1));
  return mix();
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [a, b]; Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<unsigned>(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double p = std::legendre(n, x);
      const double pm1 = n > 1 ? std::legendre(n - 1, x) : 1.0;
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      const double p = std::legendre(n, x);
      const double pm1 = n > 1 ? std::legendre(n - 1, x) : 1.0;
      dp = n * (x * p - pm1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[order - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[order - 1 - i] = half * w;
  }
  return rule;
}

/// Central-difference mixed Hessian d^2 f / dz^m dzbar^n of a real function
/// of n complex variables.
template <class F>
CMatrix mixed_hessian_fd(F&& f, const CVector& z, double h) {
  const auto n = z.size();
  const auto dir = [&](Eigen::Index a) {
    // a < n: real part of z_a; a >= n: imaginary part of z_(a-n)
    CVector e = CVector::Zero(n);
    e(a % n) = a < n ? cplx(h, 0.0) : cplx(0.0, h);
    return e;
  };
  const Eigen::Index dim = 2 * n;
  Eigen::MatrixXd d2(dim, dim);
  const double f0 = f(z);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const CVector ea = dir(a);
    d2(a, a) = (f(CVector(z + ea)) - 2.0 * f0 + f(CVector(z - ea))) / (h * h);
    for (Eigen::Index b = a + 1; b < dim; ++b) {
      const CVector eb = dir(b);
      const double v = (f(CVector(z + ea + eb)) - f(CVector(z + ea - eb)) -
                        f(CVector(z - ea + eb)) + f(CVector(z - ea - eb))) /
                       (4.0 * h * h);
      d2(a, b) = v;
      d2(b, a) = v;
    }
  }
  CMatrix out(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = d2(m, k) + d2(n + m, n + k);
      const double im = d2(m, n + k) - d2(n + m, k);
      out(m, k) = 0.25 * cplx(re, im);
    }
  }
  return out;
}

/// Central-difference Wirtinger derivatives of a complex function of n
/// complex variables: returns (d/dz, d/dzbar) gradients.
template <class F>
std::pair<CVector, CVector> wirtinger_gradient_fd(F&& f, const CVector& z, double h) {
  const auto n = z.size();
  CVector dz(n), dzbar(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    CVector ex = CVector::Zero(n);
    ex(m) = cplx(h, 0.0);
    CVector ey = CVector::Zero(n);
    ey(m) = cplx(0.0, h);
    const cplx fx = (f(CVector(z + ex)) - f(CVector(z - ex))) / (2.0 * h);
    const cplx fy = (f(CVector(z + ey)) - f(CVector(z - ey))) / (2.0 * h);
    dz(m) = 0.5 * (fx - cplx(0.0, 1.0) * fy);
    dzbar(m) = 0.5 * (fx + cplx(0.0, 1.0) * fy);
  }
  return {dz, dzbar};
}

/// Default finite-difference step for complex Hessian oracles.
inline double fd_step(const CVector& z) { return 1e-4 * (1.0 + z.norm()); }

inline int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Evaluate `fn(begin, end)` over fixed-size blocks of [0, count) and return
/// the per-block results in block order. Block boundaries depend only on
/// `count` and `block`, so an in-order reduction of the result is bitwise
/// identical for any thread count.
template <class T, class Fn>
std::vector<T> map_blocks(std::size_t count, std::size_t block, int threads, Fn&& fn) {
  const std::size_t nblocks = count == 0 ? 0 : (count + block - 1) / block;
  std::vector<T> out(nblocks);
  const auto work = [&](std::size_t worker, std::size_t stride) {
    for (std::size_t b = worker; b < nblocks; b += stride) {
      const std::size_t begin = b * block;
      out[b] = fn(begin, std::min(count, begin + block));
    }
  };
  const std::size_t nthreads =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), nblocks));
  if (nthreads <= 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(nthreads);
  for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(work, w, nthreads);
  return out;
}

/// Running mean/variance accumulator for Monte Carlo estimates.
struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  Moments& operator+=(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
    return *this;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  /// Standard error of the mean.
  double std_error() const {
    if (count < 2) return std::numeric_limits<double>::infinity();
    const double c = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
    return std::sqrt(var / c);
  }
};

inline constexpr std::size_t kMonteCarloBlock = 4096;

}  // namespace numerics
}  // namespace quantizer
