#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>

#include "quantizer/atlas.hpp"
#include "quantizer/errors.hpp"
#include "quantizer/numerics.hpp"

namespace quantizer {

/// Components g_{m nbar} of a Hermitian metric at a chart point.
struct MetricValue {
  CMatrix g;

  bool is_hermitian(double tol = 1e-12) const { return (g - g.adjoint()).cwiseAbs().maxCoeff() <= tol; }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  bool is_positive_definite() const { return min_eigenvalue() > 0.0; }
};

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  double scale = 1.0;  ///< factor applied to the Fubini-Study form
};

/// K = log(1 + sum |z^j|^2).
inline double kahler_potential(const CVector& z) { return std::log1p(z.squaredNorm()); }
inline double kahler_potential(const ChartPoint& p) { return kahler_potential(p.z); }

/// Closed-form mixed Hessian of the Kahler potential:
///   g_{mn} = delta_{mn}/(1+|z|^2) - conj(z^m) z^n / (1+|z|^2)^2.
inline MetricValue fs_metric(const CVector& z) {
  const auto n = z.size();
  const double s1 = 1.0 + z.squaredNorm();
  CMatrix g = CMatrix::Identity(n, n) / s1;
  g -= z.conjugate() * z.transpose() / (s1 * s1);
  return {std::move(g)};
}
inline MetricValue fs_metric(const ChartPoint& p) { return fs_metric(p.z); }

/// Holomorphic derivative d g_{q sbar} / d z^p of the Fubini-Study metric,
/// returned as one n x n matrix per p.
inline std::vector<CMatrix> fs_metric_derivative(const CVector& z) {
  const auto n = z.size();
  const double s1 = 1.0 + z.squaredNorm();
  std::vector<CMatrix> out(static_cast<std::size_t>(n), CMatrix::Zero(n, n));
  for (Eigen::Index p = 0; p < n; ++p) {
    CMatrix& d = out[static_cast<std::size_t>(p)];
    const cplx zbp = std::conj(z(p));
    for (Eigen::Index q = 0; q < n; ++q) {
      for (Eigen::Index s = 0; s < n; ++s) {
        cplx v = 2.0 * std::conj(z(q)) * z(s) * zbp / (s1 * s1 * s1);
        if (q == s) v -= zbp / (s1 * s1);
        if (p == s) v -= std::conj(z(q)) / (s1 * s1);
        d(q, s) = v;
      }
    }
  }
  return out;
}

/// Volume density det(g) of the unscaled Fubini-Study form relative to the
/// Lebesgue measure of the chart.
inline double fs_volume_density(const CVector& z) { return fs_metric(z).g.determinant().real(); }

/// Total Fubini-Study volume of CP^1 by tensor Gauss-Legendre quadrature in
/// sphere angles, z = tan(theta/2) exp(i phi). Evaluates the metric itself.
inline double fs_volume_quadrature_cp1(int order) {
  const auto th = numerics::gauss_legendre(order, 0.0, std::numbers::pi);
  const auto ph = numerics::gauss_legendre(order, 0.0, 2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t i = 0; i < th.nodes.size(); ++i) {
    const double t = th.nodes[i];
    const double r = std::tan(0.5 * t);
    const double dr = 0.5 / (std::cos(0.5 * t) * std::cos(0.5 * t));
    double ring = 0.0;
    for (std::size_t j = 0; j < ph.nodes.size(); ++j) {
      CVector z(1);
      z(0) = std::polar(r, ph.nodes[j]);
      ring += ph.weights[j] * fs_volume_density(z);
    }
    total += th.weights[i] * ring * r * dr;
  }
  return total;
}

namespace detail {

/// Multivariate Cauchy proposal on C^n = R^{2n}; density
/// Gamma(n+1/2)/pi^{n+1/2} (1+|x|^2)^{-(n+1/2)}. Its tails dominate det(g),
/// so the importance weight is bounded.
struct CauchyDraw {
  CVector z;
  double density;
};

inline CauchyDraw cauchy_draw(int n, std::uint64_t seed, std::uint64_t index) {
  auto rng = numerics::substream(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector z(n);
  for (int j = 0; j < n; ++j) {
    const double re = normal(rng);
    const double im = normal(rng);
    z(j) = cplx(re, im);
  }
  const double w = std::abs(normal(rng));
  z /= w;
  const double half = n + 0.5;
  const double log_norm = std::lgamma(half) - half * std::log(std::numbers::pi);
  const double density = std::exp(log_norm - half * std::log1p(z.squaredNorm()));
  return {std::move(z), density};
}

template <class F>
numerics::Moments importance_moments(int n, std::size_t samples, std::uint64_t seed, int threads, F&& integrand) {
  const auto blocks = numerics::map_blocks<numerics::Moments>(
      samples, numerics::kMonteCarloBlock, threads, [&](std::size_t begin, std::size_t end) {
        numerics::Moments m;
        for (std::size_t i = begin; i < end; ++i) {
          const auto draw = cauchy_draw(n, seed, i);
          m.add(integrand(draw.z) * fs_volume_density(draw.z) / draw.density);
        }
        return m;
      });
  numerics::Moments total;
  for (const auto& b : blocks) total += b;
  return total;
}

}  // namespace detail

/// Monte Carlo estimate of the unscaled volume of CP^n (importance sampling
/// in chart 0 with a Cauchy proposal).
inline VolumeEstimate fs_volume_monte_carlo(int n, std::size_t samples, std::uint64_t seed,
                                            int threads = numerics::default_threads()) {
  if (n < 1) throw std::invalid_argument("fs_volume_monte_carlo: n must be >= 1");
  const auto m = detail::importance_moments(n, samples, seed, threads, [](const CVector&) { return 1.0; });
  return {m.mean(), m.std_error(), samples, 1.0};
}

/// Scale s such that (s omega_FS)^n integrates to n + 1, given a volume
/// estimate of omega_FS^n.
inline double scale_for_volume(int n, const VolumeEstimate& vol) {
  if (!(vol.std_error <= 0.1 * vol.value)) {
    std::ostringstream msg;
    msg << "std_error " << vol.std_error << " exceeds 10% of volume estimate " << vol.value << " ("
        << vol.samples << " samples)";
    throw InsufficientSamples(msg.str());
  }
  return std::pow((n + 1) / vol.value, 1.0 / n);
}

/// Scale s with integral of (s * omega_FS)^n over CP^n equal to n + 1.
inline double normalization_constant(int n, std::size_t samples, std::uint64_t seed,
                                     int threads = numerics::default_threads()) {
  return scale_for_volume(n, fs_volume_monte_carlo(n, samples, seed, threads));
}

/// Closed form pi^n / n! of the unscaled volume, for reference.
inline double fs_volume_exact(int n) { return std::pow(std::numbers::pi, n) / std::tgamma(n + 1.0); }

/// Monte Carlo estimate of the integral of f * (s omega_FS)^n. The scale s
/// and the integral use independent sample streams derived from `seed`; f is
/// handed each sample in its dominant chart.
template <class F>
VolumeEstimate volume_integral(int n, F&& f, std::size_t samples, std::uint64_t seed,
                               int threads = numerics::default_threads()) {
  const auto scale_vol = fs_volume_monte_carlo(n, samples, numerics::derive_seed(seed, 1), threads);
  const double scale = scale_for_volume(n, scale_vol);
  const auto m = detail::importance_moments(n, samples, numerics::derive_seed(seed, 2), threads, [&](const CVector& z) {
    const HomogeneousPoint Z = lift(ChartPoint{0, z});
    return static_cast<double>(f(to_chart(Z, Z.dominant_chart())));
  });
  const double sn = std::pow(scale, n);
  const double value = sn * m.mean();
  // scale uncertainty enters through s^n = (n+1)/V
  const double rel_scale = scale_vol.std_error / scale_vol.value;
  const double err = std::hypot(sn * m.std_error(), value * rel_scale);
  return {value, err, samples, scale};
}

}  // namespace quantizer
