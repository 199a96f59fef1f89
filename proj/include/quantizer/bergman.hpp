#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "quantizer/atlas.hpp"
#include "quantizer/errors.hpp"
#include "quantizer/fubini_study.hpp"
#include "quantizer/numerics.hpp"
#include "quantizer/sections.hpp"

namespace quantizer {

/// Kernel density below which the kernel is treated as vanishing.
inline constexpr double kKernelFloor = 1e-14;

enum class KernelDomain {
  unit_disc,      ///< Bergman space of the unit disc, area measure
  complex_space,  ///< Fock space of C^n, measure exp(-|z|^2) dA
};

inline std::string to_string(KernelDomain d) { return d == KernelDomain::unit_disc ? "unit_disc" : "complex_space_n"; }

/// Truncated orthonormal holomorphic basis h_0..h_{M-1}, each stored as
/// coefficients over the first M monomials of the domain (graded, then
/// decreasing lexicographic order of exponents).
class KernelModel {
 public:
  /// h_m(z) = sqrt((m+1)/pi) z^m.
  static KernelModel unit_disc(int truncation) {
    check_truncation(truncation);
    KernelModel k(KernelDomain::unit_disc, 1);
    for (int m = 0; m < truncation; ++m) k.monomials_.push_back({m});
    k.init_orthonormal();
    return k;
  }

  /// h_a(z) = z^a / sqrt(pi^n a!) for the first `truncation` multi-indices.
  static KernelModel complex_space(int n, int truncation) {
    check_truncation(truncation);
    if (n < 1) throw std::invalid_argument("KernelModel: n must be >= 1");
    KernelModel k(KernelDomain::complex_space, n);
    for (int deg = 0; static_cast<int>(k.monomials_.size()) < truncation; ++deg) {
      // exponents over n variables of total degree deg
      for (const auto& a : enumerate_basis(n - 1, deg)) {
        if (static_cast<int>(k.monomials_.size()) == truncation) break;
        k.monomials_.push_back(a);
      }
    }
    k.init_orthonormal();
    return k;
  }

  /// Basis h'_i = sum_j U_ij h_j; the kernel is unchanged for unitary U.
  KernelModel mixed(const CMatrix& unitary) const {
    if (unitary.rows() != truncation() || unitary.cols() != truncation()) {
      throw std::invalid_argument("KernelModel::mixed: matrix size differs from truncation");
    }
    KernelModel k = *this;
    k.coeffs_ = unitary * coeffs_;
    return k;
  }

  KernelDomain domain() const { return domain_; }
  int dimension() const { return dim_; }
  int truncation() const { return static_cast<int>(monomials_.size()); }
  const CMatrix& coefficients() const { return coeffs_; }
  const std::vector<MultiIndex>& monomials() const { return monomials_; }

  void check_domain(const CVector& z) const {
    if (z.size() != dim_) throw DomainViolation("point dimension differs from the kernel domain");
    if (domain_ == KernelDomain::unit_disc && !(std::abs(z(0)) < 1.0)) {
      throw DomainViolation("point outside the unit disc");
    }
  }

  /// Values z^a of the retained monomials.
  CVector monomial_values(const CVector& z) const {
    CVector v(truncation());
    for (int j = 0; j < truncation(); ++j) {
      cplx t = 1.0;
      const auto& a = monomials_[static_cast<std::size_t>(j)];
      for (int i = 0; i < dim_; ++i) {
        if (a[static_cast<std::size_t>(i)] != 0) t *= std::pow(z(i), a[static_cast<std::size_t>(i)]);
      }
      v(j) = t;
    }
    return v;
  }

  /// h_j(z) for every retained basis element.
  CVector basis_values(const CVector& z) const {
    check_domain(z);
    return coeffs_ * monomial_values(z);
  }

  /// Holomorphic derivatives d h_j / d z^m: row j, column m.
  CMatrix basis_derivatives(const CVector& z) const {
    check_domain(z);
    CMatrix d(truncation(), dim_);
    for (int m = 0; m < dim_; ++m) {
      CVector v(truncation());
      for (int j = 0; j < truncation(); ++j) {
        const auto& a = monomials_[static_cast<std::size_t>(j)];
        if (a[static_cast<std::size_t>(m)] == 0) {
          v(j) = 0.0;
          continue;
        }
        cplx t = static_cast<double>(a[static_cast<std::size_t>(m)]);
        for (int i = 0; i < dim_; ++i) {
          const int e = a[static_cast<std::size_t>(i)] - (i == m ? 1 : 0);
          if (e != 0) t *= std::pow(z(i), e);
        }
        v(j) = t;
      }
      d.col(m) = coeffs_ * v;
    }
    return d;
  }

  /// Closed-form kernel of the untruncated space.
  cplx full_kernel(const CVector& z, const CVector& w) const {
    check_domain(z);
    check_domain(w);
    if (domain_ == KernelDomain::unit_disc) {
      const cplx d = 1.0 - z(0) * std::conj(w(0));
      return 1.0 / (std::numbers::pi * d * d);
    }
    return std::exp(w.dot(z)) / std::pow(std::numbers::pi, dim_);
  }

  /// Gram matrix of the basis under the domain's inner product, computed by
  /// quadrature (Gauss-Legendre in |z|, trapezoid in arg z, per coordinate).
  CMatrix gram_by_quadrature() const;

 private:
  KernelModel(KernelDomain d, int dim) : domain_(d), dim_(dim) {}

  static void check_truncation(int m) {
    if (m < 1) throw std::invalid_argument("KernelModel: truncation must be >= 1");
  }

  /// Closed-form squared norm of z^a.
  double monomial_norm_sq(const MultiIndex& a) const {
    if (domain_ == KernelDomain::unit_disc) return std::numbers::pi / (a[0] + 1.0);
    double v = 1.0;
    for (int e : a) v *= std::numbers::pi * std::tgamma(e + 1.0);
    return v;
  }

  void init_orthonormal() {
    coeffs_ = CMatrix::Zero(truncation(), truncation());
    for (int j = 0; j < truncation(); ++j) coeffs_(j, j) = 1.0 / std::sqrt(monomial_norm_sq(monomials_[static_cast<std::size_t>(j)]));
  }

  KernelDomain domain_;
  int dim_;
  std::vector<MultiIndex> monomials_;
  CMatrix coeffs_;
};

inline CMatrix KernelModel::gram_by_quadrature() const {
  int max_exp = 0;
  for (const auto& a : monomials_) {
    for (int e : a) max_exp = std::max(max_exp, e);
  }
  const int nphi = 2 * max_exp + 3;
  double r_max = 1.0;
  int r_order = max_exp + 4;
  if (domain_ == KernelDomain::complex_space) {
    // integrand r^{2e+1} exp(-r^2) peaks at r = sqrt(e + 1/2)
    r_max = std::sqrt(max_exp + 0.5) + 12.0;
    r_order = 4 * max_exp + 200;
  }
  const auto rr = numerics::gauss_legendre(r_order, 0.0, r_max);
  // moments[a][b] = integral over one coordinate of z^a conj(z)^b with the weight
  CMatrix moments = CMatrix::Zero(max_exp + 1, max_exp + 1);
  for (int a = 0; a <= max_exp; ++a) {
    for (int b = 0; b <= max_exp; ++b) {
      cplx angular = 0.0;
      for (int k = 0; k < nphi; ++k) angular += std::polar(1.0, (a - b) * 2.0 * std::numbers::pi * k / nphi);
      angular *= 2.0 * std::numbers::pi / nphi;
      double radial = 0.0;
      for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
        const double r = rr.nodes[i];
        const double weight = domain_ == KernelDomain::unit_disc ? 1.0 : std::exp(-r * r);
        radial += rr.weights[i] * std::pow(r, a + b + 1) * weight;
      }
      moments(a, b) = angular * radial;
    }
  }
  CMatrix mono_gram(truncation(), truncation());
  for (int i = 0; i < truncation(); ++i) {
    for (int j = 0; j < truncation(); ++j) {
      cplx v = 1.0;
      for (int d = 0; d < dim_; ++d) v *= moments(monomials_[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)], monomials_[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)]);
      mono_gram(i, j) = v;
    }
  }
  // <h_i, h_j> = sum C_ia conj(C_jb) <z^a, z^b>, linear in the first slot
  return coeffs_ * mono_gram * coeffs_.adjoint();
}

/// k(z, w) = sum_j h_j(z) conj(h_j(w)).
inline cplx kernel_at(const KernelModel& model, const CVector& z, const CVector& w) {
  return (model.basis_values(z).array() * model.basis_values(w).conjugate().array()).sum();
}

inline cplx kernel_at(const KernelModel& model, cplx z, cplx w) {
  CVector zz(1), ww(1);
  zz(0) = z;
  ww(0) = w;
  return kernel_at(model, zz, ww);
}

namespace detail {
template <class KernelFn>
MetricValue log_kernel_hessian(const KernelFn& diag_kernel, const CVector& z) {
  const double k0 = diag_kernel(z);
  if (!(k0 > kKernelFloor)) throw KernelVanishes("kernel density vanishes at the evaluation point");
  const auto logk = [&](const CVector& x) { return std::log(diag_kernel(x)); };
  return {numerics::mixed_hessian_fd(logk, z, numerics::fd_step(z))};
}
}  // namespace detail

/// Bergman metric d dbar log k(z, z) of the truncated kernel (central
/// finite differences).
inline MetricValue bergman_metric(const KernelModel& model, const CVector& z) {
  model.check_domain(z);
  return detail::log_kernel_hessian([&](const CVector& x) { return kernel_at(model, x, x).real(); }, z);
}

/// Closed-form Bergman metric of the untruncated kernel: 2/(1-|z|^2)^2 on
/// the disc, the identity on C^n.
inline MetricValue bergman_metric_full(const KernelModel& model, const CVector& z) {
  model.check_domain(z);
  if (model.domain() == KernelDomain::unit_disc) {
    const double d = 1.0 - std::norm(z(0));
    return {CMatrix::Constant(1, 1, 2.0 / (d * d))};
  }
  return {CMatrix::Identity(z.size(), z.size())};
}

/// Truncated embedding into CP^{M-1}: components conj(h_j(z)), so that
/// <embed(z)|f> = sum_j c_j h_j(z) = f(z) for f = sum_j c_j h_j.
inline HomogeneousPoint embed(const KernelModel& model, const CVector& z) {
  if (model.truncation() < 2) throw std::invalid_argument("embed: need truncation >= 2 for a projective image");
  CVector w = model.basis_values(z).conjugate();
  if (!(w.squaredNorm() > kKernelFloor)) throw KernelVanishes("embedding vector vanishes");
  return HomogeneousPoint(std::move(w));
}

/// Sum_j <f, h_j> h_j(z), with <f, h_j> computed from the quadrature Gram
/// matrix; f is given by its coefficients over the model's basis.
inline cplx reproduce(const KernelModel& model, const CVector& f_coeffs, const CMatrix& gram, const CVector& z) {
  // <f, h_j> = sum_i c_i <h_i, h_j>
  const CVector overlaps = gram.transpose() * f_coeffs;
  return (overlaps.array() * model.basis_values(z).array()).sum();
}

namespace detail {
/// Holomorphic chart of the embedded curve: u_a = h_a / h_k over a != k,
/// with k the largest component, and its Jacobian d u / d z.
struct EmbeddingChart {
  int chart;
  CVector u;
  CMatrix jacobian;
};

inline EmbeddingChart embedding_chart(const KernelModel& model, const CVector& z) {
  if (model.truncation() < 2) throw std::invalid_argument("embed: need truncation >= 2 for a projective image");
  const CVector h = model.basis_values(z);
  if (!(h.squaredNorm() > kKernelFloor)) throw KernelVanishes("embedding vector vanishes");
  const CMatrix dh = model.basis_derivatives(z);
  Eigen::Index k = 0;
  h.cwiseAbs().maxCoeff(&k);
  const int m = model.truncation();
  EmbeddingChart out{static_cast<int>(k), CVector(m - 1), CMatrix(m - 1, z.size())};
  for (int a = 0, row = 0; a < m; ++a) {
    if (a == k) continue;
    out.u(row) = h(a) / h(k);
    out.jacobian.row(row) = (dh.row(a) * h(k) - h(a) * dh.row(k)) / (h(k) * h(k));
    ++row;
  }
  return out;
}
}  // namespace detail

/// Pullback of the Fubini-Study metric of CP^{M-1} through the embedding,
/// J^T G(u) conj(J) in the chart of the largest component, with the exact
/// differential of the basis. embed() is the complex conjugate of this
/// chart map, which pulls back the same real metric.
inline MetricValue embedding_pullback(const KernelModel& model, const CVector& z) {
  const auto c = detail::embedding_chart(model, z);
  return {c.jacobian.transpose() * fs_metric(c.u).g * c.jacobian.conjugate()};
}

/// Rank over C of the differential of the embedding at z.
inline int embedding_rank(const KernelModel& model, const CVector& z, double rel_tol = 1e-10) {
  const auto c = detail::embedding_chart(model, z);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(c.jacobian).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

struct PullbackReport {
  CVector point;
  CMatrix lhs;                     ///< pullback of the Fubini-Study metric through the truncated embedding
  CMatrix rhs;                     ///< closed-form Bergman metric of the untruncated kernel
  double deviation = 0.0;          ///< |lhs - rhs| / |rhs| (Frobenius)
  double deviation_truncated = 0.0;  ///< lhs against the finite-difference Bergman metric of the same truncated kernel
  int truncation = 0;
};

inline PullbackReport pullback_check(const KernelModel& model, const CVector& z) {
  PullbackReport r;
  r.point = z;
  r.truncation = model.truncation();
  r.lhs = embedding_pullback(model, z).g;
  r.rhs = bergman_metric_full(model, z).g;
  r.deviation = (r.lhs - r.rhs).norm() / r.rhs.norm();
  const CMatrix trunc = bergman_metric(model, z).g;
  r.deviation_truncated = (r.lhs - trunc).norm() / trunc.norm();
  return r;
}

struct PropagatorReport {
  int n = 0;
  CVector point;
  CMatrix analytic;        ///< d dbar of sum |z|^2: the identity
  CMatrix finite_difference;  ///< d dbar log exp(sum |z|^2) by central differences
  double fd_deviation = 0.0;  ///< max |finite_difference - analytic|
  /// d dbar log |exp(i sum |z|^2)|: an imaginary exponent has unit modulus,
  /// so this vanishes rather than giving the standard metric.
  CMatrix imaginary_exponent;
  std::optional<CMatrix> truncated_fock;  ///< Bergman metric of a truncated Fock basis, when requested
  bool is_standard_metric = false;
};

/// Log-Hessian of the C^n propagator density exp(sum conj(z) z).
inline PropagatorReport propagator_metric_cn(const CVector& z, int fock_truncation = 0) {
  const auto n = z.size();
  PropagatorReport r;
  r.n = static_cast<int>(n);
  r.point = z;
  r.analytic = CMatrix::Identity(n, n);
  // quadratic integrand: the stencil is exact up to rounding, so a wide step is safe
  const double h = 1e-2 * (1.0 + z.norm());
  r.finite_difference = numerics::mixed_hessian_fd([](const CVector& x) { return std::log(std::exp(x.squaredNorm())); }, z, h);
  r.fd_deviation = (r.finite_difference - r.analytic).cwiseAbs().maxCoeff();
  r.imaginary_exponent = numerics::mixed_hessian_fd(
      [](const CVector& x) { return std::log(std::abs(std::exp(cplx(0.0, x.squaredNorm())))); }, z, h);
  if (fock_truncation > 0) r.truncated_fock = bergman_metric(KernelModel::complex_space(r.n, fock_truncation), z).g;
  r.is_standard_metric = r.fd_deviation < 1e-8;
  return r;
}

}  // namespace quantizer
