#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quantizer/atlas.hpp"
#include "quantizer/errors.hpp"
#include "quantizer/numerics.hpp"
#include "quantizer/picard.hpp"

namespace quantizer {

/// Exponents of a monomial in Z^0..Z^n.
using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// Exact binomial coefficient; 0 when k < 0 or k > n.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

/// dim H^0(CP^n, O(l)) = C(n+l, n) for l >= 0, and 0 for l < 0.
inline std::uint64_t dimension(int n, int l) { return l < 0 ? 0 : binomial(n + l, n); }

/// Degree-l multi-indices over n+1 variables in decreasing lexicographic
/// order: (l,0,..,0) first, (0,..,0,l) last.
inline std::vector<MultiIndex> enumerate_basis(int n, int l) {
  if (l < 0) throw NegativeDegree("enumerate_basis: degree " + std::to_string(l) + " < 0");
  if (n < 0) throw std::invalid_argument("enumerate_basis: n must be >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(n + 1), 0);
  const auto rec = [&](auto&& self, int slot, int remaining) -> void {
    if (slot == n) {
      cur[static_cast<std::size_t>(slot)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(slot)] = e;
      self(self, slot + 1, remaining - e);
    }
  };
  rec(rec, 0, l);
  return out;
}

/// Global section of O(l) as a homogeneous polynomial of degree l.
class PolynomialSection {
 public:
  PolynomialSection(int n, int l) : n_(n), l_(l) {
    if (n < 1) throw std::invalid_argument("PolynomialSection: n must be >= 1");
    if (l < 0) throw NegativeDegree("PolynomialSection: degree " + std::to_string(l) + " < 0");
  }

  static PolynomialSection monomial(int n, const MultiIndex& a, cplx coeff = 1.0) {
    PolynomialSection s(n, degree(a));
    s.set(a, coeff);
    return s;
  }

  int n() const { return n_; }
  int l() const { return l_; }
  const std::map<MultiIndex, cplx>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  void set(const MultiIndex& a, cplx c) {
    if (static_cast<int>(a.size()) != n_ + 1) throw std::invalid_argument("PolynomialSection: multi-index length");
    if (degree(a) != l_) throw std::invalid_argument("PolynomialSection: multi-index degree differs from l");
    for (int e : a) {
      if (e < 0) throw std::invalid_argument("PolynomialSection: negative exponent");
    }
    if (c == cplx(0.0)) {
      coeffs_.erase(a);
    } else {
      coeffs_[a] = c;
    }
  }

  /// P(Z) on a homogeneous representative.
  cplx evaluate(const CVector& Z) const {
    cplx total = 0.0;
    for (const auto& [a, c] : coeffs_) {
      cplx term = c;
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] != 0) term *= std::pow(Z(static_cast<Eigen::Index>(j)), a[j]);
      }
      total += term;
    }
    return total;
  }

 private:
  int n_;
  int l_;
  std::map<MultiIndex, cplx> coeffs_;
};

/// s_k(z) = P(Z) / (Z^k)^l with Z = lift(p), where Z^k = 1.
inline cplx local_representative(const PolynomialSection& s, const ChartPoint& p) {
  if (p.dimension() != s.n()) throw std::invalid_argument("local_representative: dimension mismatch");
  return s.evaluate(lift(p).coords());
}

/// Monte Carlo inner product with its standard error.
struct InnerProductEstimate {
  cplx value;
  double std_error = 0.0;  ///< combined error of real and imaginary parts
  std::size_t samples = 0;
};

/// <s1, s2> = integral of h conj(s1) s2 over CP^n with the volume form
/// normalized to total mass n + 1, estimated from Fubini-Study uniform
/// samples. Each sample is evaluated in its dominant chart.
inline InnerProductEstimate l2_inner_product(const PolynomialSection& s1, const PolynomialSection& s2,
                                             std::size_t samples, std::uint64_t seed,
                                             int threads = numerics::default_threads()) {
  if (s1.n() != s2.n() || s1.l() != s2.l()) throw std::invalid_argument("l2_inner_product: sections differ in (n, l)");
  const int n = s1.n();
  const PicardClass c{s1.l()};
  if (samples < 2) throw InsufficientSamples("l2_inner_product: need at least 2 samples");
  if (s1.is_zero() || s2.is_zero()) return {0.0, 0.0, samples};
  struct Acc {
    numerics::Moments re, im, n1, n2;
  };
  const auto blocks = numerics::map_blocks<Acc>(samples, numerics::kMonteCarloBlock, threads,
                                                [&](std::size_t begin, std::size_t end) {
                                                  Acc acc;
                                                  for (std::size_t i = begin; i < end; ++i) {
                                                    const auto Z = sample_fs_point(n, seed, i);
                                                    const auto p = to_chart(Z, Z.dominant_chart());
                                                    const double h = hermitian_metric(c, p);
                                                    const cplx a = local_representative(s1, p);
                                                    const cplx b = local_representative(s2, p);
                                                    const cplx v = h * std::conj(a) * b;
                                                    acc.re.add(v.real());
                                                    acc.im.add(v.imag());
                                                    acc.n1.add(h * std::norm(a));
                                                    acc.n2.add(h * std::norm(b));
                                                  }
                                                  return acc;
                                                });
  Acc total;
  for (const auto& b : blocks) {
    total.re += b.re;
    total.im += b.im;
    total.n1 += b.n1;
    total.n2 += b.n2;
  }
  const double mass = n + 1.0;
  const cplx value = mass * cplx(total.re.mean(), total.im.mean());
  const double err = mass * std::hypot(total.re.std_error(), total.im.std_error());
  // Cauchy-Schwarz scale of the estimate
  const double bound = mass * std::sqrt(total.n1.mean() * total.n2.mean());
  if (!(err <= 0.1 * bound)) {
    throw InsufficientSamples("l2_inner_product: std_error " + std::to_string(err) + " exceeds 10% of " +
                              std::to_string(bound));
  }
  return {value, err, samples};
}

/// Outcome of the integer identities relating dim H^0(CP^n, O(l)) to subset
/// counting and to SU(2) / SU(3) representation dimensions.
struct RepDimensionReport {
  int n = 0;
  int l = 0;
  std::uint64_t dimension = 0;
  std::uint64_t basis_size = 0;
  std::uint64_t subset_count = 0;  ///< n-element subsets of n+l excited states
  bool subsets_match = false;
  std::optional<bool> su2_match;   ///< n = 1: dimension = l + 1
  std::optional<bool> su3_match;   ///< n = 2: dimension = d(0,l) = d(l,0)

  bool all_pass() const { return subsets_match && su2_match.value_or(true) && su3_match.value_or(true); }
};

/// Dimension (p+1)(q+1)(p+q+2)/2 of the (p,q) irreducible SU(3) representation.
inline std::uint64_t su3_irrep_dimension(int p, int q) {
  return static_cast<std::uint64_t>(p + 1) * static_cast<std::uint64_t>(q + 1) * static_cast<std::uint64_t>(p + q + 2) / 2;
}

namespace detail {
/// Count k-element subsets of an m-set by walking every selection mask.
inline std::uint64_t count_subsets(int m, int k) {
  if (k < 0 || k > m) return 0;
  std::vector<bool> mask(static_cast<std::size_t>(m), false);
  std::fill(mask.begin(), mask.begin() + k, true);
  std::uint64_t count = 0;
  do {
    ++count;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return count;
}
}  // namespace detail

inline RepDimensionReport rep_dimension_checks(int n, int l) {
  if (l < 0) throw NegativeDegree("rep_dimension_checks: degree " + std::to_string(l) + " < 0");
  RepDimensionReport r;
  r.n = n;
  r.l = l;
  r.dimension = dimension(n, l);
  r.basis_size = enumerate_basis(n, l).size();
  r.subset_count = detail::count_subsets(n + l, n);
  r.subsets_match = r.dimension == r.subset_count && r.dimension == r.basis_size;
  if (n == 1) r.su2_match = r.dimension == static_cast<std::uint64_t>(l + 1);
  if (n == 2) r.su3_match = r.dimension == su3_irrep_dimension(0, l) && r.dimension == su3_irrep_dimension(l, 0);
  return r;
}

}  // namespace quantizer
