#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "quantizer/errors.hpp"
#include "quantizer/numerics.hpp"

namespace quantizer {

/// Occupation numbers m_1..m_n of an n-dimensional oscillator state.
struct OccupationState {
  std::vector<int> m;

  int dimension() const { return static_cast<int>(m.size()); }
  int total() const { return std::accumulate(m.begin(), m.end(), 0); }

  /// Vacuum, or a single quantum in exactly one mode.
  bool is_projective_admissible() const {
    int ones = 0;
    for (int v : m) {
      if (v < 0 || v > 1) return false;
      ones += v;
    }
    return ones <= 1;
  }

  std::string label() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < m.size(); ++i) os << (i ? " " : "") << m[i];
    os << ")";
    return os.str();
  }
};

/// sum_j (m_j + 1/2), with hbar = omega = 1.
inline double linear_eigenvalue(const OccupationState& s) {
  for (int v : s.m) {
    if (v < 0) throw std::invalid_argument("linear_eigenvalue: negative occupation number");
  }
  return s.total() + 0.5 * s.dimension();
}

/// log(1 + sum_j (m_j + 1/2)) on the n+1 admissible states.
inline double projective_eigenvalue(const OccupationState& s) {
  if (!s.is_projective_admissible()) throw InadmissibleState("projective oscillator has no state " + s.label());
  return std::log1p(linear_eigenvalue(s));
}

struct SpectrumRow {
  OccupationState state;
  double linear_eigenvalue = 0.0;
  double projective_eigenvalue = 0.0;
  int degeneracy = 0;  ///< multiplicity of this row's projective level
};

struct SpectrumLevel {
  double energy = 0.0;
  int degeneracy = 0;
};

struct SpectrumTable {
  int n = 0;
  std::vector<SpectrumRow> rows;

  /// Distinct projective levels in increasing energy.
  std::vector<SpectrumLevel> levels() const {
    std::vector<SpectrumLevel> out;
    for (const auto& r : rows) {
      auto it = std::find_if(out.begin(), out.end(), [&](const SpectrumLevel& lv) { return lv.energy == r.projective_eigenvalue; });
      if (it == out.end()) {
        out.push_back({r.projective_eigenvalue, 1});
      } else {
        ++it->degeneracy;
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
    return out;
  }

  /// CSV with columns state,E_lin,E_proj,degeneracy.
  void write_csv(std::ostream& os) const {
    const auto old_precision = os.precision(17);
    os << "state,E_lin,E_proj,degeneracy\n";
    for (const auto& r : rows) {
      os << '"' << r.state.label() << "\"," << r.linear_eigenvalue << ',' << r.projective_eigenvalue << ','
         << r.degeneracy << '\n';
    }
    os.precision(old_precision);
  }
};

/// Vacuum plus the n singly excited states.
inline SpectrumTable projective_spectrum(int n) {
  if (n < 1) throw std::invalid_argument("projective_spectrum: n must be >= 1");
  SpectrumTable t;
  t.n = n;
  const auto add = [&](OccupationState s, int degeneracy) {
    const double lin = linear_eigenvalue(s);
    const double proj = projective_eigenvalue(s);
    t.rows.push_back({std::move(s), lin, proj, degeneracy});
  };
  add(OccupationState{std::vector<int>(static_cast<std::size_t>(n), 0)}, 1);
  for (int j = 0; j < n; ++j) {
    OccupationState s{std::vector<int>(static_cast<std::size_t>(n), 0)};
    s.m[static_cast<std::size_t>(j)] = 1;
    add(std::move(s), n);
  }
  return t;
}

struct TaylorReport {
  double s = 0.0;          ///< sum |z^j|^2
  double remainder = 0.0;  ///< |log(1+s) - s|
  double bound = 0.0;      ///< s^2 / 2
  bool bound_holds = false;
  bool small_regime = false;  ///< s <= threshold, where K ~ sum |z|^2 is a fair approximation
};

inline TaylorReport taylor_consistency(double s, double small_threshold = 0.1) {
  if (s < 0.0) throw std::invalid_argument("taylor_consistency: s must be >= 0");
  TaylorReport r;
  r.s = s;
  r.remainder = std::abs(std::log1p(s) - s);
  r.bound = 0.5 * s * s;
  r.bound_holds = r.remainder <= r.bound;
  r.small_regime = s <= small_threshold;
  return r;
}

/// Taylor check at a chart point, s = sum |z^j|^2.
inline TaylorReport taylor_consistency(const CVector& z, double small_threshold = 0.1) {
  return taylor_consistency(z.squaredNorm(), small_threshold);
}

}  // namespace quantizer
