#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "quantizer/atlas.hpp"
#include "quantizer/fubini_study.hpp"
#include "quantizer/numerics.hpp"

namespace quantizer {

/// Class l in Pic(CP^n) = Z, i.e. the line bundle tau^l.
struct PicardClass {
  int l = 0;

  PicardClass dual() const { return {-l}; }
  friend PicardClass operator+(PicardClass a, PicardClass b) { return {a.l + b.l}; }
  friend bool operator==(PicardClass, PicardClass) = default;
};

/// Transition function g_jk = (Z^k / Z^j)^l, so that s_j = g_jk s_k for local
/// representatives s_k = P / (Z^k)^l of a degree-l polynomial P.
inline cplx bundle_transition(PicardClass c, int j, int k, const HomogeneousPoint& p) {
  if (!p.in_chart(j)) throw ChartUndefined("bundle_transition: point outside chart " + std::to_string(j));
  if (!p.in_chart(k)) throw ChartUndefined("bundle_transition: point outside chart " + std::to_string(k));
  if (j == k || c.l == 0) return 1.0;
  return std::pow(p[k] / p[j], c.l);
}

/// Fibre metric h_k(z) = (1 + |z|^2)^{-l} in chart k.
inline double hermitian_metric(PicardClass c, const CVector& z) { return std::pow(1.0 + z.squaredNorm(), -c.l); }
inline double hermitian_metric(PicardClass c, const ChartPoint& p) { return hermitian_metric(c, p.z); }

/// Curvature coefficients F_{m nbar} = -d dbar log h = l * (mixed Hessian of K).
inline CMatrix chern_curvature(PicardClass c, const CVector& z) { return static_cast<double>(c.l) * fs_metric(z).g; }
inline CMatrix chern_curvature(PicardClass c, const ChartPoint& p) { return chern_curvature(c, p.z); }

/// (1,0) connection form A_m = d_m log h = -l conj(z^m) / (1 + |z|^2).
inline CVector chern_connection(PicardClass c, const CVector& z) {
  return -static_cast<double>(c.l) * z.conjugate() / (1.0 + z.squaredNorm());
}
inline CVector chern_connection(PicardClass c, const ChartPoint& p) { return chern_connection(c, p.z); }

/// Constant c with F = c * omega, both for omega = omega_FS = (i/2) d dbar K
/// and for the volume-normalized form s * omega_FS.
struct CurvatureConstant {
  cplx versus_fs;          ///< F = c * omega_FS; equals -2 i l
  cplx versus_normalized;  ///< F = c * (s omega_FS)
  cplx conventional;       ///< the -2 pi i of the standard quantization condition, for comparison
};

inline CurvatureConstant curvature_constant(PicardClass c, double scale) {
  // F_{zzbar} dz^dzbar = l g dz^dzbar and omega_FS = (i/2) g dz^dzbar.
  const cplx vs_fs = cplx(0.0, -2.0) * static_cast<double>(c.l);
  return {vs_fs, vs_fs / scale, cplx(0.0, -2.0 * std::numbers::pi)};
}

/// First Chern number over the coordinate line Z = (Z^0, Z^1, 0, ..., 0):
/// (1/2pi) * integral of i F, by tensor Gauss-Legendre quadrature in sphere
/// angles at `resolution` x `resolution` nodes.
inline double chern_number(PicardClass c, int n, int resolution) {
  if (n < 1) throw std::invalid_argument("chern_number: n must be >= 1");
  if (c.l == 0) return 0.0;
  const auto th = numerics::gauss_legendre(resolution, 0.0, std::numbers::pi);
  const auto ph = numerics::gauss_legendre(resolution, 0.0, 2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t i = 0; i < th.nodes.size(); ++i) {
    const double t = th.nodes[i];
    const double r = std::tan(0.5 * t);
    const double dr = 0.5 / (std::cos(0.5 * t) * std::cos(0.5 * t));
    double ring = 0.0;
    for (std::size_t j = 0; j < ph.nodes.size(); ++j) {
      CVector z = CVector::Zero(n);
      z(0) = std::polar(r, ph.nodes[j]);
      // i F_{11} dz^dzbar = 2 F_{11} dx^dy on the line
      ring += ph.weights[j] * 2.0 * chern_curvature(c, z)(0, 0).real();
    }
    total += th.weights[i] * ring * r * dr;
  }
  return total / (2.0 * std::numbers::pi);
}

}  // namespace quantizer
