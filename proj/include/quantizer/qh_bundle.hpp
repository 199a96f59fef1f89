#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "quantizer/atlas.hpp"
#include "quantizer/errors.hpp"
#include "quantizer/fubini_study.hpp"
#include "quantizer/numerics.hpp"
#include "quantizer/picard.hpp"

namespace quantizer {

/// Fibre of QH_l(CP^n) = T(CP^n) + tau^l is C^{n+1} for every l.
inline int fibre_dimension(int n, int /*l*/) { return n + 1; }

/// Fibre vector in the frame of chart k: vacuum |0(k)> first, then the n
/// excited states A_i^dagger(k)|0(k)> in ChartPoint coordinate order.
struct FibreVector {
  int chart = 0;
  cplx vacuum_component;
  CVector excited_components;

  CVector stacked() const {
    CVector v(excited_components.size() + 1);
    v(0) = vacuum_component;
    v.tail(excited_components.size()) = excited_components;
    return v;
  }
  static FibreVector from_stacked(int chart, const CVector& v) {
    return {chart, v(0), v.tail(v.size() - 1)};
  }
};

/// Block-diagonal transition matrix diag(g_jk, J_{k->j}) taking chart-k
/// fibre components to chart-j components.
struct TransitionBlock {
  CMatrix matrix;

  /// Largest modulus among entries outside the diagonal blocks.
  double off_block_magnitude() const { return std::max(matrix.row(0).tail(matrix.cols() - 1).cwiseAbs().maxCoeff(),
                                                       matrix.col(0).tail(matrix.rows() - 1).cwiseAbs().maxCoeff()); }
};

inline TransitionBlock qh_transition(PicardClass c, int j, int k, const HomogeneousPoint& p) {
  const int n = p.dimension();
  CMatrix t = CMatrix::Zero(n + 1, n + 1);
  t(0, 0) = bundle_transition(c, j, k, p);
  t.bottomRightCorner(n, n) = transition_jacobian(to_chart(p, k), j);
  return {std::move(t)};
}

/// Christoffel matrices of the Chern connection of the Fubini-Study metric on
/// T(CP^n): entry (m, q) of element p is Gamma^m_{pq} = g^{m sbar} d_p g_{q sbar}.
inline std::vector<CMatrix> tangent_connection(const CVector& z) {
  const CMatrix g = fs_metric(z).g;
  const Eigen::PartialPivLU<CMatrix> lu_t(g.transpose());
  auto dg = fs_metric_derivative(z);
  for (auto& d : dg) d = lu_t.solve(CMatrix(d.transpose()));
  return dg;
}

/// Connection matrix of QH_l contracted with a velocity: the scalar block
/// carries the tau^l Chern connection, the tangent block the Christoffels.
inline CMatrix qh_connection(PicardClass c, const CVector& z, const CVector& velocity) {
  const auto n = z.size();
  CMatrix m = CMatrix::Zero(n + 1, n + 1);
  m(0, 0) = (chern_connection(c, z).array() * velocity.array()).sum();
  const auto gamma = tangent_connection(z);
  auto tangent = m.bottomRightCorner(n, n);
  for (Eigen::Index p = 0; p < n; ++p) tangent += gamma[static_cast<std::size_t>(p)] * velocity(p);
  return m;
}

// ---------------------------------------------------------------------------
// Loops

/// Circle z^axis = r exp(2 pi i orientation t), other coordinates zero, in chart.
struct LatitudeSegment {
  int chart = 0;
  double radius = 1.0;
  int axis = 0;
  int orientation = 1;
};

/// Piecewise-linear path through chart coordinates.
struct PolylineSegment {
  int chart = 0;
  std::vector<CVector> points;
};

/// Arbitrary smooth path t in [0,1] -> chart coordinates, with its derivative.
struct CurveSegment {
  int chart = 0;
  std::function<CVector(double)> position;
  std::function<CVector(double)> velocity;
  std::string label = "curve";
};

using LoopSegment = std::variant<LatitudeSegment, PolylineSegment, CurveSegment>;

/// Closed curve in CP^n made of consecutive segments.
struct Loop {
  int n = 1;
  std::vector<LoopSegment> segments;

  static Loop latitude(int n, double radius, int chart = 0, int axis = 0, int orientation = 1) {
    return {n, {LatitudeSegment{chart, radius, axis, orientation}}};
  }
  /// Constant loop at a chart point.
  static Loop constant(int chart, const CVector& z) {
    return {static_cast<int>(z.size()), {PolylineSegment{chart, {z, z}}}};
  }

  /// Same curve traversed backwards.
  Loop reversed() const;
  std::string describe() const;
};

/// Smooth piece of a loop, parametrized on [0,1] in a fixed chart.
struct LoopPiece {
  int chart;
  std::function<CVector(double)> position;
  std::function<CVector(double)> velocity;
};

inline std::vector<LoopPiece> loop_pieces(const Loop& loop) {
  std::vector<LoopPiece> pieces;
  for (const auto& seg : loop.segments) {
    if (const auto* lat = std::get_if<LatitudeSegment>(&seg)) {
      if (lat->axis < 0 || lat->axis >= loop.n) throw std::invalid_argument("latitude axis out of range");
      const LatitudeSegment s = *lat;
      const int n = loop.n;
      const double w = 2.0 * std::numbers::pi * s.orientation;
      auto pos = [s, n, w](double t) {
        CVector z = CVector::Zero(n);
        z(s.axis) = std::polar(s.radius, w * t);
        return z;
      };
      auto vel = [s, n, w](double t) {
        CVector z = CVector::Zero(n);
        z(s.axis) = cplx(0.0, w) * std::polar(s.radius, w * t);
        return z;
      };
      pieces.push_back({s.chart, pos, vel});
    } else if (const auto* poly = std::get_if<PolylineSegment>(&seg)) {
      if (poly->points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
      for (std::size_t i = 0; i + 1 < poly->points.size(); ++i) {
        const CVector a = poly->points[i];
        const CVector d = poly->points[i + 1] - a;
        if (a.size() != loop.n || d.size() != loop.n) throw std::invalid_argument("polyline point dimension differs from n");
        pieces.push_back({poly->chart, [a, d](double t) { return CVector(a + t * d); }, [d](double) { return d; }});
      }
    } else {
      const auto& curve = std::get<CurveSegment>(seg);
      pieces.push_back({curve.chart, curve.position, curve.velocity});
    }
  }
  if (pieces.empty()) throw std::invalid_argument("loop has no segments");
  return pieces;
}

inline Loop Loop::reversed() const {
  Loop out{n, {}};
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    if (const auto* lat = std::get_if<LatitudeSegment>(&*it)) {
      LatitudeSegment r = *lat;
      r.orientation = -r.orientation;
      out.segments.emplace_back(r);
    } else if (const auto* poly = std::get_if<PolylineSegment>(&*it)) {
      PolylineSegment r{poly->chart, {poly->points.rbegin(), poly->points.rend()}};
      out.segments.emplace_back(std::move(r));
    } else {
      const auto& c = std::get<CurveSegment>(*it);
      CurveSegment r{c.chart, [p = c.position](double t) { return p(1.0 - t); },
                     [v = c.velocity](double t) { return CVector(-v(1.0 - t)); }, c.label + " reversed"};
      out.segments.emplace_back(std::move(r));
    }
  }
  return out;
}

inline std::string Loop::describe() const {
  std::ostringstream os;
  os << "CP^" << n << " loop:";
  for (const auto& seg : segments) {
    if (const auto* lat = std::get_if<LatitudeSegment>(&seg)) {
      os << " latitude(chart=" << lat->chart + 1 << ", axis=" << lat->axis + 1 << ", r=" << lat->radius
         << (lat->orientation < 0 ? ", reversed" : "") << ")";
    } else if (const auto* poly = std::get_if<PolylineSegment>(&seg)) {
      os << " polyline(chart=" << poly->chart + 1 << ", points=" << poly->points.size() << ")";
    } else {
      const auto& c = std::get<CurveSegment>(seg);
      os << " " << c.label << "(chart=" << c.chart + 1 << ")";
    }
  }
  return os.str();
}

struct HolonomyResult {
  CMatrix matrix;               ///< in the frame of `base_chart` at the basepoint
  int base_chart = 0;
  std::string loop;
  double deviation_from_identity = 0.0;  ///< operator 2-norm of matrix - I
  cplx vacuum_phase;
  int steps = 0;
  int chart_switches = 0;

  /// Largest modulus among entries coupling the vacuum line and the tangent block.
  double cross_block_leakage() const {
    const auto k = matrix.cols() - 1;
    return std::max(matrix.row(0).tail(k).cwiseAbs().maxCoeff(), matrix.col(0).tail(k).cwiseAbs().maxCoeff());
  }
};

inline double operator_norm(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

/// Integration switches away from a chart once |z| there exceeds this value;
/// the new chart is the dominant one, where |z| <= 1, so switching cannot
/// oscillate.
inline constexpr double kChartSwitchRadius = 2.2;

/// Distance between canonical representatives below which segment endpoints join.
inline constexpr double kLoopJoinTolerance = 1e-9;

/// Fixed-step RK4 solution of dV/dt = -A(gamma(t))[gamma'(t)] V around the
/// loop, `steps` steps per smooth piece, with no error control.
inline HolonomyResult transport_fixed(PicardClass c, const Loop& loop, int steps) {
  if (steps < 1) throw std::invalid_argument("transport_fixed: steps must be >= 1");
  const int n = loop.n;
  const auto pieces = loop_pieces(loop);
  const ChartPoint base{pieces.front().chart, pieces.front().position(0.0)};
  const HomogeneousPoint base_h = lift(base);

  int work_chart = base.chart;
  CMatrix V = CMatrix::Identity(n + 1, n + 1);
  int switches = 0;

  const auto maybe_switch = [&](const HomogeneousPoint& Z) {
    if (Z.in_chart(work_chart) && to_chart(Z, work_chart).z.norm() <= kChartSwitchRadius) return;
    const int next = Z.dominant_chart();
    V = qh_transition(c, next, work_chart, Z).matrix * V;
    work_chart = next;
    ++switches;
  };

  std::optional<HomogeneousPoint> previous_end;
  for (const auto& piece : pieces) {
    const HomogeneousPoint start = lift(ChartPoint{piece.chart, piece.position(0.0)});
    if (previous_end && !equivalent(*previous_end, start, kLoopJoinTolerance)) {
      throw std::invalid_argument("loop segments do not join");
    }
    const auto rhs = [&](double t, const CMatrix& state) -> CMatrix {
      const ChartPoint p{piece.chart, piece.position(t)};
      const CVector v = piece.velocity(t);
      if (piece.chart == work_chart) return -qh_connection(c, p.z, v) * state;
      const CVector zw = transition(p, work_chart).z;
      const CVector vw = transition_jacobian(p, work_chart) * v;
      return -qh_connection(c, zw, vw) * state;
    };
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
      const double t = i * h;
      maybe_switch(lift(ChartPoint{piece.chart, piece.position(t)}));
      const CMatrix k1 = rhs(t, V);
      const CMatrix k2 = rhs(t + 0.5 * h, V + 0.5 * h * k1);
      const CMatrix k3 = rhs(t + 0.5 * h, V + 0.5 * h * k2);
      const CMatrix k4 = rhs(t + h, V + h * k3);
      V += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    previous_end = lift(ChartPoint{piece.chart, piece.position(1.0)});
  }
  if (!equivalent(*previous_end, base_h, kLoopJoinTolerance)) throw std::invalid_argument("loop is not closed");
  if (work_chart != base.chart) V = qh_transition(c, base.chart, work_chart, base_h).matrix * V;

  HolonomyResult out;
  out.matrix = std::move(V);
  out.base_chart = base.chart;
  out.loop = loop.describe();
  out.deviation_from_identity = operator_norm(out.matrix - CMatrix::Identity(n + 1, n + 1));
  out.vacuum_phase = out.matrix(0, 0);
  out.steps = steps;
  out.chart_switches = switches;
  return out;
}

/// Tolerance for the step-doubling check in parallel_transport.
inline constexpr double kStepDoublingTolerance = 1e-6;

/// Holonomy with step-doubling control: integrates with `steps` and 2*steps
/// and returns the finer result.
inline HolonomyResult parallel_transport(PicardClass c, const Loop& loop, int steps) {
  if (steps < 100) throw std::invalid_argument("parallel_transport: steps must be >= 100");
  const auto coarse = transport_fixed(c, loop, steps);
  auto fine = transport_fixed(c, loop, 2 * steps);
  const double change = operator_norm(fine.matrix - coarse.matrix);
  if (change > kStepDoublingTolerance) {
    std::ostringstream msg;
    msg << "doubling " << steps << " steps changed the holonomy by " << change;
    throw StepTooCoarse(msg.str());
  }
  return fine;
}

/// Integral of 2 g_{axis,axis} dx dy over the disc |z^axis| < r of a
/// coordinate line, by Gauss-Legendre quadrature. This is the curvature
/// integral of the tau^1 connection over the enclosed cap.
inline double cap_curvature_integral(double radius, int order = 200) {
  const auto rr = numerics::gauss_legendre(order, 0.0, radius);
  const auto ph = numerics::gauss_legendre(order, 0.0, 2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < ph.nodes.size(); ++j) {
      CVector z(1);
      z(0) = std::polar(rr.nodes[i], ph.nodes[j]);
      ring += ph.weights[j] * 2.0 * fs_metric(z).g(0, 0).real();
    }
    total += rr.weights[i] * ring * rr.nodes[i];
  }
  return total;
}

struct NonflatnessReport {
  int n = 0;
  int l = 0;
  double radius = 0.0;
  std::string loop;
  double deviation = 0.0;
  cplx vacuum_phase;
  /// Phases predicted from curvature integrals over the cap: vacuum line
  /// exp(i l a); tangent direction along the loop exp(2 i a); the n-1 normal
  /// directions exp(i a), where a is the tau^1 curvature integral.
  CVector predicted_diagonal;
  double oracle_deviation = 0.0;  ///< max |diag(H) - predicted|
  bool nonflat = false;
};

/// Searches latitude loops on the coordinate line of chart 0 for one whose
/// holonomy is at least 0.1 away from the identity.
inline NonflatnessReport nonflatness_certificate(int n, int l, int steps = 400) {
  NonflatnessReport best;
  for (const double radius : {1.0, 0.5, 2.0, 0.25}) {
    const auto loop = Loop::latitude(n, radius);
    const auto hol = parallel_transport(PicardClass{l}, loop, steps);
    const double a = cap_curvature_integral(radius);
    NonflatnessReport r;
    r.n = n;
    r.l = l;
    r.radius = radius;
    r.loop = hol.loop;
    r.deviation = hol.deviation_from_identity;
    r.vacuum_phase = hol.vacuum_phase;
    r.predicted_diagonal = CVector(n + 1);
    r.predicted_diagonal(0) = std::polar(1.0, l * a);
    r.predicted_diagonal(1) = std::polar(1.0, 2.0 * a);
    for (int k = 2; k <= n; ++k) r.predicted_diagonal(k) = std::polar(1.0, a);
    r.oracle_deviation = (hol.matrix.diagonal() - r.predicted_diagonal).cwiseAbs().maxCoeff();
    r.nonflat = r.deviation > 0.1;
    if (r.nonflat) return r;
    if (r.deviation >= best.deviation) best = r;
  }
  return best;
}

}  // namespace quantizer
