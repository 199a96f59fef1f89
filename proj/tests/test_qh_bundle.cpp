#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "quantizer/qh_bundle.hpp"
#include "quantizer/sections.hpp"

using namespace quantizer;

namespace {

CVector vec(std::initializer_list<cplx> v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out(i++) = x;
  return out;
}

/// Curvature integral of tau^l over |z^1| < r, by a polar quadrature that
/// shares no code with the library's cap integral.
double stokes_angle(int l, double r) {
  return oracle::disc_integral([l](cplx w) { return 2.0 * chern_curvature(PicardClass{l}, vec({w}))(0, 0).real(); }, r);
}

/// Closed-form Christoffels of the Fubini-Study metric.
std::vector<CMatrix> christoffel_closed_form(const CVector& z) {
  const auto n = z.size();
  const double s1 = 1.0 + z.squaredNorm();
  std::vector<CMatrix> out(static_cast<std::size_t>(n), CMatrix::Zero(n, n));
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index m = 0; m < n; ++m) {
      for (Eigen::Index q = 0; q < n; ++q) {
        cplx v = 0.0;
        if (m == p) v += std::conj(z(q));
        if (m == q) v += std::conj(z(p));
        out[static_cast<std::size_t>(p)](m, q) = -v / s1;
      }
    }
  }
  return out;
}

/// Closed polyline through `count` random points of modulus up to `scale`.
Loop random_polyline_loop(std::mt19937_64& rng, int n, int count, double scale) {
  PolylineSegment seg{0, {}};
  for (int i = 0; i < count; ++i) seg.points.push_back(oracle::random_coords(rng, n, scale));
  seg.points.push_back(seg.points.front());
  return {n, {seg}};
}

}  // namespace

TEST(FibreDimension, Examples) {
  EXPECT_EQ(fibre_dimension(1, 0), 2);
  EXPECT_EQ(fibre_dimension(2, 5), 3);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(static_cast<std::uint64_t>(fibre_dimension(n, 1)), dimension(n, 1));
}

TEST(FibreVector, StackRoundTrip) {
  FibreVector v{1, cplx(1.0, 2.0), vec({3.0, cplx(0.0, 4.0)})};
  const auto back = FibreVector::from_stacked(1, v.stacked());
  EXPECT_EQ(back.vacuum_component, v.vacuum_component);
  EXPECT_EQ(back.excited_components, v.excited_components);
}

TEST(QhTransition, Examples) {
  std::mt19937_64 rng(51);
  const auto Z = oracle::random_generic_point(rng, 3);
  EXPECT_TRUE(qh_transition(PicardClass{2}, 1, 1, Z).matrix.isApprox(CMatrix::Identity(4, 4)));
  const auto t = qh_transition(PicardClass{1}, 1, 0, HomogeneousPoint(vec({1.0, 2.0}))).matrix;
  EXPECT_NEAR(std::abs(t(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(1, 1) + 0.25), 0.0, 1e-15);
  EXPECT_EQ(t(0, 1), cplx(0.0));
  EXPECT_EQ(t(1, 0), cplx(0.0));
}

TEST(QhTransition, BlockDiagonalInvertibleCocycle) {
  std::mt19937_64 rng(52);
  for (int n = 1; n <= 3; ++n) {
    for (int l = -3; l <= 3; ++l) {
      for (int trial = 0; trial < 200; ++trial) {
        const auto Z = oracle::random_generic_point(rng, n);
        std::uniform_int_distribution<int> pick(0, n);
        const int j = pick(rng), k = pick(rng), m = pick(rng);
        const PicardClass c{l};
        const auto jk = qh_transition(c, j, k, Z);
        ASSERT_EQ(jk.off_block_magnitude(), 0.0);
        ASSERT_GT(std::abs(jk.matrix.determinant()), 0.0);
        const CMatrix loop = qh_transition(c, j, k, Z).matrix * qh_transition(c, k, m, Z).matrix * qh_transition(c, m, j, Z).matrix;
        ASSERT_LT((loop - CMatrix::Identity(n + 1, n + 1)).norm(), 1e-10);
      }
    }
  }
}

TEST(TangentConnection, MatchesClosedFormChristoffels) {
  std::mt19937_64 rng(53);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const CVector z = oracle::random_coords(rng, n, 2.0);
      const auto got = tangent_connection(z);
      const auto want = christoffel_closed_form(z);
      for (int p = 0; p < n; ++p) EXPECT_LE((got[p] - want[p]).norm(), 1e-12);
    }
  }
}

TEST(Transport, ConstantLoopIsIdentity) {
  const auto h = parallel_transport(PicardClass{3}, Loop::constant(0, vec({0.3, cplx(0.1, 0.2)})), 100);
  EXPECT_LT(h.deviation_from_identity, 1e-14);
}

TEST(Transport, VacuumPhaseMatchesStokes) {
  for (int l : {1, 2, -1}) {
    for (double r : {0.3, 1.0, 1.7}) {
      const auto h = parallel_transport(PicardClass{l}, Loop::latitude(1, r), 400);
      EXPECT_LT(std::abs(h.vacuum_phase - std::polar(1.0, stokes_angle(l, r))), 1e-4) << "l=" << l << " r=" << r;
      EXPECT_NEAR(std::abs(h.vacuum_phase), 1.0, 1e-8);
    }
  }
}

TEST(Transport, FlatVacuumForTrivialBundle) {
  for (double r : {0.5, 1.0}) {
    const auto h = parallel_transport(PicardClass{0}, Loop::latitude(1, r), 400);
    EXPECT_LT(std::abs(h.vacuum_phase - 1.0), 1e-8);
    // tangent phase is exp(2 i a) with a the cap integral of tau^1
    EXPECT_LT(std::abs(h.matrix(1, 1) - std::polar(1.0, 2.0 * stokes_angle(1, r))), 1e-6);
  }
  // the half-sphere cap has a = pi, so the equator's tangent holonomy is trivial
  const auto eq = parallel_transport(PicardClass{0}, Loop::latitude(1, 1.0), 400);
  EXPECT_LT(eq.deviation_from_identity, 1e-6);
  const auto off = parallel_transport(PicardClass{0}, Loop::latitude(1, 0.5), 400);
  EXPECT_GT(off.deviation_from_identity, 0.1);
}

TEST(Transport, NormalDirectionsOnCP2) {
  const double r = 0.8;
  const auto h = parallel_transport(PicardClass{0}, Loop::latitude(2, r), 400);
  const double a = stokes_angle(1, r);
  EXPECT_LT(std::abs(h.matrix(1, 1) - std::polar(1.0, 2.0 * a)), 1e-6);
  EXPECT_LT(std::abs(h.matrix(2, 2) - std::polar(1.0, a)), 1e-6);
  EXPECT_LT(std::abs(h.matrix(1, 2)), 1e-8);
}

TEST(Transport, HolonomyIsUnitary) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 5; ++trial) {
    const auto loop = random_polyline_loop(rng, 2, 4, 1.0);
    const auto h = parallel_transport(PicardClass{2}, loop, 200);
    // unitary with respect to the fibre metric at the basepoint
    const CVector z0 = std::get<PolylineSegment>(loop.segments[0]).points[0];
    CMatrix G = CMatrix::Zero(3, 3);
    G(0, 0) = hermitian_metric(PicardClass{2}, z0);
    G.bottomRightCorner(2, 2) = fs_metric(z0).g.transpose();
    EXPECT_LT((h.matrix.adjoint() * G * h.matrix - G).norm(), 1e-6);
    EXPECT_NEAR(std::abs(h.vacuum_phase), 1.0, 1e-8);
  }
}

TEST(Transport, SplittingPreservedOnRandomLoops) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const int l = -3 + trial % 7;
    const auto loop = random_polyline_loop(rng, n, 3, 3.0);
    const auto h = parallel_transport(PicardClass{l}, loop, 400);
    EXPECT_LT(h.cross_block_leakage(), 1e-8);
  }
}

TEST(Transport, ReversalInverts) {
  std::mt19937_64 rng(56);
  const auto loops = {Loop::latitude(1, 0.7), random_polyline_loop(rng, 2, 4, 1.5), Loop::latitude(2, 2.5, 0, 1)};
  for (const auto& loop : loops) {
    const auto fwd = parallel_transport(PicardClass{1}, loop, 400);
    const auto back = parallel_transport(PicardClass{1}, loop.reversed(), 400);
    EXPECT_LT((back.matrix - fwd.matrix.inverse()).norm(), 1e-6) << loop.describe();
  }
}

TEST(Transport, CompositionMultiplies) {
  const CVector base = vec({0.5, 0.0});
  const LatitudeSegment g1{0, 0.5, 0, 1};
  const PolylineSegment g2{0, {base, vec({0.5, 0.8}), vec({cplx(0.0, 0.6), 0.3}), base}};
  const PicardClass c{2};
  const auto h1 = parallel_transport(c, Loop{2, {g1}}, 400);
  const auto h2 = parallel_transport(c, Loop{2, {g2}}, 400);
  const auto h12 = parallel_transport(c, Loop{2, {g1, g2}}, 400);
  EXPECT_LT((h12.matrix - h2.matrix * h1.matrix).norm(), 1e-6);
}

TEST(Transport, GaugeCovariantAcrossCharts) {
  // the same circle written in chart 1 (|z| = 3) and chart 2 (|w| = 1/3)
  const PicardClass c{2};
  const auto a = parallel_transport(c, Loop::latitude(1, 3.0, 0), 400);
  const auto b = parallel_transport(c, Loop{1, {LatitudeSegment{1, 1.0 / 3.0, 0, -1}}}, 400);
  EXPECT_GE(a.chart_switches, 1);
  EXPECT_EQ(b.chart_switches, 0);
  const auto T = qh_transition(c, 0, 1, lift(ChartPoint{0, vec({3.0})})).matrix;
  EXPECT_LT((a.matrix - T * b.matrix * T.inverse()).norm(), 1e-6);
}

TEST(Transport, StepTooCoarseDetected) {
  EXPECT_THROW(parallel_transport(PicardClass{40}, Loop::latitude(1, 1.0), 100), StepTooCoarse);
  EXPECT_THROW(parallel_transport(PicardClass{1}, Loop::latitude(1, 1.0), 10), std::invalid_argument);
}

TEST(Transport, RejectsOpenLoops) {
  const Loop open{1, {PolylineSegment{0, {vec({0.0}), vec({1.0})}}}};
  EXPECT_THROW(parallel_transport(PicardClass{1}, open, 100), std::invalid_argument);
}

TEST(Transport, FourthOrderConvergence) {
  const double a = stokes_angle(1, 1.0);
  const double exact_phase = a;  // l = 1
  std::vector<double> logh, loge;
  for (int steps : {10, 14, 20, 28, 40, 56, 80, 100}) {
    const auto h = transport_fixed(PicardClass{1}, Loop::latitude(1, 1.0), steps);
    logh.push_back(std::log(1.0 / steps));
    loge.push_back(std::log(std::abs(h.vacuum_phase - std::polar(1.0, exact_phase))));
  }
  const double mx = std::accumulate(logh.begin(), logh.end(), 0.0) / logh.size();
  const double my = std::accumulate(loge.begin(), loge.end(), 0.0) / loge.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < logh.size(); ++i) {
    sxy += (logh[i] - mx) * (loge[i] - my);
    sxx += (logh[i] - mx) * (logh[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 4.0, 0.3);
}

TEST(Nonflatness, Certificates) {
  const auto a = nonflatness_certificate(1, 1);
  EXPECT_TRUE(a.nonflat);
  EXPECT_GT(a.deviation, 0.1);
  EXPECT_LT(a.oracle_deviation, 1e-4);
  const auto b = nonflatness_certificate(2, 0);
  EXPECT_TRUE(b.nonflat);
  EXPECT_LT(b.oracle_deviation, 1e-4);
  const auto p = nonflatness_certificate(1, 2);
  const auto m = nonflatness_certificate(1, -2);
  EXPECT_EQ(p.radius, m.radius);
  EXPECT_LT(std::abs(m.vacuum_phase - std::conj(p.vacuum_phase)), 1e-6);
}

TEST(Nonflatness, ConjugatePhaseOnFixedLoop) {
  const auto loop = Loop::latitude(1, 0.6);
  const auto p = parallel_transport(PicardClass{2}, loop, 400);
  const auto m = parallel_transport(PicardClass{-2}, loop, 400);
  EXPECT_LT(std::abs(m.vacuum_phase - std::conj(p.vacuum_phase)), 1e-6);
}

TEST(CapCurvatureIntegral, ClosedForm) {
  for (double r : {0.1, 0.5, 1.0, 3.0}) EXPECT_NEAR(cap_curvature_integral(r), 2.0 * std::numbers::pi * r * r / (1.0 + r * r), 1e-10);
}
