// Acceptance suite: one PASS/FAIL line per criterion; exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quantizer/quantizer.hpp"

using namespace quantizer;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0: no runtime requirement
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

CVector vec1(cplx z) {
  CVector v(1);
  v(0) = z;
  return v;
}

/// Homogeneous point with every coordinate modulus in [0.2, 1]: inside all
/// charts, so every (j, k, m) triple is an overlap.
HomogeneousPoint triple_overlap_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> mod(0.2, 1.0), arg(0.0, 2.0 * std::numbers::pi);
  CVector Z(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double m = mod(rng);
    const double a = arg(rng);
    Z(i) = std::polar(m, a);
  }
  return HomogeneousPoint(Z);
}

CVector random_coords(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CVector z(n);
  for (int i = 0; i < n; ++i) {
    const double re = u(rng);
    const double im = u(rng);
    z(i) = cplx(re, im);
  }
  return z;
}

// 1 ------------------------------------------------------------------------
Outcome dimension_formula() {
  for (int n = 1; n <= 6; ++n) {
    for (int l = 0; l <= 8; ++l) {
      const auto size = enumerate_basis(n, l).size();
      if (size != binomial(n + l, n) || dimension(n, l) != size) {
        return {false, "mismatch at n=" + std::to_string(n) + " l=" + std::to_string(l)};
      }
    }
    for (int l = -4; l < 0; ++l) {
      if (dimension(n, l) != 0) return {false, "nonzero for l<0 at n=" + std::to_string(n)};
    }
  }
  return {true, "n=1..6, l=0..8 exact; l<0 -> 0"};
}

// 2 ------------------------------------------------------------------------
Outcome volume_normalization() {
  bool pass = true;
  std::ostringstream os;
  for (int n : {1, 2}) {
    const auto r = volume_integral(n, [](const ChartPoint&) { return 1.0; }, 1'000'000, 2024);
    const double rel = std::abs(r.value - (n + 1)) / (n + 1);
    pass = pass && rel < 0.01;
    os << "n=" << n << ": " << fmt("%.5f", r.value) << " +- " << fmt("%.5f", r.std_error) << " (rel " << fmt("%.1e", rel) << ")  ";
  }
  return {pass, os.str()};
}

// 3 ------------------------------------------------------------------------
Outcome chern_quantization() {
  double worst = 0.0;
  for (int l = -5; l <= 5; ++l) worst = std::max(worst, std::abs(chern_number(PicardClass{l}, 1, 200) - l));
  return {worst < 1e-3, "max |c1 - l| = " + fmt("%.2e", worst) + " for l=-5..5"};
}

// 4 ------------------------------------------------------------------------
Outcome curvature_proportionality() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> dim(1, 3), deg(-5, 5);
  double worst_ratio = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const int n = dim(rng);
    int l = deg(rng);
    if (l == 0) l = 1;
    const CVector z = random_coords(rng, n, 1.5);
    const CMatrix F = chern_curvature(PicardClass{l}, z);
    const CMatrix hessK = numerics::mixed_hessian_fd([](const CVector& x) { return std::log1p(x.squaredNorm()); }, z, numerics::fd_step(z));
    const CMatrix g = fs_metric(z).g;
    // pointwise ratio F / Hessian(K), with the Hessian taken by finite differences
    worst_ratio = std::max(worst_ratio, (F - static_cast<double>(l) * hessK).norm() / (std::abs(l) * hessK.norm()));
    // finite-difference oracle on -log h against the closed form
    const CMatrix Ffd = numerics::mixed_hessian_fd(
        [l](const CVector& x) { return -std::log(hermitian_metric(PicardClass{l}, x)); }, z, numerics::fd_step(z));
    worst_fd = std::max(worst_fd, (Ffd - F).cwiseAbs().maxCoeff() / std::max(1.0, F.cwiseAbs().maxCoeff()));
    worst_fd = std::max(worst_fd, (hessK - g).cwiseAbs().maxCoeff());
  }
  return {worst_ratio < 1e-6 && worst_fd < 1e-6,
          "ratio rel err " + fmt("%.1e", worst_ratio) + ", FD vs closed form " + fmt("%.1e", worst_fd) + " at 1e4 points"};
}

// 5 ------------------------------------------------------------------------
Outcome cocycle_suites() {
  std::mt19937_64 rng(5);
  double worst_scalar = 0.0, worst_matrix = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int l = -3; l <= 3; ++l) {
      const PicardClass c{l};
      for (int i = 0; i < 1000; ++i) {
        const auto Z = triple_overlap_point(rng, n);
        std::uniform_int_distribution<int> pick(0, n);
        const int j = pick(rng), k = pick(rng), m = pick(rng);
        const cplx s = bundle_transition(c, j, k, Z) * bundle_transition(c, k, m, Z) * bundle_transition(c, m, j, Z);
        worst_scalar = std::max(worst_scalar, std::abs(s - 1.0));
        const CMatrix M = qh_transition(c, j, k, Z).matrix * qh_transition(c, k, m, Z).matrix * qh_transition(c, m, j, Z).matrix;
        worst_matrix = std::max(worst_matrix, (M - CMatrix::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst_scalar < 1e-10 && worst_matrix < 1e-10,
          "scalar " + fmt("%.1e", worst_scalar) + ", matrix " + fmt("%.1e", worst_matrix) + " over 21000 points"};
}

// 6 ------------------------------------------------------------------------
Outcome oscillator_spectra() {
  const double eps = std::numeric_limits<double>::epsilon();
  for (int n = 1; n <= 10; ++n) {
    const auto t = projective_spectrum(n);
    if (t.rows.size() != static_cast<std::size_t>(n + 1)) return {false, "row count at n=" + std::to_string(n)};
    const auto lv = t.levels();
    if (lv.size() != 2 || lv[0].degeneracy != 1 || lv[1].degeneracy != n) return {false, "degeneracy at n=" + std::to_string(n)};
    const double e0 = std::log(1.0 + n / 2.0), e1 = std::log(2.0 + n / 2.0);
    if (std::abs(lv[0].energy - e0) > 2 * eps * e0 || std::abs(lv[1].energy - e1) > 2 * eps * e1) {
      return {false, "eigenvalue at n=" + std::to_string(n)};
    }
    for (const auto& r : t.rows) {
      if (r.projective_eigenvalue != std::log1p(r.linear_eigenvalue)) return {false, "E_proj != log(1+E_lin)"};
    }
  }
  return {true, "n=1..10: {log(1+n/2) x1, log(2+n/2) x n}"};
}

// 7 ------------------------------------------------------------------------
Outcome nonflatness() {
  const PicardClass c{1};
  const double r = 1.0;
  const auto loop = Loop::latitude(1, r);
  const auto h = parallel_transport(c, loop, 400);
  // Stokes oracle: curvature of tau^1 over the cap |z| < r, independent polar quadrature
  const auto rule = numerics::gauss_legendre(400, 0.0, r);
  double a = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double ring = 0.0;
    for (int k = 0; k < 64; ++k) ring += 2.0 * chern_curvature(c, vec1(std::polar(rule.nodes[i], 2.0 * std::numbers::pi * k / 64))).real()(0, 0);
    a += rule.weights[i] * rule.nodes[i] * ring * 2.0 * std::numbers::pi / 64;
  }
  CMatrix predicted = CMatrix::Zero(2, 2);
  predicted(0, 0) = std::polar(1.0, a);        // vacuum line, l = 1
  predicted(1, 1) = std::polar(1.0, 2.0 * a);  // tangent line
  const double oracle_err = operator_norm(h.matrix - predicted);
  // convergence order: least-squares slope of log error against log step over one decade
  std::vector<double> x, y;
  for (int steps : {10, 13, 16, 20, 25, 32, 40, 50, 63, 80, 100}) {
    const auto hs = transport_fixed(c, loop, steps);
    x.push_back(std::log(1.0 / steps));
    y.push_back(std::log(operator_norm(hs.matrix - predicted)));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double order = sxy / sxx;
  return {h.deviation_from_identity > 0.1 && oracle_err < 1e-4 && std::abs(order - 4.0) <= 0.3,
          "|H-I| = " + fmt("%.4f", h.deviation_from_identity) + ", vs Stokes " + fmt("%.1e", oracle_err) + ", order " + fmt("%.3f", order)};
}

// 8 ------------------------------------------------------------------------
Outcome splitting_invariance() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(1, 3), deg(-3, 3), count(2, 5);
  double worst = 0.0;
  int switched = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = dim(rng);
    PolylineSegment seg{0, {}};
    const int pts = count(rng);
    // every other loop reaches |z| ~ 4 and crosses into other charts
    const double scale = i % 2 ? 3.0 : 1.0;
    for (int p = 0; p < pts; ++p) seg.points.push_back(random_coords(rng, n, scale));
    seg.points.push_back(seg.points.front());
    const auto h = parallel_transport(PicardClass{deg(rng)}, Loop{n, {seg}}, 400);
    worst = std::max(worst, h.cross_block_leakage());
    if (h.chart_switches > 0) ++switched;
  }
  return {worst < 1e-8, "max leakage " + fmt("%.1e", worst) + " over 20 loops (" + std::to_string(switched) + " cross charts)"};
}

// 9 ------------------------------------------------------------------------
Outcome bergman_disc() {
  const auto m80 = KernelModel::unit_disc(80);
  const auto m120 = KernelModel::unit_disc(120);
  double worst_k = 0.0, worst_g = 0.0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double r = 0.05 * i;
      const cplx z = std::polar(r, 2.0 * std::numbers::pi * j / 8 + 0.1);
      const double x = r * r;
      worst_k = std::max(worst_k, std::abs(kernel_at(m80, z, z) - 1.0 / (std::numbers::pi * (1 - x) * (1 - x))));
      worst_g = std::max(worst_g, std::abs(bergman_metric(m120, vec1(z)).g(0, 0) - 2.0 / ((1 - x) * (1 - x))));
    }
  }
  return {worst_k < 1e-6 && worst_g < 1e-5, "kernel err " + fmt("%.1e", worst_k) + ", metric err " + fmt("%.1e", worst_g) + " on |z|<=0.5"};
}

// 10 -----------------------------------------------------------------------
Outcome pullback_identity() {
  // interior points where the M = 80 truncation tail is above double rounding
  double worst = 0.0;
  bool monotone = true;
  const auto m20 = KernelModel::unit_disc(20), m40 = KernelModel::unit_disc(40), m80 = KernelModel::unit_disc(80),
             m120 = KernelModel::unit_disc(120);
  for (int i = 0; i < 10; ++i) {
    const CVector z = vec1(std::polar(0.80 + 0.01 * i, 0.7 * i));
    worst = std::max(worst, pullback_check(m120, z).deviation);
    const double d20 = pullback_check(m20, z).deviation;
    const double d40 = pullback_check(m40, z).deviation;
    const double d80 = pullback_check(m80, z).deviation;
    monotone = monotone && d20 > d40 && d40 > d80;
  }
  return {worst < 1e-3 && monotone, "max deviation at M=120 " + fmt("%.1e", worst) + (monotone ? ", decreasing over M=20,40,80" : ", NOT monotone")};
}

// 11 -----------------------------------------------------------------------
Outcome taylor_regime() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10'000; ++i) {
    const double s = 1.0 - u(rng);
    if (!taylor_consistency(s).bound_holds) return {false, "bound fails at s=" + fmt("%.17g", s)};
  }
  return {true, "|log(1+s) - s| <= s^2/2 on 1e4 samples of (0,1]"};
}

// 12 -----------------------------------------------------------------------
std::string capture(const std::string& args) {
  const std::string cmd = "'" QUANTIZER_CLI_PATH "' " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return out + "\n<status " + std::to_string(status) + ">";
}

Outcome determinism() {
  const std::vector<std::string> runs = {
      "atlas-check --n 2 --samples 1000 --seed 7 --serial",
      "dim --n 4 --l 4 --serial --format csv",
      "chern --n 1 --l -3 --resolution 200 --serial",
      "spectrum --n 4 --serial --format csv",
      "holonomy --n 2 --l 1 --steps 200 --serial",
      "bergman --truncation 80 --grid 5 --serial",
      "volume --n 2 --samples 100000 --seed 42 --serial",
      "volume --n 1 --samples 100000 --seed 42 --serial --format csv",
      "qh-check --n 2 --l 0 --samples 200 --steps 200 --seed 3 --serial",
  };
  for (const auto& args : runs) {
    const auto a = capture(args);
    const auto b = capture(args);
    if (a != b) return {false, "differs: " + args};
  }
  return {true, std::to_string(runs.size()) + " command lines, byte-identical reruns"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dimension formula", 1.0, dimension_formula},
      {2, "volume normalization", 30.0, volume_normalization},
      {3, "Chern quantization", 10.0, chern_quantization},
      {4, "curvature proportionality", 0.0, curvature_proportionality},
      {5, "cocycle suites", 0.0, cocycle_suites},
      {6, "oscillator spectra", 0.0, oscillator_spectra},
      {7, "nonflatness", 0.0, nonflatness},
      {8, "splitting under transport", 0.0, splitting_invariance},
      {9, "Bergman disc model", 0.0, bergman_disc},
      {10, "pullback identity", 0.0, pullback_identity},
      {11, "Taylor regime", 0.0, taylor_regime},
      {12, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      o.pass = false;
      o.detail += " [over runtime budget " + fmt("%.0f", c.budget_seconds) + " s]";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %-27s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
