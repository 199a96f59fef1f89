// quantizer: command-line front end for the checks and tables of the library.
//
// Exit status: 0 all checks pass, 1 a numerical check failed, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "quantizer/io.hpp"
#include "quantizer/quantizer.hpp"

namespace {

using namespace quantizer;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  int n = 1;
  int l = 1;
  long long samples = 100000;
  int steps = 400;
  int truncation = 80;
  std::optional<long long> seed_flag;
  std::uint64_t seed = 1;
  std::string seed_source = "default";
  int resolution = 200;
  std::string format = "json";
  std::string out;
  bool serial = false;
  std::string loop_file;
  std::string model = "disc";
  int grid = 5;
  double tolerance_scale = 1.0;  // hidden: scales atlas-check tolerances

  int threads() const { return serial ? 1 : numerics::default_threads(); }

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["n"] = n;
    j["l"] = l;
    j["samples"] = samples;
    j["steps"] = steps;
    j["truncation"] = truncation;
    j["seed"] = seed;
    j["seed_source"] = seed_source;
    j["resolution"] = resolution;
    j["format"] = format;
    j["out"] = out;
    j["serial"] = serial;
    if (command == "holonomy") j["loop"] = loop_file.empty() ? "latitude r=1 (default)" : loop_file;
    if (command == "bergman") {
      j["model"] = model;
      j["grid"] = grid;
    }
    if (tolerance_scale != 1.0) j["tolerance_scale"] = tolerance_scale;
    return j;
  }
};

void resolve_seed(RunConfig& cfg) {
  if (cfg.seed_flag) {
    if (*cfg.seed_flag < 0) throw UsageError("--seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*cfg.seed_flag);
    cfg.seed_source = "flag";
    return;
  }
  if (const char* env = std::getenv("QUANTIZER_SEED"); env && *env) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(env, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size() || std::string(env).front() == '-') {
      throw UsageError(std::string("QUANTIZER_SEED is not a nonnegative integer: ") + env);
    }
    cfg.seed = v;
    cfg.seed_source = "QUANTIZER_SEED";
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

/// Artifact wrapper shared by every command.
ordered_json envelope(const RunConfig& cfg, const std::string& identity) {
  ordered_json j;
  j["tool"] = "quantizer";
  j["version"] = kVersion;
  j["identity"] = identity;
  j["config"] = cfg.to_json();
  return j;
}

/// CSV preamble: one comment line each for tool, identity, and config.
std::string csv_preamble(const RunConfig& cfg, const std::string& identity) {
  std::ostringstream os;
  os << "# tool: quantizer " << kVersion << "\n# identity: " << identity << "\n# config: " << cfg.to_json().dump() << "\n";
  return os.str();
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Output {
  std::string text;
  bool pass = true;
};

Output json_output(const ordered_json& j, bool pass) { return {j.dump(2) + "\n", pass}; }

ordered_json cjson(cplx c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json mjson(const CMatrix& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cjson(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json vjson(const CVector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cjson(v(i)));
  return out;
}

// ---------------------------------------------------------------------------

Output cmd_atlas_check(const RunConfig& cfg) {
  require(cfg.n >= 1, "--n must be >= 1");
  require(cfg.samples >= 1, "--samples must be >= 1");
  const std::string identity = "z_(j) = Z/Z^j; phi_jk o phi_km = phi_jm; J(m->j) = J(k->j) J(m->k)";
  const double tol_round = 1e-12 * cfg.tolerance_scale;
  const double tol_cocycle = 1e-10 * cfg.tolerance_scale;
  const double tol_chain = 1e-8 * cfg.tolerance_scale;
  const int n = cfg.n;
  long long failures[3] = {0, 0, 0};
  double worst[3] = {0.0, 0.0, 0.0};
  std::optional<ordered_json> first_failure;
  const auto record = [&](int suite, const char* name, double err, double tol, const HomogeneousPoint& Z, ordered_json charts) {
    worst[suite] = std::max(worst[suite], err);
    if (err <= tol) return;
    ++failures[suite];
    if (!first_failure) {
      first_failure = ordered_json{{"suite", name}, {"error", err}, {"tolerance", tol}, {"point", vjson(Z.coords())},
                                   {"charts", std::move(charts)}};
    }
  };
  for (long long i = 0; i < cfg.samples; ++i) {
    const auto Z = sample_fs_point(n, cfg.seed, static_cast<std::uint64_t>(i));
    auto rng = numerics::substream(numerics::derive_seed(cfg.seed, 7), static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> pick(0, n);
    const int m = pick(rng), k = pick(rng), j = pick(rng);
    const auto pm = to_chart(Z, m);
    const double scale = 1.0 + pm.z.norm();
    // chart indices are reported 1-based
    record(0, "round_trip", (to_chart(lift(pm), m).z - pm.z).norm() / scale, tol_round, Z, {m + 1});
    const auto direct = transition(pm, j);
    const auto via = transition(transition(pm, k), j);
    record(1, "cocycle", (direct.z - via.z).norm() / (1.0 + direct.z.norm()), tol_cocycle, Z, {m + 1, k + 1, j + 1});
    const CMatrix Jd = transition_jacobian(pm, j);
    const CMatrix Jc = transition_jacobian(transition(pm, k), j) * transition_jacobian(pm, k);
    record(2, "chain_rule", (Jd - Jc).norm() / (1.0 + Jd.norm()), tol_chain, Z, {m + 1, k + 1, j + 1});
  }
  const bool pass = failures[0] + failures[1] + failures[2] == 0;
  const char* names[3] = {"round_trip", "cocycle", "chain_rule"};
  const double tols[3] = {tol_round, tol_cocycle, tol_chain};
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_preamble(cfg, identity) << "suite,points,failures,worst_error,tolerance\n";
    for (int s = 0; s < 3; ++s) os << names[s] << ',' << cfg.samples << ',' << failures[s] << ',' << csv_number(worst[s]) << ',' << csv_number(tols[s]) << '\n';
    return {os.str(), pass};
  }
  auto j = envelope(cfg, identity);
  ordered_json suites = ordered_json::array();
  for (int s = 0; s < 3; ++s) {
    suites.push_back({{"suite", names[s]}, {"points", cfg.samples}, {"failures", failures[s]}, {"worst_error", worst[s]}, {"tolerance", tols[s]}});
  }
  j["suites"] = suites;
  j["pass"] = pass;
  if (first_failure) j["first_failure"] = *first_failure;
  return json_output(j, pass);
}

Output cmd_dim(const RunConfig& cfg) {
  require(cfg.n >= 1, "--n must be >= 1");
  require(cfg.l >= 0, "--l must be >= 0 (the table always includes l = -1)");
  const std::string identity = "dim H^0(CP^n, O(l)) = C(n+l, n) for l >= 0, 0 for l < 0";
  bool pass = true;
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << csv_preamble(cfg, identity) << "n,l,dimension,basis_size,binomial\n";
  for (int n = 1; n <= cfg.n; ++n) {
    for (int l = -1; l <= cfg.l; ++l) {
      const std::uint64_t dim = dimension(n, l);
      const std::uint64_t basis = l < 0 ? 0 : enumerate_basis(n, l).size();
      const std::uint64_t binom = l < 0 ? 0 : binomial(n + l, n);
      pass = pass && dim == basis && dim == binom;
      rows.push_back({{"n", n}, {"l", l}, {"dimension", dim}, {"basis_size", basis}, {"binomial", binom}});
      csv << n << ',' << l << ',' << dim << ',' << basis << ',' << binom << '\n';
    }
  }
  if (cfg.format == "csv") return {csv.str(), pass};
  auto j = envelope(cfg, identity);
  j["table"] = rows;
  j["pass"] = pass;
  return json_output(j, pass);
}

Output cmd_chern(const RunConfig& cfg) {
  require(cfg.n >= 1, "--n must be >= 1");
  require(cfg.resolution >= 2, "--resolution must be >= 2");
  const std::string identity = "c_1(tau^l) = (i/2pi) * integral of F over a line = l; F = -2il omega_FS";
  const PicardClass c{cfg.l};
  const double number = chern_number(c, cfg.n, cfg.resolution);
  // scale s with integral of (s omega_FS)^n = n+1, from the closed-form volume
  const double scale = std::pow((cfg.n + 1) / fs_volume_exact(cfg.n), 1.0 / cfg.n);
  const auto k = curvature_constant(c, scale);
  const bool pass = std::abs(number - cfg.l) < 1e-3;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_preamble(cfg, identity) << "l,chern_number,error,c_fs_im,c_normalized_im,c_conventional_im\n"
       << cfg.l << ',' << csv_number(number) << ',' << csv_number(number - cfg.l) << ',' << csv_number(k.versus_fs.imag()) << ','
       << csv_number(k.versus_normalized.imag()) << ',' << csv_number(k.conventional.imag()) << '\n';
    return {os.str(), pass};
  }
  auto j = envelope(cfg, identity);
  j["chern_number"] = number;
  j["error"] = number - cfg.l;
  j["tolerance"] = 1e-3;
  j["curvature_constant"] = {{"F_over_omega_fs", cjson(k.versus_fs)},
                             {"F_over_normalized_omega", cjson(k.versus_normalized)},
                             {"normalization_scale", scale},
                             {"conventional_constant", cjson(k.conventional)}};
  j["pass"] = pass;
  return json_output(j, pass);
}

Output cmd_spectrum(const RunConfig& cfg) {
  require(cfg.n >= 1, "--n must be >= 1");
  const std::string identity = "E_lin = sum (m_j + 1/2); E_proj = log(1 + E_lin) on the n+1 admissible states";
  const auto table = projective_spectrum(cfg.n);
  bool pass = table.rows.size() == static_cast<std::size_t>(cfg.n + 1);
  for (const auto& r : table.rows) pass = pass && r.projective_eigenvalue == std::log1p(r.linear_eigenvalue);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_preamble(cfg, identity);
    table.write_csv(os);
    return {os.str(), pass};
  }
  auto j = envelope(cfg, identity);
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"state", r.state.label()}, {"E_lin", r.linear_eigenvalue}, {"E_proj", r.projective_eigenvalue}, {"degeneracy", r.degeneracy}});
  }
  ordered_json levels = ordered_json::array();
  for (const auto& lv : table.levels()) levels.push_back({{"E_proj", lv.energy}, {"degeneracy", lv.degeneracy}});
  j["rows"] = rows;
  j["levels"] = levels;
  j["pass"] = pass;
  return json_output(j, pass);
}

Output cmd_holonomy(const RunConfig& cfg) {
  require(cfg.steps >= 100, "--steps must be >= 100");
  const std::string identity = "H = P exp(-oint A) on tau^l + T(CP^n); block diagonal, |vacuum phase| = 1";
  Loop loop;
  try {
    loop = cfg.loop_file.empty() ? Loop::latitude(cfg.n, 1.0) : io::load_loop(cfg.loop_file, cfg.n);
    loop_pieces(loop);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed loop file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto h = parallel_transport(PicardClass{cfg.l}, loop, cfg.steps);
  const double leak = h.cross_block_leakage();
  const double unit = std::abs(std::abs(h.vacuum_phase) - 1.0);
  const bool pass = leak < 1e-8 && unit < 1e-8;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_preamble(cfg, identity) << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
      for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) {
        os << r + 1 << ',' << c + 1 << ',' << csv_number(h.matrix(r, c).real()) << ',' << csv_number(h.matrix(r, c).imag()) << '\n';
      }
    }
    return {os.str(), pass};
  }
  auto j = envelope(cfg, identity);
  j["n"] = loop.n;
  const auto hj = io::to_json(h);
  j["holonomy"] = ordered_json::parse(hj.dump());
  j["pass"] = pass;
  return json_output(j, pass);
}

Output cmd_bergman(const RunConfig& cfg) {
  require(cfg.truncation >= 2, "--truncation must be >= 2");
  require(cfg.grid >= 1, "--grid must be >= 1");
  require(cfg.model == "disc" || cfg.model == "fock", "--model must be disc or fock");
  const std::string identity = "k(z,w) = sum h_j(z) conj(h_j(w)); g_B = d dbar log k(z,z) = embedding pullback of g_FS";
  const bool disc = cfg.model == "disc";
  const int n = disc ? 1 : cfg.n;
  require(n >= 1, "--n must be >= 1");
  const auto model = disc ? KernelModel::unit_disc(cfg.truncation) : KernelModel::complex_space(n, cfg.truncation);
  const double tolerance = 1e-3;
  bool pass = true;
  ordered_json points = ordered_json::array();
  std::ostringstream csv;
  csv << csv_preamble(cfg, identity) << "re,im,kernel,kernel_full,metric,metric_full,pullback,deviation\n";
  const double rmax = 0.8;
  for (int i = 0; i < cfg.grid; ++i) {
    const double r = cfg.grid == 1 ? 0.0 : rmax * i / (cfg.grid - 1);
    CVector z = CVector::Zero(n);
    z(0) = std::polar(r, 0.25 * std::numbers::pi * i);
    const double k = kernel_at(model, z, z).real();
    const double kf = model.full_kernel(z, z).real();
    const auto report = pullback_check(model, z);
    pass = pass && report.deviation < tolerance && std::isfinite(report.deviation);
    points.push_back({{"point", vjson(z)},
                      {"kernel", k},
                      {"kernel_full", kf},
                      {"metric", mjson(bergman_metric(model, z).g)},
                      {"metric_full", mjson(report.rhs)},
                      {"pullback", mjson(report.lhs)},
                      {"deviation", report.deviation},
                      {"deviation_same_truncation", report.deviation_truncated}});
    csv << csv_number(z(0).real()) << ',' << csv_number(z(0).imag()) << ',' << csv_number(k) << ',' << csv_number(kf) << ','
        << csv_number(bergman_metric(model, z).g(0, 0).real()) << ',' << csv_number(report.rhs(0, 0).real()) << ','
        << csv_number(report.lhs(0, 0).real()) << ',' << csv_number(report.deviation) << '\n';
  }
  if (cfg.format == "csv") return {csv.str(), pass};
  auto j = envelope(cfg, identity);
  j["domain"] = to_string(model.domain());
  j["tolerance"] = tolerance;
  j["points"] = points;
  CVector z0 = CVector::Zero(n);
  const auto prop = propagator_metric_cn(z0);
  j["propagator"] = {{"identity", "d dbar log exp(sum conj(z) z) = identity"},
                     {"point", vjson(z0)},
                     {"finite_difference", mjson(prop.finite_difference)},
                     {"fd_deviation", prop.fd_deviation},
                     {"imaginary_exponent_hessian", mjson(prop.imaginary_exponent)},
                     {"is_standard_metric", prop.is_standard_metric}};
  j["pass"] = pass;
  return json_output(j, pass);
}

Output cmd_volume(const RunConfig& cfg) {
  require(cfg.n >= 1, "--n must be >= 1");
  require(cfg.samples >= 1, "--samples must be >= 1");
  const std::string identity = "integral over CP^n of (s omega_FS)^n = n + 1";
  const auto samples = static_cast<std::size_t>(cfg.samples);
  const auto raw = fs_volume_monte_carlo(cfg.n, samples, cfg.seed, cfg.threads());
  const double scale = scale_for_volume(cfg.n, raw);
  const auto normalized = volume_integral(cfg.n, [](const ChartPoint&) { return 1.0; }, samples, cfg.seed, cfg.threads());
  const double target = cfg.n + 1.0;
  const bool pass = std::abs(normalized.value - target) <= 4.0 * normalized.std_error;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_preamble(cfg, identity) << "n,samples,fs_volume,fs_volume_std_error,fs_volume_exact,scale,normalized_volume,normalized_std_error,target\n"
       << cfg.n << ',' << samples << ',' << csv_number(raw.value) << ',' << csv_number(raw.std_error) << ','
       << csv_number(fs_volume_exact(cfg.n)) << ',' << csv_number(scale) << ',' << csv_number(normalized.value) << ','
       << csv_number(normalized.std_error) << ',' << csv_number(target) << '\n';
    return {os.str(), pass};
  }
  auto j = envelope(cfg, identity);
  j["fs_volume"] = {{"value", raw.value}, {"std_error", raw.std_error}, {"samples", raw.samples}, {"exact", fs_volume_exact(cfg.n)}};
  j["scale"] = scale;
  j["normalized_volume"] = {{"value", normalized.value}, {"std_error", normalized.std_error}, {"samples", normalized.samples}, {"target", target}};
  j["pass"] = pass;
  return json_output(j, pass);
}

Output cmd_qh_check(const RunConfig& cfg) {
  require(cfg.n >= 1, "--n must be >= 1");
  require(cfg.samples >= 1, "--samples must be >= 1");
  require(cfg.steps >= 100, "--steps must be >= 100");
  const std::string identity = "QH_l = tau^l + T(CP^n): block-diagonal transitions, cocycle, split-preserving transport, nonflat";
  const PicardClass c{cfg.l};
  const int n = cfg.n;
  double worst_cocycle = 0.0, worst_off_block = 0.0;
  for (long long i = 0; i < cfg.samples; ++i) {
    const auto Z = sample_fs_point(n, cfg.seed, static_cast<std::uint64_t>(i));
    auto rng = numerics::substream(numerics::derive_seed(cfg.seed, 8), static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> pick(0, n);
    const int j = pick(rng), k = pick(rng), m = pick(rng);
    const auto jk = qh_transition(c, j, k, Z);
    worst_off_block = std::max(worst_off_block, jk.off_block_magnitude());
    const CMatrix cyc = jk.matrix * qh_transition(c, k, m, Z).matrix * qh_transition(c, m, j, Z).matrix;
    worst_cocycle = std::max(worst_cocycle, (cyc - CMatrix::Identity(n + 1, n + 1)).norm());
  }
  // transport around random closed polylines in chart 1
  const long long loops = std::min<long long>(cfg.samples, 20);
  double worst_leak = 0.0, worst_unit = 0.0;
  for (long long i = 0; i < loops; ++i) {
    auto rng = numerics::substream(numerics::derive_seed(cfg.seed, 9), static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    PolylineSegment seg{0, {}};
    for (int p = 0; p < 3; ++p) {
      CVector z(n);
      for (int a = 0; a < n; ++a) {
        const double re = u(rng);
        const double im = u(rng);
        z(a) = cplx(re, im);
      }
      seg.points.push_back(z);
    }
    seg.points.push_back(seg.points.front());
    const auto h = parallel_transport(c, Loop{n, {seg}}, cfg.steps);
    worst_leak = std::max(worst_leak, h.cross_block_leakage());
    worst_unit = std::max(worst_unit, std::abs(std::abs(h.vacuum_phase) - 1.0));
  }
  const auto cert = nonflatness_certificate(n, cfg.l, cfg.steps);
  const bool pass = worst_cocycle < 1e-10 && worst_off_block == 0.0 && worst_leak < 1e-8 && worst_unit < 1e-8 && cert.nonflat;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << csv_preamble(cfg, identity) << "check,value,tolerance\n"
       << "cocycle," << csv_number(worst_cocycle) << ",1e-10\n"
       << "off_block," << csv_number(worst_off_block) << ",0\n"
       << "transport_leakage," << csv_number(worst_leak) << ",1e-08\n"
       << "vacuum_unitarity," << csv_number(worst_unit) << ",1e-08\n"
       << "nonflat_deviation," << csv_number(cert.deviation) << ",0.1\n";
    return {os.str(), pass};
  }
  auto j = envelope(cfg, identity);
  j["fibre_dimension"] = fibre_dimension(n, cfg.l);
  j["transitions"] = {{"points", cfg.samples}, {"worst_cocycle_error", worst_cocycle}, {"worst_off_block", worst_off_block}};
  j["transport"] = {{"loops", loops}, {"worst_leakage", worst_leak}, {"worst_vacuum_unitarity", worst_unit}};
  j["nonflatness"] = ordered_json::parse(io::to_json(cert).dump());
  j["pass"] = pass;
  return json_output(j, pass);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + cfg.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for geometric quantization on CP^n and Bergman spaces"};
  app.set_version_flag("--version", std::string(quantizer::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--n", cfg.n, "complex dimension n")->capture_default_str();
  app.add_option("--l", cfg.l, "Picard class l")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo samples / random test points")->capture_default_str();
  app.add_option("--steps", cfg.steps, "RK4 steps per smooth loop piece")->capture_default_str();
  app.add_option("--truncation", cfg.truncation, "kernel basis truncation M")->capture_default_str();
  app.add_option("--seed", cfg.seed_flag, "random seed (fallback: QUANTIZER_SEED, then 1)");
  app.add_option("--resolution", cfg.resolution, "quadrature nodes per angle")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", cfg.out, "write output to PATH instead of stdout");
  app.add_flag("--serial", cfg.serial, "single-threaded evaluation");

  const std::pair<const char*, const char*> commands[] = {
      {"atlas-check", "round-trip, cocycle and chain-rule suites on random points"},
      {"dim", "dimension table of holomorphic sections"},
      {"chern", "Chern number and curvature constant of tau^l"},
      {"spectrum", "linear and projective oscillator spectra"},
      {"holonomy", "holonomy of the QH bundle around a loop"},
      {"bergman", "Bergman kernel, metric and pullback deviations on a grid"},
      {"volume", "normalized Fubini-Study volume"},
      {"qh-check", "transition, transport and nonflatness checks of the QH bundle"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) subs[name] = app.add_subcommand(name, help);
  subs["holonomy"]->add_option("--loop", cfg.loop_file, "loop JSON file (default: latitude r=1 in chart 1)");
  subs["bergman"]->add_option("--model", cfg.model, "disc or fock")->capture_default_str();
  subs["bergman"]->add_option("--grid", cfg.grid, "number of grid points with |z| <= 0.8")->capture_default_str();
  subs["atlas-check"]->add_option("--tolerance-scale", cfg.tolerance_scale)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cfg.command = name;
  }

  try {
    resolve_seed(cfg);
    Output out;
    if (cfg.command == "atlas-check") out = cmd_atlas_check(cfg);
    else if (cfg.command == "dim") out = cmd_dim(cfg);
    else if (cfg.command == "chern") out = cmd_chern(cfg);
    else if (cfg.command == "spectrum") out = cmd_spectrum(cfg);
    else if (cfg.command == "holonomy") out = cmd_holonomy(cfg);
    else if (cfg.command == "bergman") out = cmd_bergman(cfg);
    else if (cfg.command == "volume") out = cmd_volume(cfg);
    else out = cmd_qh_check(cfg);
    emit(cfg, out.text);
    return out.pass ? kExitPass : kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitFail;
  }
}
