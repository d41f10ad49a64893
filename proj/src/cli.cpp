#include "zk/cli.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zk/dynamics.hpp"
#include "zk/errors.hpp"
#include "zk/estimates.hpp"
#include "zk/gwp.hpp"
#include "zk/imethod.hpp"
#include "zk/initial.hpp"
#include "zk/io.hpp"
#include "zk/norms.hpp"

#ifndef ZKLAB_VERSION
#define ZKLAB_VERSION "unknown"
#endif

namespace zk::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kEvolving{"simulate", "picard", "imethod-scan", "gwp"};
const std::vector<std::string> kGridded{"simulate", "picard", "imethod-scan", "gwp", "probe"};

const std::string kTwoPi = io::format_double(2.0 * std::numbers::pi);

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"simulate", "picard", "imethod-scan", "gwp", "probe", "norms"};
  return names;
}

const std::vector<KeySpec>& key_schema() {
  static const std::vector<KeySpec> schema{
      {"output_dir", "", "output directory (default $ZKLAB_OUTPUT_DIR, else ./zklab-out)", {}},
      {"seed", "1", "base seed of every random draw", {}},
      {"nx", "64", "grid points in x (power of two)", kGridded},
      {"ny", "64", "grid points in y (power of two)", kGridded},
      {"lx", kTwoPi, "box period in x", kGridded},
      {"ly", kTwoPi, "box period in y", kGridded},
      {"form", "symmetrized", "original | symmetrized", {"picard"}},
      {"form", "original", "original | symmetrized", {"simulate"}},
      {"preset", "random", "gaussian | cosine | two-pulse | random", kEvolving},
      {"amplitude", "1", "gaussian/cosine amplitude", kEvolving},
      {"sigma", "0.5", "gaussian width", kEvolving},
      {"x0", "", "gaussian centre x (default lx/2)", kEvolving},
      {"y0", "", "gaussian centre y (default ly/2)", kEvolving},
      {"j", "1", "cosine mode index in x", kEvolving},
      {"k", "0", "cosine mode index in y", kEvolving},
      {"a1", "1", "first pulse amplitude", kEvolving},
      {"a2", "0.5", "second pulse amplitude", kEvolving},
      {"x1", "", "first pulse centre (default 0.3 lx)", kEvolving},
      {"x2", "", "second pulse centre (default 0.7 lx)", kEvolving},
      {"width", "0.5", "pulse width", kEvolving},
      {"kappa", "2", "random data spectral envelope width", kEvolving},
      {"normalization", "h1", "random data normalization: h1 | l2", kEvolving},
      {"norm", "1", "random data norm value", kEvolving},
      {"T", "1", "final time", {"simulate", "gwp"}},
      {"T", "0", "Picard horizon; 0 applies the horizon rule with a fitted constant", {"picard"}},
      {"T", "1", "cutoff / trilinear time scale", {"probe"}},
      {"dt", "1e-3", "time step", {"simulate", "gwp"}},
      {"dt", "2.5e-4", "time step", {"imethod-scan"}},
      {"dt", "0", "cutoff time step (0 picks min(T,1/L)/64)", {"probe"}},
      {"sample_every", "10", "steps between stored frames", {"simulate"}},
      {"sample_every", "20", "steps between quadrature frames", {"imethod-scan"}},
      {"frames", "final", "frame dump: none | final | all", {"simulate"}},
      {"nonlinear", "1", "include the nonlinearity (0/1)", {"simulate"}},
      {"dealias", "1", "2/3 dealiasing (0/1)", {"simulate"}},
      {"iterations", "6", "Picard iterations", {"picard"}},
      {"nodes", "129", "Duhamel quadrature nodes", {"picard"}},
      {"besov", "0.1", "rescale data to this B^{1/2}_{2,1} norm (0 keeps it)", {"picard"}},
      {"s", "0.9", "regularity index", {"imethod-scan", "gwp"}},
      {"s", "0.5", "norm regularity index", {"norms"}},
      {"delta", "0.1", "time window length", {"imethod-scan", "gwp"}},
      {"N_list", "4,8,16,32", "I-method cutoffs (powers of two)", {"imethod-scan"}},
      {"N", "0", "I-method cutoff (0 derives it from T)", {"gwp"}},
      {"max_windows", "100", "cap on evolution windows", {"gwp"}},
      {"lambda_shrink", "0.9", "scaling parameter reduction factor", {"gwp"}},
      {"estimate", "strichartz", "strichartz | maximal | bilinear | gh-bilinear | l4 | cutoff | trilinear", {"probe"}},
      {"samples", "32", "random samples per point", {"probe"}},
      {"time_samples", "32", "frames per probe window", {"probe"}},
      {"window", "0", "probe window (0 picks the traversal time)", {"probe"}},
      {"measure", "radial", "shell measure: radial | x | y", {"probe"}},
      {"q", "6", "time exponent", {"probe"}},
      {"r", "4", "space exponent", {"probe"}},
      {"r", "2", "Lebesgue exponent for norm=lr", {"norms"}},
      {"N1", "4", "first dyadic shell", {"probe"}},
      {"N2", "16", "second dyadic shell", {"probe"}},
      {"N3", "2", "third dyadic shell", {"probe"}},
      {"L", "1", "cutoff frequency scale", {"probe"}},
      {"n_grid", "", "resolution ladder (nx = ny)", {"probe"}},
      {"T_grid", "", "T values", {"probe"}},
      {"L_grid", "", "L values", {"probe"}},
      {"N1_grid", "", "N1 values", {"probe"}},
      {"N2_grid", "", "N2 values", {"probe"}},
      {"input", "", "frame CSV file", {"norms"}},
      {"norm", "l2", "l2 | lr | sobolev | hsobolev | besov", {"norms"}},
  };
  return schema;
}

bool key_applies(const KeySpec& spec, std::string_view subcommand) {
  return spec.scope.empty() || std::find(spec.scope.begin(), spec.scope.end(), subcommand) != spec.scope.end();
}

namespace {

const KeySpec* find_key(std::string_view subcommand, const std::string& key) {
  for (const KeySpec& s : key_schema())
    if (s.key == key && key_applies(s, subcommand)) return &s;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string normalize_key(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

std::map<std::string, std::string> parse_config_text(std::string_view text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = normalize_key(trim(std::string_view(t).substr(0, eq)));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

RunConfig::RunConfig(std::string subcommand, std::map<std::string, std::string> values)
    : subcommand_(std::move(subcommand)) {
  if (std::find(subcommands().begin(), subcommands().end(), subcommand_) == subcommands().end())
    throw UsageError("unknown subcommand '" + subcommand_ + "'");
  for (auto& [k, v] : values) {
    const std::string key = normalize_key(k);
    if (!find_key(subcommand_, key))
      throw ConfigError("unknown key '" + key + "' for subcommand " + subcommand_);
    explicit_[key] = v;
  }
  for (const KeySpec& s : key_schema())
    if (key_applies(s, subcommand_) && !values_.count(s.key)) values_[s.key] = s.fallback;
  for (const auto& [k, v] : explicit_) values_[k] = v;
}

std::string RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("key '" + key + "' does not apply to " + subcommand_);
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  const std::string v = text(key);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

double RunConfig::number_in(const std::string& key, double lo, double hi) const {
  const double x = number(key);
  if (x < lo || x > hi)
    throw ConfigError(key + ": " + io::format_double(x) + " outside [" + io::format_double(lo) + ", " +
                      io::format_double(hi) + "]");
  return x;
}

long long RunConfig::integer(const std::string& key) const {
  const double x = number(key);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError(key + ": expected an integer");
  return static_cast<long long>(x);
}

long long RunConfig::integer_in(const std::string& key, long long lo, long long hi) const {
  const long long x = integer(key);
  if (x < lo || x > hi)
    throw ConfigError(key + ": " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "]");
  return x;
}

bool RunConfig::flag(const std::string& key) const {
  const std::string v = text(key);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> RunConfig::list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(x))
      throw ConfigError(key + ": expected comma-separated numbers, got '" + text(key) + "'");
    out.push_back(x);
  }
  return out;
}

fs::path RunConfig::output_dir() const {
  const std::string v = text("output_dir");
  if (!v.empty()) return v;
  if (const char* env = std::getenv("ZKLAB_OUTPUT_DIR"); env && *env) return env;
  return "zklab-out";
}

std::string RunConfig::echo() const {
  std::string out;
  for (const auto& [k, v] : explicit_) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::resolved_echo() const {
  std::string out;
  // Where the outputs go is not part of what is computed.
  for (const auto& [k, v] : values_)
    if (k != "output_dir") out += k + "=" + v + "\n";
  return out;
}

namespace {

struct Artifacts {
  json results = json::object();
  std::vector<std::string> outputs;
  std::string status = "ok";
};

void emit(const RunConfig& cfg, Artifacts& art, const std::string& name, const std::string& content) {
  io::write_atomic(cfg.output_dir() / name, content);
  art.outputs.push_back(name);
}

Grid2D grid_from(const RunConfig& cfg) {
  const auto nx = cfg.integer_in("nx", 2, 1 << 14), ny = cfg.integer_in("ny", 2, 1 << 14);
  if (!is_power_of_two(nx)) throw ConfigError("nx: must be a power of two");
  if (!is_power_of_two(ny)) throw ConfigError("ny: must be a power of two");
  const double lx = cfg.number("lx"), ly = cfg.number("ly");
  if (!(lx > 0.0)) throw ConfigError("lx: must be positive");
  if (!(ly > 0.0)) throw ConfigError("ly: must be positive");
  return Grid2D(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
}

Field initial_from(const RunConfig& cfg, const Grid2D& g) {
  std::map<std::string, double> p;
  for (const char* key : {"amplitude", "sigma", "x0", "y0", "j", "k", "a1", "a2", "x1", "x2", "width", "kappa", "norm"})
    if (!cfg.text(key).empty()) p[key] = cfg.number(key);
  const std::string normalization = cfg.text("normalization");
  if (normalization != "h1" && normalization != "l2") throw ConfigError("normalization: expected h1 or l2");
  p["normalization"] = normalization == "h1" ? 1.0 : 0.0;
  p["seed"] = static_cast<double>(cfg.integer_in("seed", 0, 1LL << 52));
  const std::string preset = cfg.text("preset");
  try {
    return make_initial(g, preset, p);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("preset: ") + e.what());
  }
}

Form form_from(const RunConfig& cfg) {
  try {
    return parse_form(cfg.text("form"));
  } catch (const Error&) {
    throw ConfigError("form: expected original or symmetrized, got '" + cfg.text("form") + "'");
  }
}

ShellMeasure measure_from(const RunConfig& cfg) {
  const std::string m = cfg.text("measure");
  if (m == "radial") return ShellMeasure::Radial;
  if (m == "x") return ShellMeasure::XAxis;
  if (m == "y") return ShellMeasure::YAxis;
  throw ConfigError("measure: expected radial, x or y");
}

std::string diagnostics_row(double t, const Field& f) {
  return io::join({t, mass(f), energy(f), l2_norm(f), sobolev_norm(f, 1.0), f.physical().max_abs()}) + "\n";
}

void run_simulate(const RunConfig& cfg, Artifacts& art) {
  const Grid2D g = grid_from(cfg);
  const Field u0 = initial_from(cfg, g);
  EvolveOptions o;
  o.T = cfg.number_in("T", 0.0, 1e6);
  o.dt = cfg.number_in("dt", 1e-12, 1e6);
  o.form = form_from(cfg);
  o.sample_every = static_cast<std::size_t>(cfg.integer_in("sample_every", 1, 1LL << 40));
  o.nonlinear = cfg.flag("nonlinear");
  o.dealias = cfg.flag("dealias");
  const std::string frames = cfg.text("frames");
  if (frames != "none" && frames != "final" && frames != "all") throw ConfigError("frames: expected none, final or all");

  std::string diag = "t,mass,energy,l2,h1,max_abs\n";
  std::string dump = std::string(io::kFrameHeader) + "\n";
  std::string last_frame;
  std::size_t rows = 0;
  o.observer = [&](double t, const Field& f) {
    diag += diagnostics_row(t, f);
    ++rows;
    if (frames == "all") dump += io::frame_csv_rows(f, t);
    if (frames == "final") last_frame = io::frame_csv_rows(f, t);
  };
  try {
    evolve(u0, o);
  } catch (const InstabilityError&) {
    emit(cfg, art, "diagnostics.csv", diag);
    art.results["diagnostic_rows"] = rows;
    throw;
  }
  emit(cfg, art, "diagnostics.csv", diag);
  if (frames != "none") emit(cfg, art, "frames.csv", frames == "all" ? dump : dump + last_frame);
  art.results["diagnostic_rows"] = rows;
}

void run_picard(const RunConfig& cfg, Artifacts& art) {
  const Grid2D g = grid_from(cfg);
  Field u0 = initial_from(cfg, g);
  const double target = cfg.number_in("besov", 0.0, 1e6);
  if (target > 0.0) {
    const double b = besov_norm_2_1(u0, 0.5);
    if (!(b > 0.0)) throw DomainError("picard: cannot rescale zero data to a Besov norm");
    u0 *= target / b;
  }
  const double besov = besov_norm_2_1(dealias(u0), 0.5);
  PicardOptions o;
  o.form = form_from(cfg);
  o.nodes = static_cast<std::size_t>(cfg.integer_in("nodes", 3, 1 << 16));
  const auto iterations = static_cast<std::size_t>(cfg.integer_in("iterations", 1, 1000));
  double T = cfg.number_in("T", 0.0, 1e6);
  double C0 = 0.0;
  if (T == 0.0) {
    // The horizon depends on the constant and the fit on the horizon, so
    // alternate a few times starting from T = 1.
    T = 1.0;
    for (int pass = 0; pass < 4; ++pass) {
      C0 = fit_picard_constant(u0, T, o);
      T = picard_horizon(C0, besov);
    }
  }
  const PicardResult r = picard_iterate(u0, T, iterations, o);
  std::string csv = "iteration,diff_l2,diff_y,ratio_l2,ratio_y\n";
  for (std::size_t k = 0; k < r.differences_l2.size(); ++k) {
    const double rl = k && r.differences_l2[k - 1] > 0.0 ? r.differences_l2[k] / r.differences_l2[k - 1] : 0.0;
    const double ry = k && r.differences_y[k - 1] > 0.0 ? r.differences_y[k] / r.differences_y[k - 1] : 0.0;
    csv += std::to_string(k + 1) + "," + io::join({r.differences_l2[k], r.differences_y[k], rl, ry}) + "\n";
  }
  emit(cfg, art, "picard.csv", csv);

  EvolveOptions e;
  e.T = T;
  e.dt = T / static_cast<double>(o.nodes - 1);
  e.form = o.form;
  e.window = Window::Hann;
  const SpaceTimeField ref = evolve(u0, e);
  const SpaceTimeField& last = r.iterates.back();
  const double mismatch = space_time_l2(last.with_window(Window::Hann) - ref, true) / space_time_l2(ref, true);
  art.results["besov_norm"] = besov;
  art.results["C0"] = C0;
  art.results["T"] = T;
  art.results["contraction_failed"] = r.contraction_failed;
  art.results["reference_mismatch"] = mismatch;
  if (r.contraction_failed) art.status = "contraction-failed";
}

void run_scan(const RunConfig& cfg, Artifacts& art) {
  const Grid2D g = grid_from(cfg);
  const Field u0 = initial_from(cfg, g);
  std::vector<int> Ns;
  for (double n : cfg.list("N_list")) {
    if (n != std::floor(n) || n < 1 || n > (1 << 20)) throw ConfigError("N_list: entries must be positive integers");
    Ns.push_back(static_cast<int>(n));
  }
  if (Ns.empty()) throw ConfigError("N_list: empty");
  ScanOptions o;
  o.dt = cfg.number_in("dt", 1e-12, 1e6);
  o.sample_every = static_cast<std::size_t>(cfg.integer_in("sample_every", 1, 1LL << 40));
  const double s = cfg.number("s"), delta = cfg.number_in("delta", 0.0, 1e6);
  const ScanResult res = increment_scan(u0, s, delta, Ns, o);
  std::string csv = "N,s,delta,lhs,rhs,residual,slope,increment\n";
  for (const ScanRow& row : res.rows)
    csv += std::to_string(row.N) + "," +
           io::join({s, delta, row.identity.lhs, row.identity.rhs, row.identity.residual, res.slope, row.increment}) +
           "\n";
  emit(cfg, art, "scan.csv", csv);
  art.results["slope"] = res.slope;
  art.results["energy_drift"] = res.energy_drift;
  art.results["caveat"] = res.caveat;
}

void run_gwp(const RunConfig& cfg, Artifacts& art) {
  const Grid2D g = grid_from(cfg);
  const Field u0 = initial_from(cfg, g);
  GwpOptions o;
  o.N = static_cast<int>(cfg.integer_in("N", 0, 1 << 20));
  o.delta = cfg.number_in("delta", 1e-12, 1e6);
  o.dt = cfg.number_in("dt", 1e-12, 1e6);
  o.max_windows = static_cast<std::size_t>(cfg.integer_in("max_windows", 1, 1 << 24));
  o.lambda_shrink = cfg.number_in("lambda_shrink", 1e-6, 1.0 - 1e-12);
  const double T = cfg.number_in("T", 0.0, 1e12);
  const double s = cfg.number("s");
  const GwpLedger L = gwp_iteration(u0, s, T, o);
  json ledger;
  ledger["s"] = L.s;
  ledger["N"] = L.N;
  ledger["lambda"] = L.lambda;
  ledger["T_target"] = L.T_target;
  ledger["rescaled_horizon"] = L.rescaled_horizon;
  ledger["windows_required"] = L.windows_required;
  ledger["windows_planned"] = L.windows_planned;
  ledger["capped"] = L.capped;
  ledger["initial_modified_energy"] = L.initial_modified_energy;
  ledger["extension_failed"] = L.extension_failed;
  ledger["failed_at"] = L.failed_at;
  ledger["growth_factor"] = L.growth_factor;
  ledger["max_increment"] = L.max_increment;
  ledger["status"] = L.status;
  json steps = json::array();
  std::string csv = "index,time,modified_energy,increment\n";
  for (const GwpStep& st : L.steps) {
    steps.push_back({{"index", st.index}, {"time", st.time}, {"modified_energy", st.modified_energy},
                     {"increment", st.increment}});
    csv += std::to_string(st.index) + "," + io::join({st.time, st.modified_energy, st.increment}) + "\n";
  }
  ledger["steps"] = steps;
  emit(cfg, art, "gwp_ledger.json", ledger.dump(2) + "\n");
  emit(cfg, art, "gwp.csv", csv);
  art.results["status"] = L.status;
}

std::vector<double> grid_or(const RunConfig& cfg, const std::string& grid_key, const std::string& scalar_key) {
  std::vector<double> v = cfg.list(grid_key);
  if (v.empty()) v.push_back(cfg.number(scalar_key));
  return v;
}

int shell_from(double v, const char* key) {
  if (v != std::floor(v) || v < 1 || v > (1 << 20) || !is_power_of_two(static_cast<long long>(v)))
    throw ConfigError(std::string(key) + ": expected a power of two");
  return static_cast<int>(v);
}

void run_probe(const RunConfig& cfg, Artifacts& art) {
  const std::string est = cfg.text("estimate");
  ProbeOptions o;
  o.samples = static_cast<std::size_t>(cfg.integer_in("samples", 1, 1 << 20));
  o.seed = static_cast<std::uint64_t>(cfg.integer_in("seed", 0, 1LL << 52));
  o.time_samples = static_cast<std::size_t>(cfg.integer_in("time_samples", 2, 1 << 20));
  o.window = cfg.number_in("window", 0.0, 1e12);
  o.measure = measure_from(cfg);
  const Grid2D base = grid_from(cfg);

  // Rows run over the product of the axes, last axis fastest; drift is
  // measured along the last axis.
  std::vector<std::vector<ProbeReport>> runs;
  std::vector<double> inner;
  json grids = json::object();
  if (est == "strichartz" || est == "maximal" || est == "l4") {
    std::vector<double> ns = cfg.list("n_grid");
    if (ns.empty()) ns.push_back(base.nx());
    const double q = cfg.number("q"), r = cfg.number("r");
    std::vector<ProbeReport> ladder;
    for (double n : ns) {
      if (n != std::floor(n) || n < 4 || !is_power_of_two(static_cast<long long>(n)))
        throw ConfigError("n_grid: entries must be powers of two >= 4");
      const Grid2D g(static_cast<int>(n), static_cast<int>(n), base.lx(), base.ly());
      if (est == "strichartz") ladder.push_back(strichartz_probe(q, r, g, o));
      else if (est == "maximal") ladder.push_back(maximal_derivative_probe(g, o));
      else ladder.push_back(l4_probe(g, o));
      ladder.back().parameters.emplace_back("n", n);
    }
    runs.push_back(std::move(ladder));
    inner = ns;
    grids["n"] = ns;
  } else if (est == "bilinear" || est == "gh-bilinear") {
    const std::vector<double> n1 = grid_or(cfg, "N1_grid", "N1"), n2 = grid_or(cfg, "N2_grid", "N2");
    for (double a : n1) {
      std::vector<ProbeReport> ladder;
      for (double b : n2) {
        const int N1 = shell_from(a, "N1"), N2 = shell_from(b, "N2");
        ladder.push_back(est == "bilinear" ? bilinear_probe(N1, N2, base, o) : gh_bilinear_probe(N1, N2, base, o));
      }
      runs.push_back(std::move(ladder));
    }
    inner = n2;
    grids["N1"] = n1;
    grids["N2"] = n2;
  } else if (est == "cutoff") {
    const std::vector<double> Ts = grid_or(cfg, "T_grid", "T"), Ls = grid_or(cfg, "L_grid", "L");
    const double dt = cfg.number_in("dt", 0.0, 1e12);
    for (double T : Ts) {
      std::vector<ProbeReport> ladder;
      for (double L : Ls) ladder.push_back(cutoff_probe(T, L, dt));
      runs.push_back(std::move(ladder));
    }
    inner = Ls;
    grids["T"] = Ts;
    grids["L"] = Ls;
  } else if (est == "trilinear") {
    const int N1 = shell_from(cfg.number("N1"), "N1"), N2 = shell_from(cfg.number("N2"), "N2"),
              N3 = shell_from(cfg.number("N3"), "N3");
    const std::vector<double> Ts = grid_or(cfg, "T_grid", "T");
    std::vector<ProbeReport> ladder;
    for (double T : Ts) ladder.push_back(trilinear_form_probe(N1, N2, N3, T, base, o));
    runs.push_back(std::move(ladder));
    inner = Ts;
    grids["T"] = Ts;
  } else {
    throw ConfigError("estimate: unknown estimate '" + est + "'");
  }
  std::string csv = probe_report_csv_header() + "\n";
  double worst = 1.0;
  for (auto& ladder : runs) {
    worst = std::max(worst, apply_ladder_drift(ladder, inner));
    for (const ProbeReport& r : ladder) csv += to_csv_row(r) + "\n";
  }
  emit(cfg, art, "probes.csv", csv);
  art.results["estimate"] = est;
  art.results["parameter_grids"] = grids;
  art.results["seed"] = o.seed;
  art.results["rows"] = runs.size() * inner.size();
  art.results["worst_drift"] = worst;
}

void run_norms(const RunConfig& cfg, Artifacts& art, std::ostream& out) {
  const std::string input = cfg.text("input");
  if (input.empty()) throw ConfigError("input: a frame CSV path is required");
  const Field f = io::read_frame_csv(input);
  const std::string kind = cfg.text("norm");
  const double s = cfg.number("s");
  NormReport rep;
  if (kind == "l2") {
    rep = {"l2", l2_norm(f), {}, ""};
  } else if (kind == "lr") {
    const double r = cfg.text("r") == "inf" ? kInf : cfg.number("r");
    rep = {"lr", lr_norm(f, r), {{"r", r}}, ""};
  } else if (kind == "sobolev") {
    rep = {"sobolev", sobolev_norm(f, s), {{"s", s}}, ""};
  } else if (kind == "hsobolev") {
    rep = {"homogeneous-sobolev", homogeneous_sobolev_norm(f, s), {{"s", s}}, ""};
  } else if (kind == "besov") {
    rep = {"besov-2-1", besov_norm_2_1(f, s), {{"s", s}}, ""};
  } else {
    throw ConfigError("norm: unknown norm '" + kind + "'");
  }
  const std::string row = to_csv_row(rep);
  emit(cfg, art, "norms.csv", norm_report_csv_header() + "\n" + row + "\n");
  out << row << "\n";
  art.results["value"] = rep.value;
}

void write_manifest(const RunConfig& cfg, const Artifacts& art, double wall) {
  json m;
  m["schema"] = "zklab-manifest/1";
  m["subcommand"] = cfg.subcommand();
  m["config_hash"] = io::hex64(io::fnv1a64(cfg.subcommand() + "\n" + cfg.resolved_echo()));
  m["seed"] = cfg.text("seed");
  m["versions"] = {{"zklab", std::string(ZKLAB_VERSION)}, {"fftw", std::string(fftw_version)}, {"compiler", std::string(__VERSION__)}};
  m["wall_time_s"] = wall;
  m["status"] = art.status;
  json config = json::object();
  for (const auto& [k, v] : cfg.values()) config[k] = v;
  m["config"] = config;
  std::vector<std::string> outputs = art.outputs;
  outputs.push_back("config.txt");
  m["outputs"] = outputs;
  m["results"] = art.results;
  io::write_atomic(cfg.output_dir() / "config.txt", cfg.resolved_echo());
  io::write_atomic(cfg.output_dir() / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Artifacts art;
  const auto finish = [&](int code) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
      write_manifest(cfg, art, wall);
    } catch (const IoError& e) {
      err << "zklab: " << e.what() << "\n";
      return static_cast<int>(kIoError);
    }
    return code;
  };
  try {
    const std::string& sc = cfg.subcommand();
    if (sc == "simulate") run_simulate(cfg, art);
    else if (sc == "picard") run_picard(cfg, art);
    else if (sc == "imethod-scan") run_scan(cfg, art);
    else if (sc == "gwp") run_gwp(cfg, art);
    else if (sc == "probe") run_probe(cfg, art);
    else run_norms(cfg, art, out);
  } catch (const InstabilityError& e) {
    err << "zklab: numerical instability at t=" << e.time() << " (dt=" << e.dt() << "): " << e.what() << "\n";
    art.status = "instability";
    return finish(kInstability);
  } catch (const IoError& e) {
    err << "zklab: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "zklab: " << e.what() << "\n";
    return kConfigError;
  }
  const int code = finish(kOk);
  if (code == kOk) out << cfg.subcommand() << ": wrote " << art.outputs.size() << " file(s) to " << cfg.output_dir().string() << "\n";
  return code;
}

namespace {

std::string option_names(const std::string& key) {
  std::string names = "--" + key;
  std::string dashed = key;
  std::replace(dashed.begin(), dashed.end(), '_', '-');
  if (dashed != key) names += ",--" + dashed;
  return names;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zklab: Zakharov-Kuznetsov experiment driver"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;
  for (const std::string& name : subcommands()) {
    CLI::App* sc = app.add_subcommand(name, "run " + name);
    sc->add_option("--config", config_paths[name], "flat key = value file; flags override it");
    std::vector<std::string> seen;
    for (const KeySpec& spec : key_schema()) {
      if (!key_applies(spec, name) || std::find(seen.begin(), seen.end(), spec.key) != seen.end()) continue;
      seen.push_back(spec.key);
      const std::string help = spec.fallback.empty() ? spec.help : spec.help + " [" + spec.fallback + "]";
      sc->add_option(option_names(spec.key), flags[name][spec.key], help);
    }
    subs[name] = sc;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return kConfigError;
  }
  for (const std::string& name : subcommands()) {
    CLI::App* sc = subs[name];
    if (!sc->parsed()) continue;
    try {
      std::map<std::string, std::string> values;
      if (!config_paths[name].empty()) values = parse_config_text(io::read_file(config_paths[name]), config_paths[name]);
      for (const auto& [key, slot] : flags[name])
        if (sc->get_option("--" + key)->count() > 0) values[key] = slot;
      return run(RunConfig(name, std::move(values)), std::cout, std::cerr);
    } catch (const IoError& e) {
      std::cerr << "zklab: " << e.what() << "\n";
      return kIoError;
    } catch (const Error& e) {
      std::cerr << "zklab: " << e.what() << "\n";
      return kConfigError;
    }
  }
  return kConfigError;
}

}  // namespace zk::cli
