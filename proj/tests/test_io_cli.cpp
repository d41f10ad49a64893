#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zk/cli.hpp"
#include "zk/errors.hpp"
#include "zk/estimates.hpp"
#include "zk/initial.hpp"
#include "zk/io.hpp"
#include "zk/norms.hpp"

using namespace zk;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("zklab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int run_with(const std::string& sub, std::map<std::string, std::string> values, const fs::path& dir,
             std::string* err = nullptr) {
  values["output_dir"] = dir.string();
  std::ostringstream out, e;
  const int code = cli::run(cli::RunConfig(sub, std::move(values)), out, e);
  if (err) *err = e.str();
  return code;
}

int main_with(std::vector<std::string> args) {
  args.insert(args.begin(), "zklab");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

json manifest(const fs::path& dir) { return json::parse(io::read_file(dir / "manifest.json")); }

}  // namespace

// --- io ----------------------------------------------------------------------------

TEST(Io, DoublesRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> exponent(-300, 300), mantissa(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    const double x = mantissa(rng) * std::pow(10.0, exponent(rng));
    EXPECT_EQ(std::strtod(io::format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::join({1, 0.5, -2}), "1,0.5,-2");
  EXPECT_EQ(io::join({}), "");
}

TEST(Io, Hashing) {
  EXPECT_EQ(io::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(io::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(io::hex64(0xabcULL), "0000000000000abc");
}

TEST(Io, AtomicWrite) {
  TempDir tmp;
  const fs::path p = tmp / "nested/dir/out.csv";
  io::write_atomic(p, "first\n");
  io::write_atomic(p, "second\n");
  EXPECT_EQ(io::read_file(p), "second\n");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  io::write_atomic(tmp / "blocker", "x");
  EXPECT_THROW(io::write_atomic(tmp / "blocker/inner.csv", "y"), IoError);
  EXPECT_THROW(io::read_file(tmp / "missing"), IoError);
}

TEST(Io, FrameCsvRoundTrip) {
  TempDir tmp;
  const Grid2D g(16, 8, 3.0, 5.0);
  const Field f = random_smooth(g, 4, 1.5, Normalization::L2, 1.0);
  io::write_atomic(tmp / "f.csv", std::string(io::kFrameHeader) + "\n" + io::frame_csv_rows(f, 0.25));
  double t = -1;
  const Field back = io::read_frame_csv(tmp / "f.csv", &t);
  EXPECT_EQ(t, 0.25);
  ASSERT_EQ(back.grid().nx(), 16);
  ASSERT_EQ(back.grid().ny(), 8);
  EXPECT_NEAR(back.grid().lx(), 3.0, 1e-12);
  EXPECT_NEAR(back.grid().ly(), 5.0, 1e-12);
  const Field a = f.physical(), b = back.physical();
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_EQ(a.values()[p], b.values()[p]);
  EXPECT_EQ(lines_of(io::frame_csv_rows(f, 0)).size(), g.size());
}

TEST(Io, MalformedFrameCsv) {
  TempDir tmp;
  io::write_atomic(tmp / "h.csv", "t,i,j,u\n0,0,0,1\n");
  EXPECT_THROW(io::read_frame_csv(tmp / "h.csv"), DataError);
  io::write_atomic(tmp / "v.csv", std::string(io::kFrameHeader) + "\n0,0,0,0,0,abc\n");
  EXPECT_THROW(io::read_frame_csv(tmp / "v.csv"), DataError);
  const Grid2D g(8, 8, 1.0, 1.0);
  std::string rows = io::frame_csv_rows(Field::zeros(g, Representation::Physical), 0);
  rows.erase(rows.rfind('\n', rows.size() - 2) + 1);
  io::write_atomic(tmp / "short.csv", std::string(io::kFrameHeader) + "\n" + rows);
  EXPECT_THROW(io::read_frame_csv(tmp / "short.csv"), DataError);
  EXPECT_THROW(io::read_frame_csv(tmp / "none.csv"), IoError);
}

// --- configuration -----------------------------------------------------------------

TEST(Config, ParsesFlatKeyValueText) {
  const auto m = cli::parse_config_text("# comment\n nx = 32 \nsample-every=5 # trailing\n\nT=0.5\n");
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.at("nx"), "32");
  EXPECT_EQ(m.at("sample_every"), "5");
  EXPECT_EQ(m.at("T"), "0.5");
  try {
    cli::parse_config_text("nx=8\n\nbroken line\n", "run.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.cfg:3"), std::string::npos);
  }
  EXPECT_THROW(cli::parse_config_text("=3\n"), ConfigError);
}

TEST(Config, SchemaDefaultsAndScopes) {
  const cli::RunConfig sim("simulate", {{"nx", "32"}});
  EXPECT_EQ(sim.text("nx"), "32");
  EXPECT_EQ(sim.number("T"), 1.0);
  EXPECT_EQ(sim.text("form"), "original");
  EXPECT_TRUE(sim.flag("dealias"));
  EXPECT_TRUE(sim.is_set("nx"));
  EXPECT_FALSE(sim.is_set("ny"));
  EXPECT_EQ(sim.echo(), "nx=32\n");
  EXPECT_NE(sim.resolved_echo().find("ny=64\n"), std::string::npos);
  EXPECT_EQ(cli::RunConfig("picard", {}).number("T"), 0.0);
  EXPECT_EQ(cli::RunConfig("picard", {}).text("form"), "symmetrized");
  EXPECT_EQ(cli::RunConfig("imethod-scan", {}).list("N_list"), (std::vector<double>{4, 8, 16, 32}));

  EXPECT_THROW(cli::RunConfig("simulate", {{"bogus", "1"}}), ConfigError);
  EXPECT_THROW(cli::RunConfig("simulate", {{"estimate", "l4"}}), ConfigError);
  EXPECT_THROW(cli::RunConfig("launch", {}), UsageError);
  EXPECT_THROW(sim.text("estimate"), ConfigError);
  for (const cli::KeySpec& k : cli::key_schema()) EXPECT_FALSE(k.help.empty()) << k.key;
}

TEST(Config, ValueValidationNamesTheKey) {
  const cli::RunConfig c("simulate", {{"dt", "abc"}, {"T", "-1"}, {"nx", "2.5"}, {"nonlinear", "maybe"}});
  const auto message = [](auto&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_EQ(message([&] { c.number("dt"); }).rfind("dt:", 0), 0u);
  EXPECT_EQ(message([&] { c.number_in("T", 0, 10); }).rfind("T:", 0), 0u);
  EXPECT_EQ(message([&] { c.integer("nx"); }).rfind("nx:", 0), 0u);
  EXPECT_EQ(message([&] { c.flag("nonlinear"); }).rfind("nonlinear:", 0), 0u);
  const cli::RunConfig p("probe", {{"T_grid", "1, 2,x"}});
  EXPECT_THROW(p.list("T_grid"), ConfigError);
  EXPECT_TRUE(cli::RunConfig("probe", {}).list("T_grid").empty());
}

// --- runs ---------------------------------------------------------------------------

TEST(Run, SimulateZeroHorizon) {
  TempDir tmp;
  ASSERT_EQ(run_with("simulate", {{"T", "0"}, {"nx", "16"}, {"ny", "16"}}, tmp.path()), 0);
  const auto diag = lines_of(io::read_file(tmp / "diagnostics.csv"));
  ASSERT_EQ(diag.size(), 2u);
  EXPECT_EQ(diag[0], "t,mass,energy,l2,h1,max_abs");
  EXPECT_EQ(diag[1].rfind("0,", 0), 0u);
  const auto frames = lines_of(io::read_file(tmp / "frames.csv"));
  EXPECT_EQ(frames.size(), 1u + 256u);
  EXPECT_EQ(frames[0], io::kFrameHeader);

  const json m = manifest(tmp.path());
  EXPECT_EQ(m["schema"], "zklab-manifest/1");
  EXPECT_EQ(m["subcommand"], "simulate");
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["seed"], "1");
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
  EXPECT_TRUE(m["versions"].contains("fftw"));
  EXPECT_GE(m["wall_time_s"].get<double>(), 0.0);
  EXPECT_EQ(m["config"]["nx"], "16");
  EXPECT_EQ(m["outputs"], (json{"diagnostics.csv", "frames.csv", "config.txt"}));
  const std::string echo = io::read_file(tmp / "config.txt");
  EXPECT_NE(echo.find("T=0\n"), std::string::npos);
  EXPECT_NE(echo.find("dt=1e-3\n"), std::string::npos);
  EXPECT_EQ(echo.find("output_dir"), std::string::npos);
}

TEST(Run, SimulateStoresSampledFrames) {
  TempDir tmp;
  ASSERT_EQ(run_with("simulate",
                     {{"T", "0.02"}, {"dt", "1e-3"}, {"sample_every", "5"}, {"frames", "all"}, {"nx", "16"},
                      {"ny", "16"}, {"preset", "gaussian"}},
                     tmp.path()),
            0);
  EXPECT_EQ(lines_of(io::read_file(tmp / "diagnostics.csv")).size(), 1u + 5u);
  EXPECT_EQ(lines_of(io::read_file(tmp / "frames.csv")).size(), 1u + 5u * 256u);
}

TEST(Run, ScanRowsAndSlope) {
  TempDir tmp;
  ASSERT_EQ(run_with("imethod-scan", {}, tmp.path()), 0);
  const auto rows = lines_of(io::read_file(tmp / "scan.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "N,s,delta,lhs,rhs,residual,slope,increment");
  EXPECT_EQ(rows[1].rfind("4,", 0), 0u);
  EXPECT_EQ(rows[4].rfind("32,", 0), 0u);
  const json m = manifest(tmp.path());
  EXPECT_TRUE(m["results"]["slope"].is_number());
  EXPECT_NE(m["results"]["caveat"].get<std::string>().find("torus"), std::string::npos);
}

TEST(Run, CutoffGridProduct) {
  TempDir tmp;
  ASSERT_EQ(run_with("probe", {{"estimate", "cutoff"}, {"T_grid", "0.25,1,4"}, {"L_grid", "0.25,1,4"}}, tmp.path()), 0);
  const auto rows = lines_of(io::read_file(tmp / "probes.csv"));
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], probe_report_csv_header());
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].rfind("cutoff,", 0), 0u);
  EXPECT_EQ(manifest(tmp.path())["results"]["rows"], 9);
}

TEST(Run, GwpLedger) {
  TempDir tmp;
  ASSERT_EQ(run_with("gwp", {{"s", "0.9"}, {"T", "1.0"}, {"nx", "32"}, {"ny", "32"}}, tmp.path()), 0);
  const json L = json::parse(io::read_file(tmp / "gwp_ledger.json"));
  for (const char* key : {"s", "N", "lambda", "windows_required", "steps", "status"}) EXPECT_TRUE(L.contains(key)) << key;
  EXPECT_EQ(L["s"], 0.9);
  EXPECT_FALSE(L["steps"].empty());
  EXPECT_EQ(lines_of(io::read_file(tmp / "gwp.csv")).size(), 1 + L["steps"].size());
}

TEST(Run, NormsRow) {
  TempDir tmp;
  const Grid2D g(32, 32, 2 * std::numbers::pi, 2 * std::numbers::pi);
  const Field f = random_smooth(g, 9, 2.0, Normalization::H1, 1.0);
  io::write_atomic(tmp / "frame.csv", std::string(io::kFrameHeader) + "\n" + io::frame_csv_rows(f, 0));
  ASSERT_EQ(run_with("norms", {{"input", (tmp / "frame.csv").string()}, {"norm", "besov"}, {"s", "0.5"}},
                     tmp / "out"),
            0);
  const auto rows = lines_of(io::read_file(tmp / "out/norms.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], norm_report_csv_header());
  EXPECT_EQ(rows[1].rfind("besov-2-1,", 0), 0u);
  EXPECT_NEAR(manifest(tmp / "out")["results"]["value"].get<double>(), besov_norm_2_1(f, 0.5), 1e-12);
  EXPECT_EQ(run_with("norms", {{"input", (tmp / "frame.csv").string()}, {"norm", "h7"}}, tmp / "bad"), 2);
}

TEST(Run, RerunsAreByteIdentical) {
  TempDir tmp;
  const std::map<std::string, std::string> probe{{"estimate", "strichartz"}, {"samples", "3"}, {"n_grid", "32,64"}};
  ASSERT_EQ(run_with("probe", probe, tmp / "a"), 0);
  ASSERT_EQ(run_with("probe", probe, tmp / "b"), 0);
  EXPECT_EQ(io::read_file(tmp / "a/probes.csv"), io::read_file(tmp / "b/probes.csv"));
  EXPECT_EQ(manifest(tmp / "a")["config_hash"], manifest(tmp / "b")["config_hash"]);

  const std::map<std::string, std::string> sim{{"T", "0.05"}, {"nx", "32"}, {"ny", "32"}, {"seed", "11"}};
  ASSERT_EQ(run_with("simulate", sim, tmp / "c"), 0);
  ASSERT_EQ(run_with("simulate", sim, tmp / "d"), 0);
  EXPECT_EQ(io::read_file(tmp / "c/diagnostics.csv"), io::read_file(tmp / "d/diagnostics.csv"));
  EXPECT_EQ(io::read_file(tmp / "c/frames.csv"), io::read_file(tmp / "d/frames.csv"));

  auto other = sim;
  other["seed"] = "12";
  ASSERT_EQ(run_with("simulate", other, tmp / "e"), 0);
  EXPECT_NE(io::read_file(tmp / "c/frames.csv"), io::read_file(tmp / "e/frames.csv"));
  EXPECT_NE(manifest(tmp / "c")["config_hash"], manifest(tmp / "e")["config_hash"]);
}

// --- exit codes ---------------------------------------------------------------------

TEST(ExitCodes, ConfigErrors) {
  TempDir tmp;
  const std::string out = "--output-dir=" + (tmp / "x").string();
  EXPECT_EQ(main_with({"launch"}), 2);
  EXPECT_EQ(main_with({"simulate", "--estimate", "l4", out}), 2);
  EXPECT_EQ(main_with({"simulate", "--nx", "12", out}), 2);
  EXPECT_EQ(main_with({"simulate", "--dt", "fast", out}), 2);
  EXPECT_EQ(main_with({"probe", "--q", "4", "--r", "4", "--samples", "1", out}), 2);
  std::string err;
  EXPECT_EQ(run_with("simulate", {{"frames", "some"}}, tmp / "y", &err), 2);
  EXPECT_NE(err.find("frames"), std::string::npos);
}

TEST(ExitCodes, InstabilityFlushesDiagnostics) {
  TempDir tmp;
  std::string err;
  EXPECT_EQ(run_with("simulate", {{"preset", "gaussian"}, {"amplitude", "1e4"}, {"nx", "32"}, {"ny", "32"}},
                     tmp.path(), &err),
            3);
  EXPECT_NE(err.find("instability"), std::string::npos);
  const auto diag = lines_of(io::read_file(tmp / "diagnostics.csv"));
  EXPECT_GE(diag.size(), 2u);
  EXPECT_EQ(manifest(tmp.path())["status"], "instability");
}

TEST(ExitCodes, UnwritableOutput) {
  TempDir tmp;
  io::write_atomic(tmp / "file", "x");
  EXPECT_EQ(run_with("simulate", {{"T", "0"}, {"nx", "16"}, {"ny", "16"}}, tmp / "file/out"), 4);
  EXPECT_EQ(main_with({"simulate", "--config", (tmp / "missing.cfg").string()}), 4);
}

TEST(ExitCodes, FlagsOverrideConfigFile) {
  TempDir tmp;
  io::write_atomic(tmp / "run.cfg", "T = 0\nnx = 16\nny = 16\noutput-dir = " + (tmp / "o").string() + "\n");
  EXPECT_EQ(main_with({"simulate", "--config", (tmp / "run.cfg").string(), "--nx", "32"}), 0);
  const std::string echo = io::read_file(tmp / "o/config.txt");
  EXPECT_NE(echo.find("nx=32\n"), std::string::npos);
  EXPECT_NE(echo.find("ny=16\n"), std::string::npos);
  EXPECT_EQ(lines_of(io::read_file(tmp / "o/frames.csv")).size(), 1u + 32u * 16u);
  io::write_atomic(tmp / "bad.cfg", "nx = 16\nwhat\n");
  EXPECT_EQ(main_with({"simulate", "--config", (tmp / "bad.cfg").string()}), 2);
}
