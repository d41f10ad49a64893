#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "zk/dynamics.hpp"
#include "zk/errors.hpp"
#include "zk/norms.hpp"
#include "zk/spacetime.hpp"
#include "zk/spectral.hpp"

using namespace zk;
constexpr double kPi = std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) {
  const Field sa = a.spectral(), sb = b.spectral();
  double worst = 0.0;
  for (std::size_t n = 0; n < sa.size(); ++n) worst = std::max(worst, std::abs(sa.values()[n] - sb.values()[n]));
  return worst;
}

Field random_physical(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> s(g.size());
  for (double& v : s) v = nd(rng);
  return Field::from_samples(g, s);
}

}  // namespace

TEST(Grid, IntegerWavenumbersOnTwoPiBox) {
  const Grid2D g = make_grid(8, 8, 2 * kPi, 2 * kPi);
  for (int ix = 0; ix < 8; ++ix) EXPECT_NEAR(g.xi(ix), g.wave_index_x(ix), 1e-15);
  EXPECT_EQ(g.xi(0), 0.0);
  EXPECT_EQ(g.eta(0), 0.0);
  EXPECT_EQ(g.wave_index_x(4), -4);
  EXPECT_EQ(g.wave_index_x(3), 3);
}

TEST(Grid, SpacingFollowsPeriod) {
  const Grid2D g = make_grid(16, 8, 4 * kPi, 2 * kPi);
  EXPECT_DOUBLE_EQ(g.xi_spacing(), 0.5);
  EXPECT_DOUBLE_EQ(g.eta_spacing(), 1.0);
}

TEST(Grid, RejectsInvalidShapes) {
  EXPECT_THROW(make_grid(12, 8, 1, 1), ConfigError);
  EXPECT_THROW(make_grid(4, 8, 1, 1), ConfigError);
  EXPECT_THROW(make_grid(8, 8, 0, 1), ConfigError);
  EXPECT_THROW(make_grid(8, 8, 1, std::numeric_limits<double>::infinity()), ConfigError);
}

TEST(Transform, ZeroStaysZero) {
  const Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  const Field z = Field::zeros(g, Representation::Physical).spectral();
  EXPECT_EQ(z.max_abs(), 0.0);
  EXPECT_EQ(z.physical().max_abs(), 0.0);
}

TEST(Transform, CosineHasTwoCoefficients) {
  const Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  const Field f = Field::from_function(g, [](double x, double) { return std::cos(x); }).spectral();
  int nonzero = 0;
  for (cplx c : f.values()) nonzero += std::abs(c) > 1e-14;
  EXPECT_EQ(nonzero, 2);
  EXPECT_NEAR(std::abs(f.coefficient(1, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f.coefficient(-1, 0) - 0.5), 0.0, 1e-15);
}

TEST(Transform, MatchesDirectDft) {
  const Grid2D g(8, 16, 3.0, 5.0);
  const Field f = random_physical(g, 3);
  const oracle::Spectrum ref = oracle::direct_dft(g, f.real_samples());
  const Field s = f.spectral();
  for (const auto& [z, c] : ref) EXPECT_NEAR(std::abs(s.coefficient(z.first, z.second) - c), 0.0, 1e-13);
}

TEST(Transform, ParsevalOnRandomFields) {
  for (int n : {8, 32, 128}) {
    const Grid2D g(n, n, 2.0, 3.0);
    const Field f = random_physical(g, n);
    double quad = 0.0;
    for (double v : f.real_samples()) quad += v * v;
    quad *= g.area() / g.size();
    double spec = 0.0;
    const Field s = f.spectral();
    for (cplx c : s.values()) spec += std::norm(c);
    spec *= g.area();
    EXPECT_NEAR(spec / quad, 1.0, 1e-12) << n;
    EXPECT_NEAR(l2_norm(f) * l2_norm(f) / quad, 1.0, 1e-12);
  }
}

TEST(Transform, RoundTripUpTo512) {
  for (int n : {8, 64, 512}) {
    const Grid2D g(n, n, 1.0, 1.0);
    const Field f = random_physical(g, 11);
    const Field back = f.spectral().physical();
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(back.values()[i] - f.values()[i]));
      scale = std::max(scale, std::abs(f.values()[i]));
    }
    EXPECT_LE(err / scale, 1e-12) << n;
  }
}

TEST(Derivative, OfCosine) {
  const Grid2D g(32, 32, 2 * kPi, 2 * kPi);
  const Field f = Field::from_function(g, [](double x, double) { return std::cos(x); });
  const Field d = derivative(f, 1, 0).physical();
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) EXPECT_NEAR(d(ix, iy).real(), -std::sin(g.x(ix)), 1e-12);
}

TEST(Derivative, LaplacianOfSingleMode) {
  const Grid2D g(16, 16, 4.0, 6.0);
  const Field f = Field::from_function(g, [&](double x, double y) {
    return std::polar(1.0, 3 * g.xi_spacing() * x - 2 * g.eta_spacing() * y);
  });
  const double xi = 3 * g.xi_spacing(), eta = -2 * g.eta_spacing();
  const Field lap = derivative(f, 2, 0) + derivative(f, 0, 2);
  EXPECT_NEAR(std::abs(lap.coefficient(3, -2) + (xi * xi + eta * eta) * f.coefficient(3, -2)), 0.0, 1e-12);
}

TEST(Derivative, DxLaplacianSymbol) {
  const Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  const Field f = Field::from_function(g, [](double x, double y) { return std::polar(1.0, 2 * x + y); });
  const Field d = derivative(f, 3, 0) + derivative(f, 1, 2);
  EXPECT_NEAR(std::abs(d.coefficient(2, 1) - cplx(0, -10)), 0.0, 1e-12);
}

TEST(Derivative, OddOrderZeroesNyquist) {
  const Grid2D g(8, 8, 2 * kPi, 2 * kPi);
  std::vector<cplx> c(g.size());
  c[4] = 1.0;  // (j, k) = (−4, 0)
  const Field f = Field::from_coefficients(g, c);
  EXPECT_EQ(derivative(f, 1, 0).max_abs(), 0.0);
  EXPECT_GT(derivative(f, 2, 0).max_abs(), 0.0);
}

TEST(Derivative, CommutesWithLittlewoodPaley) {
  const Grid2D g(64, 64, 2 * kPi, 2 * kPi);
  const Field f = random_physical(g, 5);
  for (int N : {0, 2, 8}) EXPECT_LE(max_diff(lp_project(derivative(f, 1, 2), N), derivative(lp_project(f, N), 1, 2)), 1e-12 * derivative(f, 1, 2).spectral().max_abs());
}

TEST(Dealias, KeepsBandLimitedField) {
  const Grid2D g(32, 32, 2 * kPi, 2 * kPi);
  std::mt19937_64 rng(1);
  const Field f = oracle::random_band_field(g, rng);
  EXPECT_EQ(max_diff(dealias(f), f), 0.0);
}

TEST(Dealias, ZeroesModeNearNyquist) {
  const Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  const Field f = Field::from_function(g, [](double x, double) { return std::cos(7 * x); });
  EXPECT_LE(dealias(f).max_abs(), 1e-14);
}

TEST(Dealias, IsIdempotent) {
  const Grid2D g(32, 16, 1.0, 2.0);
  const Field f = random_physical(g, 9);
  const Field d = dealias(f);
  EXPECT_EQ(max_diff(dealias(d), d), 0.0);
}

TEST(Dealias, ProductMatchesDirectConvolution) {
  const Grid2D g(16, 16, 2 * kPi, 3.0);
  std::mt19937_64 rng(4);
  const Field a = oracle::random_band_field(g, rng), b = oracle::random_band_field(g, rng);
  const Field p = dealias(product(a, b));
  const oracle::Spectrum ref = oracle::convolve(oracle::spectrum_of(a), oracle::spectrum_of(b));
  double scale = 0.0;
  for (const auto& [z, c] : ref) scale = std::max(scale, std::abs(c));
  for (int k = -8; k < 8; ++k)
    for (int j = -8; j < 8; ++j) {
      const auto it = ref.find({j, k});
      const cplx want = oracle::in_band(g, j, k) && it != ref.end() ? it->second : cplx{};
      EXPECT_NEAR(std::abs(p.coefficient(j, k) - want), 0.0, 1e-13 * scale) << j << "," << k;
    }
}

TEST(LittlewoodPaley, BumpIsBounded) {
  for (double x = 0.0; x <= 5.0; x += 1e-3) {
    EXPECT_GE(lp_bump(x), 0.0);
    EXPECT_LE(lp_bump(x), 1.0);
    EXPECT_EQ(smooth_cutoff(x), smooth_cutoff(-x));
  }
  EXPECT_EQ(smooth_cutoff(1.0), 1.0);
  EXPECT_EQ(smooth_cutoff(2.0), 0.0);
}

TEST(LittlewoodPaley, Telescoping) {
  for (double r = 0.0; r <= 300.0; r += 0.173) {
    double acc = smooth_cutoff(2 * r);
    for (int N = 1; N <= 512; N *= 2) {
      acc += lp_bump(r / N);
      EXPECT_NEAR(acc, smooth_cutoff(r / N), 1e-14);
    }
    EXPECT_NEAR(acc, 1.0, 1e-12);
  }
}

TEST(LittlewoodPaley, ShellOutsideSupportIsZero) {
  const Grid2D g(64, 64, 2 * kPi, 2 * kPi);
  const Field f = Field::from_function(g, [](double x, double) { return std::cos(12 * x); });
  EXPECT_LE(lp_project(f, 4).max_abs(), 1e-14);
  EXPECT_EQ(lp_project(Field::zeros(g), 4).max_abs(), 0.0);
}

TEST(LittlewoodPaley, ShellsSumToIdentity) {
  const Grid2D g(64, 32, 2 * kPi, 5.0);
  std::mt19937_64 rng(2);
  const Field f = oracle::random_band_field(g, rng);
  for (ShellMeasure m : {ShellMeasure::Radial, ShellMeasure::XAxis, ShellMeasure::YAxis}) {
    Field sum = lp_project(f, 0, m);
    for (int N : lp_shells(g, m)) sum += lp_project(f, N, m);
    EXPECT_LE(max_diff(sum, f), 1e-12 * f.spectral().max_abs());
  }
}

TEST(LittlewoodPaley, WeightsSumToOneOnTheFullLattice) {
  const Grid2D g(256, 256, 2 * kPi, 2 * kPi);
  for (ShellMeasure m : {ShellMeasure::Radial, ShellMeasure::XAxis, ShellMeasure::YAxis}) {
    const std::vector<int> shells = lp_shells(g, m);
    double worst = 0.0;
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix) {
        const Wavevector z = g.wavevector(ix, iy);
        double acc = shell_weight(0, z, m);
        for (int N : shells) acc += shell_weight(N, z, m);
        worst = std::max(worst, std::abs(acc - 1.0));
      }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(LittlewoodPaley, RejectsNonDyadicShell) {
  const Grid2D g(16, 16, 1, 1);
  EXPECT_THROW(lp_project(Field::zeros(g), 3), Error);
}

TEST(ModulationProjection, ComplementaryPiecesSumToInput) {
  const Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  std::mt19937_64 rng(6);
  const Field u0 = oracle::random_band_field(g, rng, 0.1);
  std::vector<Field> frames;
  for (int k = 0; k < 32; ++k) frames.push_back(std::cos(0.3 * k) * u0 + linear_propagator(u0, 0.01 * k, Form::Symmetrized));
  const SpaceTimeField st(g, 0.0, 0.05, frames, Window::Hann);
  const SpaceTimeField lo = modulation_project(st, 8.0, Form::Symmetrized, ModulationBand::Below);
  const SpaceTimeField hi = modulation_project(st, 8.0, Form::Symmetrized, ModulationBand::AtLeast);
  const std::vector<double> w = st.window_weights();
  for (std::size_t k = 0; k < st.size(); ++k)
    EXPECT_LE(max_diff(lo.frame(k) + hi.frame(k), w[k] * st.frame(k)), 1e-12 * st.frame(k).spectral().max_abs());
}

TEST(ModulationProjection, ZeroInput) {
  const Grid2D g(16, 16, 1, 1);
  const SpaceTimeField st(g, 0.0, 0.1, std::vector<Field>(8, Field::zeros(g)), Window::Hann);
  const SpaceTimeField q = modulation_project(st, 4.0, Form::Original);
  for (const Field& f : q.frames()) EXPECT_EQ(f.max_abs(), 0.0);
}

TEST(ModulationProjection, FreeSolutionConcentratesNearSurface) {
  const Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  std::mt19937_64 rng(8);
  const Field u0 = oracle::random_band_field(g, rng, 0.05);
  const SpaceTimeField st = SpaceTimeField::free_solution(u0, Form::Symmetrized, 0.0, 0.02, 256);
  const double leak = window_leakage_scale(st);
  const double M = std::exp2(std::ceil(std::log2(8.0 * leak)));
  const SpaceTimeField hi = modulation_project(st, M, Form::Symmetrized, ModulationBand::AtLeast);
  EXPECT_LE(space_time_l2(hi, false), 0.05 * space_time_l2(st, true));
}
