#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zk/spacetime.hpp"
#include "zk/spectral.hpp"

namespace zk {

/// Outcome of one randomized inequality probe at fixed parameters.
struct ProbeReport {
  std::string estimate;
  std::vector<std::pair<std::string, double>> parameters;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  /// Medians over the ensemble.
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double ratio_min = 0.0;
  double ratio_median = 0.0;
  double ratio_max = 0.0;
  /// ratio_max / ratio_min (1 for a single sample or identically zero ratios).
  double spread = 1.0;
  /// Filled by ladder runs: worst per-doubling drift against the previous point.
  double drift = 1.0;
  bool applicable = true;
  std::string caveat;

  double parameter(const std::string& key, double fallback = 0.0) const;
};

std::string probe_report_csv_header();
std::string to_csv_row(const ProbeReport& report);

struct ProbeOptions {
  std::size_t samples = 32;
  std::uint64_t seed = 1;
  /// Frames per probe window.
  std::size_t time_samples = 32;
  /// Window length; 0 selects the box traversal time lx/(3·Nmax²) of the
  /// highest frequency Nmax involved.
  double window = 0.0;
  ShellMeasure measure = ShellMeasure::Radial;
};

/// Worst per-doubling drift along a ladder: for neighbouring points, the
/// ratio change max(r₂/r₁, r₁/r₂) raised to 1/|log₂(p₂/p₁)|.
double scale_drift(std::span<const double> params, std::span<const double> ratios);
/// Applies scale_drift to a ladder and stores each point's drift.
double apply_ladder_drift(std::vector<ProbeReport>& ladder, std::span<const double> params);

/// P_N applied to Hermitian complex Gaussian coefficients, unit L² norm.
/// Throws DomainError if the shell [N/2, 2N] does not fit on the lattice.
Field random_lp_data(const Grid2D& g, std::uint64_t seed, int N, ShellMeasure measure = ShellMeasure::Radial);

/// The dyadic shell used for single-field probes: the largest N with
/// 2N inside the 2/3 band.
int probe_shell(const Grid2D& g);

// --- single evaluations (pure functions of their data) -----------------------

/// ‖w·e^{tω}u₀‖_{L^q_t L^r_{x,y}} over the window [0, T_w] with Hann taper w.
double strichartz_lhs(const Field& u0, double q, double r, Form form, double window, std::size_t frames);
/// Exponents of the maximal-function probe: |ξ|^{1/4−0.01} in L^{12/5+0.01}_t L^∞.
inline constexpr double kMaximalDerivativeOrder = 0.24;
inline constexpr double kMaximalTimeExponent = 2.41;
double maximal_derivative_lhs(const Field& u0, Form form, double window, std::size_t frames);
/// ‖w·(e^{tω}u₀)(e^{tω}v₀)‖_{L²_{t,x,y}}.
double bilinear_lhs(const Field& u0, const Field& v0, Form form, double window, std::size_t frames);
/// ‖w·I_x^{1/2} I_{x,−}^{1/2}(e^{tS}u₀, e^{tS}v₀)‖_{L²} with the bilinear
/// symbol |ξ₁ − ξ₂|^{1/2}, by pairwise mode summation.
double gh_bilinear_lhs(const Field& u0, const Field& v0, double window, std::size_t frames);
/// ‖w·|ξ|^{1/8}|η|^{1/8} e^{tS}u₀‖_{L⁴}.
double l4_lhs(const Field& u0, double window, std::size_t frames);

// --- probes -------------------------------------------------------------------

/// Ratio ‖e^{tω}u₀‖_{L^q L^r}/‖u₀‖₂ (original form) on random P_N data.
/// Throws UsageError unless 3/q + 2/r = 1 and q > 3.
ProbeReport strichartz_probe(double q, double r, const Grid2D& g, const ProbeOptions& options = {});
ProbeReport maximal_derivative_probe(const Grid2D& g, const ProbeOptions& options = {}, Form form = Form::Original);
/// Ratio ‖P_{N₁}u P_{N₂}v‖·N₂N₁^{−1/2}/(‖P_{N₁}u₀‖‖P_{N₂}v₀‖), original form.
/// Flags the report as not applicable unless N₂ ≥ 4N₁.
ProbeReport bilinear_probe(int N1, int N2, const Grid2D& g, const ProbeOptions& options = {});
/// Ratio of the I_x^{1/2}I_{x,−}^{1/2} bilinear form to N₂^{1/2}‖u₀‖‖v₀‖,
/// symmetrized form. Flags non-applicability unless N₂ ≤ 2N₁.
ProbeReport gh_bilinear_probe(int N1, int N2, const Grid2D& g, const ProbeOptions& options = {});
ProbeReport l4_probe(const Grid2D& g, const ProbeOptions& options = {});

struct CutoffDecomposition {
  double T = 0.0;
  double L = 0.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> indicator;  // 1 on (0, T), ½ at the jumps
  std::vector<double> low;
  std::vector<double> high;
  double high_l32 = 0.0;
  double high_linf = 0.0;
  double low_linf = 0.0;
  /// ‖1^{high}‖_{3/2} · T^{−1/3} L^{1/3}.
  double normalized = 0.0;
  /// max |low + high − 1_T| on the grid.
  double reconstruction_error = 0.0;
};

/// 1_{[0,T]} = low + high with low = F⁻¹[χ(τ/L) F 1_T] on a periodic time
/// grid padded by 40/L + T on each side. dt = 0 picks min(T, 1/L)/64.
/// Throws ResolutionError when dt does not resolve both T and 1/L (dt >
/// min(T,1/L)/8) or the grid would exceed 2²⁴ points.
CutoffDecomposition cutoff_decompose(double T, double L, double dt = 0.0);
ProbeReport cutoff_probe(double T, double L, double dt = 0.0);

enum class TrilinearRegime {
  /// N₁ ∼ N₂ ≳ N₃, bound T^{1/6} N₁^{1/2}.
  HighHighLow,
  /// N₁ ∼ N₃ ≫ N₂, bound T^{1/2} N₂^{1/2}.
  HighLowHigh,
};

/// Classifies (N₁, N₂, N₃) (∼: within a factor 2, ≫: at least 4×); throws
/// UsageError naming the expected relations otherwise.
TrilinearRegime trilinear_regime(int N1, int N2, int N3);

/// Exact ∫ χ(σ) σ^k e^{iωσ} dσ, k ≤ 3.
cplx cutoff_moment(int k, double omega);

/// ∭ χ(t/T) u v (∂ₓ+∂_y)w dx dy dt for u = e^{tS}(a₀ + ε(t/T)g₀),
/// v = e^{tS}(a₁ + ε(t/T)g₁), w = e^{tS}(a₂ + ε(t/T)g₂), summed exactly over
/// frequency triples with the time integrals in closed form. a and g hold
/// three fields each (UsageError otherwise).
cplx trilinear_form(const std::vector<Field>& a, const std::vector<Field>& g, double T, double epsilon);
/// trilinear_form with w replaced by w(· − x₀) for every x₀ on the lattice
/// (p·lx/P, q·ly/P), p, q < P; entry q·P + p. Translation leaves every norm
/// of w unchanged.
std::vector<cplx> trilinear_form_translates(const std::vector<Field>& a, const std::vector<Field>& g, double T,
                                            double epsilon, int per_axis);
/// Translates per axis over which trilinear_form_probe maximizes |form|.
inline constexpr int kTrilinearTranslates = 8;

/// max over translates of w of |∭ χ(t/T) u v (∂ₓ+∂_y)w| for
/// u = e^{tS}(a + ε(t/T)g) etc. on random P_N data, against the regime's
/// bound with windowed V²-proxy norms (sampled on [−2T, 2T]). The report
/// caveat records the unwindowed proxy floor.
ProbeReport trilinear_form_probe(int N1, int N2, int N3, double T, const Grid2D& g, const ProbeOptions& options = {});

}  // namespace zk
