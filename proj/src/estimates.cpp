#include "zk/estimates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>
#include <numbers>
#include <random>

#include "zk/dynamics.hpp"
#include "zk/errors.hpp"
#include "zk/fft.hpp"
#include "zk/initial.hpp"
#include "zk/norms.hpp"

namespace zk {

double ProbeReport::parameter(const std::string& key, double fallback) const {
  for (const auto& [k, v] : parameters)
    if (k == key) return v;
  return fallback;
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void summarize(ProbeReport& rep, const std::vector<double>& lhs, const std::vector<double>& rhs) {
  std::vector<double> ratios(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) ratios[i] = rhs[i] > 0.0 ? lhs[i] / rhs[i] : 0.0;
  rep.samples = lhs.size();
  rep.lhs = median(lhs);
  rep.rhs = median(rhs);
  rep.ratio_median = median(ratios);
  rep.ratio = rep.ratio_median;
  rep.ratio_min = ratios.empty() ? 0.0 : *std::min_element(ratios.begin(), ratios.end());
  rep.ratio_max = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  rep.spread = rep.ratio_min > 0.0 ? rep.ratio_max / rep.ratio_min : 1.0;
}

double traversal_window(const Grid2D& g, double top) {
  return std::min(g.lx(), g.ly()) / (3.0 * top * top);
}

double window_or(const ProbeOptions& o, const Grid2D& g, double top) {
  return o.window > 0.0 ? o.window : traversal_window(g, top);
}

void require_frames(std::size_t frames) {
  if (frames < 2) throw UsageError("probe: need at least two time samples");
}

SpaceTimeField free_window(const Field& u0, Form form, double window, std::size_t frames) {
  require_frames(frames);
  return SpaceTimeField::free_solution(u0, form, 0.0, window / static_cast<double>(frames - 1), frames,
                                       Window::Hann);
}

std::string window_caveat(double window, std::size_t frames) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "torus surrogate; hann window length %.6g with %zu frames", window, frames);
  return buf;
}

}  // namespace

std::string probe_report_csv_header() {
  return "estimate,q,r,N1,N2,N3,T,L,samples,seed,lhs,rhs,ratio,ratio_min,ratio_median,ratio_max,spread,drift,"
         "applicable,caveat";
}

std::string to_csv_row(const ProbeReport& r) {
  std::string row = r.estimate;
  for (const char* key : {"q", "r", "N1", "N2", "N3", "T", "L"}) {
    row += ",";
    const double v = r.parameter(key, std::numeric_limits<double>::quiet_NaN());
    if (!std::isnan(v)) row += fmt17(v);
  }
  row += "," + std::to_string(r.samples) + "," + std::to_string(r.seed);
  for (double v : {r.lhs, r.rhs, r.ratio, r.ratio_min, r.ratio_median, r.ratio_max, r.spread, r.drift})
    row += "," + fmt17(v);
  std::string caveat = r.caveat;
  std::replace(caveat.begin(), caveat.end(), ',', ';');
  row += std::string(",") + (r.applicable ? "1" : "0") + "," + caveat;
  return row;
}

double scale_drift(std::span<const double> params, std::span<const double> ratios) {
  if (params.size() != ratios.size()) throw UsageError("scale_drift: size mismatch");
  double worst = 1.0;
  for (std::size_t i = 1; i < params.size(); ++i) {
    const double a = ratios[i - 1], b = ratios[i];
    if (!(a > 0.0) || !(b > 0.0)) continue;
    const double doublings = std::abs(std::log2(params[i] / params[i - 1]));
    if (doublings == 0.0) continue;
    worst = std::max(worst, std::pow(std::max(a / b, b / a), 1.0 / doublings));
  }
  return worst;
}

double apply_ladder_drift(std::vector<ProbeReport>& ladder, std::span<const double> params) {
  if (ladder.size() != params.size()) throw UsageError("ladder: size mismatch");
  std::vector<double> ratios;
  for (const ProbeReport& r : ladder) ratios.push_back(r.ratio);
  for (std::size_t i = 1; i < ladder.size(); ++i)
    ladder[i].drift = scale_drift(params.subspan(i - 1, 2), std::span<const double>(ratios).subspan(i - 1, 2));
  return scale_drift(params, ratios);
}

Field random_lp_data(const Grid2D& g, std::uint64_t seed, int N, ShellMeasure measure) {
  require_dyadic_or_core(N);
  if (N < 1) throw DomainError("random data: shell must be dyadic >= 1");
  const double top = std::min(g.xi_spacing() * (g.nx() / 2), g.eta_spacing() * (g.ny() / 2));
  if (2.0 * N > top) throw DomainError("random data: shell N = " + std::to_string(N) + " does not fit on the lattice");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cplx> c(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double re = nd(rng), im = nd(rng);
    c[p] = cplx(re, im);
  }
  std::vector<cplx> h(g.size());
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      const int mx = (g.nx() - ix) % g.nx(), my = (g.ny() - iy) % g.ny();
      const std::size_t p = static_cast<std::size_t>(iy) * g.nx() + ix;
      const std::size_t q = static_cast<std::size_t>(my) * g.nx() + mx;
      h[p] = 0.5 * (c[p] + std::conj(c[q])) * shell_weight(N, g.wavevector(ix, iy), measure);
    }
  Field f = Field::from_coefficients(g, std::move(h));
  const double n = l2_norm(f);
  if (n == 0.0) throw DomainError("random data: shell N = " + std::to_string(N) + " contains no lattice mode");
  f *= 1.0 / n;
  return f;
}

int probe_shell(const Grid2D& g) {
  const double band = std::min(g.xi_spacing() * g.dealias_cut_x(), g.eta_spacing() * g.dealias_cut_y());
  int N = 1;
  while (4.0 * N <= band) N *= 2;
  return N;
}

double strichartz_lhs(const Field& u0, double q, double r, Form form, double window, std::size_t frames) {
  return mixed_lebesgue_norm(free_window(u0, form, window, frames), q, r, true);
}

double maximal_derivative_lhs(const Field& u0, Form form, double window, std::size_t frames) {
  const Field d = apply_multiplier(u0, [](Wavevector z) { return std::pow(std::abs(z.xi), kMaximalDerivativeOrder); });
  return mixed_lebesgue_norm(free_window(d, form, window, frames), kMaximalTimeExponent, kInf, true);
}

double bilinear_lhs(const Field& u0, const Field& v0, Form form, double window, std::size_t frames) {
  const SpaceTimeField u = free_window(u0, form, window, frames);
  const SpaceTimeField v = free_window(v0, form, window, frames);
  std::vector<Field> prod;
  prod.reserve(frames);
  for (std::size_t k = 0; k < frames; ++k) prod.push_back(product(u.frame(k), v.frame(k)));
  const SpaceTimeField p(u0.grid(), 0.0, u.dt(), std::move(prod), Window::Hann);
  return mixed_lebesgue_norm(p, 2.0, 2.0, true);
}

double gh_bilinear_lhs(const Field& u0, const Field& v0, double window, std::size_t frames) {
  require_frames(frames);
  const Grid2D& g = u0.grid();
  if (!(v0.grid() == g)) throw UsageError("gh_bilinear: grid mismatch");
  struct Mode {
    int j, k;
    double omega;
    cplx c;
  };
  const auto support = [&](const Field& f) {
    std::vector<Mode> out;
    const Field s = f.spectral();
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix)
        if (s(ix, iy) != cplx{})
          out.push_back({g.wave_index_x(ix), g.wave_index_y(iy),
                         dispersion_symbol(Form::Symmetrized, g.wavevector(ix, iy)), s(ix, iy)});
    return out;
  };
  const std::vector<Mode> U = support(u0), V = support(v0);
  const int nx = g.nx(), ny = g.ny();
  const double sx = g.xi_spacing();
  // Index tables over j₁ ± j₂ ∈ [−nx, nx].
  std::vector<double> wsum(2 * nx + 1), wdiff(2 * nx + 1);
  for (int d = -nx; d <= nx; ++d) {
    wsum[d + nx] = std::sqrt(std::abs(sx * d));
    wdiff[d + nx] = std::sqrt(std::abs(sx * d));
  }
  const std::size_t W = 2 * static_cast<std::size_t>(nx) + 1;
  std::vector<cplx> B(W * (2 * static_cast<std::size_t>(ny) + 1));
  const double dt = window / static_cast<double>(frames - 1);
  std::vector<double> per_frame(frames);
  std::vector<cplx> ut(U.size()), vt(V.size());
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = dt * static_cast<double>(k);
    for (std::size_t a = 0; a < U.size(); ++a) ut[a] = std::polar(1.0, t * U[a].omega) * U[a].c;
    for (std::size_t b = 0; b < V.size(); ++b) vt[b] = std::polar(1.0, t * V[b].omega) * V[b].c;
    std::fill(B.begin(), B.end(), cplx{});
    for (std::size_t a = 0; a < U.size(); ++a) {
      const Mode& m1 = U[a];
      for (std::size_t b = 0; b < V.size(); ++b) {
        const Mode& m2 = V[b];
        const double w = wsum[m1.j + m2.j + nx] * wdiff[m1.j - m2.j + nx];
        if (w == 0.0) continue;
        const std::size_t idx = static_cast<std::size_t>(m1.k + m2.k + ny) * W + (m1.j + m2.j + nx);
        B[idx] += w * ut[a] * vt[b];
      }
    }
    double acc = 0.0;
    for (const cplx& c : B) acc += std::norm(c);
    per_frame[k] = std::sqrt(g.area() * acc);
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < frames; ++k) {
    const double w = hann_weight(k, frames) * per_frame[k];
    acc += (k == 0 || k + 1 == frames ? 0.5 : 1.0) * w * w;
  }
  return std::sqrt(dt * acc);
}

double l4_lhs(const Field& u0, double window, std::size_t frames) {
  const Field d = apply_multiplier(
      u0, [](Wavevector z) { return std::pow(std::abs(z.xi), 0.125) * std::pow(std::abs(z.eta), 0.125); });
  return mixed_lebesgue_norm(free_window(d, Form::Symmetrized, window, frames), 4.0, 4.0, true);
}

ProbeReport strichartz_probe(double q, double r, const Grid2D& g, const ProbeOptions& o) {
  if (!(q > 3.0) || std::abs(3.0 / q + 2.0 / r - 1.0) > 1e-12)
    throw UsageError("strichartz: (q, r) must satisfy 3/q + 2/r = 1 with q > 3");
  const int N = probe_shell(g);
  const double window = window_or(o, g, 2.0 * N);
  ProbeReport rep;
  rep.estimate = "strichartz";
  rep.parameters = {{"q", q}, {"r", r}, {"N1", N}, {"T", window}};
  rep.seed = o.seed;
  std::vector<double> lhs, rhs;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const Field u0 = random_lp_data(g, derive_seed(o.seed, i), N, o.measure);
    lhs.push_back(strichartz_lhs(u0, q, r, Form::Original, window, o.time_samples));
    rhs.push_back(l2_norm(u0));
  }
  summarize(rep, lhs, rhs);
  rep.caveat = window_caveat(window, o.time_samples);
  return rep;
}

ProbeReport maximal_derivative_probe(const Grid2D& g, const ProbeOptions& o, Form form) {
  const int N = probe_shell(g);
  const double window = window_or(o, g, 2.0 * N);
  ProbeReport rep;
  rep.estimate = "maximal-derivative";
  rep.parameters = {{"q", kMaximalTimeExponent}, {"r", kInf}, {"N1", N}, {"T", window}};
  rep.seed = o.seed;
  std::vector<double> lhs, rhs;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const Field u0 = random_lp_data(g, derive_seed(o.seed, i), N, o.measure);
    lhs.push_back(maximal_derivative_lhs(u0, form, window, o.time_samples));
    rhs.push_back(l2_norm(u0));
  }
  summarize(rep, lhs, rhs);
  rep.caveat = window_caveat(window, o.time_samples) + "; free data: X^{0;1/2+} replaced by the L2 norm";
  return rep;
}

ProbeReport bilinear_probe(int N1, int N2, const Grid2D& g, const ProbeOptions& o) {
  const double window = window_or(o, g, 2.0 * std::max(N1, N2));
  ProbeReport rep;
  rep.estimate = "bilinear";
  rep.parameters = {{"N1", N1}, {"N2", N2}, {"T", window}};
  rep.seed = o.seed;
  rep.applicable = N2 >= 4 * N1;
  std::vector<double> lhs, rhs;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const Field u0 = random_lp_data(g, derive_seed(o.seed, 2 * i), N1, o.measure);
    const Field v0 = random_lp_data(g, derive_seed(o.seed, 2 * i + 1), N2, o.measure);
    lhs.push_back(bilinear_lhs(u0, v0, Form::Original, window, o.time_samples) * N2 / std::sqrt(double(N1)));
    rhs.push_back(l2_norm(u0) * l2_norm(v0));
  }
  summarize(rep, lhs, rhs);
  rep.caveat = window_caveat(window, o.time_samples);
  if (!rep.applicable) rep.caveat += "; not applicable: the estimate needs N1 << N2 (N2 >= 4 N1)";
  return rep;
}

ProbeReport gh_bilinear_probe(int N1, int N2, const Grid2D& g, const ProbeOptions& o) {
  const double window = window_or(o, g, 2.0 * std::max(N1, N2));
  ProbeReport rep;
  rep.estimate = "gh-bilinear";
  rep.parameters = {{"N1", N1}, {"N2", N2}, {"T", window}};
  rep.seed = o.seed;
  rep.applicable = N2 <= 2 * N1;
  std::vector<double> lhs, rhs;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const Field u0 = random_lp_data(g, derive_seed(o.seed, 2 * i), N1, o.measure);
    const Field v0 = random_lp_data(g, derive_seed(o.seed, 2 * i + 1), N2, o.measure);
    lhs.push_back(gh_bilinear_lhs(u0, v0, window, o.time_samples));
    rhs.push_back(std::sqrt(double(N2)) * l2_norm(u0) * l2_norm(v0));
  }
  summarize(rep, lhs, rhs);
  rep.caveat = window_caveat(window, o.time_samples);
  if (!rep.applicable) rep.caveat += "; not applicable: the estimate needs N2 <~ N1";
  return rep;
}

ProbeReport l4_probe(const Grid2D& g, const ProbeOptions& o) {
  const int N = probe_shell(g);
  const double window = window_or(o, g, 2.0 * N);
  ProbeReport rep;
  rep.estimate = "l4";
  rep.parameters = {{"q", 4.0}, {"r", 4.0}, {"N1", N}, {"T", window}};
  rep.seed = o.seed;
  std::vector<double> lhs, rhs;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const Field u0 = random_lp_data(g, derive_seed(o.seed, i), N, o.measure);
    lhs.push_back(l4_lhs(u0, window, o.time_samples));
    rhs.push_back(l2_norm(u0));
  }
  summarize(rep, lhs, rhs);
  rep.caveat = window_caveat(window, o.time_samples);
  return rep;
}

// --- time cutoffs ---------------------------------------------------------------

CutoffDecomposition cutoff_decompose(double T, double L, double dt) {
  if (!(T > 0.0) || !(L > 0.0) || !std::isfinite(T) || !std::isfinite(L))
    throw UsageError("cutoff: T and L must be positive and finite");
  const double scale = std::min(T, 1.0 / L);
  if (dt > scale / 8.0) throw ResolutionError("cutoff: dt does not resolve both T and 1/L");
  const double target = dt > 0.0 ? dt : scale / 64.0;
  const double pad = 40.0 / L + T;
  const double P = T + 2.0 * pad;
  const double want = std::ceil(P / target);
  if (want > static_cast<double>(1 << 24)) throw ResolutionError("cutoff: time grid would exceed 2^24 points");
  const std::size_t n = static_cast<std::size_t>(next_power_of_two(static_cast<long long>(want)));
  CutoffDecomposition out;
  out.T = T;
  out.L = L;
  out.dt = P / static_cast<double>(n);
  out.times.resize(n);
  out.indicator.resize(n);
  std::vector<cplx> line(n);
  const double tol = 1e-9 * out.dt;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = -pad + out.dt * static_cast<double>(i);
    out.times[i] = t;
    double v = (t > 0.0 && t < T) ? 1.0 : 0.0;
    if (std::abs(t) <= tol || std::abs(t - T) <= tol) v = 0.5;
    out.indicator[i] = v;
    line[i] = v;
  }
  fft::forward_1d(line);
  for (std::size_t m = 0; m < n; ++m) {
    const long long ms = m < (n + 1) / 2 ? static_cast<long long>(m) : static_cast<long long>(m) - static_cast<long long>(n);
    const double tau = 2.0 * std::numbers::pi * static_cast<double>(ms) / P;
    line[m] *= smooth_cutoff(tau / L) / static_cast<double>(n);
  }
  fft::inverse_1d(line);
  out.low.resize(n);
  out.high.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.low[i] = line[i].real();
    out.high[i] = out.indicator[i] - out.low[i];
    out.reconstruction_error =
        std::max(out.reconstruction_error, std::abs(out.low[i] + out.high[i] - out.indicator[i]));
    acc += std::pow(std::abs(out.high[i]), 1.5);
    out.high_linf = std::max(out.high_linf, std::abs(out.high[i]));
    out.low_linf = std::max(out.low_linf, std::abs(out.low[i]));
  }
  out.high_l32 = std::pow(acc * out.dt, 2.0 / 3.0);
  out.normalized = out.high_l32 * std::cbrt(L / T);
  return out;
}

ProbeReport cutoff_probe(double T, double L, double dt) {
  const CutoffDecomposition d = cutoff_decompose(T, L, dt);
  ProbeReport rep;
  rep.estimate = "cutoff";
  rep.parameters = {{"T", T}, {"L", L}};
  rep.samples = 1;
  rep.lhs = d.high_l32;
  rep.rhs = std::cbrt(T / L);
  rep.ratio = rep.ratio_min = rep.ratio_median = rep.ratio_max = d.normalized;
  char buf[200];
  std::snprintf(buf, sizeof buf, "reconstruction_error=%.3g high_linf=%.6g low_linf=%.6g dt=%.6g",
                d.reconstruction_error, d.high_linf, d.low_linf, d.dt);
  rep.caveat = buf;
  return rep;
}

// --- trilinear form -------------------------------------------------------------

namespace {

using Poly = std::vector<double>;  // coefficients in ascending powers

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// χ on the transition piece as a polynomial in σ, with t = sign·σ − 1.
Poly transition_poly(double sign) {
  const Poly t{-1.0, sign};
  const double S[] = {0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0};
  Poly out{1.0};
  Poly power{1.0};
  for (int d = 1; d <= 7; ++d) {
    power = poly_mul(power, t);
    if (S[d] == 0.0) continue;
    if (out.size() < power.size()) out.resize(power.size(), 0.0);
    for (std::size_t i = 0; i < power.size(); ++i) out[i] -= S[d] * power[i];
  }
  return out;
}

double poly_eval(const Poly& p, double x) {
  double r = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
  return d;
}

// ∫_a^b p(σ) e^{iωσ} dσ by repeated integration by parts (exact, ω ≠ 0).
cplx poly_exp_integral(Poly p, double omega, double a, double b) {
  const cplx iw(0.0, omega);
  cplx acc = 0.0;
  cplx denom = iw;
  double sign = 1.0;
  while (true) {
    acc += sign * (poly_eval(p, b) * std::exp(iw * b) - poly_eval(p, a) * std::exp(iw * a)) / denom;
    bool zero = true;
    p = derivative(p);
    for (double c : p) zero = zero && c == 0.0;
    if (zero) break;
    sign = -sign;
    denom *= iw;
  }
  return acc;
}

struct GaussLegendre {
  std::vector<double> x, w;
};

const GaussLegendre& gauss_legendre_64() {
  static const GaussLegendre rule = [] {
    constexpr int n = 64;
    GaussLegendre r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = z;
      r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

cplx gl_integral(const Poly& p, double omega, double a, double b) {
  const GaussLegendre& gl = gauss_legendre_64();
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    const double s = c + h * gl.x[i];
    acc += gl.w[i] * poly_eval(p, s) * std::polar(1.0, omega * s);
  }
  return h * acc;
}

}  // namespace

cplx cutoff_moment(int k, double omega) {
  if (k < 0 || k > 3) throw UsageError("cutoff_moment: k must lie in 0..3");
  Poly mono(k + 1, 0.0);
  mono[k] = 1.0;
  const Poly right = poly_mul(transition_poly(1.0), mono);
  const Poly left = poly_mul(transition_poly(-1.0), mono);
  const auto piece = [&](const Poly& p, double a, double b) {
    return std::abs(omega) < 40.0 ? gl_integral(p, omega, a, b) : poly_exp_integral(p, omega, a, b);
  };
  return piece(left, -2.0, -1.0) + piece(mono, -1.0, 1.0) + piece(right, 1.0, 2.0);
}

TrilinearRegime trilinear_regime(int N1, int N2, int N3) {
  const auto comparable = [](int a, int b) { return 2 * a >= b && 2 * b >= a; };
  if (comparable(N1, N2) && N3 <= 2 * N1) return TrilinearRegime::HighHighLow;
  if (comparable(N1, N3) && N1 >= 4 * N2) return TrilinearRegime::HighLowHigh;
  throw UsageError("trilinear: expected N1 ~ N2 >~ N3 or N1 ~ N3 >> N2");
}

std::vector<cplx> trilinear_form_translates(const std::vector<Field>& a, const std::vector<Field>& g, double T,
                                            double eps, int per_axis) {
  if (a.size() != 3 || g.size() != 3) throw UsageError("trilinear_form: need three profiles and three perturbations");
  if (per_axis < 1) throw UsageError("trilinear_form: need at least one translate per axis");
  const Grid2D& grid = a[0].grid();
  std::array<Field, 3> as{a[0].spectral(), a[1].spectral(), a[2].spectral()};
  std::array<Field, 3> gs{g[0].spectral(), g[1].spectral(), g[2].spectral()};
  struct Mode {
    int j, k;
    cplx a, g;
  };
  std::array<std::vector<Mode>, 2> supp;
  for (int n = 0; n < 2; ++n)
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < grid.nx(); ++ix) {
        const cplx ca = as[n](ix, iy), cg = gs[n](ix, iy);
        if (ca != cplx{} || cg != cplx{}) supp[n].push_back({grid.wave_index_x(ix), grid.wave_index_y(iy), ca, cg});
      }
  const double sx = grid.xi_spacing(), sy = grid.eta_spacing();
  const int P = per_axis;
  const auto residue = [P](int j) { return ((j % P) + P) % P; };
  // Keyed by (j₁j₂j₃, k₁k₂k₃), which fixes the resonance function, and by
  // ζ₃ modulo the translate lattice, which fixes the translation phases.
  using Key = std::tuple<long long, long long, int, int>;
  std::map<Key, std::array<cplx, 4>> groups;
  for (const Mode& m1 : supp[0])
    for (const Mode& m2 : supp[1]) {
      const int j3 = -m1.j - m2.j, k3 = -m1.k - m2.k;
      const cplx a3 = as[2].coefficient(j3, k3), g3 = gs[2].coefficient(j3, k3);
      if (a3 == cplx{} && g3 == cplx{}) continue;
      const cplx d3(0.0, sx * j3 + sy * k3);
      const cplx A1 = m1.a, G1 = m1.g, A2 = m2.a, G2 = m2.g;
      auto& acc = groups[{static_cast<long long>(m1.j) * m2.j * j3, static_cast<long long>(m1.k) * m2.k * k3,
                          residue(j3), residue(k3)}];
      acc[0] += d3 * A1 * A2 * a3;
      acc[1] += d3 * eps * (G1 * A2 * a3 + A1 * G2 * a3 + A1 * A2 * g3);
      acc[2] += d3 * eps * eps * (G1 * G2 * a3 + G1 * A2 * g3 + A1 * G2 * g3);
      acc[3] += d3 * eps * eps * eps * G1 * G2 * g3;
    }
  std::vector<cplx> total(static_cast<std::size_t>(P) * P);
  std::vector<cplx> roots(P);
  for (int r = 0; r < P; ++r) roots[r] = std::polar(1.0, -2.0 * std::numbers::pi * r / P);
  std::map<std::pair<long long, long long>, std::array<cplx, 4>> moments;
  for (const auto& [key, c] : groups) {
    const auto [kx, ky, rx, ry] = key;
    auto it = moments.find({kx, ky});
    if (it == moments.end()) {
      // ξ₁³+ξ₂³+ξ₃³ = 3ξ₁ξ₂ξ₃ on the hyperplane, likewise for η.
      const double omega = 3.0 * (sx * sx * sx * static_cast<double>(kx) + sy * sy * sy * static_cast<double>(ky));
      std::array<cplx, 4> J{};
      for (int k = 0; k < 4; ++k) J[k] = cutoff_moment(k, T * omega);
      it = moments.emplace(std::pair{kx, ky}, J).first;
    }
    cplx value = 0.0;
    for (int k = 0; k < 4; ++k)
      if (c[k] != cplx{}) value += c[k] * it->second[k];
    // w(· − x₀) with x₀ = (p·lx/P, q·ly/P) multiplies ŵ(ζ₃) by e^{−iζ₃·x₀}.
    for (int q = 0; q < P; ++q)
      for (int p = 0; p < P; ++p) total[static_cast<std::size_t>(q) * P + p] += value * roots[(rx * p + ry * q) % P];
  }
  for (cplx& v : total) v *= grid.area() * T;
  return total;
}

cplx trilinear_form(const std::vector<Field>& a, const std::vector<Field>& g, double T, double eps) {
  return trilinear_form_translates(a, g, T, eps, 1).front();
}

ProbeReport trilinear_form_probe(int N1, int N2, int N3, double T, const Grid2D& g, const ProbeOptions& o) {
  const TrilinearRegime regime = trilinear_regime(N1, N2, N3);
  if (!(T > 0.0)) throw UsageError("trilinear: T must be positive");
  constexpr double eps = 0.1;
  const std::size_t K = std::max<std::size_t>(o.time_samples, 3);
  ProbeReport rep;
  rep.estimate = "trilinear";
  rep.parameters = {{"N1", N1}, {"N2", N2}, {"N3", N3}, {"T", T}};
  rep.seed = o.seed;
  const int shells[3] = {N1, N2, N3};
  std::vector<double> lhs, rhs, floors;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const std::uint64_t s = derive_seed(o.seed, i);
    std::vector<Field> a, pert;
    for (int n = 0; n < 3; ++n) {
      a.push_back(random_lp_data(g, derive_seed(s, 2 * n), shells[n], o.measure));
      pert.push_back(random_lp_data(g, derive_seed(s, 2 * n + 1), shells[n], o.measure));
    }
    double norms = 1.0, floor = 1.0;
    for (int n = 0; n < 3; ++n) {
      std::vector<Field> frames;
      const double h = 4.0 * T / static_cast<double>(K - 1);
      for (std::size_t k = 0; k < K; ++k) {
        const double t = -2.0 * T + h * static_cast<double>(k);
        frames.push_back(linear_propagator(a[n] + (eps * t / T) * pert[n], t, Form::Symmetrized));
      }
      const SpaceTimeField traj(g, -2.0 * T, h, std::move(frames), Window::None);
      norms *= windowed_twisted_variation(traj, 2.0, Form::Symmetrized);
      floor *= twisted_variation(traj, 2.0, Form::Symmetrized);
    }
    const double bound = regime == TrilinearRegime::HighHighLow ? std::pow(T, 1.0 / 6.0) * std::sqrt(double(N1))
                                                                : std::sqrt(T) * std::sqrt(double(N2));
    double best = 0.0;
    for (cplx v : trilinear_form_translates(a, pert, T, eps, kTrilinearTranslates)) best = std::max(best, std::abs(v));
    lhs.push_back(best);
    rhs.push_back(bound * norms);
    floors.push_back(floor);
  }
  summarize(rep, lhs, rhs);
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "torus surrogate; V2-proxy norms windowed on [-2T;2T] with %zu frames; unwindowed proxy floor %.6g; "
                "lhs maximized over %dx%d translates of w; regime %s",
                K, median(floors), kTrilinearTranslates, kTrilinearTranslates, regime == TrilinearRegime::HighHighLow ? "N1~N2>~N3" : "N1~N3>>N2");
  rep.caveat = buf;
  return rep;
}

}  // namespace zk
