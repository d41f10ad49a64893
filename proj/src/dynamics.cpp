#include "zk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zk/errors.hpp"
#include "zk/norms.hpp"
#include "zk/spectral.hpp"

namespace zk {
namespace {

constexpr cplx kI(0.0, 1.0);

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(),
                     [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

// Σ_{n≥0} z^n/(n+k)! for |z| < 1.
cplx phi_series(cplx z, int k) {
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  cplx term = 1.0 / fact;
  cplx sum = term;
  for (int n = 1; n < 30; ++n) {
    term *= z / static_cast<double>(n + k);
    sum += term;
  }
  return sum;
}

}  // namespace

cplx phi1(cplx z) {
  if (std::abs(z) < 1.0) return phi_series(z, 1);
  return (std::exp(z) - 1.0) / z;
}

cplx phi2(cplx z) {
  if (std::abs(z) < 1.0) return phi_series(z, 2);
  return (std::exp(z) - 1.0 - z) / (z * z);
}

cplx phi3(cplx z) {
  if (std::abs(z) < 1.0) return phi_series(z, 3);
  return (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

Field linear_propagator(const Field& f, double t, Form form) {
  return apply_multiplier(f, [&](Wavevector z) {
    const double ph = t * dispersion_symbol(form, z);
    return cplx(std::cos(ph), std::sin(ph));
  });
}

Field nonlinear_term(const Field& f, Form form, bool dealiased) {
  Field u = dealiased ? dealias(f) : f.spectral();
  Field p = u.physical();
  for (cplx& c : p.values()) c = c.real() * c.real();
  Field sq = dealiased ? dealias(p) : p.spectral();
  const Grid2D& g = sq.grid();
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      // Odd-order derivative: the unpaired Nyquist modes must go.
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) {
        sq(ix, iy) = 0.0;
        continue;
      }
      sq(ix, iy) *= -kI * nonlinear_symbol(form, g.wavevector(ix, iy));
    }
  return sq;
}

double stiffness(const Grid2D& g, Form form, double dt) {
  double top = 0.0;
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix)
      if (in_dealiased_band(g, ix, iy))
        top = std::max(top, std::abs(dispersion_symbol(form, g.wavevector(ix, iy))));
  return dt * top;
}

Etdrk4::Etdrk4(const Grid2D& grid, Form form, double dt, bool nonlinear, bool dealias)
    : grid_(grid), form_(form), dt_(dt), nonlinear_(nonlinear), dealias_(dealias) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt: must be positive and finite");
  const double st = stiffness(grid, form, dt);
  if (st > kStiffnessLimit)
    throw ConfigError("dt: dt*max|omega| = " + std::to_string(st) + " exceeds the stiffness limit " +
                      std::to_string(kStiffnessLimit));
  const std::size_t n = grid.size();
  e_.resize(n);
  e2_.resize(n);
  q_.resize(n);
  f1_.resize(n);
  f2_.resize(n);
  f3_.resize(n);
  for (int iy = 0; iy < grid.ny(); ++iy)
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const std::size_t p = static_cast<std::size_t>(iy) * grid.nx() + ix;
      const cplx z = kI * (dt * dispersion_symbol(form, grid.wavevector(ix, iy)));
      e_[p] = std::exp(z);
      e2_[p] = std::exp(0.5 * z);
      q_[p] = 0.5 * dt * phi1(0.5 * z);
      const cplx p1 = phi1(z), p2 = phi2(z), p3 = phi3(z);
      f1_[p] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      f2_[p] = dt * (p2 - 2.0 * p3);
      f3_[p] = dt * (-p2 + 4.0 * p3);
    }
}

Field Etdrk4::rhs(const Field& u) const {
  if (!nonlinear_) return Field::zeros(grid_);
  return nonlinear_term(u, form_, dealias_);
}

void Etdrk4::advance(Field& u, double time) const {
  if (!(u.grid() == grid_)) throw UsageError("etdrk4: grid mismatch");
  if (!u.is_spectral()) u = u.spectral();
  const std::size_t n = grid_.size();
  try {
    const Field nu = rhs(u);
    Field a = u;
    for (std::size_t p = 0; p < n; ++p) a.values()[p] = e2_[p] * u.values()[p] + q_[p] * nu.values()[p];
    const Field na = rhs(a);
    Field b = u;
    for (std::size_t p = 0; p < n; ++p) b.values()[p] = e2_[p] * u.values()[p] + q_[p] * na.values()[p];
    const Field nb = rhs(b);
    Field c = a;
    for (std::size_t p = 0; p < n; ++p)
      c.values()[p] = e2_[p] * a.values()[p] + q_[p] * (2.0 * nb.values()[p] - nu.values()[p]);
    const Field nc = rhs(c);
    for (std::size_t p = 0; p < n; ++p) {
      u.values()[p] = e_[p] * u.values()[p] + f1_[p] * nu.values()[p] +
                      2.0 * f2_[p] * (na.values()[p] + nb.values()[p]) + f3_[p] * nc.values()[p];
    }
  } catch (const DataError&) {
    throw InstabilityError("non-finite values at t = " + std::to_string(time) + " with dt = " +
                               std::to_string(dt_),
                           dt_, time);
  }
  if (!all_finite(u.values()))
    throw InstabilityError("non-finite values at t = " + std::to_string(time + dt_) + " with dt = " +
                               std::to_string(dt_),
                           dt_, time + dt_);
}

SolverState Etdrk4::step(const SolverState& state) const {
  SolverState out = state;
  advance(out.field, state.time);
  out.time = state.time + dt_;
  out.dt = dt_;
  out.steps = state.steps + 1;
  return out;
}

SolverState step_etdrk4(const SolverState& state, double dt) {
  SolverState in = state;
  in.dt = dt;
  return Etdrk4(state.field.grid(), state.form, dt, state.nonlinear, state.dealias).step(in);
}

SpaceTimeField evolve(const Field& u0, const EvolveOptions& options) {
  if (!(options.T >= 0.0) || !std::isfinite(options.T)) throw ConfigError("T: must be nonnegative and finite");
  if (!(options.dt > 0.0)) throw ConfigError("dt: must be positive");
  if (options.sample_every == 0) throw ConfigError("sample_every: must be at least 1");
  const Field s0 = u0.spectral();
  if (s0.hermitian_defect() > 1e-10 * std::max(1.0, s0.max_abs()))
    throw DomainError("evolve: initial data is not real-valued");
  if (options.dealias && !is_band_limited(s0, 1e-10))
    throw DomainError("evolve: initial data is not band-limited under the 2/3 rule");

  auto steps = static_cast<std::size_t>(std::llround(options.T / options.dt));
  if (options.T > 0.0 && steps == 0) steps = 1;
  std::vector<Field> frames{s0};
  if (options.observer) options.observer(0.0, s0);
  if (steps == 0) return SpaceTimeField(u0.grid(), 0.0, options.dt * options.sample_every, std::move(frames),
                                        options.window);
  const double h = options.T / static_cast<double>(steps);
  const Etdrk4 stepper(u0.grid(), options.form, h, options.nonlinear, options.dealias);
  Field u = options.dealias ? dealias(s0) : s0;
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.advance(u, h * static_cast<double>(k - 1));
    if (k % options.sample_every == 0) {
      frames.push_back(u);
      if (options.observer) options.observer(h * static_cast<double>(k), u);
    }
  }
  return SpaceTimeField(u0.grid(), 0.0, h * static_cast<double>(options.sample_every), std::move(frames),
                        options.window);
}

SpaceTimeField evolve(const Field& u0, double T, double dt, Form form, std::size_t sample_every) {
  EvolveOptions o;
  o.T = T;
  o.dt = dt;
  o.form = form;
  o.sample_every = sample_every;
  return evolve(u0, o);
}

// --- Picard ------------------------------------------------------------------

namespace {

using Spectrum = std::vector<cplx>;

// Cumulative integral of g over nodes spaced h, fourth order except the
// first interval.
std::vector<Spectrum> cumulative_integral(const std::vector<Spectrum>& g, double h) {
  const std::size_t K = g.size();
  const std::size_t n = g.front().size();
  std::vector<Spectrum> I(K, Spectrum(n));
  if (K < 2) return I;
  if (K == 2) {
    for (std::size_t p = 0; p < n; ++p) I[1][p] = 0.5 * h * (g[0][p] + g[1][p]);
    return I;
  }
  for (std::size_t p = 0; p < n; ++p) I[1][p] = h / 12.0 * (5.0 * g[0][p] + 8.0 * g[1][p] - g[2][p]);
  for (std::size_t k = 2; k < K; ++k) {
    if (k % 2 == 0) {
      for (std::size_t p = 0; p < n; ++p)
        I[k][p] = I[k - 2][p] + h / 3.0 * (g[k - 2][p] + 4.0 * g[k - 1][p] + g[k][p]);
    } else {
      for (std::size_t p = 0; p < n; ++p)
        I[k][p] = I[k - 3][p] + 3.0 * h / 8.0 * (g[k - 3][p] + 3.0 * g[k - 2][p] + 3.0 * g[k - 1][p] + g[k][p]);
    }
  }
  return I;
}

SpaceTimeField duhamel_map(const Field& u0, const SpaceTimeField& u, double T, const PicardOptions& opt) {
  const Grid2D& g = u.grid();
  const std::size_t K = u.size();
  const double h = u.dt();
  std::vector<double> omega(g.size());
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix)
      omega[static_cast<std::size_t>(iy) * g.nx() + ix] = dispersion_symbol(opt.form, g.wavevector(ix, iy));

  std::vector<Spectrum> integrand(K, Spectrum(g.size()));
  if (opt.nonlinear) {
    for (std::size_t k = 0; k < K; ++k) {
      const double t = u.time(k);
      const double cut = opt.time_cutoff ? smooth_cutoff(t / T) : 1.0;
      const Field nl = nonlinear_term(u.frame(k), opt.form, true);
      for (std::size_t p = 0; p < g.size(); ++p)
        integrand[k][p] = cut * std::polar(1.0, -t * omega[p]) * nl.values()[p];
    }
  }
  const std::vector<Spectrum> W = cumulative_integral(integrand, h);
  const Field s0 = dealias(u0);
  std::vector<Field> frames;
  frames.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double t = u.time(k);
    Spectrum v(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) v[p] = std::polar(1.0, t * omega[p]) * (s0.values()[p] + W[k][p]);
    frames.push_back(Field::from_coefficients(g, std::move(v)));
  }
  return SpaceTimeField(g, u.t0(), h, std::move(frames), Window::None);
}

SpaceTimeField picard_free(const Field& u0, double T, const PicardOptions& opt) {
  const double h = T / static_cast<double>(opt.nodes - 1);
  return SpaceTimeField::free_solution(dealias(u0), opt.form, 0.0, h, opt.nodes, Window::None);
}

void check_picard(const Field& u0, double T, const PicardOptions& opt) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T: must be positive and finite");
  if (opt.nodes < 3) throw ConfigError("nodes: need at least 3 time nodes");
  if (u0.spectral().hermitian_defect() > 1e-10 * std::max(1.0, u0.spectral().max_abs()))
    throw DomainError("picard: initial data is not real-valued");
}

}  // namespace

double picard_norm(const SpaceTimeField& stf, Form form, std::size_t max_frames) {
  const std::size_t K = stf.size();
  const std::size_t stride = std::max<std::size_t>(1, (K + max_frames - 1) / std::max<std::size_t>(1, max_frames));
  std::vector<Field> frames;
  for (std::size_t k = 0; k < K; k += stride) frames.push_back(stf.frame(k));
  const SpaceTimeField sub(stf.grid(), stf.t0(), stf.dt() * static_cast<double>(stride), std::move(frames),
                           Window::None);
  return y_half_proxy(sub, form, true);
}

PicardResult picard_iterate(const Field& u0, double T, std::size_t n_iter, const PicardOptions& options) {
  check_picard(u0, T, options);
  PicardResult out;
  out.T = T;
  out.iterates.push_back(picard_free(u0, T, options));
  double prev_norm = space_time_l2(out.iterates.back(), false);
  for (std::size_t n = 0; n < n_iter; ++n) {
    SpaceTimeField next = duhamel_map(u0, out.iterates.back(), T, options);
    const SpaceTimeField diff = next - out.iterates.back();
    out.differences_l2.push_back(space_time_l2(diff, false));
    out.differences_y.push_back(picard_norm(diff, options.form, options.proxy_frames));
    const double norm = space_time_l2(next, false);
    out.iterates.push_back(std::move(next));
    if (norm > 2.0 * prev_norm && prev_norm > 0.0) {
      out.contraction_failed = true;
      out.failed_at = n + 1;
      break;
    }
    prev_norm = norm;
  }
  return out;
}

double fit_picard_constant(const Field& u0, double T, const PicardOptions& options) {
  const PicardResult run = picard_iterate(u0, T, 3, options);
  const double b = besov_norm_2_1(dealias(u0), 0.5);
  const double t6 = std::pow(T, 1.0 / 6.0);
  const std::size_t mf = options.proxy_frames;
  std::vector<double> norms;
  for (const SpaceTimeField& it : run.iterates) norms.push_back(picard_norm(it, options.form, mf));
  double c0 = 0.0;
  for (std::size_t n = 0; n + 1 < run.iterates.size(); ++n)
    c0 = std::max(c0, norms[n + 1] / (b + t6 * norms[n] * norms[n]));
  for (std::size_t n = 0; n + 2 < run.iterates.size(); ++n) {
    const double d_lo = run.differences_y[n];
    const double d_hi = run.differences_y[n + 1];
    if (d_lo <= 0.0) continue;
    std::vector<Field> sum;
    for (std::size_t k = 0; k < run.iterates[n].size(); ++k)
      sum.push_back(run.iterates[n + 1].frame(k) + run.iterates[n].frame(k));
    const SpaceTimeField plus(run.iterates[n].grid(), 0.0, run.iterates[n].dt(), std::move(sum), Window::None);
    const double s = picard_norm(plus, options.form, mf);
    if (s > 0.0) c0 = std::max(c0, d_hi / (t6 * d_lo * s));
  }
  return c0;
}

double picard_horizon(double C0, double besov_norm) {
  const double r = 4.0 * C0 * besov_norm;
  const double x = 4.0 * C0 * r;
  if (x <= 0.0) return 1.0;
  return std::min(1.0, std::pow(x, -6.0));
}

}  // namespace zk
