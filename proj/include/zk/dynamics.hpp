#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "zk/spacetime.hpp"

namespace zk {

/// e^{tω}: multiplies every mode by e^{itω(ζ)}.
Field linear_propagator(const Field& f, double t, Form form);

/// −(∂ₓ)(u²) or −(∂ₓ+∂_y)(u²) of the real part of f, with the square taken
/// on the 2/3-dealiased band. Returned in spectral form.
Field nonlinear_term(const Field& f, Form form, bool dealiased = true);

/// Largest dt·|ω| over the 2/3 band.
double stiffness(const Grid2D& g, Form form, double dt);
/// Steps with stiffness above this are rejected (ConfigError): beyond it the
/// φ-function weights are dominated by rounding in the exponentials.
inline constexpr double kStiffnessLimit = 1e4;

struct SolverState {
  Field field;
  double time = 0.0;
  double dt = 0.0;
  Form form = Form::Original;
  bool dealias = true;
  bool nonlinear = true;
  std::size_t steps = 0;
};

/// ETDRK4 (Cox–Matthews) for û' = iωû + N̂(u) with the φ-function weights
/// precomputed for one (grid, form, dt).
class Etdrk4 {
 public:
  Etdrk4(const Grid2D& grid, Form form, double dt, bool nonlinear = true, bool dealias = true);

  const Grid2D& grid() const { return grid_; }
  Form form() const { return form_; }
  double dt() const { return dt_; }

  /// Advances u (spectral, same grid) by one step. Throws InstabilityError if
  /// the result is not finite; `time` is only used in that message.
  void advance(Field& u, double time = 0.0) const;

  SolverState step(const SolverState& state) const;

 private:
  Field rhs(const Field& u) const;

  Grid2D grid_;
  Form form_;
  double dt_;
  bool nonlinear_;
  bool dealias_;
  std::vector<cplx> e_, e2_, q_, f1_, f2_, f3_;
};

/// One step from `state` with a freshly built integrator.
SolverState step_etdrk4(const SolverState& state, double dt);

/// φ₁..φ₃ of the exponential integrators, accurate for all complex z.
cplx phi1(cplx z);
cplx phi2(cplx z);
cplx phi3(cplx z);

struct EvolveOptions {
  double T = 0.0;
  double dt = 1e-3;
  Form form = Form::Original;
  /// Integrator steps per stored frame.
  std::size_t sample_every = 1;
  bool nonlinear = true;
  bool dealias = true;
  Window window = Window::Hann;
  /// Called with (time, field) at every stored frame, in order.
  std::function<void(double, const Field&)> observer;
};

/// Integrates from t = 0 to T with round(T/dt) steps of size T/round(T/dt)
/// (T = 0 gives the single frame u0), storing every sample_every-th state.
/// Throws ConfigError for invalid step parameters or stiffness above the limit,
/// DomainError if u0 is not real or not band-limited, InstabilityError on blow-up.
SpaceTimeField evolve(const Field& u0, const EvolveOptions& options);
SpaceTimeField evolve(const Field& u0, double T, double dt, Form form, std::size_t sample_every = 1);

// --- Picard iteration -------------------------------------------------------

struct PicardOptions {
  Form form = Form::Symmetrized;
  /// Number of time nodes on [0, T] (quadrature and output sampling).
  std::size_t nodes = 129;
  bool nonlinear = true;
  /// Multiply the Duhamel integrand by χ(t'/T).
  bool time_cutoff = true;
  /// Successive differences are measured with at most this many frames.
  std::size_t proxy_frames = 128;
};

struct PicardResult {
  double T = 0.0;
  /// u⁽⁰⁾ (free solution), u⁽¹⁾, … ; every entry is sampled on the same nodes.
  std::vector<SpaceTimeField> iterates;
  /// ‖u⁽ⁿ⁺¹⁾ − u⁽ⁿ⁾‖ in untapered space-time L² and in the windowed Y^{1/2}
  /// V²-proxy, n = 0..iterates−2.
  std::vector<double> differences_l2;
  std::vector<double> differences_y;
  /// Set when an iterate's norm more than doubled relative to its predecessor.
  bool contraction_failed = false;
  std::size_t failed_at = 0;
};

/// u⁽⁰⁾ = e^{tω}u0, u⁽ⁿ⁺¹⁾ = 𝒯u⁽ⁿ⁾ with
///   𝒯u(t) = e^{tω}u0 + ∫₀^t e^{(t−t')ω} χ(t'/T) N(u(t')) dt',
/// evaluated in the interaction picture by cumulative composite Simpson
/// quadrature on the nodes (3/8 rule for the odd-count tail).
PicardResult picard_iterate(const Field& u0, double T, std::size_t n_iter, const PicardOptions& options = {});

/// Empirical constant in ‖𝒯u‖ ≤ C₀(‖u0‖_B + T^{1/6}‖u‖²) and
/// ‖𝒯u − 𝒯v‖ ≤ C₀T^{1/6}‖u−v‖‖u+v‖, measured in the windowed Y^{1/2} proxy
/// on the first iterates at trial horizon T.
double fit_picard_constant(const Field& u0, double T, const PicardOptions& options = {});

/// r = 4C₀‖u0‖_B and T = min{1, (4C₀r)^{−6}}.
double picard_horizon(double C0, double besov_norm);

/// Windowed Y^{1/2} V²-proxy used by the Picard diagnostics.
double picard_norm(const SpaceTimeField& stf, Form form, std::size_t max_frames);

}  // namespace zk
