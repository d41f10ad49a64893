#include "zk/gwp.hpp"

#include <algorithm>
#include <cmath>

#include "zk/dynamics.hpp"
#include "zk/errors.hpp"
#include "zk/imethod.hpp"
#include "zk/norms.hpp"
#include "zk/spectral.hpp"
#include "zk/transforms.hpp"

namespace zk {

double lambda_exponent(double s) { return (s - 1.0) / (s + 1.0); }
double horizon_exponent(double s) { return (13.0 * s - 11.0) / (4.0 * (s + 1.0)); }
double growth_exponent(double s) { return 4.0 * (1.0 - s) * (1.0 + s) / (13.0 * s - 11.0); }
double regularity_threshold(double alpha) { return (3.0 - alpha) / (3.0 + alpha); }

namespace {

int derive_N(double s, double T) {
  // T = N^{horizon_exponent}  =>  N = T^{1/horizon_exponent}; at least 4.
  const double n = std::pow(T, 1.0 / horizon_exponent(s));
  int N = 4;
  while (N < n && N < (1 << 20)) N *= 2;
  return N;
}

}  // namespace

GwpLedger gwp_iteration(const Field& u0, double s, double T_target, const GwpOptions& o) {
  if (!(s > 11.0 / 13.0 && s < 1.0)) throw ConfigError("s: must lie in (11/13, 1)");
  if (!(T_target > 0.0)) throw ConfigError("T: must be positive");
  if (!(o.delta > 0.0)) throw ConfigError("delta: must be positive");
  if (!(o.lambda_shrink > 0.0 && o.lambda_shrink < 1.0)) throw ConfigError("lambda_shrink: must lie in (0, 1)");
  if (o.max_windows == 0) throw ConfigError("max_windows: must be at least 1");

  GwpLedger led;
  led.s = s;
  led.T_target = T_target;
  led.N = o.N > 0 ? o.N : derive_N(s, T_target);
  const IMultiplier m(s, led.N);

  double lambda = std::pow(static_cast<double>(led.N), lambda_exponent(s));
  Field u = rescale(u0, lambda);
  double e0 = modified_energy(u, m);
  for (int guard = 0; std::abs(e0) > 0.25; ++guard) {
    if (guard > 400) throw ConfigError("gwp: could not reach E(I_N u_lambda) <= 1/4 by rescaling");
    lambda *= o.lambda_shrink;
    u = rescale(u0, lambda);
    e0 = modified_energy(u, m);
  }
  led.lambda = lambda;
  led.initial_modified_energy = e0;
  led.rescaled_horizon = T_target / (lambda * lambda * lambda);
  led.windows_required = static_cast<std::size_t>(std::ceil(led.rescaled_horizon / o.delta - 1e-9));
  led.windows_planned = std::min(led.windows_required, o.max_windows);
  led.capped = led.windows_planned < led.windows_required;

  u = dealias(u);
  double prev = e0;
  double t = 0.0;
  for (std::size_t k = 1; k <= led.windows_planned; ++k) {
    const double len = std::min(o.delta, led.rescaled_horizon - t);
    const auto n = std::max<long long>(1, std::llround(len / o.dt));
    const double h = len / static_cast<double>(n);
    const Etdrk4 stepper(u.grid(), Form::Original, h);
    for (long long i = 0; i < n; ++i) stepper.advance(u, t + h * static_cast<double>(i));
    t += len;
    GwpStep st;
    st.index = k;
    st.time = t;
    st.modified_energy = modified_energy(u, m);
    st.increment = st.modified_energy - prev;
    prev = st.modified_energy;
    led.max_increment = std::max(led.max_increment, std::abs(st.increment));
    led.steps.push_back(st);
    if (std::abs(st.modified_energy) > 0.5) {
      led.extension_failed = true;
      led.failed_at = k;
      break;
    }
  }
  led.growth_factor = sobolev_norm(rescale(u, 1.0 / lambda), s) / sobolev_norm(u0, s);
  if (led.extension_failed)
    led.status = "extension failed at step " + std::to_string(led.failed_at);
  else if (led.capped)
    led.status = "stopped at max_windows before the horizon";
  else
    led.status = "reached horizon";
  return led;
}

}  // namespace zk
