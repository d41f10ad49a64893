#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zk/field.hpp"

namespace zk {

/// Exponents of the globalization argument.
/// λ ∼ N^{(s−1)/(s+1)}.
double lambda_exponent(double s);
/// T ∼ N^{(13s−11)/(4(s+1))}.
double horizon_exponent(double s);
/// ‖u(T)‖_{H^s} ≲ T^{4(1−s)(1+s)/(13s−11)}(1 + ‖u0‖_{H^s})².
double growth_exponent(double s);
/// Regularity threshold (3 − α)/(3 + α) for an increment N^{−α}.
double regularity_threshold(double alpha);

struct GwpOptions {
  /// I-method cutoff; 0 derives it from T_target through the horizon exponent.
  int N = 0;
  double delta = 0.1;
  double dt = 1e-3;
  std::size_t max_windows = 100;
  /// λ is shrunk by this factor until E(I_N u_λ) ≤ 1/4.
  double lambda_shrink = 0.9;
};

struct GwpStep {
  std::size_t index = 0;
  /// Time on the rescaled box.
  double time = 0.0;
  double modified_energy = 0.0;
  double increment = 0.0;
};

struct GwpLedger {
  double s = 0.0;
  int N = 0;
  double lambda = 0.0;
  double T_target = 0.0;
  double rescaled_horizon = 0.0;
  std::size_t windows_required = 0;
  std::size_t windows_planned = 0;
  bool capped = false;
  double initial_modified_energy = 0.0;
  std::vector<GwpStep> steps;
  bool extension_failed = false;
  std::size_t failed_at = 0;
  /// ‖u(t_end)‖_{H^s} / ‖u0‖_{H^s} in the original scaling, t_end = λ³·(last step time).
  double growth_factor = 1.0;
  double max_increment = 0.0;
  std::string status;
};

/// Rescales u0 so that E(I_N u_λ) ≤ 1/4, then advances with ETDRK4
/// (original form) in windows of length δ, recording E(I_N u_λ) after each,
/// until T_target/λ³ is reached, max_windows is exhausted, or the modified
/// energy exceeds 1/2 (recorded as a failed extension). Throws ConfigError
/// for s outside (11/13, 1) or invalid options.
GwpLedger gwp_iteration(const Field& u0, double s, double T_target, const GwpOptions& options = {});

}  // namespace zk
