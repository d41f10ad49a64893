#pragma once

#include <string>
#include <string_view>

#include "zk/grid.hpp"

namespace zk {

/// The two equivalent forms of the equation.
///
///   Original:     u_t + ∂ₓΔu + ∂ₓ(u²) = 0,               ω(ξ,η) = ξ³ + ξη²
///   Symmetrized:  u_t + (∂ₓ³+∂_y³)u + (∂ₓ+∂_y)(u²) = 0,   ω(ξ,η) = ξ³ + η³
///
/// The free flow multiplies û(ζ) by e^{itω(ζ)}; both symbols are odd.
enum class Form { Original, Symmetrized };

inline double dispersion_symbol(Form form, Wavevector z) {
  if (form == Form::Original) return z.xi * (z.xi * z.xi + z.eta * z.eta);
  return z.xi * z.xi * z.xi + z.eta * z.eta * z.eta;
}

/// Symbol of the first-order operator in front of u²: ξ (Original) or ξ+η.
inline double nonlinear_symbol(Form form, Wavevector z) {
  return form == Form::Original ? z.xi : z.xi + z.eta;
}

std::string to_string(Form form);
/// Accepts "original" / "symmetrized"; throws ConfigError otherwise.
Form parse_form(std::string_view name);

}  // namespace zk
