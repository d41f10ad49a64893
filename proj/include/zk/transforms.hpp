#pragma once

#include <optional>

#include "zk/field.hpp"

namespace zk {

/// u_λ(x, y) = λ² u(λx, λy) realized on the box (lx/λ, ly/λ) with the same
/// index count: every coefficient is multiplied by λ². A solution on the
/// original box maps to a solution on the new box at time λ⁻³t.
/// Throws ConfigError unless λ > 0 and finite.
Field rescale(const Field& f, double lambda);

/// Linear change of variables between the two forms. With
///   ξ = a(ξ' + η'),  η = b(ξ' − η'),  b = √3·a,  4a³ = 1,
/// the original symbol ξ³ + ξη² equals ξ'³ + η'³. In physical space
/// x' = ax + by, y' = ax − by, and u = u'/a makes the symmetrized
/// nonlinearity coefficient exactly 1.
struct RotationMap {
  double a;
  double b;
  /// u' = amplitude · u.
  double amplitude;

  Wavevector to_original(Wavevector primed) const { return {a * (primed.xi + primed.eta), b * (primed.xi - primed.eta)}; }
  Wavevector to_symmetrized(Wavevector z) const {
    return {0.5 * (z.xi / a + z.eta / b), 0.5 * (z.xi / a - z.eta / b)};
  }
};

RotationMap rotation_map();

/// Original-frame field on a box with a·lx = b·ly (DomainError otherwise) to
/// the symmetrized frame on the square box of side 2a·lx; index (j, k) goes
/// to (j+k, j−k). The default target has 2·max(nx, ny) points per side.
/// DomainError if a nonzero mode falls outside the target lattice.
Field rotate_to_symmetrized(const Field& f, std::optional<Grid2D> target = std::nullopt);

/// Symmetrized-frame field on a square box of side L' (DomainError otherwise)
/// to the original frame on the box (L'/a, L'/b); index (j', k') goes to
/// (j'+k', j'−k'). The default target has twice the points per side.
Field rotate_to_original(const Field& f, std::optional<Grid2D> target = std::nullopt);

}  // namespace zk
