#pragma once

#include <type_traits>
#include <vector>

#include "zk/field.hpp"

namespace zk {

/// Multiply every spectral coefficient by symbol(ζ). The symbol may return a
/// real or complex value.
template <class Symbol>
Field apply_multiplier(const Field& f, Symbol&& symbol) {
  Field out = f.spectral();
  const Grid2D& g = out.grid();
  for (int iy = 0; iy < g.ny(); ++iy) {
    const double eta = g.eta(iy);
    for (int ix = 0; ix < g.nx(); ++ix) {
      out(ix, iy) *= symbol(Wavevector{g.xi(ix), eta});
    }
  }
  return out;
}

/// ∂ₓ^{ax} ∂_y^{ay} as the multiplier (iξ)^{ax}(iη)^{ay}. Odd orders zero the
/// unpaired Nyquist column/row so real fields stay real.
Field derivative(const Field& f, int ax, int ay);

/// 2/3 rule: zero modes with |j| > nx/3 or |k| > ny/3.
Field dealias(const Field& f);
bool in_dealiased_band(const Grid2D& g, int ix, int iy);
/// True if every coefficient outside the 2/3 band is ≤ tol · max |û|.
bool is_band_limited(const Field& f, double tol = 1e-12);

/// Pointwise product of two fields, returned in spectral form (not dealiased).
Field product(const Field& a, const Field& b);

// --- Littlewood–Paley machinery -------------------------------------------

/// Smooth even cutoff χ: 1 on [-1, 1], 0 outside [-2, 2], with a C³
/// degree-7 smoothstep blend on 1 ≤ |x| ≤ 2.
double smooth_cutoff(double x);
/// ψ(x) = χ(x) − χ(2x).
double lp_bump(double x);

/// How the frequency magnitude entering P_N is measured.
enum class ShellMeasure { Radial, XAxis, YAxis };

double frequency_magnitude(Wavevector z, ShellMeasure measure);

/// Weight of shell N at ζ: ψ(|ζ|/N) for dyadic N ≥ 1, χ(2|ζ|) for N = 0
/// (the core block). Throws UsageError for other N.
double shell_weight(int N, Wavevector z, ShellMeasure measure = ShellMeasure::Radial);

/// P_N u (N dyadic ≥ 1) or P_0 u (N = 0).
Field lp_project(const Field& f, int N, ShellMeasure measure = ShellMeasure::Radial);

/// Dyadic shells 1, 2, 4, … up to the first N ≥ the lattice's largest
/// frequency magnitude; together with the core block they resolve the
/// identity exactly on the lattice.
std::vector<int> lp_shells(const Grid2D& g, ShellMeasure measure = ShellMeasure::Radial);

/// Throws UsageError unless N is 0 or a power of two.
void require_dyadic_or_core(int N);

}  // namespace zk
