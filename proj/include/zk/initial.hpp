#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "zk/field.hpp"

namespace zk {

/// Periodized Gaussian amp·Σ exp(−|x − x0 − n·L|²/(2σ²)), built from its
/// exact Fourier coefficients and truncated to the 2/3 band.
Field gaussian(const Grid2D& g, double amplitude, double sigma, double x0, double y0);

/// amp·cos(ξ_j x + η_k y) for signed wave indices (j, k).
Field cosine_mode(const Grid2D& g, double amplitude, int j, int k);

/// Two sech²-in-x pulses with Gaussian profile in y, centred at (x1, y) and
/// (x2, y) with amplitudes a1, a2, band-limited to the 2/3 band.
Field two_pulse(const Grid2D& g, double a1, double a2, double x1, double x2, double width);

enum class Normalization { L2, H1 };

/// Complex Gaussian coefficients with envelope exp(−|ζ|²/(2κ²)), zero mean,
/// restricted to the 2/3 band, made Hermitian and scaled to unit norm times
/// `norm` in the selected norm. Deterministic in `seed`.
Field random_smooth(const Grid2D& g, std::uint64_t seed, double kappa, Normalization normalization,
                    double norm = 1.0);

/// Complex Gaussian coefficients supported where lo ≤ |ζ| < hi (or the
/// projected magnitude of `axis`: 0 radial, 1 |ξ|, 2 |η|), Hermitian, unit L²
/// norm. Throws DomainError if no lattice mode lies in the shell.
Field random_shell(const Grid2D& g, std::uint64_t seed, double lo, double hi, int axis = 0);

/// Named presets for configuration files: "gaussian" (amplitude, sigma, x0,
/// y0), "cosine" (amplitude, j, k), "two-pulse" (a1, a2, x1, x2, width),
/// "random" (seed, kappa, norm, normalization = 0 for L², 1 for H¹).
/// Missing keys take defaults; unknown presets throw ConfigError.
Field make_initial(const Grid2D& g, const std::string& preset, const std::map<std::string, double>& params);

/// SplitMix64 mixing of (base, index) for per-worker seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace zk
