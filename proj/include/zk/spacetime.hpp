#pragma once

#include <vector>

#include "zk/dispersion.hpp"
#include "zk/field.hpp"

namespace zk {

/// Taper applied before temporal transforms and windowed space-time norms.
enum class Window { None, Hann };

/// Symmetric Hann weight sin²(πk/(K−1)); both endpoints vanish. K = 1 gives 1.
double hann_weight(std::size_t k, std::size_t K);

/// Uniformly sampled trajectory t_k = t0 + k·dt, k = 0..K−1, on one grid.
/// Frames are stored in spectral form.
class SpaceTimeField {
 public:
  /// Throws UsageError for an empty frame list, mismatched grids, or
  /// dt ≤ 0 when more than one frame is given.
  SpaceTimeField(Grid2D grid, double t0, double dt, std::vector<Field> frames,
                 Window window = Window::Hann);

  /// e^{t ω}-evolution of u0 sampled at t0 + k·dt.
  static SpaceTimeField free_solution(const Field& u0, Form form, double t0, double dt,
                                      std::size_t count, Window window = Window::Hann);

  const Grid2D& grid() const { return grid_; }
  std::size_t size() const { return frames_.size(); }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double time(std::size_t k) const { return t0_ + dt_ * static_cast<double>(k); }
  double duration() const { return dt_ * static_cast<double>(size() - 1); }
  Window window() const { return window_; }
  const std::vector<Field>& frames() const { return frames_; }
  const Field& frame(std::size_t k) const { return frames_[k]; }

  /// Per-frame taper weights (all ones for Window::None).
  std::vector<double> window_weights() const;
  SpaceTimeField with_window(Window w) const;

  /// Applies a Field → Field operation frame by frame.
  template <class Op>
  SpaceTimeField map(Op&& op) const {
    std::vector<Field> out;
    out.reserve(frames_.size());
    for (const Field& f : frames_) out.push_back(op(f));
    return SpaceTimeField(grid_, t0_, dt_, std::move(out), window_);
  }

  SpaceTimeField operator-(const SpaceTimeField& other) const;

 private:
  Grid2D grid_;
  double t0_;
  double dt_;
  std::vector<Field> frames_;
  Window window_;
};

/// Half-width of the taper's spectral main lobe, in angular temporal
/// frequency: 4π/(K·dt) for Hann, 2π/(K·dt) untapered.
double window_leakage_scale(const SpaceTimeField& stf);

/// Space-time spectrum of the tapered trajectory after removing the free
/// phase: coefficient (p, m) is the temporal DFT (normalized by 1/K) of
/// w_k e^{−i t_k ω(ζ_p)} û_k(ζ_p) at modulation μ_m = τ_m − ω(ζ_p).
/// Working in the twisted frame avoids aliasing of the large dispersive
/// phases.
struct TwistedSpectrum {
  Grid2D grid;
  Form form;
  double t0;
  double dt;
  std::size_t count;
  std::vector<double> modulation;  // μ_m, length count
  std::vector<cplx> coeffs;        // [p * count + m]
};

TwistedSpectrum twisted_spectrum(const SpaceTimeField& stf, Form form);
/// Inverse of twisted_spectrum without undoing the taper; the result carries
/// Window::None.
SpaceTimeField untwist(const TwistedSpectrum& spec);

enum class ModulationBand { Shell, AtLeast, Below };

/// Q^S_M (Shell, multiplier ψ(μ/M)), Q^S_{≥M} (1 − χ(2μ/M)) or Q^S_{<M}
/// (χ(2μ/M)) applied to the tapered trajectory; the output has the taper
/// baked in and carries Window::None. M must be a power of two (2^k, k ∈ ℤ).
/// Throws ResolutionError if fewer than 8 samples are given or M/2 exceeds
/// the temporal Nyquist frequency π/dt.
SpaceTimeField modulation_project(const SpaceTimeField& stf, double M, Form form,
                                  ModulationBand band = ModulationBand::Shell);

}  // namespace zk
