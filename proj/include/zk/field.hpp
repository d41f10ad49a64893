#pragma once

#include <complex>
#include <span>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

using cplx = std::complex<double>;

enum class Representation { Physical, Spectral };

/// A scalar field at one instant, held either as physical samples u(x_i, y_k)
/// or as Fourier-series coefficients û(ξ_j, η_k).
///
/// Normalization (used everywhere in the library):
///   û(ζ) = (1 / (nx·ny)) Σ_{x} u(x) e^{-iζ·x},   u(x) = Σ_ζ û(ζ) e^{iζ·x},
/// so û is the Fourier-series coefficient independent of resolution and
/// ∫ |u|² dx dy = lx·ly · Σ |û|² (Parseval).
class Field {
 public:
  /// Throws DataError on size mismatch or non-finite entries.
  Field(Grid2D grid, Representation repr, std::vector<cplx> data);

  static Field zeros(const Grid2D& grid, Representation repr = Representation::Spectral);
  static Field from_samples(const Grid2D& grid, std::span<const double> samples);
  static Field from_coefficients(const Grid2D& grid, std::vector<cplx> coefficients);
  template <class F>
  static Field from_function(const Grid2D& grid, F&& f) {
    std::vector<cplx> v(grid.size());
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < grid.nx(); ++ix)
        v[static_cast<std::size_t>(iy) * grid.nx() + ix] = f(grid.x(ix), grid.y(iy));
    return Field(grid, Representation::Physical, std::move(v));
  }

  const Grid2D& grid() const { return grid_; }
  Representation representation() const { return repr_; }
  bool is_spectral() const { return repr_ == Representation::Spectral; }

  std::span<const cplx> values() const { return data_; }
  std::span<cplx> values() { return data_; }
  std::size_t size() const { return data_.size(); }

  cplx operator()(int ix, int iy) const { return data_[index(ix, iy)]; }
  cplx& operator()(int ix, int iy) { return data_[index(ix, iy)]; }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * grid_.nx() + ix;
  }

  /// Spectral coefficient at signed wave index (j, k); zero off the lattice.
  cplx coefficient(int j, int k) const;

  Field spectral() const;
  Field physical() const;
  /// Real parts of the physical samples.
  std::vector<double> real_samples() const;

  /// max |û(ζ) - conj(û(-ζ))| over the lattice, ignoring unpaired Nyquist
  /// modes; zero for real-valued fields.
  double hermitian_defect() const;
  /// Largest coefficient magnitude.
  double max_abs() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx scale);

 private:
  Grid2D grid_;
  Representation repr_;
  std::vector<cplx> data_;
};

Field to_spectral(const Field& f);
Field to_physical(const Field& f);

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx scale, Field a);
Field operator*(double scale, Field a);

/// Throws DataError naming `what` if any entry is NaN/Inf.
void require_finite(std::span<const cplx> data, const char* what);

}  // namespace zk
