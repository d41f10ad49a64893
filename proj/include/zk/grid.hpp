#pragma once

#include <cstddef>
#include <vector>

namespace zk {

/// A point (ξ, η) of the spatial frequency plane.
struct Wavevector {
  double xi = 0.0;
  double eta = 0.0;
};

/// Periodic box [0, lx) × [0, ly) sampled on nx × ny points.
///
/// Storage is row-major with x fastest: entry (ix, iy) lives at iy * nx + ix.
/// Storage index ix corresponds to the signed wave index j = ix for
/// ix < nx/2 and j = ix - nx otherwise, so j runs over [-nx/2, nx/2).
/// The wavenumber of index j is ξ_j = 2πj / lx (likewise η_k = 2πk / ly).
class Grid2D {
 public:
  /// Throws ConfigError unless nx, ny are powers of two ≥ 8 and lx, ly are
  /// positive and finite.
  Grid2D(int nx, int ny, double lx, double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  double area() const { return lx_ * ly_; }
  double dx() const { return lx_ / nx_; }
  double dy() const { return ly_ / ny_; }

  /// Signed wave index of storage column ix / row iy.
  int wave_index_x(int ix) const { return ix < nx_ / 2 ? ix : ix - nx_; }
  int wave_index_y(int iy) const { return iy < ny_ / 2 ? iy : iy - ny_; }

  /// Storage column/row of a signed wave index; the index must lie in
  /// [-n/2, n/2).
  int storage_x(int j) const { return j >= 0 ? j : j + nx_; }
  int storage_y(int k) const { return k >= 0 ? k : k + ny_; }
  bool contains_index(int j, int k) const {
    return j >= -nx_ / 2 && j < nx_ / 2 && k >= -ny_ / 2 && k < ny_ / 2;
  }

  double xi(int ix) const;
  double eta(int iy) const;
  Wavevector wavevector(int ix, int iy) const { return {xi(ix), eta(iy)}; }
  double xi_spacing() const;
  double eta_spacing() const;

  bool is_nyquist_x(int ix) const { return ix == nx_ / 2; }
  bool is_nyquist_y(int iy) const { return iy == ny_ / 2; }

  double x(int ix) const { return ix * dx(); }
  double y(int iy) const { return iy * dy(); }

  /// Wavenumber arrays indexed by storage position.
  std::vector<double> xis() const;
  std::vector<double> etas() const;

  /// Largest |ζ| over the full lattice.
  double max_radius() const;
  /// Largest |ξ|, |η| kept by the 2/3 rule.
  double dealiased_xi_max() const;
  double dealiased_eta_max() const;
  int dealias_cut_x() const { return nx_ / 3; }
  int dealias_cut_y() const { return ny_ / 3; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.lx_ == b.lx_ && a.ly_ == b.ly_;
  }

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

Grid2D make_grid(int nx, int ny, double lx, double ly);

bool is_power_of_two(long long n);
/// Smallest power of two ≥ n (and ≥ 1).
int next_power_of_two(long long n);

}  // namespace zk
