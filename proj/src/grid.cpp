#include "zk/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zk/errors.hpp"

namespace zk {

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(long long n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 8 || !is_power_of_two(nx))
    throw ConfigError("grid: nx must be a power of two >= 8, got " + std::to_string(nx));
  if (ny < 8 || !is_power_of_two(ny))
    throw ConfigError("grid: ny must be a power of two >= 8, got " + std::to_string(ny));
  if (!(lx > 0.0) || !std::isfinite(lx))
    throw ConfigError("grid: lx must be positive and finite");
  if (!(ly > 0.0) || !std::isfinite(ly))
    throw ConfigError("grid: ly must be positive and finite");
}

Grid2D make_grid(int nx, int ny, double lx, double ly) { return Grid2D(nx, ny, lx, ly); }

double Grid2D::xi_spacing() const { return 2.0 * std::numbers::pi / lx_; }
double Grid2D::eta_spacing() const { return 2.0 * std::numbers::pi / ly_; }

double Grid2D::xi(int ix) const { return xi_spacing() * wave_index_x(ix); }
double Grid2D::eta(int iy) const { return eta_spacing() * wave_index_y(iy); }

std::vector<double> Grid2D::xis() const {
  std::vector<double> out(nx_);
  for (int ix = 0; ix < nx_; ++ix) out[ix] = xi(ix);
  return out;
}

std::vector<double> Grid2D::etas() const {
  std::vector<double> out(ny_);
  for (int iy = 0; iy < ny_; ++iy) out[iy] = eta(iy);
  return out;
}

double Grid2D::max_radius() const {
  return std::hypot(xi_spacing() * (nx_ / 2), eta_spacing() * (ny_ / 2));
}

double Grid2D::dealiased_xi_max() const { return xi_spacing() * dealias_cut_x(); }
double Grid2D::dealiased_eta_max() const { return eta_spacing() * dealias_cut_y(); }

}  // namespace zk
