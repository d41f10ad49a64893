#include "zk/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "zk/errors.hpp"

namespace zk {

Field rescale(const Field& f, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda: must be positive and finite");
  const Grid2D& g = f.grid();
  Field s = f.spectral();
  s *= lambda * lambda;
  std::vector<cplx> v(s.values().begin(), s.values().end());
  return Field::from_coefficients(Grid2D(g.nx(), g.ny(), g.lx() / lambda, g.ly() / lambda), std::move(v));
}

RotationMap rotation_map() {
  const double a = std::cbrt(0.25);
  return {a, std::sqrt(3.0) * a, a};
}

namespace {

bool close(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)); }

// Moves coefficients (j, k) -> map(j, k) scaled by `scale`.
template <class Map>
Field remap(const Field& f, const Grid2D& target, double scale, Map&& map) {
  const Field s = f.spectral();
  const Grid2D& g = s.grid();
  std::vector<cplx> out(target.size());
  const double floor = 1e-14 * std::max(1.0, s.max_abs());
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const cplx c = s(ix, iy);
      if (c == cplx{}) continue;
      const auto [j2, k2] = map(g.wave_index_x(ix), g.wave_index_y(iy));
      if (!target.contains_index(j2, k2)) {
        if (std::abs(c) > floor) throw DomainError("rotation: a nonzero mode falls outside the target lattice");
        continue;
      }
      out[static_cast<std::size_t>(target.storage_y(k2)) * target.nx() + target.storage_x(j2)] += scale * c;
    }
  return Field::from_coefficients(target, std::move(out));
}

}  // namespace

Field rotate_to_symmetrized(const Field& f, std::optional<Grid2D> target) {
  const RotationMap r = rotation_map();
  const Grid2D& g = f.grid();
  if (!close(r.a * g.lx(), r.b * g.ly())) throw DomainError("rotation: the box must satisfy a*lx = b*ly");
  const double side = 2.0 * r.a * g.lx();
  const int n = 2 * std::max(g.nx(), g.ny());
  const Grid2D t = target.value_or(Grid2D(n, n, side, side));
  if (!close(t.lx(), side) || !close(t.ly(), side))
    throw DomainError("rotation: target box must be square with side 2*a*lx");
  return remap(f, t, r.amplitude, [](int j, int k) { return std::pair{j + k, j - k}; });
}

Field rotate_to_original(const Field& f, std::optional<Grid2D> target) {
  const RotationMap r = rotation_map();
  const Grid2D& g = f.grid();
  if (!close(g.lx(), g.ly())) throw DomainError("rotation: the symmetrized box must be square");
  const Grid2D t = target.value_or(Grid2D(2 * g.nx(), 2 * g.ny(), g.lx() / r.a, g.lx() / r.b));
  if (!close(t.lx(), g.lx() / r.a) || !close(t.ly(), g.lx() / r.b))
    throw DomainError("rotation: target box must be (L'/a, L'/b)");
  return remap(f, t, 1.0 / r.amplitude, [](int j, int k) { return std::pair{j + k, j - k}; });
}

}  // namespace zk
