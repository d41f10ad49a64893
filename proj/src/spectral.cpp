#include "zk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zk/errors.hpp"

namespace zk {
namespace {

cplx int_pow(cplx base, int n) {
  cplx r(1.0, 0.0);
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

}  // namespace

Field derivative(const Field& f, int ax, int ay) {
  if (ax < 0 || ay < 0) throw UsageError("derivative: orders must be nonnegative");
  Field out = f.spectral();
  const Grid2D& g = out.grid();
  const cplx i(0.0, 1.0);
  for (int iy = 0; iy < g.ny(); ++iy) {
    const bool kill_y = (ay % 2 == 1) && g.is_nyquist_y(iy);
    const cplx fy = int_pow(i * g.eta(iy), ay);
    for (int ix = 0; ix < g.nx(); ++ix) {
      const bool kill_x = (ax % 2 == 1) && g.is_nyquist_x(ix);
      if (kill_x || kill_y) {
        out(ix, iy) = 0.0;
        continue;
      }
      out(ix, iy) *= int_pow(i * g.xi(ix), ax) * fy;
    }
  }
  return out;
}

bool in_dealiased_band(const Grid2D& g, int ix, int iy) {
  return std::abs(g.wave_index_x(ix)) <= g.dealias_cut_x() &&
         std::abs(g.wave_index_y(iy)) <= g.dealias_cut_y();
}

Field dealias(const Field& f) {
  Field out = f.spectral();
  const Grid2D& g = out.grid();
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix)
      if (!in_dealiased_band(g, ix, iy)) out(ix, iy) = 0.0;
  return out;
}

bool is_band_limited(const Field& f, double tol) {
  const Field s = f.spectral();
  const Grid2D& g = s.grid();
  const double scale = s.max_abs();
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix)
      if (!in_dealiased_band(g, ix, iy) && std::abs(s(ix, iy)) > tol * scale) return false;
  return true;
}

Field product(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw UsageError("product: grid mismatch");
  Field pa = a.physical();
  const Field pb = b.physical();
  for (std::size_t n = 0; n < pa.size(); ++n) pa.values()[n] *= pb.values()[n];
  return pa.spectral();
}

double smooth_cutoff(double x) {
  const double r = std::abs(x);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  // 35t⁴ − 84t⁵ + 70t⁶ − 20t⁷: zero first three derivatives at both ends.
  const double s = t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
  return 1.0 - std::clamp(s, 0.0, 1.0);
}

double lp_bump(double x) { return smooth_cutoff(x) - smooth_cutoff(2.0 * x); }

double frequency_magnitude(Wavevector z, ShellMeasure measure) {
  switch (measure) {
    case ShellMeasure::XAxis: return std::abs(z.xi);
    case ShellMeasure::YAxis: return std::abs(z.eta);
    case ShellMeasure::Radial: break;
  }
  return std::hypot(z.xi, z.eta);
}

void require_dyadic_or_core(int N) {
  if (N == 0 || is_power_of_two(N)) return;
  throw UsageError("lp_project: shell index must be 0 (core) or a power of two, got " +
                   std::to_string(N));
}

double shell_weight(int N, Wavevector z, ShellMeasure measure) {
  require_dyadic_or_core(N);
  const double r = frequency_magnitude(z, measure);
  if (N == 0) return smooth_cutoff(2.0 * r);
  return lp_bump(r / N);
}

Field lp_project(const Field& f, int N, ShellMeasure measure) {
  require_dyadic_or_core(N);
  return apply_multiplier(f, [&](Wavevector z) { return shell_weight(N, z, measure); });
}

std::vector<int> lp_shells(const Grid2D& g, ShellMeasure measure) {
  double top = 0.0;
  switch (measure) {
    case ShellMeasure::Radial: top = g.max_radius(); break;
    case ShellMeasure::XAxis: top = g.xi_spacing() * (g.nx() / 2); break;
    case ShellMeasure::YAxis: top = g.eta_spacing() * (g.ny() / 2); break;
  }
  std::vector<int> shells;
  for (int N = 1;; N *= 2) {
    shells.push_back(N);
    if (N >= top) break;
  }
  return shells;
}

}  // namespace zk
