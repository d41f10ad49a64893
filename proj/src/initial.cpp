#include "zk/initial.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "zk/errors.hpp"
#include "zk/norms.hpp"
#include "zk/spectral.hpp"

namespace zk {
namespace {

double get(const std::map<std::string, double>& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// Average f(ζ) and conj f(−ζ) so that the field is real; unpaired Nyquist
// modes are dropped.
Field hermitian_part(const Grid2D& g, std::vector<cplx> c) {
  std::vector<cplx> out(g.size());
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      const int mx = (g.nx() - ix) % g.nx(), my = (g.ny() - iy) % g.ny();
      const std::size_t p = static_cast<std::size_t>(iy) * g.nx() + ix;
      const std::size_t q = static_cast<std::size_t>(my) * g.nx() + mx;
      out[p] = 0.5 * (c[p] + std::conj(c[q]));
    }
  return Field::from_coefficients(g, std::move(out));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Field gaussian(const Grid2D& g, double amplitude, double sigma, double x0, double y0) {
  if (!(sigma > 0.0)) throw ConfigError("sigma: must be positive");
  std::vector<cplx> c(g.size());
  const double pref = amplitude * 2.0 * std::numbers::pi * sigma * sigma / g.area();
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      const Wavevector z = g.wavevector(ix, iy);
      const double r2 = z.xi * z.xi + z.eta * z.eta;
      c[static_cast<std::size_t>(iy) * g.nx() + ix] =
          pref * std::exp(-0.5 * sigma * sigma * r2) * std::polar(1.0, -(z.xi * x0 + z.eta * y0));
    }
  return dealias(Field::from_coefficients(g, std::move(c)));
}

Field cosine_mode(const Grid2D& g, double amplitude, int j, int k) {
  if (!g.contains_index(j, k) || !g.contains_index(-j, -k))
    throw ConfigError("cosine mode: wave index outside the lattice");
  std::vector<cplx> c(g.size());
  const auto at = [&](int a, int b) -> cplx& {
    return c[static_cast<std::size_t>(g.storage_y(b)) * g.nx() + g.storage_x(a)];
  };
  at(j, k) += 0.5 * amplitude;
  at(-j, -k) += 0.5 * amplitude;
  return Field::from_coefficients(g, std::move(c));
}

Field two_pulse(const Grid2D& g, double a1, double a2, double x1, double x2, double width) {
  if (!(width > 0.0)) throw ConfigError("width: must be positive");
  const double yc = 0.5 * g.ly();
  const auto pulse = [&](double x, double y, double a, double xc) {
    // Nearest periodic image in x.
    double d = std::remainder(x - xc, g.lx());
    const double sech = 1.0 / std::cosh(d / width);
    const double dy = std::remainder(y - yc, g.ly());
    return a * sech * sech * std::exp(-0.5 * dy * dy / (width * width));
  };
  const Field f = Field::from_function(g, [&](double x, double y) {
    return cplx(pulse(x, y, a1, x1) + pulse(x, y, a2, x2), 0.0);
  });
  const Field s = dealias(f);
  return hermitian_part(g, std::vector<cplx>(s.values().begin(), s.values().end()));
}

Field random_smooth(const Grid2D& g, std::uint64_t seed, double kappa, Normalization normalization, double norm) {
  if (!(kappa > 0.0)) throw ConfigError("kappa: must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cplx> c(g.size());
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const double re = nd(rng), im = nd(rng);
      if (!in_dealiased_band(g, ix, iy) || (ix == 0 && iy == 0)) continue;
      const Wavevector z = g.wavevector(ix, iy);
      const double env = std::exp(-0.5 * (z.xi * z.xi + z.eta * z.eta) / (kappa * kappa));
      c[static_cast<std::size_t>(iy) * g.nx() + ix] = env * cplx(re, im);
    }
  Field f = hermitian_part(g, std::move(c));
  const double n = normalization == Normalization::L2 ? l2_norm(f) : sobolev_norm(f, 1.0);
  if (n == 0.0) throw DomainError("random data: no modes in the band");
  f *= norm / n;
  return f;
}

Field random_shell(const Grid2D& g, std::uint64_t seed, double lo, double hi, int axis) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cplx> c(g.size());
  bool any = false;
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const double re = nd(rng), im = nd(rng);
      if (g.is_nyquist_x(ix) || g.is_nyquist_y(iy)) continue;
      const Wavevector z = g.wavevector(ix, iy);
      const double r = axis == 1 ? std::abs(z.xi) : axis == 2 ? std::abs(z.eta) : std::hypot(z.xi, z.eta);
      if (r < lo || r >= hi) continue;
      c[static_cast<std::size_t>(iy) * g.nx() + ix] = cplx(re, im);
      any = true;
    }
  if (!any) throw DomainError("random shell: no lattice mode in the requested shell");
  Field f = hermitian_part(g, std::move(c));
  const double n = l2_norm(f);
  if (n == 0.0) throw DomainError("random shell: no lattice mode in the requested shell");
  f *= 1.0 / n;
  return f;
}

Field make_initial(const Grid2D& g, const std::string& preset, const std::map<std::string, double>& p) {
  if (preset == "gaussian")
    return gaussian(g, get(p, "amplitude", 1.0), get(p, "sigma", 0.5), get(p, "x0", 0.5 * g.lx()),
                    get(p, "y0", 0.5 * g.ly()));
  if (preset == "cosine")
    return cosine_mode(g, get(p, "amplitude", 1.0), static_cast<int>(get(p, "j", 1)), static_cast<int>(get(p, "k", 0)));
  if (preset == "two-pulse")
    return two_pulse(g, get(p, "a1", 1.0), get(p, "a2", 0.5), get(p, "x1", 0.3 * g.lx()), get(p, "x2", 0.7 * g.lx()),
                     get(p, "width", 0.5));
  if (preset == "random") {
    const auto norm = get(p, "normalization", 1.0) == 0.0 ? Normalization::L2 : Normalization::H1;
    return random_smooth(g, static_cast<std::uint64_t>(get(p, "seed", 1.0)), get(p, "kappa", 2.0), norm,
                         get(p, "norm", 1.0));
  }
  throw ConfigError("ic: unknown preset '" + preset + "' (expected gaussian, cosine, two-pulse or random)");
}

}  // namespace zk
