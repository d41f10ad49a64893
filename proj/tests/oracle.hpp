#pragma once

// Slow, independent reference implementations used as test oracles. Nothing
// here calls FFT code or the fast evaluation paths of the library.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "zk/field.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Index = std::pair<int, int>;
using Spectrum = std::map<Index, cplx>;

inline double xi(const zk::Grid2D& g, int j) { return 2.0 * std::numbers::pi * j / g.lx(); }
inline double eta(const zk::Grid2D& g, int k) { return 2.0 * std::numbers::pi * k / g.ly(); }

// (1/(nx ny)) Σ u(x,y) e^{−i(ξx+ηy)} evaluated term by term.
inline Spectrum direct_dft(const zk::Grid2D& g, const std::vector<double>& u) {
  Spectrum out;
  const int nx = g.nx(), ny = g.ny();
  for (int k = -ny / 2; k < ny / 2; ++k)
    for (int j = -nx / 2; j < nx / 2; ++j) {
      cplx acc = 0.0;
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          const double phase = -2.0 * std::numbers::pi * (double(j) * ix / nx + double(k) * iy / ny);
          acc += u[static_cast<std::size_t>(iy) * nx + ix] * std::polar(1.0, phase);
        }
      out[{j, k}] = acc / double(nx * ny);
    }
  return out;
}

inline Spectrum spectrum_of(const zk::Field& f) {
  Spectrum out;
  const zk::Grid2D& g = f.grid();
  for (int k = -g.ny() / 2; k < g.ny() / 2; ++k)
    for (int j = -g.nx() / 2; j < g.nx() / 2; ++j) {
      const cplx c = f.coefficient(j, k);
      if (c != cplx{}) out[{j, k}] = c;
    }
  return out;
}

// Linear convolution of coefficient maps; no wrap-around.
inline Spectrum convolve(const Spectrum& a, const Spectrum& b) {
  Spectrum out;
  for (const auto& [za, ca] : a)
    for (const auto& [zb, cb] : b) out[{za.first + zb.first, za.second + zb.second}] += ca * cb;
  return out;
}

inline bool in_band(const zk::Grid2D& g, int j, int k) {
  return std::abs(j) <= g.nx() / 3 && std::abs(k) <= g.ny() / 3;
}

// Real field with Hermitian Gaussian coefficients on the 2/3 band.
inline zk::Field random_band_field(const zk::Grid2D& g, std::mt19937_64& rng, double decay = 0.0) {
  std::normal_distribution<double> nd;
  std::vector<cplx> c(g.size());
  auto at = [&](int j, int k) -> cplx& {
    return c[static_cast<std::size_t>(g.storage_y(k)) * g.nx() + g.storage_x(j)];
  };
  const int cx = g.nx() / 3, cy = g.ny() / 3;
  for (int k = -cy; k <= cy; ++k)
    for (int j = -cx; j <= cx; ++j) {
      if (k < 0 || (k == 0 && j < 0)) continue;
      const double w = std::exp(-decay * (j * j + k * k));
      const cplx v = (j == 0 && k == 0) ? cplx(nd(rng), 0.0) : cplx(nd(rng), nd(rng));
      at(j, k) = w * v;
      at(-j, -k) = std::conj(w * v);
    }
  return zk::Field::from_coefficients(g, std::move(c));
}

// Accumulated in long double: the sums cancel heavily for real data.
// A Σ_{ζ₁+ζ₂+ζ₃=0} sym(ζ₁,ζ₂,ζ₃) f̂(ζ₁)f̂(ζ₂)f̂(ζ₃) over the support.
using Symbol3 = std::function<cplx(double, double, double, double, double, double)>;
inline cplx hyperplane3(const zk::Grid2D& g, const Spectrum& f, const Symbol3& sym) {
  std::complex<long double> acc = 0.0;
  for (const auto& [z1, c1] : f)
    for (const auto& [z2, c2] : f) {
      const auto it = f.find({-z1.first - z2.first, -z1.second - z2.second});
      if (it == f.end()) continue;
      acc += std::complex<long double>(sym(xi(g, z1.first), eta(g, z1.second), xi(g, z2.first), eta(g, z2.second),
                                           xi(g, it->first.first), eta(g, it->first.second))) *
             std::complex<long double>(c1) * std::complex<long double>(c2) * std::complex<long double>(it->second);
    }
  return g.area() * cplx(acc);
}

// A Σ_{ζ₁+…+ζ₄=0} over the support, with the pair frequency ζ₁+ζ₂ offered to
// the symbol as an index pair so band restrictions can be expressed.
using Symbol4 = std::function<cplx(const Index&, const Index&, const Index&, const Index&)>;
inline cplx hyperplane4(const zk::Grid2D& g, const Spectrum& f, const Symbol4& sym) {
  std::complex<long double> acc = 0.0;
  for (const auto& [z1, c1] : f)
    for (const auto& [z2, c2] : f)
      for (const auto& [z3, c3] : f) {
        const Index z4{-z1.first - z2.first - z3.first, -z1.second - z2.second - z3.second};
        const auto it = f.find(z4);
        if (it == f.end()) continue;
        acc += std::complex<long double>(sym(z1, z2, z3, z4)) * std::complex<long double>(c1) *
               std::complex<long double>(c2) * std::complex<long double>(c3) * std::complex<long double>(it->second);
      }
  return g.area() * cplx(acc);
}

// Supremum over every subsequence of the samples, by enumerating all 2^K
// index subsets.
inline double pvariation_bruteforce(const std::vector<double>& v, double p) {
  const std::size_t K = v.size();
  if (K < 2) return 0.0;
  double best = 0.0;
  for (unsigned long mask = 0; mask < (1UL << K); ++mask) {
    double acc = 0.0;
    int prev = -1;
    for (std::size_t i = 0; i < K; ++i) {
      if (!(mask & (1UL << i))) continue;
      if (prev >= 0) acc += std::pow(std::abs(v[i] - v[prev]), p);
      prev = static_cast<int>(i);
    }
    best = std::max(best, acc);
  }
  return std::pow(best, 1.0 / p);
}

}  // namespace oracle
