#include "zk/spacetime.hpp"

#include <cmath>
#include <numbers>

#include "zk/errors.hpp"
#include "zk/fft.hpp"
#include "zk/spectral.hpp"

namespace zk {

std::string to_string(Form form) { return form == Form::Original ? "original" : "symmetrized"; }

Form parse_form(std::string_view name) {
  if (name == "original") return Form::Original;
  if (name == "symmetrized") return Form::Symmetrized;
  throw ConfigError("form: expected 'original' or 'symmetrized', got '" + std::string(name) + "'");
}

double hann_weight(std::size_t k, std::size_t K) {
  if (K < 2) return 1.0;
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(K - 1));
  return s * s;
}

SpaceTimeField::SpaceTimeField(Grid2D grid, double t0, double dt, std::vector<Field> frames,
                               Window window)
    : grid_(grid), t0_(t0), dt_(dt), window_(window) {
  if (frames.empty()) throw UsageError("space-time field: no frames");
  if (frames.size() > 1 && !(dt > 0.0)) throw UsageError("space-time field: dt must be positive");
  frames_.reserve(frames.size());
  for (Field& f : frames) {
    if (!(f.grid() == grid_)) throw UsageError("space-time field: frame grid mismatch");
    frames_.push_back(f.is_spectral() ? std::move(f) : f.spectral());
  }
}

SpaceTimeField SpaceTimeField::free_solution(const Field& u0, Form form, double t0, double dt,
                                             std::size_t count, Window window) {
  std::vector<Field> frames;
  frames.reserve(count);
  const Field s = u0.spectral();
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + dt * static_cast<double>(k);
    frames.push_back(apply_multiplier(s, [&](Wavevector z) {
      const double ph = t * dispersion_symbol(form, z);
      return cplx(std::cos(ph), std::sin(ph));
    }));
  }
  return SpaceTimeField(u0.grid(), t0, dt, std::move(frames), window);
}

std::vector<double> SpaceTimeField::window_weights() const {
  std::vector<double> w(size(), 1.0);
  if (window_ == Window::Hann)
    for (std::size_t k = 0; k < size(); ++k) w[k] = hann_weight(k, size());
  return w;
}

SpaceTimeField SpaceTimeField::with_window(Window w) const {
  SpaceTimeField out = *this;
  out.window_ = w;
  return out;
}

SpaceTimeField SpaceTimeField::operator-(const SpaceTimeField& other) const {
  if (other.size() != size() || !(other.grid_ == grid_))
    throw UsageError("space-time field: shape mismatch in subtraction");
  std::vector<Field> out;
  out.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) out.push_back(frames_[k] - other.frames_[k]);
  return SpaceTimeField(grid_, t0_, dt_, std::move(out), window_);
}

double window_leakage_scale(const SpaceTimeField& stf) {
  const double span = static_cast<double>(stf.size()) * stf.dt();
  const double lobes = stf.window() == Window::Hann ? 2.0 : 1.0;
  return lobes * 2.0 * std::numbers::pi / span;
}

namespace {

int signed_bin(std::size_t m, std::size_t K) {
  const auto mi = static_cast<long long>(m);
  const auto Ki = static_cast<long long>(K);
  return static_cast<int>(mi < (Ki + 1) / 2 ? mi : mi - Ki);
}

}  // namespace

TwistedSpectrum twisted_spectrum(const SpaceTimeField& stf, Form form) {
  const std::size_t K = stf.size();
  if (K < 2) throw ResolutionError("twisted spectrum: need at least two time samples");
  const Grid2D& g = stf.grid();
  TwistedSpectrum out{g, form, stf.t0(), stf.dt(), K, std::vector<double>(K),
                      std::vector<cplx>(g.size() * K)};
  for (std::size_t m = 0; m < K; ++m)
    out.modulation[m] = 2.0 * std::numbers::pi * signed_bin(m, K) / (static_cast<double>(K) * stf.dt());
  const std::vector<double> w = stf.window_weights();
  std::vector<cplx> line(K);
  for (int iy = 0; iy < g.ny(); ++iy) {
    for (int ix = 0; ix < g.nx(); ++ix) {
      const std::size_t p = static_cast<std::size_t>(iy) * g.nx() + ix;
      const double omega = dispersion_symbol(form, g.wavevector(ix, iy));
      for (std::size_t k = 0; k < K; ++k) {
        const double ph = -stf.time(k) * omega;
        line[k] = w[k] * cplx(std::cos(ph), std::sin(ph)) * stf.frame(k).values()[p];
      }
      fft::forward_1d(line);
      for (std::size_t m = 0; m < K; ++m) out.coeffs[p * K + m] = line[m] / static_cast<double>(K);
    }
  }
  return out;
}

SpaceTimeField untwist(const TwistedSpectrum& spec) {
  const Grid2D& g = spec.grid;
  const std::size_t K = spec.count;
  std::vector<std::vector<cplx>> frames(K, std::vector<cplx>(g.size()));
  std::vector<cplx> line(K);
  for (int iy = 0; iy < g.ny(); ++iy) {
    for (int ix = 0; ix < g.nx(); ++ix) {
      const std::size_t p = static_cast<std::size_t>(iy) * g.nx() + ix;
      const double omega = dispersion_symbol(spec.form, g.wavevector(ix, iy));
      for (std::size_t m = 0; m < K; ++m) line[m] = spec.coeffs[p * K + m];
      fft::inverse_1d(line);
      for (std::size_t k = 0; k < K; ++k) {
        const double ph = (spec.t0 + spec.dt * static_cast<double>(k)) * omega;
        frames[k][p] = line[k] * cplx(std::cos(ph), std::sin(ph));
      }
    }
  }
  std::vector<Field> out;
  out.reserve(K);
  for (auto& f : frames) out.push_back(Field::from_coefficients(g, std::move(f)));
  return SpaceTimeField(g, spec.t0, spec.dt, std::move(out), Window::None);
}

SpaceTimeField modulation_project(const SpaceTimeField& stf, double M, Form form,
                                  ModulationBand band) {
  if (!(M > 0.0) || std::abs(std::log2(M) - std::round(std::log2(M))) > 1e-12)
    throw UsageError("modulation_project: M must be a positive power of two");
  if (stf.size() < 8) throw ResolutionError("modulation_project: need at least 8 time samples");
  const double nyquist = std::numbers::pi / stf.dt();
  if (M / 2.0 > nyquist)
    throw ResolutionError("modulation_project: M/2 exceeds the temporal Nyquist frequency");
  TwistedSpectrum spec = twisted_spectrum(stf, form);
  const std::size_t K = spec.count;
  std::vector<double> mult(K);
  for (std::size_t m = 0; m < K; ++m) {
    const double mu = spec.modulation[m];
    switch (band) {
      case ModulationBand::Shell: mult[m] = lp_bump(mu / M); break;
      case ModulationBand::AtLeast: mult[m] = 1.0 - smooth_cutoff(2.0 * mu / M); break;
      case ModulationBand::Below: mult[m] = smooth_cutoff(2.0 * mu / M); break;
    }
  }
  for (std::size_t p = 0; p < spec.grid.size(); ++p)
    for (std::size_t m = 0; m < K; ++m) spec.coeffs[p * K + m] *= mult[m];
  return untwist(spec);
}

}  // namespace zk
