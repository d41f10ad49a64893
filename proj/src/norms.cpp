#include "zk/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zk/errors.hpp"
#include "zk/spectral.hpp"

namespace zk {

double NormReport::parameter(const std::string& key, double fallback) const {
  for (const auto& [k, v] : parameters)
    if (k == key) return v;
  return fallback;
}

std::string norm_report_csv_header() { return "name,value,s,b,p,q,r,caveat"; }

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double sum_sq_coefficients(const Field& f) {
  const Field s = f.spectral();
  double acc = 0.0;
  for (const cplx& c : s.values()) acc += std::norm(c);
  return acc;
}

}  // namespace

std::string to_csv_row(const NormReport& report) {
  std::string row = report.name + "," + fmt17(report.value);
  for (const char* key : {"s", "b", "p", "q", "r"}) {
    row += ",";
    const double v = report.parameter(key);
    if (!std::isnan(v)) row += fmt17(v);
  }
  std::string caveat = report.caveat;
  std::replace(caveat.begin(), caveat.end(), ',', ';');
  row += "," + caveat;
  return row;
}

double l2_norm(const Field& f) { return std::sqrt(f.grid().area() * sum_sq_coefficients(f)); }

double lr_norm(const Field& f, double r) {
  if (!(r >= 1.0)) throw UsageError("lr_norm: r must be >= 1");
  const Field p = f.physical();
  if (std::isinf(r)) {
    double m = 0.0;
    for (const cplx& c : p.values()) m = std::max(m, std::abs(c));
    return m;
  }
  const double cell = f.grid().area() / static_cast<double>(f.grid().size());
  double acc = 0.0;
  for (const cplx& c : p.values()) acc += std::pow(std::abs(c), r);
  return std::pow(cell * acc, 1.0 / r);
}

double sobolev_norm(const Field& f, double s) {
  const Field sp = f.spectral();
  const Grid2D& g = sp.grid();
  double acc = 0.0;
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const Wavevector z = g.wavevector(ix, iy);
      acc += std::pow(1.0 + z.xi * z.xi + z.eta * z.eta, s) * std::norm(sp(ix, iy));
    }
  return std::sqrt(g.area() * acc);
}

double homogeneous_sobolev_norm(const Field& f, double s) {
  const Field sp = f.spectral();
  const Grid2D& g = sp.grid();
  if (s < 0.0 && std::abs(sp(0, 0)) > 0.0)
    throw DomainError("homogeneous Sobolev norm with s < 0 requires a zero-mean field");
  double acc = 0.0;
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      if (ix == 0 && iy == 0) {
        if (s == 0.0) acc += std::norm(sp(0, 0));
        continue;
      }
      const Wavevector z = g.wavevector(ix, iy);
      acc += std::pow(z.xi * z.xi + z.eta * z.eta, s) * std::norm(sp(ix, iy));
    }
  return std::sqrt(g.area() * acc);
}

double besov_norm_2_1(const Field& f, double s) {
  double total = l2_norm(lp_project(f, 0));
  for (int N : lp_shells(f.grid())) total += std::pow(static_cast<double>(N), s) * l2_norm(lp_project(f, N));
  return total;
}

double mixed_lebesgue_norm(const SpaceTimeField& stf, double q, double r, bool apply_window) {
  if (!(q >= 1.0) || !(r >= 1.0)) throw UsageError("mixed_lebesgue_norm: q, r must be >= 1");
  const std::size_t K = stf.size();
  const std::vector<double> w = apply_window ? stf.window_weights() : std::vector<double>(K, 1.0);
  std::vector<double> inner(K);
  for (std::size_t k = 0; k < K; ++k) inner[k] = w[k] * lr_norm(stf.frame(k), r);
  if (std::isinf(q)) return *std::max_element(inner.begin(), inner.end());
  if (K == 1) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double weight = (k == 0 || k + 1 == K) ? 0.5 : 1.0;
    acc += weight * std::pow(inner[k], q);
  }
  return std::pow(stf.dt() * acc, 1.0 / q);
}

double space_time_l2(const SpaceTimeField& stf, bool apply_window) {
  const std::vector<double> w = apply_window ? stf.window_weights() : std::vector<double>(stf.size(), 1.0);
  const double dt = stf.size() > 1 ? stf.dt() : 1.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < stf.size(); ++k) {
    const double n = l2_norm(stf.frame(k));
    acc += w[k] * w[k] * n * n;
  }
  return std::sqrt(dt * acc);
}

NormReport xsb_norm(const SpaceTimeField& stf, double s, double b, Form form) {
  if (stf.size() < 8) throw ResolutionError("xsb_norm: need at least 8 time samples");
  const TwistedSpectrum spec = twisted_spectrum(stf, form);
  const Grid2D& g = spec.grid;
  const std::size_t K = spec.count;
  std::vector<double> mod_weight(K);
  for (std::size_t m = 0; m < K; ++m) mod_weight[m] = std::pow(1.0 + spec.modulation[m] * spec.modulation[m], b);
  double acc = 0.0;
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const Wavevector z = g.wavevector(ix, iy);
      const double sw = std::pow(1.0 + z.xi * z.xi + z.eta * z.eta, s);
      const std::size_t p = static_cast<std::size_t>(iy) * g.nx() + ix;
      double line = 0.0;
      for (std::size_t m = 0; m < K; ++m) line += mod_weight[m] * std::norm(spec.coeffs[p * K + m]);
      acc += sw * line;
    }
  NormReport rep;
  rep.name = "xsb";
  rep.value = std::sqrt(spec.dt * static_cast<double>(K) * g.area() * acc);
  rep.parameters = {{"s", s}, {"b", b}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "window=%s leakage_scale=%.6g samples=%zu",
                stf.window() == Window::Hann ? "hann" : "none", window_leakage_scale(stf), K);
  rep.caveat = buf;
  return rep;
}

double pvariation_norm(std::size_t count, const std::function<double(std::size_t, std::size_t)>& distance,
                       double p) {
  if (!(p >= 1.0)) throw UsageError("pvariation_norm: p must be >= 1");
  if (count < 2) return 0.0;
  std::vector<double> best(count, 0.0);
  for (std::size_t j = 1; j < count; ++j) {
    double top = 0.0;
    for (std::size_t i = 0; i < j; ++i) top = std::max(top, best[i] + std::pow(distance(i, j), p));
    best[j] = top;
  }
  return std::pow(best[count - 1], 1.0 / p);
}

double pvariation_norm(const std::vector<double>& samples, double p) {
  return pvariation_norm(samples.size(),
                         [&](std::size_t i, std::size_t j) { return std::abs(samples[j] - samples[i]); }, p);
}

double pvariation_norm(const std::vector<Field>& samples, double p) {
  std::vector<Field> spec;
  spec.reserve(samples.size());
  for (const Field& f : samples) spec.push_back(f.spectral());
  const double area = samples.empty() ? 0.0 : samples.front().grid().area();
  return pvariation_norm(
      spec.size(),
      [&](std::size_t i, std::size_t j) {
        const auto a = spec[i].values();
        const auto c = spec[j].values();
        double acc = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n) acc += std::norm(c[n] - a[n]);
        return std::sqrt(area * acc);
      },
      p);
}

std::vector<Field> twisted_frames(const SpaceTimeField& stf, Form form) {
  std::vector<Field> out;
  out.reserve(stf.size());
  for (std::size_t k = 0; k < stf.size(); ++k) {
    const double t = stf.time(k);
    out.push_back(apply_multiplier(stf.frame(k), [&](Wavevector z) {
      const double ph = -t * dispersion_symbol(form, z);
      return cplx(std::cos(ph), std::sin(ph));
    }));
  }
  return out;
}

double twisted_variation(const SpaceTimeField& stf, double p, Form form) {
  return pvariation_norm(twisted_frames(stf, form), p);
}

double windowed_twisted_variation(const SpaceTimeField& stf, double p, Form form) {
  std::vector<Field> seq;
  seq.reserve(stf.size() + 2);
  seq.push_back(Field::zeros(stf.grid()));
  for (Field& f : twisted_frames(stf, form)) seq.push_back(std::move(f));
  seq.push_back(Field::zeros(stf.grid()));
  return pvariation_norm(seq, p);
}

double y_half_proxy(const SpaceTimeField& stf, Form form, bool windowed) {
  const auto variation = [&](const SpaceTimeField& piece) {
    return windowed ? windowed_twisted_variation(piece, 2.0, form) : twisted_variation(piece, 2.0, form);
  };
  double total = variation(stf.map([](const Field& f) { return lp_project(f, 0); }));
  for (int N : lp_shells(stf.grid())) {
    const SpaceTimeField piece = stf.map([N](const Field& f) { return lp_project(f, N); });
    total += std::sqrt(static_cast<double>(N)) * variation(piece);
  }
  return total;
}

}  // namespace zk
