#include "zk/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zk/errors.hpp"
#include "zk/fft.hpp"

namespace zk {

void require_finite(std::span<const cplx> data, const char* what) {
  for (const cplx& c : data)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw DataError(std::string(what) + ": non-finite value");
}

Field::Field(Grid2D grid, Representation repr, std::vector<cplx> data)
    : grid_(grid), repr_(repr), data_(std::move(data)) {
  if (data_.size() != grid_.size())
    throw DataError("field: data size " + std::to_string(data_.size()) +
                    " does not match grid size " + std::to_string(grid_.size()));
  require_finite(data_, "field");
}

Field Field::zeros(const Grid2D& grid, Representation repr) {
  return Field(grid, repr, std::vector<cplx>(grid.size()));
}

Field Field::from_samples(const Grid2D& grid, std::span<const double> samples) {
  if (samples.size() != grid.size()) throw DataError("field: sample count does not match grid");
  std::vector<cplx> v(samples.begin(), samples.end());
  return Field(grid, Representation::Physical, std::move(v));
}

Field Field::from_coefficients(const Grid2D& grid, std::vector<cplx> coefficients) {
  return Field(grid, Representation::Spectral, std::move(coefficients));
}

cplx Field::coefficient(int j, int k) const {
  if (!grid_.contains_index(j, k)) return {};
  const Field& s = is_spectral() ? *this : spectral();
  return s(grid_.storage_x(j), grid_.storage_y(k));
}

Field Field::spectral() const {
  if (is_spectral()) return *this;
  std::vector<cplx> v = data_;
  fft::forward_2d(grid_.nx(), grid_.ny(), v);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (cplx& c : v) c *= scale;
  return Field(grid_, Representation::Spectral, std::move(v));
}

Field Field::physical() const {
  if (!is_spectral()) return *this;
  std::vector<cplx> v = data_;
  fft::inverse_2d(grid_.nx(), grid_.ny(), v);
  return Field(grid_, Representation::Physical, std::move(v));
}

std::vector<double> Field::real_samples() const {
  const Field p = physical();
  std::vector<double> out(p.size());
  std::transform(p.data_.begin(), p.data_.end(), out.begin(), [](cplx c) { return c.real(); });
  return out;
}

double Field::hermitian_defect() const {
  const Field s = spectral();
  double worst = 0.0;
  const int nx = grid_.nx(), ny = grid_.ny();
  for (int iy = 0; iy < ny; ++iy) {
    if (grid_.is_nyquist_y(iy)) continue;
    const int my = (ny - iy) % ny;
    for (int ix = 0; ix < nx; ++ix) {
      if (grid_.is_nyquist_x(ix)) continue;
      const int mx = (nx - ix) % nx;
      worst = std::max(worst, std::abs(s(ix, iy) - std::conj(s(mx, my))));
    }
  }
  return worst;
}

double Field::max_abs() const {
  double m = 0.0;
  for (const cplx& c : data_) m = std::max(m, std::abs(c));
  return m;
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw UsageError("field: grid mismatch in addition");
  if (repr_ != other.repr_) {
    *this = spectral();
    const Field o = other.spectral();
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  } else {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  }
  return *this;
}

Field& Field::operator-=(const Field& other) {
  Field neg = other;
  neg *= -1.0;
  return *this += neg;
}

Field& Field::operator*=(cplx scale) {
  for (cplx& c : data_) c *= scale;
  return *this;
}

Field to_spectral(const Field& f) { return f.spectral(); }
Field to_physical(const Field& f) { return f.physical(); }

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx scale, Field a) { return a *= scale; }
Field operator*(double scale, Field a) { return a *= cplx(scale, 0.0); }

}  // namespace zk
