#include "zk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "zk/errors.hpp"

namespace zk::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string frame_csv_rows(const Field& f, double t) {
  const Field p = f.physical();
  const Grid2D& g = p.grid();
  std::string out;
  out.reserve(g.size() * 64);
  const std::string ts = format_double(t);
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      out += ts;
      out += ',' + std::to_string(ix) + ',' + std::to_string(iy) + ',' + format_double(g.x(ix)) + ',' +
             format_double(g.y(iy)) + ',' + format_double(p(ix, iy).real()) + '\n';
    }
  return out;
}

Field read_frame_csv(const std::filesystem::path& path, double* time) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind(kFrameHeader, 0) != 0)
    throw DataError(path.string() + ": expected header '" + kFrameHeader + "'");
  struct Row {
    double t;
    int i, j;
    double x, y, u;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Row r{};
    if (std::sscanf(line.c_str(), "%lf,%d,%d,%lf,%lf,%lf", &r.t, &r.i, &r.j, &r.x, &r.y, &r.u) != 6)
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    rows.push_back(r);
  }
  if (rows.empty()) throw DataError(path.string() + ": no rows");
  int nx = 0, ny = 0;
  for (const Row& r : rows) {
    if (r.i < 0 || r.j < 0) throw DataError(path.string() + ": negative index");
    if (r.t != rows[0].t) throw DataError(path.string() + ": more than one frame");
    nx = std::max(nx, r.i + 1);
    ny = std::max(ny, r.j + 1);
  }
  if (nx < 2 || ny < 2 || rows.size() != static_cast<std::size_t>(nx) * ny)
    throw DataError(path.string() + ": rows do not form a full grid");
  std::vector<double> samples(rows.size(), std::nan(""));
  double dx = 0.0, dy = 0.0;
  for (const Row& r : rows) {
    samples[static_cast<std::size_t>(r.j) * nx + r.i] = r.u;
    if (r.i == 1) dx = r.x;
    if (r.j == 1) dy = r.y;
  }
  for (double s : samples)
    if (std::isnan(s)) throw DataError(path.string() + ": duplicate or missing grid point");
  if (!(dx > 0.0) || !(dy > 0.0)) throw DataError(path.string() + ": cannot infer grid spacing");
  if (time) *time = rows[0].t;
  return Field::from_samples(Grid2D(nx, ny, dx * nx, dy * ny), samples);
}

}  // namespace zk::io
