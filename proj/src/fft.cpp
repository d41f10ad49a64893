#include "zk/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace zk::fft {
namespace {

using PlanKey = std::tuple<int, int, int>;  // (n0, n1, sign); n0 == 0 marks 1D

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(int n0, int n1, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard lock(plan_mutex());
  const PlanKey key{n0, n1, sign};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const std::size_t count = n0 == 0 ? static_cast<std::size_t>(n1)
                                    : static_cast<std::size_t>(n0) * n1;
  std::vector<cplx> scratch(count);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = n0 == 0 ? fftw_plan_dft_1d(n1, buf, buf, sign, flags)
                           : fftw_plan_dft_2d(n0, n1, buf, buf, sign, flags);
  cache.emplace(key, plan);
  return plan;
}

void run(fftw_plan plan, std::span<cplx> data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward_2d(int nx, int ny, std::span<cplx> data) { run(get_plan(ny, nx, FFTW_FORWARD), data); }
void inverse_2d(int nx, int ny, std::span<cplx> data) { run(get_plan(ny, nx, FFTW_BACKWARD), data); }

void forward_1d(std::span<cplx> data) {
  run(get_plan(0, static_cast<int>(data.size()), FFTW_FORWARD), data);
}
void inverse_1d(std::span<cplx> data) {
  run(get_plan(0, static_cast<int>(data.size()), FFTW_BACKWARD), data);
}

}  // namespace zk::fft
