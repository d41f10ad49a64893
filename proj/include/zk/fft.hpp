#pragma once

#include <complex>
#include <span>

// Thin FFTW wrapper. Plans are created once per shape under a lock and then
// executed on caller-owned buffers, which FFTW allows from any thread.
namespace zk::fft {

using cplx = std::complex<double>;

/// Unnormalized in-place 2D transform of an ny × nx row-major array with
/// kernel e^{-i(ξx+ηy)}.
void forward_2d(int nx, int ny, std::span<cplx> data);
/// Unnormalized in-place 2D transform with kernel e^{+i(ξx+ηy)}.
void inverse_2d(int nx, int ny, std::span<cplx> data);

/// Unnormalized in-place 1D transforms of arbitrary length.
void forward_1d(std::span<cplx> data);
void inverse_1d(std::span<cplx> data);

}  // namespace zk::fft
