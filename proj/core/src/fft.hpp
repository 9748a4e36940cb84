// fft.hpp: Thin wrapper over FFTW for in-place complex transforms

#pragma once

#include <complex>
#include <vector>

namespace sln::detail {

// Unnormalised transforms: forward uses exp(-2 pi i jk / n), backward exp(+2 pi i jk / n).
// Plans are created once per length and shared; execution is thread-safe.
void fft_forward(std::vector<std::complex<double>>& data);
void fft_backward(std::vector<std::complex<double>>& data);

} // namespace sln::detail
