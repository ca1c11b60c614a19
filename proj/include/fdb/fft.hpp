#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fdb {

// In-place iterative radix-2 FFT. n must be a power of two.
// inverse = true applies the conjugate transform without the 1/n factor.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse = false);

// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace fdb
