#pragma once

#include <complex>
#include <vector>

namespace nflab::fft {

using cd = std::complex<double>;

// Unnormalized in-place DFT over a row-major array with the given extents.
// sign = -1 is exp(-i...), sign = +1 is exp(+i...).
void transform_nd(std::vector<cd>& data, const std::vector<int>& dims, int sign);

// 1-D transforms along the slowest axis of an (n0 x inner) row-major array.
void transform_slow_axis(std::vector<cd>& data, int n0, std::size_t inner, int sign);

// 1-D transforms along the fastest axis of an (outer x n1) row-major array.
void transform_fast_axis(std::vector<cd>& data, std::size_t outer, int n1, int sign);

}  // namespace nflab::fft
