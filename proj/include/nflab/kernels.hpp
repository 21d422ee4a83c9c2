#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace nflab::kernels {

using cd = std::complex<double>;

// Flat loops that dominate multiplier application, norms and physical products.
struct Table {
  const char* name;
  // data[i] *= w[i]
  void (*scale_real)(cd* data, const double* w, std::size_t n);
  // sum |a[i]|^2 w[i]^2
  double (*weighted_norm2)(const cd* a, const double* w, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*multiply)(const cd* a, const cd* b, cd* out, std::size_t n);
  // acc[i] += c * a[i] * b[i]
  void (*multiply_accumulate)(cd* acc, const cd* a, const cd* b, double c, std::size_t n);
  // out[i] = |a[i]|
  void (*magnitude)(const cd* a, double* out, std::size_t n);
};

const Table& scalar();
// nullptr when the CPU lacks AVX2/FMA.
const Table* avx2();

// Chosen once: AVX2 when available unless NFLAB_SIMD=scalar.
const Table& active();

}  // namespace nflab::kernels
