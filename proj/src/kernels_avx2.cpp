// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "nflab/kernels.hpp"

namespace nflab::kernels {

namespace {

inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// [w0, w0, w1, w1]
inline __m256d dup_weights(const double* w) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void scale_real(cd* data, const double* w, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(data + i, _mm256_mul_pd(load2(data + i), dup_weights(w + i)));
  for (; i < n; ++i) data[i] *= w[i];
}

double weighted_norm2(const cd* a, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_mul_pd(load2(a + i), dup_weights(w + i));
    const __m256d v1 = _mm256_mul_pd(load2(a + i + 2), dup_weights(w + i + 2));
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double re = a[i].real() * w[i];
    const double im = a[i].imag() * w[i];
    s += re * re + im * im;
  }
  return s;
}

void multiply(const cd* a, const cd* b, cd* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, cmul(load2(a + i), load2(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_accumulate(cd* acc, const cd* a, const cd* b, double c, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    store2(acc + i, _mm256_fmadd_pd(cv, cmul(load2(a + i), load2(b + i)), load2(acc + i)));
  for (; i < n; ++i) acc[i] += c * (a[i] * b[i]);
}

void magnitude(const cd* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = load2(a + i);
    const __m256d v1 = load2(a + i + 2);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_permute4x64_pd(h, 0xD8)));
  }
  for (; i < n; ++i) out[i] = std::sqrt(a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
}

}  // namespace

const Table* avx2() {
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const Table t{"avx2", scale_real, weighted_norm2, multiply, multiply_accumulate,
                       magnitude};
  return ok ? &t : nullptr;
}

}  // namespace nflab::kernels
