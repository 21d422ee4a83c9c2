#include <cmath>

#include "nflab/kernels.hpp"

namespace nflab::kernels {

namespace {

void scale_real(cd* data, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) data[i] *= w[i];
}

double weighted_norm2(const cd* a, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real() * w[i];
    const double im = a[i].imag() * w[i];
    s += re * re + im * im;
  }
  return s;
}

void multiply(const cd* a, const cd* b, cd* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    const double im = a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    out[i] = cd(re, im);
  }
}

void multiply_accumulate(cd* acc, const cd* a, const cd* b, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    const double im = a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    acc[i] += cd(c * re, c * im);
  }
}

void magnitude(const cd* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::hypot(a[i].real(), a[i].imag());
}

}  // namespace

const Table& scalar() {
  static const Table t{"scalar", scale_real, weighted_norm2, multiply, multiply_accumulate,
                       magnitude};
  return t;
}

}  // namespace nflab::kernels
