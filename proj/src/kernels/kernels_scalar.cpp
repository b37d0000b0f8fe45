// Scalar reference kernels. These define the semantics every SIMD variant
// is tested against.

#include <cmath>

#include "kernels_impl.hpp"

namespace ris::kernels::detail {
namespace {

cplx cdotu_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx cdotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void caxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
  }
}

double cnorm2_scalar(std::size_t n, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return s;
}

double cabsdot_scalar(std::size_t n, const cplx* x, const cplx* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double px = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    const double py = y[i].real() * y[i].real() + y[i].imag() * y[i].imag();
    s += std::sqrt(px * py);
  }
  return s;
}

double ddot_scalar(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void daxpy2_scalar(std::size_t n, double a, const double* x, double b,
                   const double* y, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a * x[i] + b * y[i];
}

}  // namespace

const KernelTable& make_scalar_table() {
  static const KernelTable table{
      Isa::Scalar,   cdotu_scalar, cdotc_scalar, caxpy_scalar,
      cnorm2_scalar, cabsdot_scalar, ddot_scalar, daxpy2_scalar,
  };
  return table;
}

}  // namespace ris::kernels::detail
