// AVX2 + FMA kernels. Complex values are interleaved (re, im), so one
// 256-bit register carries two complex numbers.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace ris::kernels::detail {
namespace {

inline const double* as_doubles(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// lanes (0 - 1 + 2 - 3)
inline double hsum_alternating(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[2]) - (t[1] + t[3]);
}

cplx cdotu_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d acc_direct = _mm256_setzero_pd();
  __m256d acc_cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d ysw = _mm256_permute_pd(yv, 0b0101);
    acc_direct = _mm256_fmadd_pd(xv, yv, acc_direct);
    acc_cross = _mm256_fmadd_pd(xv, ysw, acc_cross);
  }
  double re = hsum_alternating(acc_direct);
  double im = hsum(acc_cross);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx cdotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d acc_direct = _mm256_setzero_pd();
  __m256d acc_cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d ysw = _mm256_permute_pd(yv, 0b0101);
    acc_direct = _mm256_fmadd_pd(xv, yv, acc_direct);
    acc_cross = _mm256_fmadd_pd(xv, ysw, acc_cross);
  }
  double re = hsum(acc_direct);
  // lanes hold (xr*yi, xi*yr); conj(x)*y has im = xr*yi - xi*yr
  double im = hsum_alternating(acc_cross);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void caxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xsw = _mm256_permute_pd(xv, 0b0101);
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xsw));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + a.real() * xr - a.imag() * xi,
                y[i].imag() + a.real() * xi + a.imag() * xr);
  }
}

double cnorm2_avx2(std::size_t n, const cplx* x) {
  const double* xd = as_doubles(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

double cabsdot_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    // (|x0|^2, |y0|^2, |x1|^2, |y1|^2)
    const __m256d mags = _mm256_hadd_pd(_mm256_mul_pd(xv, xv), _mm256_mul_pd(yv, yv));
    const __m256d prod = _mm256_mul_pd(mags, _mm256_permute_pd(mags, 0b0101));
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(prod));
  }
  // every product appears twice in acc
  double s = 0.5 * hsum(acc);
  for (; i < n; ++i) s += std::sqrt(std::norm(x[i]) * std::norm(y[i]));
  return s;
}

double ddot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void daxpy2_avx2(std::size_t n, double a, const double* x, double b,
                 const double* y, double* out) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d o = _mm256_loadu_pd(out + i);
    o = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), o);
    o = _mm256_fmadd_pd(bv, _mm256_loadu_pd(y + i), o);
    _mm256_storeu_pd(out + i, o);
  }
  for (; i < n; ++i) out[i] += a * x[i] + b * y[i];
}

}  // namespace

const KernelTable& make_avx2_table() {
  static const KernelTable table{
      Isa::Avx2,   cdotu_avx2,   cdotc_avx2, caxpy_avx2,
      cnorm2_avx2, cabsdot_avx2, ddot_avx2,  daxpy2_avx2,
  };
  return table;
}

}  // namespace ris::kernels::detail
