// NEON kernels for aarch64. One float64x2_t carries one complex value.

#include <arm_neon.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace ris::kernels::detail {
namespace {

inline const double* as_doubles(const cplx* p) {
  return reinterpret_cast<const double*>(p);
}
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

cplx cdotu_neon(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  float64x2_t acc_direct = vdupq_n_f64(0.0);
  float64x2_t acc_cross = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    acc_direct = vfmaq_f64(acc_direct, xv, yv);
    acc_cross = vfmaq_f64(acc_cross, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(acc_direct, 0) - vgetq_lane_f64(acc_direct, 1),
          vaddvq_f64(acc_cross)};
}

cplx cdotc_neon(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  float64x2_t acc_direct = vdupq_n_f64(0.0);
  float64x2_t acc_cross = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    acc_direct = vfmaq_f64(acc_direct, xv, yv);
    acc_cross = vfmaq_f64(acc_cross, xv, vextq_f64(yv, yv, 1));
  }
  return {vaddvq_f64(acc_direct),
          vgetq_lane_f64(acc_cross, 0) - vgetq_lane_f64(acc_cross, 1)};
}

void caxpy_neon(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const float64x2_t ar = vdupq_n_f64(a.real());
  // (-ai, +ai) against the swapped (xi, xr)
  const float64x2_t ai = {-a.imag(), a.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    float64x2_t yv = vld1q_f64(yd + 2 * i);
    yv = vfmaq_f64(yv, ar, xv);
    yv = vfmaq_f64(yv, ai, vextq_f64(xv, xv, 1));
    vst1q_f64(yd + 2 * i, yv);
  }
}

double cnorm2_neon(std::size_t n, const cplx* x) {
  const double* xd = as_doubles(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    acc = vfmaq_f64(acc, xv, xv);
  }
  return vaddvq_f64(acc);
}

double cabsdot_neon(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(xd + 2 * i);
    const float64x2_t yv = vld1q_f64(yd + 2 * i);
    const float64x2_t mags = vpaddq_f64(vmulq_f64(xv, xv), vmulq_f64(yv, yv));
    s += std::sqrt(vgetq_lane_f64(mags, 0) * vgetq_lane_f64(mags, 1));
  }
  return s;
}

double ddot_neon(std::size_t n, const double* x, const double* y) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void daxpy2_neon(std::size_t n, double a, const double* x, double b,
                 const double* y, double* out) {
  const float64x2_t av = vdupq_n_f64(a);
  const float64x2_t bv = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t o = vld1q_f64(out + i);
    o = vfmaq_f64(o, av, vld1q_f64(x + i));
    o = vfmaq_f64(o, bv, vld1q_f64(y + i));
    vst1q_f64(out + i, o);
  }
  for (; i < n; ++i) out[i] += a * x[i] + b * y[i];
}

}  // namespace

const KernelTable& make_neon_table() {
  static const KernelTable table{
      Isa::Neon,   cdotu_neon,   cdotc_neon, caxpy_neon,
      cnorm2_neon, cabsdot_neon, ddot_neon,  daxpy2_neon,
  };
  return table;
}

}  // namespace ris::kernels::detail
