#pragma once
// Reference computations that do not share code paths with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "ris/matrix.hpp"

namespace ris::testing {

// Plain triple loop.
inline ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::complex<double> s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

// [[a, b], [c, d]]^-1 = [[d, -b], [-c, a]] / (ad - bc)
inline ComplexMatrix inverse_2x2(const ComplexMatrix& m) {
  const auto det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return {{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
}

// b <- S (b_s + Gamma b), iterated from b = 0.
inline ComplexMatrix fixed_point_waves(const ComplexMatrix& s, const ComplexMatrix& gamma,
                                       const ComplexMatrix& b_s, int iterations = 200) {
  ComplexMatrix b(b_s.rows(), 1);
  for (int k = 0; k < iterations; ++k) b = naive_product(s, b_s + naive_product(gamma, b));
  return b;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic;
  double p_value;
};

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

// max over the 2x2 complex symmetric unitary matrices
// Theta = e^{j phi} O(t) diag(1, e^{j a}) O(t)^T of |h Theta g|^2. The common
// phase never changes the modulus, so the search is over (t, a).
inline double grid_search_2x2(const std::vector<std::complex<double>>& h,
                              const std::vector<std::complex<double>>& g, double step) {
  double best = 0.0;
  for (double t = 0.0; t < std::numbers::pi; t += step) {
    const double c = std::cos(t), s = std::sin(t);
    for (double a = 0.0; a < 2.0 * std::numbers::pi; a += step) {
      const auto e = std::polar(1.0, a);
      const std::complex<double> t00 = c * c + s * s * e, t01 = c * s * (1.0 - e),
                                 t11 = s * s + c * c * e;
      const auto v = h[0] * (t00 * g[0] + t01 * g[1]) + h[1] * (t01 * g[0] + t11 * g[1]);
      best = std::max(best, std::norm(v));
    }
  }
  return best;
}

}  // namespace ris::testing
