#include "ris/bfgs.hpp"

#include <algorithm>
#include <cmath>

#include "ris/error.hpp"
#include "ris/kernels.hpp"

namespace ris::opt {
namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

BfgsResult bfgs_minimize(const ObjectiveFn& fn, std::vector<double> x0, const BfgsOptions& opt,
                         const IterateCallback& on_iterate) {
  if (!(opt.gradient_tolerance > 0.0) || !(opt.step_tolerance > 0.0)) {
    throw DomainError("BFGS tolerances must be positive");
  }
  const std::size_t n = x0.size();
  BfgsResult res;
  res.x = std::move(x0);
  for (double& v : res.x) {
    if (std::abs(v) > opt.bound) {
      v = std::clamp(v, -opt.bound, opt.bound);
      res.hit_bound = true;
    }
  }
  res.grad.assign(n, 0.0);
  res.f = fn(res.x, res.grad);
  if (n == 0) {
    res.reason = StopReason::Gradient;
    return res;
  }

  // Row-major inverse Hessian approximation, identity until the first
  // curvature pair rescales it.
  std::vector<double> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  bool scaled = false;

  std::vector<double> dir(n), x_new(n), g_new(n), s(n), y(n), w(n);
  auto row = [&](std::size_t i) { return std::span<double>(h.data() + i * n, n); };

  for (res.iterations = 0; res.iterations < opt.max_iterations;) {
    if (inf_norm(res.grad) <= opt.gradient_tolerance) {
      res.reason = StopReason::Gradient;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) dir[i] = -kernels::ddot(row(i), res.grad);
    double slope = kernels::ddot(dir, res.grad);
    if (!(slope < 0.0)) {
      // Lost descent: fall back to steepest descent and reset curvature.
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        h[i * n + i] = 1.0;
        dir[i] = -res.grad[i];
      }
      scaled = false;
      slope = kernels::ddot(dir, res.grad);
    }

    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    bool clipped = false;
    for (std::size_t bt = 0; bt <= opt.max_backtracks; ++bt, step *= opt.shrink) {
      clipped = false;
      for (std::size_t i = 0; i < n; ++i) {
        x_new[i] = res.x[i] + step * dir[i];
        if (std::abs(x_new[i]) > opt.bound) {
          x_new[i] = std::clamp(x_new[i], -opt.bound, opt.bound);
          clipped = true;
        }
      }
      for (std::size_t i = 0; i < n; ++i) s[i] = x_new[i] - res.x[i];
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= res.f + opt.armijo_c * kernels::ddot(res.grad, s)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.reason = StopReason::LineSearch;
      return res;
    }
    res.hit_bound = res.hit_bound || clipped;
    ++res.iterations;

    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - res.grad[i];
    std::swap(res.x, x_new);
    std::swap(res.grad, g_new);
    res.f = f_new;
    if (on_iterate) on_iterate(res.iterations, res.x, res.f);

    if (inf_norm(s) <= opt.step_tolerance) {
      res.reason = StopReason::Step;
      return res;
    }

    const double ys = kernels::ddot(y, s);
    const double yy = kernels::ddot(y, y);
    if (!(ys > 1e-12 * std::sqrt(yy * kernels::ddot(s, s)))) continue;  // keep H positive definite
    if (!scaled) {
      const double gamma = ys / yy;
      for (std::size_t i = 0; i < n; ++i) h[i * n + i] = gamma;
      scaled = true;
    }
    // H += (rho^2 y'Hy + rho) s s' - rho (s w' + w s'),  w = H y
    const double rho = 1.0 / ys;
    for (std::size_t i = 0; i < n; ++i) w[i] = kernels::ddot(row(i), y);
    const double c_ss = rho * rho * kernels::ddot(y, w) + rho;
    for (std::size_t i = 0; i < n; ++i) {
      kernels::daxpy2(c_ss * s[i] - rho * w[i], s, -rho * s[i], w, row(i));
    }
  }
  res.reason = inf_norm(res.grad) <= opt.gradient_tolerance ? StopReason::Gradient
                                                             : StopReason::MaxIterations;
  return res;
}

}  // namespace ris::opt
