#pragma once
// Inverse-Hessian BFGS with Armijo backtracking and an optional box
// [-bound, bound] on every coordinate (trial points are projected).

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace ris::opt {

// Returns f(x) and writes the gradient into `grad`.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct BfgsOptions {
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-6;  // infinity norm
  double step_tolerance = 1e-10;     // infinity norm of the accepted step
  double armijo_c = 1e-4;
  double shrink = 0.5;
  std::size_t max_backtracks = 60;
  double bound = std::numeric_limits<double>::infinity();
};

enum class StopReason { Gradient, Step, MaxIterations, LineSearch };

struct BfgsResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> grad;
  std::size_t iterations = 0;
  StopReason reason = StopReason::MaxIterations;
  bool hit_bound = false;

  bool converged() const noexcept {
    return reason == StopReason::Gradient || reason == StopReason::Step;
  }
};

// Called after every accepted step with (iteration, x, f).
using IterateCallback = std::function<void(std::size_t, std::span<const double>, double)>;

BfgsResult bfgs_minimize(const ObjectiveFn& fn, std::vector<double> x0,
                         const BfgsOptions& options = {}, const IterateCallback& on_iterate = {});

}  // namespace ris::opt
