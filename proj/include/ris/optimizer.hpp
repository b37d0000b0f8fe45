#pragma once
// Received-power maximization over Theta. Single connected has a closed form;
// group and fully connected run BFGS over the free upper-triangular
// reactances of every block, so each iterate is feasible by construction.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ris/architecture.hpp"
#include "ris/channel.hpp"
#include "ris/network.hpp"

namespace ris::opt {

struct Objective {
  chan::ChannelRealization realization;
  bool include_direct = false;
  arch::Topology topology = arch::Topology::single(1);
  net::ReferenceImpedance z0{50.0};
  double p_t = 1.0;

  void validate() const;
};

struct SolverConfig {
  std::size_t max_iterations = 500;  // per BFGS run
  double gradient_tolerance = 1e-6;  // on the normalized objective
  double step_tolerance = 1e-10;
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
  // Stop once (bound - power) / bound falls to this; no start can do better.
  double bound_tolerance = 1e-9;
  // |X| entries are kept within this many ohms.
  double reactance_cap = 1e9;
  // Phase re-alignments of the blocks between BFGS runs of one start.
  std::size_t max_reanchors = 8;

  void validate() const;
};

struct SolveResult {
  ComplexMatrix theta;
  std::optional<arch::ReactanceParams> reactance;  // absent for Single
  arch::Topology topology = arch::Topology::single(1);
  double power = 0.0;          // P_T |h_RT + c|^2 with aligned phase, or P_T |c|^2
  double cascade_power = 0.0;  // P_T |c|^2
  double bound = 0.0;
  double gap = 0.0;  // (bound - power) / bound
  std::size_t iterations = 0;
  bool converged = false;
  bool capped = false;  // some reactance reached reactance_cap
  bool finite_difference_gradient = false;
  std::uint64_t seed = 0;
};

// Called on every accepted BFGS step with the current reactances (ohms) and
// the cascade power |h_ri Theta h_it|^2 of the raw channel.
using IterateTrace = std::function<void(const arch::ReactanceParams&, double)>;

SolveResult solve_single(const Objective& obj);
SolveResult solve_group(const Objective& obj, const SolverConfig& cfg,
                        const IterateTrace& trace = {});
// Dispatches on obj.topology.
SolveResult solve(const Objective& obj, const SolverConfig& cfg);

// f(X) = |h_ri Theta(X) h_it|^2 (no direct channel, unit transmit power).
double objective_value(const Objective& obj, const arch::ReactanceParams& x);
// d f / d X for every free upper-triangular entry, in 1/ohm, packed like x.
std::vector<double> objective_gradient(const Objective& obj, const arch::ReactanceParams& x);

// P_T (|h_rt| + |cascade|)^2: the cascade phase can always be rotated onto h_rt.
double align_direct_phase(cplx h_rt, cplx cascade, double p_t = 1.0);

}  // namespace ris::opt
