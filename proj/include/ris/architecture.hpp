#pragma once
// Reconfigurable impedance network topologies and the scattering matrix
// Theta they realize: diagonal phases (single connected), or block-diagonal
// complex symmetric unitary blocks from real symmetric reactances.

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ris/matrix.hpp"
#include "ris/network.hpp"

namespace ris::arch {

enum class TopologyKind { Single, Group, Fully };

class Topology {
 public:
  static Topology single(std::size_t n_i);
  static Topology fully(std::size_t n_i);
  // n_g = 1 normalizes to Single, n_g = n_i to Fully.
  static Topology group(std::size_t n_i, std::size_t n_g);

  TopologyKind kind() const noexcept { return kind_; }
  std::size_t n_i() const noexcept { return n_i_; }
  std::size_t n_g() const noexcept { return n_g_; }
  std::size_t groups() const noexcept { return n_i_ / n_g_; }
  // Free reactance entries per block, n_g (n_g + 1) / 2.
  std::size_t block_params() const noexcept { return n_g_ * (n_g_ + 1) / 2; }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Topology(TopologyKind kind, std::size_t n_i, std::size_t n_g);

  TopologyKind kind_;
  std::size_t n_i_;
  std::size_t n_g_;
};

const char* kind_name(TopologyKind kind);

// Position of (r, c), r <= c, in a row-major packed upper triangle of order n.
constexpr std::size_t packed_index(std::size_t n, std::size_t r, std::size_t c) {
  if (r > c) std::swap(r, c);
  return r * n - r * (r - 1) / 2 + (c - r);
}

// Real symmetric reactance blocks X_g in ohms, one per group, stored as
// packed upper triangles so symmetry holds by construction.
class ReactanceParams {
 public:
  explicit ReactanceParams(Topology topology);
  ReactanceParams(Topology topology, std::vector<double> packed);

  // Diagonal-only reactances, e.g. from single-connected phases.
  static ReactanceParams from_diagonal(Topology topology, std::span<const double> x);

  const Topology& topology() const noexcept { return topology_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t group, std::size_t r, std::size_t c) const;
  double& operator()(std::size_t group, std::size_t r, std::size_t c);

  // Dense symmetric block as a complex matrix with zero imaginary part.
  ComplexMatrix block(std::size_t group) const;

 private:
  Topology topology_;
  std::vector<double> values_;
};

class PhaseParams {
 public:
  PhaseParams() = default;
  // Wraps every angle into [0, 2 pi). Throws DomainError on non-finite input.
  explicit PhaseParams(std::vector<double> thetas);

  std::span<const double> thetas() const noexcept { return thetas_; }
  std::size_t size() const noexcept { return thetas_.size(); }

 private:
  std::vector<double> thetas_;
};

// Angle in [0, 2 pi); arg(0) is taken as 0.
double wrap_angle(double theta);
double phase_of(cplx z);

ComplexMatrix theta_from_phases(const PhaseParams& p);

// Theta_g = (j X_g + Z0 I)^-1 (j X_g - Z0 I), assembled block-diagonally.
ComplexMatrix theta_from_reactance(const ReactanceParams& r, net::ReferenceImpedance z0);

// Inverse Cayley map per block: X_g = Im(Z0 (I + Theta_g)(I - Theta_g)^-1).
// Throws DomainError when some I - Theta_g is singular (an eigenvalue at +1,
// reachable only as a limit of unbounded reactance).
ReactanceParams reactance_from_theta(const ComplexMatrix& theta, const Topology& topology,
                                     net::ReferenceImpedance z0);

using BranchMap = std::map<std::pair<std::size_t, std::size_t>, cplx>;

// Z_I from its admittance: off-diagonal -1/Z_nm, diagonal 1/Z_n + sum_k 1/Z_nk.
// Branch keys are unordered port pairs (n != m). Throws DomainError on a zero
// impedance or bad port index, NumericalError on a singular admittance.
ComplexMatrix impedance_network_from_components(const BranchMap& branch_impedances,
                                                std::span<const cplx> ground_impedances);

struct ThetaValidation {
  std::vector<double> symmetry_defect;   // per block, ||Theta_g - Theta_g^T||_F
  std::vector<double> unitarity_defect;  // per block, ||Theta_g^H Theta_g - I||_F
  double off_block_leakage = 0.0;        // max |entry| outside the block support
  double tolerance = 1e-8;
  bool passed = false;
};

ThetaValidation validate_theta(const ComplexMatrix& theta, const Topology& topology,
                               double tolerance = 1e-8);

struct ComponentBudget {
  std::size_t count = 0;
};

ComponentBudget component_budget(const Topology& topology);

}  // namespace ris::arch
