#include "ris/architecture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ris/error.hpp"

namespace ris::arch {

Topology::Topology(TopologyKind kind, std::size_t n_i, std::size_t n_g)
    : kind_(kind), n_i_(n_i), n_g_(n_g) {}

Topology Topology::single(std::size_t n_i) {
  if (n_i == 0) throw DomainError("topology needs at least one element");
  return {TopologyKind::Single, n_i, 1};
}

Topology Topology::fully(std::size_t n_i) {
  if (n_i == 0) throw DomainError("topology needs at least one element");
  if (n_i == 1) return single(1);
  return {TopologyKind::Fully, n_i, n_i};
}

Topology Topology::group(std::size_t n_i, std::size_t n_g) {
  if (n_i == 0) throw DomainError("topology needs at least one element");
  if (n_g == 0 || n_i % n_g != 0) {
    throw DomainError("group size " + std::to_string(n_g) + " does not divide " +
                      std::to_string(n_i) + " elements");
  }
  if (n_g == 1) return single(n_i);
  if (n_g == n_i) return fully(n_i);
  return {TopologyKind::Group, n_i, n_g};
}

const char* kind_name(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Single:
      return "single";
    case TopologyKind::Group:
      return "group";
    case TopologyKind::Fully:
      return "fully";
  }
  return "unknown";
}

ReactanceParams::ReactanceParams(Topology topology)
    : topology_(topology), values_(topology.groups() * topology.block_params(), 0.0) {}

ReactanceParams::ReactanceParams(Topology topology, std::vector<double> packed)
    : topology_(topology), values_(std::move(packed)) {
  if (values_.size() != topology_.groups() * topology_.block_params()) {
    throw DomainError("reactance vector length does not match topology");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw DomainError("reactance entries must be finite");
  }
}

ReactanceParams ReactanceParams::from_diagonal(Topology topology, std::span<const double> x) {
  if (x.size() != topology.n_i()) throw DomainError("one reactance per element required");
  ReactanceParams out(topology);
  const auto ng = topology.n_g();
  for (std::size_t n = 0; n < x.size(); ++n) out(n / ng, n % ng, n % ng) = x[n];
  return out;
}

double ReactanceParams::operator()(std::size_t group, std::size_t r, std::size_t c) const {
  const auto ng = topology_.n_g();
  return values_[group * topology_.block_params() + packed_index(ng, r, c)];
}

double& ReactanceParams::operator()(std::size_t group, std::size_t r, std::size_t c) {
  const auto ng = topology_.n_g();
  return values_[group * topology_.block_params() + packed_index(ng, r, c)];
}

ComplexMatrix ReactanceParams::block(std::size_t group) const {
  const auto ng = topology_.n_g();
  ComplexMatrix x(ng, ng);
  for (std::size_t r = 0; r < ng; ++r)
    for (std::size_t c = 0; c < ng; ++c) x(r, c) = (*this)(group, r, c);
  return x;
}

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta, two_pi);
  if (w < 0.0) w += two_pi;
  // fmod of a tiny negative value can round up to exactly 2 pi
  if (w >= two_pi) w = 0.0;
  return w;
}

double phase_of(cplx z) { return z == cplx{} ? 0.0 : wrap_angle(std::arg(z)); }

PhaseParams::PhaseParams(std::vector<double> thetas) : thetas_(std::move(thetas)) {
  for (double& t : thetas_) t = wrap_angle(t);
}

ComplexMatrix theta_from_phases(const PhaseParams& p) {
  std::vector<cplx> d;
  d.reserve(p.size());
  for (double t : p.thetas()) d.push_back(std::polar(1.0, t));
  return ComplexMatrix::diagonal(d);
}

ComplexMatrix theta_from_reactance(const ReactanceParams& r, net::ReferenceImpedance z0) {
  const Topology& topo = r.topology();
  const auto ng = topo.n_g();
  const double z = z0.ohms();
  ComplexMatrix theta(topo.n_i(), topo.n_i());
  const ComplexMatrix eye = ComplexMatrix::identity(ng);
  for (std::size_t g = 0; g < topo.groups(); ++g) {
    // Theta_g = I - 2 Z0 (j X_g + Z0 I)^-1; eigenvalues of j X_g + Z0 I are
    // Z0 + j lambda, so the solve never meets a singular matrix.
    const ComplexMatrix a = cplx{0.0, 1.0} * r.block(g) + z * eye;
    const ComplexMatrix inv = LuDecomposition(a).solve((2.0 * z) * eye);
    theta.set_block(g * ng, g * ng, eye - inv);
  }
  return theta;
}

ReactanceParams reactance_from_theta(const ComplexMatrix& theta, const Topology& topology,
                                     net::ReferenceImpedance z0) {
  if (theta.rows() != topology.n_i() || theta.cols() != topology.n_i()) {
    throw DomainError("theta dimension does not match topology");
  }
  const auto ng = topology.n_g();
  ReactanceParams out(topology);
  for (std::size_t g = 0; g < topology.groups(); ++g) {
    const ComplexMatrix block = theta.block(g * ng, g * ng, ng, ng);
    const ComplexMatrix z = net::s_to_z(block, z0);
    for (std::size_t r = 0; r < ng; ++r)
      for (std::size_t c = r; c < ng; ++c) out(g, r, c) = 0.5 * (z(r, c) + z(c, r)).imag();
  }
  return out;
}

ComplexMatrix impedance_network_from_components(const BranchMap& branch_impedances,
                                                std::span<const cplx> ground_impedances) {
  const auto n = ground_impedances.size();
  if (n == 0) throw DomainError("impedance network needs at least one port");
  ComplexMatrix y(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (ground_impedances[k] == cplx{}) throw DomainError("zero ground impedance");
    y(k, k) += 1.0 / ground_impedances[k];
  }
  for (const auto& [ports, zb] : branch_impedances) {
    const auto [p, q] = ports;
    if (p >= n || q >= n || p == q) throw DomainError("invalid branch port pair");
    if (zb == cplx{}) throw DomainError("zero branch impedance");
    const cplx yb = 1.0 / zb;
    y(p, p) += yb;
    y(q, q) += yb;
    y(p, q) -= yb;
    y(q, p) -= yb;
  }
  return solve_checked(y, ComplexMatrix::identity(n), "impedance network admittance");
}

ThetaValidation validate_theta(const ComplexMatrix& theta, const Topology& topology,
                               double tolerance) {
  if (theta.rows() != topology.n_i() || theta.cols() != topology.n_i()) {
    throw DomainError("theta dimension does not match topology");
  }
  ThetaValidation rep;
  rep.tolerance = tolerance;
  const auto ng = topology.n_g();
  bool ok = true;
  for (std::size_t g = 0; g < topology.groups(); ++g) {
    const ComplexMatrix b = theta.block(g * ng, g * ng, ng, ng);
    rep.symmetry_defect.push_back(symmetry_defect(b));
    rep.unitarity_defect.push_back(unitarity_defect(b));
    ok = ok && rep.symmetry_defect.back() <= tolerance && rep.unitarity_defect.back() <= tolerance;
  }
  for (std::size_t r = 0; r < theta.rows(); ++r) {
    for (std::size_t c = 0; c < theta.cols(); ++c) {
      if (r / ng != c / ng) rep.off_block_leakage = std::max(rep.off_block_leakage, std::abs(theta(r, c)));
    }
  }
  rep.passed = ok && rep.off_block_leakage <= tolerance && theta.all_finite();
  return rep;
}

ComponentBudget component_budget(const Topology& topology) {
  return {topology.n_i() * (topology.n_g() + 1) / 2};
}

}  // namespace ris::arch
