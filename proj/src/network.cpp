#include "ris/network.hpp"

#include <cmath>
#include <sstream>

#include "ris/error.hpp"

namespace ris::net {

ReferenceImpedance::ReferenceImpedance(double ohms) : ohms_(ohms) {
  if (!(ohms > 0.0) || !std::isfinite(ohms)) {
    throw DomainError("reference impedance must be positive and finite");
  }
}

cplx reflection_coefficient(cplx z, ReferenceImpedance z0) {
  const cplx den = z + z0.ohms();
  if (den == cplx{}) throw DomainError("reflection coefficient undefined for z = -z0");
  return (z - z0.ohms()) / den;
}

ComplexMatrix z_to_s(const ComplexMatrix& z, ReferenceImpedance z0) {
  if (!z.is_square()) throw DomainError("z_to_s: impedance matrix must be square");
  const auto n = z.rows();
  const ComplexMatrix shift = z0.ohms() * ComplexMatrix::identity(n);
  return solve_checked(z + shift, z - shift, "z_to_s (Z + Z0 I)");
}

ComplexMatrix s_to_z(const ComplexMatrix& s, ReferenceImpedance z0) {
  if (!s.is_square()) throw DomainError("s_to_z: scattering matrix must be square");
  const auto n = s.rows();
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  // (I + S) and (I - S) commute, so (I + S)(I - S)^-1 = (I - S)^-1 (I + S).
  try {
    return z0.ohms() * solve_checked(eye - s, eye + s, "s_to_z (I - S)");
  } catch (const NumericalError& e) {
    throw DomainError(std::string(e.what()) + " (open-circuit port)");
  }
}

std::size_t PortCounts::count(Port p) const noexcept {
  switch (p) {
    case Port::T:
      return t;
    case Port::I:
      return i;
    case Port::R:
      return r;
  }
  return 0;
}

std::size_t PortCounts::offset(Port p) const noexcept {
  switch (p) {
    case Port::T:
      return 0;
    case Port::I:
      return t;
    case Port::R:
      return t + i;
  }
  return 0;
}

ComplexMatrix partition_block(const ComplexMatrix& m, PortCounts ports, Port row, Port col) {
  if (m.rows() != ports.total() || m.cols() != ports.total()) {
    throw DomainError("partition_block: matrix does not match port counts");
  }
  return m.block(ports.offset(row), ports.offset(col), ports.count(row), ports.count(col));
}

PartitionedScattering::PartitionedScattering(ComplexMatrix s, PortCounts ports)
    : s_(std::move(s)), ports_(ports) {
  if (!s_.is_square() || s_.rows() != ports_.total()) {
    throw DomainError("scattering matrix dimension does not match port counts");
  }
  if (!s_.all_finite()) throw DomainError("scattering matrix has non-finite entries");
}

PartitionedScattering PartitionedScattering::reciprocal(const ComplexMatrix& s, PortCounts ports) {
  PartitionedScattering out(s, ports);
  const double defect = out.reciprocity_defect();
  if (defect > tolerance::structural) {
    std::ostringstream msg;
    msg << "scattering matrix is not reciprocal (||S - S^T||_F = " << defect << ")";
    throw DomainError(msg.str());
  }
  return out;
}

PartitionedScattering PartitionedScattering::from_full(const ComplexMatrix& s, PortCounts ports) {
  return {s, ports};
}

ComplexMatrix PartitionedScattering::block(Port row, Port col) const {
  return partition_block(s_, ports_, row, col);
}

namespace {

void require_passive_diagonal(const ComplexMatrix& g, const char* name) {
  if (!g.is_square()) throw DomainError(std::string(name) + " must be square");
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (r != c && g(r, c) != cplx{}) {
        throw DomainError(std::string(name) + " must be diagonal");
      }
    }
    if (std::abs(g(r, r)) > 1.0 + tolerance::structural) {
      throw DomainError(std::string(name) + " has |gamma| > 1 (active termination)");
    }
  }
}

}  // namespace

TerminationSet::TerminationSet(ComplexMatrix gamma_t, ComplexMatrix gamma_r, ComplexMatrix b_s_t)
    : gamma_t_(std::move(gamma_t)), gamma_r_(std::move(gamma_r)), b_s_t_(std::move(b_s_t)) {
  require_passive_diagonal(gamma_t_, "gamma_t");
  require_passive_diagonal(gamma_r_, "gamma_r");
  if (b_s_t_.cols() != 1 || b_s_t_.rows() != gamma_t_.rows()) {
    throw DomainError("wave source vector must be an N_T x 1 column");
  }
}

TerminationSet TerminationSet::from_impedances(std::span<const cplx> source_impedances,
                                               std::span<const cplx> load_impedances,
                                               std::span<const cplx> source_voltages,
                                               ReferenceImpedance z0) {
  if (source_impedances.size() != source_voltages.size()) {
    throw DomainError("one source voltage per transmit antenna required");
  }
  std::vector<cplx> gt, gr, bs;
  for (cplx z : source_impedances) gt.push_back(reflection_coefficient(z, z0));
  for (cplx z : load_impedances) gr.push_back(reflection_coefficient(z, z0));
  for (cplx v : source_voltages) bs.push_back(0.5 * v);
  return {ComplexMatrix::diagonal(gt), ComplexMatrix::diagonal(gr), ComplexMatrix::column(bs)};
}

TerminationSet TerminationSet::matched(std::size_t n_r, std::span<const cplx> source_voltages) {
  std::vector<cplx> bs;
  for (cplx v : source_voltages) bs.push_back(0.5 * v);
  const auto n_t = source_voltages.size();
  return {ComplexMatrix::zeros(n_t, n_t), ComplexMatrix::zeros(n_r, n_r),
          ComplexMatrix::column(bs)};
}

ComplexMatrix termination_matrix(const TerminationSet& term, const ComplexMatrix& theta) {
  if (!theta.is_square()) throw DomainError("theta must be square");
  const ComplexMatrix blocks[] = {term.gamma_t(), theta, term.gamma_r()};
  return block_diagonal(blocks);
}

NetworkWaves solve_network_waves(const PartitionedScattering& s, const TerminationSet& term,
                                 const ComplexMatrix& theta) {
  const PortCounts ports = s.ports();
  if (term.gamma_t().rows() != ports.t || term.gamma_r().rows() != ports.r ||
      theta.rows() != ports.i) {
    throw DomainError("terminations do not match the port partition");
  }
  const auto n = ports.total();
  const ComplexMatrix gamma = termination_matrix(term, theta);
  const ComplexMatrix system = ComplexMatrix::identity(n) - gamma * s.full();

  // T = S (I - Gamma S)^-1  <=>  T^T = (I - Gamma S)^-T S^T; solve the
  // transposed system so a single LU covers every column of T.
  LuDecomposition lu(system.transpose());
  const double cond = lu.condition();
  if (!(cond <= tolerance::max_condition)) {
    const auto sv = singular_values(system);
    std::ostringstream msg;
    msg << "terminated network is resonant: I - Gamma S is singular (smallest singular value "
        << sv.back() << ", condition " << cond << ")";
    throw ResonanceError(msg.str(), cond, sv.back());
  }
  ComplexMatrix t = lu.solve(s.full().transpose()).transpose();

  ComplexMatrix b_s(n, 1);
  b_s.set_block(0, 0, term.b_s_t());
  ComplexMatrix b = t * b_s;
  ComplexMatrix a = b_s + gamma * b;
  return {std::move(a), std::move(b), std::move(t)};
}

}  // namespace ris::net
