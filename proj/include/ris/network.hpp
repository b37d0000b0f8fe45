#pragma once
// N-port wave relations: reflection coefficients, Z <-> S conversion and the
// terminated transmitter / RIS / receiver network b = S (I - Gamma S)^-1 b_s.

#include <cstddef>
#include <span>

#include "ris/matrix.hpp"

namespace ris::net {

class ReferenceImpedance {
 public:
  explicit ReferenceImpedance(double ohms = 50.0);
  double ohms() const noexcept { return ohms_; }

 private:
  double ohms_;
};

// (z - z0) / (z + z0). Throws DomainError for z = -z0.
cplx reflection_coefficient(cplx z, ReferenceImpedance z0);

// S = (Z + Z0 I)^-1 (Z - Z0 I). Throws NumericalError when Z + Z0 I is
// singular or ill-conditioned.
ComplexMatrix z_to_s(const ComplexMatrix& z, ReferenceImpedance z0);

// Z = Z0 (I + S)(I - S)^-1. Throws DomainError when I - S is singular
// (an ideal open circuit).
ComplexMatrix s_to_z(const ComplexMatrix& s, ReferenceImpedance z0);

enum class Port { T, I, R };

struct PortCounts {
  std::size_t t = 1;
  std::size_t i = 1;
  std::size_t r = 1;

  std::size_t total() const noexcept { return t + i + r; }
  std::size_t count(Port p) const noexcept;
  std::size_t offset(Port p) const noexcept;
};

class PartitionedScattering {
 public:
  // Checks reciprocity: ||S - S^T||_F <= tolerance::structural.
  static PartitionedScattering reciprocal(const ComplexMatrix& s, PortCounts ports);
  // No reciprocity check; for idealized models that drop one direction.
  static PartitionedScattering from_full(const ComplexMatrix& s, PortCounts ports);

  PortCounts ports() const noexcept { return ports_; }
  ComplexMatrix block(Port row, Port col) const;
  const ComplexMatrix& full() const noexcept { return s_; }
  double reciprocity_defect() const { return symmetry_defect(s_); }

  ComplexMatrix tt() const { return block(Port::T, Port::T); }
  ComplexMatrix ti() const { return block(Port::T, Port::I); }
  ComplexMatrix tr() const { return block(Port::T, Port::R); }
  ComplexMatrix it() const { return block(Port::I, Port::T); }
  ComplexMatrix ii() const { return block(Port::I, Port::I); }
  ComplexMatrix ir() const { return block(Port::I, Port::R); }
  ComplexMatrix rt() const { return block(Port::R, Port::T); }
  ComplexMatrix ri() const { return block(Port::R, Port::I); }
  ComplexMatrix rr() const { return block(Port::R, Port::R); }

 private:
  PartitionedScattering(ComplexMatrix s, PortCounts ports);

  ComplexMatrix s_;
  PortCounts ports_;
};

// Source/load reflection coefficients and the transmitter wave source.
class TerminationSet {
 public:
  // gamma_t: N_T x N_T diagonal; gamma_r: N_R x N_R diagonal; b_s_t: N_T x 1.
  // Every |gamma| must be <= 1 (passive terminations).
  TerminationSet(ComplexMatrix gamma_t, ComplexMatrix gamma_r, ComplexMatrix b_s_t);

  // b_s,T = v_s / 2; Gamma entries from the source and load impedances.
  static TerminationSet from_impedances(std::span<const cplx> source_impedances,
                                        std::span<const cplx> load_impedances,
                                        std::span<const cplx> source_voltages,
                                        ReferenceImpedance z0);

  // Gamma_T = Gamma_R = 0.
  static TerminationSet matched(std::size_t n_r, std::span<const cplx> source_voltages);

  const ComplexMatrix& gamma_t() const noexcept { return gamma_t_; }
  const ComplexMatrix& gamma_r() const noexcept { return gamma_r_; }
  const ComplexMatrix& b_s_t() const noexcept { return b_s_t_; }

 private:
  ComplexMatrix gamma_t_;
  ComplexMatrix gamma_r_;
  ComplexMatrix b_s_t_;
};

// Gamma = blkdiag(Gamma_T, Theta, Gamma_R)
ComplexMatrix termination_matrix(const TerminationSet& term, const ComplexMatrix& theta);

struct NetworkWaves {
  ComplexMatrix a;  // incident waves, a = b_s + Gamma b
  ComplexMatrix b;  // reflected waves, b = T b_s
  ComplexMatrix t;  // T = S (I - Gamma S)^-1
};

// Throws ResonanceError (with the smallest singular value of I - Gamma S)
// when the terminated network has no unique solution.
NetworkWaves solve_network_waves(const PartitionedScattering& s, const TerminationSet& term,
                                 const ComplexMatrix& theta);

// Extract block (row, col) of an N x N matrix partitioned like S.
ComplexMatrix partition_block(const ComplexMatrix& m, PortCounts ports, Port row, Port col);

}  // namespace ris::net
