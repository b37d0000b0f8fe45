#pragma once
// Closed forms for received power under unit transmit power and no direct
// channel: the single-connected optimum, Cauchy-Schwarz bounds for group and
// fully connected networks, and their Rayleigh expectations and gains.

#include <cstddef>
#include <span>

#include "ris/architecture.hpp"
#include "ris/matrix.hpp"

namespace ris::scaling {

enum class ChannelKind { LoS, Rayleigh };

struct ScalingQuery {
  std::size_t n_i = 1;
  std::size_t n_g = 1;  // n_g = n_i is fully connected
  ChannelKind channel_kind = ChannelKind::Rayleigh;

  // Throws DomainError unless n_g divides n_i.
  void validate() const;
};

struct SingleOptimum {
  arch::PhaseParams theta;
  double power = 0.0;
};

// theta_n = -arg(h_ri[n] h_it[n]); power = (sum |h_ri[n] h_it[n]|)^2.
SingleOptimum single_connected_optimum(std::span<const cplx> h_ri, std::span<const cplx> h_it);

// ||h_ri||^2 ||h_it||^2
double fully_connected_bound(std::span<const cplx> h_ri, std::span<const cplx> h_it);

// (sum_g ||h_ri,g|| ||h_it,g||)^2
double group_connected_bound(std::span<const cplx> h_ri, std::span<const cplx> h_it,
                             std::size_t n_g);

// Bound matching the topology: single optimum, group bound or fully bound.
double topology_bound(std::span<const cplx> h_ri, std::span<const cplx> h_it,
                      const arch::Topology& topology);

// Gamma(n + 1/2) / Gamma(n) through log-gamma.
double gamma_half_ratio(double n);

// E[bound] over h_ri, h_it ~ CN(0, I):
// N_I N_G + (N_I/N_G)(N_I/N_G - 1) (Gamma(N_G + 1/2) / Gamma(N_G))^4.
// Throws DomainError for a LoS query.
double expected_power_rayleigh(const ScalingQuery& q);

struct GainReport {
  double gain_group = 1.0;
  double gain_fully = 1.0;
  double delta_elements = 0.0;  // element_reduction(gain_group)
};

// Expected group (n_g) and fully connected power over the single-connected
// expectation at the same n_i.
GainReport power_gain(const ScalingQuery& q);

// (1/N_G^2) (Gamma(N_G + 1/2) / (Gamma(N_G) Gamma(3/2)))^4
double limit_gain_group(std::size_t n_g);
// 16 / pi^2
double limit_gain_fully();

// 1 - 1/sqrt(gain). Throws DomainError for gain < 1.
double element_reduction(double gain);

}  // namespace ris::scaling
