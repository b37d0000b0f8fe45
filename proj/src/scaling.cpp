#include "ris/scaling.hpp"

#include <cmath>
#include <numbers>

#include "ris/error.hpp"
#include "ris/kernels.hpp"

namespace ris::scaling {

void ScalingQuery::validate() const {
  if (n_i == 0 || n_g == 0 || n_i % n_g != 0) {
    throw DomainError("group size " + std::to_string(n_g) + " does not divide n_i = " +
                      std::to_string(n_i));
  }
}

namespace {

void require_same_length(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DomainError("h_ri and h_it lengths differ");
}

}  // namespace

SingleOptimum single_connected_optimum(std::span<const cplx> h_ri, std::span<const cplx> h_it) {
  require_same_length(h_ri, h_it);
  std::vector<double> theta(h_ri.size());
  for (std::size_t n = 0; n < h_ri.size(); ++n) theta[n] = -arch::phase_of(h_ri[n] * h_it[n]);
  const double amp = kernels::cabsdot(h_ri, h_it);
  return {arch::PhaseParams(std::move(theta)), amp * amp};
}

double fully_connected_bound(std::span<const cplx> h_ri, std::span<const cplx> h_it) {
  require_same_length(h_ri, h_it);
  return kernels::cnorm2(h_ri) * kernels::cnorm2(h_it);
}

double group_connected_bound(std::span<const cplx> h_ri, std::span<const cplx> h_it,
                             std::size_t n_g) {
  require_same_length(h_ri, h_it);
  ScalingQuery{h_ri.size(), n_g}.validate();
  double amp = 0.0;
  for (std::size_t g = 0; g < h_ri.size(); g += n_g) {
    amp += std::sqrt(kernels::cnorm2(h_ri.subspan(g, n_g)) * kernels::cnorm2(h_it.subspan(g, n_g)));
  }
  return amp * amp;
}

double topology_bound(std::span<const cplx> h_ri, std::span<const cplx> h_it,
                      const arch::Topology& topology) {
  if (h_ri.size() != topology.n_i()) throw DomainError("channel length does not match topology");
  switch (topology.kind()) {
    case arch::TopologyKind::Single:
      return single_connected_optimum(h_ri, h_it).power;
    case arch::TopologyKind::Fully:
      return fully_connected_bound(h_ri, h_it);
    case arch::TopologyKind::Group:
      break;
  }
  return group_connected_bound(h_ri, h_it, topology.n_g());
}

double gamma_half_ratio(double n) { return std::exp(std::lgamma(n + 0.5) - std::lgamma(n)); }

double expected_power_rayleigh(const ScalingQuery& q) {
  q.validate();
  if (q.channel_kind != ChannelKind::Rayleigh) {
    throw DomainError("expected_power_rayleigh needs a Rayleigh query");
  }
  const double n_i = static_cast<double>(q.n_i);
  const double n_g = static_cast<double>(q.n_g);
  const double groups = n_i / n_g;
  return n_i * n_g + groups * (groups - 1.0) * std::pow(gamma_half_ratio(n_g), 4);
}

GainReport power_gain(const ScalingQuery& q) {
  q.validate();
  const double single = expected_power_rayleigh({q.n_i, 1, q.channel_kind});
  GainReport r;
  r.gain_group = expected_power_rayleigh(q) / single;
  r.gain_fully = expected_power_rayleigh({q.n_i, q.n_i, q.channel_kind}) / single;
  r.delta_elements = element_reduction(r.gain_group);
  return r;
}

double limit_gain_group(std::size_t n_g) {
  if (n_g == 0) throw DomainError("group size must be positive");
  const double ng = static_cast<double>(n_g);
  // Gamma(3/2) = sqrt(pi) / 2
  const double r = gamma_half_ratio(ng) / (0.5 * std::sqrt(std::numbers::pi));
  return std::pow(r, 4) / (ng * ng);
}

double limit_gain_fully() { return 16.0 / (std::numbers::pi * std::numbers::pi); }

double element_reduction(double gain) {
  if (!(gain >= 1.0)) throw DomainError("element reduction needs a gain of at least 1");
  return 1.0 - 1.0 / std::sqrt(gain);
}

}  // namespace ris::scaling
