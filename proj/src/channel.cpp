#include "ris/channel.hpp"

#include <cmath>
#include <numbers>

#include "ris/error.hpp"
#include "ris/kernels.hpp"

namespace ris::chan {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point Geometry2D::element(std::size_t n) const {
  const double step = ris_spacing * wavelength;
  const double offset = (static_cast<double>(n) - 0.5 * static_cast<double>(n_i - 1)) * step;
  return {ris_center.x + offset, ris_center.y};
}

void Geometry2D::validate() const {
  if (n_i == 0) throw DomainError("geometry needs at least one RIS element");
  if (!(wavelength > 0.0) || !(ris_spacing > 0.0)) {
    throw DomainError("wavelength and element spacing must be positive");
  }
  if (!(distance(tx, rx) > 0.0) || !(distance(tx, ris_center) > 0.0) ||
      !(distance(rx, ris_center) > 0.0)) {
    throw DomainError("transmitter, receiver and RIS must be at distinct positions");
  }
  for (std::size_t n = 0; n < n_i; ++n) {
    if (!(distance(tx, element(n)) > 0.0) || !(distance(rx, element(n)) > 0.0)) {
      throw DomainError("RIS element coincides with a terminal");
    }
  }
}

double PathlossParams::alpha(Link link) const {
  switch (link) {
    case Link::RT:
      return alpha_rt;
    case Link::IT:
      return alpha_it;
    case Link::RI:
      return alpha_ri;
  }
  return 0.0;
}

void PathlossParams::validate() const {
  if (!(d0 > 0.0)) throw DomainError("pathloss reference distance must be positive");
  if (!(alpha_rt >= 0.0 && alpha_it >= 0.0 && alpha_ri >= 0.0)) {
    throw DomainError("pathloss exponents must be non-negative");
  }
  if (!std::isfinite(c0_db)) throw DomainError("reference pathloss must be finite");
}

double pathloss(double d, const PathlossParams& p, Link link) {
  if (!(d > 0.0)) throw DomainError("pathloss distance must be positive");
  p.validate();
  return std::pow(10.0, p.c0_db / 10.0) * std::pow(d / p.d0, -p.alpha(link));
}

double RicianSpec::db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<cplx> draw_los_vector(std::size_t n, RandomStream& rng) {
  std::vector<cplx> h(n);
  for (auto& v : h) v = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  return h;
}

std::vector<cplx> draw_rayleigh_vector(std::size_t n, RandomStream& rng) {
  std::vector<cplx> h(n);
  for (auto& v : h) v = rng.complex_normal();
  return h;
}

ComplexMatrix draw_rician_matrix(std::size_t rows, std::size_t cols, double k,
                                 const ComplexMatrix& los, RandomStream& rng) {
  if (!(k >= 0.0)) throw DomainError("Rician factor must be non-negative");
  if (los.rows() != rows || los.cols() != cols) {
    throw DomainError("LoS component has the wrong shape");
  }
  const double w_los = std::isinf(k) ? 1.0 : std::sqrt(k / (1.0 + k));
  const double w_nlos = std::isinf(k) ? 0.0 : std::sqrt(1.0 / (1.0 + k));
  ComplexMatrix h(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      h(r, c) = w_los * los(r, c) + w_nlos * rng.complex_normal();
  return h;
}

std::vector<cplx> geometric_los_vector(const Geometry2D& g, Point from) {
  std::vector<cplx> h(g.n_i);
  for (std::size_t n = 0; n < g.n_i; ++n) {
    h[n] = std::polar(1.0, -2.0 * std::numbers::pi * distance(from, g.element(n)) / g.wavelength);
  }
  return h;
}

void ChannelRealization::validate() const {
  if (h_it.size() != h_ri.size()) throw DomainError("h_it and h_ri lengths differ");
  auto finite = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  bool ok = finite(h_rt);
  for (cplx v : h_it) ok = ok && finite(v);
  for (cplx v : h_ri) ok = ok && finite(v);
  if (!ok) throw DomainError("channel realization has non-finite entries");
}

cplx assemble_simplified_channel(const ChannelRealization& real, const ComplexMatrix& theta) {
  const auto n = real.n_i();
  if (real.h_ri.size() != n || theta.rows() != n || theta.cols() != n) {
    throw DomainError("assemble_simplified_channel: dimension mismatch");
  }
  // h_ri (Theta h_it), row by row
  cplx cascade{};
  for (std::size_t r = 0; r < n; ++r) {
    cascade += real.h_ri[r] * kernels::cdotu(theta.row_span(r), real.h_it);
  }
  return real.h_rt + cascade;
}

ComplexMatrix assemble_simplified_channel(const ComplexMatrix& h_rt, const ComplexMatrix& h_ri,
                                          const ComplexMatrix& theta, const ComplexMatrix& h_it) {
  if (h_ri.cols() != theta.rows() || theta.cols() != h_it.rows() || h_ri.rows() != h_rt.rows() ||
      h_it.cols() != h_rt.cols()) {
    throw DomainError("assemble_simplified_channel: dimension mismatch");
  }
  return h_rt + h_ri * (theta * h_it);
}

ComplexMatrix assemble_general_channel(const net::PartitionedScattering& s,
                                       const net::TerminationSet& term, const ComplexMatrix& theta) {
  using net::Port;
  const auto waves = net::solve_network_waves(s, term, theta);
  const auto ports = s.ports();
  const ComplexMatrix t_rt = net::partition_block(waves.t, ports, Port::R, Port::T);
  const ComplexMatrix t_tt = net::partition_block(waves.t, ports, Port::T, Port::T);
  const ComplexMatrix eye_t = ComplexMatrix::identity(ports.t);
  const ComplexMatrix eye_r = ComplexMatrix::identity(ports.r);
  const ComplexMatrix inner = eye_t + term.gamma_t() * t_tt + t_tt;
  // H = L inner^-1  <=>  H^T = inner^-T L^T
  const ComplexMatrix lhs = (term.gamma_r() + eye_r) * t_rt;
  return solve_checked(inner.transpose(), lhs.transpose(), "general channel (I + G_T T_TT + T_TT)")
      .transpose();
}

net::PartitionedScattering scattering_from_channels(const ChannelRealization& real,
                                                    bool reciprocal) {
  real.validate();
  const auto n = real.n_i();
  const net::PortCounts ports{1, n, 1};
  ComplexMatrix s(ports.total(), ports.total());
  const std::size_t t = 0, r = n + 1;
  s(r, t) = real.h_rt;
  for (std::size_t k = 0; k < n; ++k) {
    s(1 + k, t) = real.h_it[k];
    s(r, 1 + k) = real.h_ri[k];
  }
  if (reciprocal) {
    s(t, r) = real.h_rt;
    for (std::size_t k = 0; k < n; ++k) {
      s(t, 1 + k) = real.h_it[k];
      s(1 + k, r) = real.h_ri[k];
    }
    return net::PartitionedScattering::reciprocal(s, ports);
  }
  return net::PartitionedScattering::from_full(s, ports);
}

ChannelRealization draw_rayleigh_realization(std::size_t n_i, RandomStream& rng,
                                             bool with_direct) {
  ChannelRealization real;
  real.seed = rng.seed();
  real.stream = rng.stream();
  real.h_it = draw_rayleigh_vector(n_i, rng);
  real.h_ri = draw_rayleigh_vector(n_i, rng);
  if (with_direct) real.h_rt = rng.complex_normal();
  return real;
}

namespace {

std::vector<cplx> rician_vector(const std::vector<cplx>& los, double k, RandomStream& rng) {
  const auto m = draw_rician_matrix(los.size(), 1, k, ComplexMatrix::column(los), rng);
  return {m.data().begin(), m.data().end()};
}

}  // namespace

ChannelRealization draw_geometry_realization(const Geometry2D& g, const PathlossParams& p,
                                             const RicianSpec& k, RandomStream& rng) {
  g.validate();
  p.validate();
  ChannelRealization real;
  real.seed = rng.seed();
  real.stream = rng.stream();

  const double l_rt = pathloss(distance(g.tx, g.rx), p, Link::RT);
  const double l_it = pathloss(distance(g.tx, g.ris_center), p, Link::IT);
  const double l_ri = pathloss(distance(g.rx, g.ris_center), p, Link::RI);

  const cplx los_rt = std::polar(1.0, -2.0 * std::numbers::pi * distance(g.tx, g.rx) / g.wavelength);
  real.h_rt = std::sqrt(l_rt) * rician_vector({los_rt}, k.k_rt, rng)[0];
  real.h_it = rician_vector(geometric_los_vector(g, g.tx), k.k_it, rng);
  real.h_ri = rician_vector(geometric_los_vector(g, g.rx), k.k_ri, rng);
  for (auto& v : real.h_it) v *= std::sqrt(l_it);
  for (auto& v : real.h_ri) v *= std::sqrt(l_ri);
  return real;
}

}  // namespace ris::chan
