#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "ris/architecture.hpp"
#include "ris/channel.hpp"
#include "ris/error.hpp"

using namespace ris;
using namespace ris::chan;
using ris::testing::Gen;

namespace {
const net::ReferenceImpedance z50(50.0);

ComplexMatrix random_theta(Gen& gen, const arch::Topology& topo) {
  arch::ReactanceParams r(topo);
  for (auto& v : r.values()) v = gen.gauss(100.0);
  return arch::theta_from_reactance(r, z50);
}

ChannelRealization random_realization(Gen& gen, std::size_t n) {
  ChannelRealization r;
  r.h_rt = gen.cgauss();
  r.h_it = gen.cvector(n);
  r.h_ri = gen.cvector(n);
  return r;
}
}  // namespace

TEST(Pathloss, Examples) {
  const PathlossParams p;
  EXPECT_NEAR(pathloss(10.0, p, Link::IT), 1e-5, 1e-20);
  EXPECT_NEAR(pathloss(10.0, p, Link::RT) / 3.1622776601683795e-7, 1.0, 1e-12);
  EXPECT_NEAR(pathloss(1.0, p, Link::RI), 1e-3, 1e-18);
  EXPECT_THROW(pathloss(0.0, p, Link::RT), DomainError);
  EXPECT_THROW(pathloss(-1.0, p, Link::RT), DomainError);
}

TEST(Pathloss, DecreasesWithDistance) {
  const PathlossParams p;
  Gen gen(41);
  for (int i = 0; i < 1000; ++i) {
    const double a = gen.uniform(0.1, 100), b = a + gen.uniform(1e-3, 100);
    for (auto link : {Link::RT, Link::IT, Link::RI}) EXPECT_GT(pathloss(a, p, link), pathloss(b, p, link));
  }
}

TEST(Geometry, ElementsAndValidation) {
  const Geometry2D g;
  EXPECT_NO_THROW(g.validate());
  const auto e0 = g.element(0), e1 = g.element(1);
  EXPECT_NEAR(distance(e0, e1), g.ris_spacing * g.wavelength, 1e-12);
  EXPECT_NEAR(e0.y, g.ris_center.y, 1e-15);
  Geometry2D bad = g;
  bad.tx = g.element(3);
  EXPECT_THROW(bad.validate(), DomainError);
  const auto los = geometric_los_vector(g, g.tx);
  ASSERT_EQ(los.size(), g.n_i);
  for (std::size_t n = 0; n < g.n_i; ++n) {
    EXPECT_NEAR(std::abs(los[n]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(los[n] - std::polar(1.0, -2 * std::numbers::pi * distance(g.tx, g.element(n)) / g.wavelength)),
                0.0, 1e-9);
  }
}

TEST(Draws, LosHasUnitModulus) {
  RandomStream rng(1, 0);
  for (const auto& h : draw_los_vector(1000, rng)) EXPECT_NEAR(std::abs(h), 1.0, 1e-14);
}

TEST(Draws, RayleighMoments) {
  RandomStream rng(2, 0);
  const auto h = draw_rayleigh_vector(1'000'000, rng);
  cplx mean{};
  double power = 0.0;
  for (const auto& v : h) {
    mean += v;
    power += std::norm(v);
  }
  EXPECT_LT(std::abs(mean) / 1e6, 5e-3);
  EXPECT_NEAR(power / 1e6, 1.0, 5e-3);
}

TEST(Draws, RayleighNormMatchesChiDistribution) {
  // E||h|| for h ~ CN(0, I_4) is Gamma(4.5) / Gamma(4).
  const double expected = 1.93862139942790815;
  RandomStream rng(3, 0);
  double sum = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const auto h = draw_rayleigh_vector(4, rng);
    double p = 0.0;
    for (const auto& v : h) p += std::norm(v);
    sum += std::sqrt(p);
  }
  EXPECT_NEAR(sum / n / expected, 1.0, 0.01);
}

TEST(Draws, RicianWithZeroFactorIsRayleigh) {
  RandomStream a(4, 0), b(4, 1), l(4, 2);
  const int n = 100'000;
  const auto los = ComplexMatrix::row(draw_los_vector(n, l));
  const auto rice = draw_rician_matrix(1, n, 0.0, los, a);
  const auto ray = draw_rayleigh_vector(n, b);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = std::abs(rice(0, i));
    y[i] = std::abs(ray[i]);
  }
  EXPECT_GT(ris::testing::ks_two_sample(x, y).p_value, 0.01);
}

TEST(Draws, RicianLimitsAndMoments) {
  RandomStream rng(5, 0), l(5, 1);
  const int n = 200'000;
  const auto los = ComplexMatrix::row(draw_los_vector(n, l));
  const auto near_los = draw_rician_matrix(1, n, 1e12, los, rng);
  EXPECT_LE((near_los - los).max_abs(), 1e-4);
  const auto pure = draw_rician_matrix(1, n, std::numeric_limits<double>::infinity(), los, rng);
  EXPECT_EQ(pure, los);

  const auto k1 = draw_rician_matrix(1, n, 1.0, los, rng);
  cplx bias{};
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    bias += k1(0, i) * std::conj(los(0, i));
    power += std::norm(k1(0, i));
  }
  EXPECT_NEAR(bias.real() / n, std::sqrt(0.5), 5e-3);
  EXPECT_NEAR(power / n, 1.0, 1e-2);
  EXPECT_THROW(draw_rician_matrix(1, n, -1.0, los, rng), DomainError);
  EXPECT_THROW(draw_rician_matrix(2, n, 1.0, los, rng), DomainError);
}

TEST(SimplifiedChannel, Examples) {
  ChannelRealization r;
  r.h_it = {1.0, 1.0};
  r.h_ri = {1.0, 1.0};
  EXPECT_NEAR(std::abs(assemble_simplified_channel(r, ComplexMatrix::identity(2)) - 2.0), 0.0, 1e-15);
  const cplx d[] = {1.0, -1.0};
  EXPECT_NEAR(std::abs(assemble_simplified_channel(r, ComplexMatrix::diagonal(d))), 0.0, 1e-15);
  r.h_rt = {0.0, 3.0};
  EXPECT_NEAR(std::abs(assemble_simplified_channel(r, ComplexMatrix::identity(2)) - cplx(2.0, 3.0)), 0.0, 1e-15);
  EXPECT_THROW(assemble_simplified_channel(r, ComplexMatrix::identity(3)), DomainError);
  r.h_ri.push_back(1.0);
  EXPECT_THROW(r.validate(), DomainError);
}

TEST(SimplifiedChannel, LinearInTheta) {
  Gen gen(42);
  for (int i = 0; i < 500; ++i) {
    const auto n = gen.index(1, 8);
    auto r = random_realization(gen, n);
    r.h_rt = 0.0;
    const auto a = gen.cmatrix(n, n), b = gen.cmatrix(n, n);
    const cplx alpha = gen.cgauss(), beta = gen.cgauss();
    const auto lhs = assemble_simplified_channel(r, alpha * a + beta * b);
    const auto rhs = alpha * assemble_simplified_channel(r, a) + beta * assemble_simplified_channel(r, b);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(rhs)) * n);
  }
}

TEST(SimplifiedChannel, MatrixFormAgreesWithScalarForm) {
  Gen gen(43);
  for (int i = 0; i < 200; ++i) {
    const auto n = gen.index(1, 8);
    const auto r = random_realization(gen, n);
    const auto theta = random_theta(gen, arch::Topology::fully(n));
    const auto m = assemble_simplified_channel(ComplexMatrix{{r.h_rt}}, ComplexMatrix::row(r.h_ri), theta,
                                               ComplexMatrix::column(r.h_it));
    EXPECT_LE(std::abs(m(0, 0) - assemble_simplified_channel(r, theta)), 1e-12 * n);
  }
}

TEST(GeneralChannel, ReducesToSimplifiedWithoutMutualCoupling) {
  Gen gen(44);
  const cplx v[] = {1.0};
  const auto term = net::TerminationSet::matched(1, v);
  for (int i = 0; i < 1000; ++i) {
    const auto n = gen.index(1, 8);
    const auto r = random_realization(gen, n);
    const std::size_t groups[] = {1, n};
    const auto topo = arch::Topology::group(n, groups[i % 2]);
    const auto theta = random_theta(gen, topo);
    const auto s = scattering_from_channels(r, false);
    const auto h = assemble_general_channel(s, term, theta);
    const auto ref = assemble_simplified_channel(r, theta);
    EXPECT_LE(std::abs(h(0, 0) - ref), 1e-12 * std::max(1.0, std::abs(ref)) * n);
  }
}

TEST(GeneralChannel, SmallStructuralScatteringPerturbsLittle) {
  Gen gen(45);
  const cplx v[] = {1.0};
  const auto term = net::TerminationSet::matched(1, v);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 8;
    auto r = random_realization(gen, n);
    // keep every path well inside the unit circle so the network stays passive
    for (auto& x : r.h_it) x *= 0.1;
    for (auto& x : r.h_ri) x *= 0.1;
    r.h_rt *= 0.1;
    const auto theta = random_theta(gen, arch::Topology::fully(n));
    const auto base = scattering_from_channels(r, false);
    auto full = base.full();
    const auto e = gen.contraction_symmetric(n, 1e-4);
    full.set_block(1, 1, e);
    const auto perturbed = net::PartitionedScattering::from_full(full, net::PortCounts{1, n, 1});
    const auto h0 = assemble_general_channel(base, term, theta)(0, 0);
    const auto h1 = assemble_general_channel(perturbed, term, theta)(0, 0);
    EXPECT_LE(std::abs(h1 - h0), 1e-3 * std::abs(h0));
  }
}

TEST(GeneralChannel, WeakBackwardCouplingPerturbsLittle) {
  Gen gen(48);
  const cplx v[] = {1.0};
  const auto term = net::TerminationSet::matched(1, v);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 16;
    const auto r = random_realization(gen, n);
    const auto theta = random_theta(gen, arch::Topology::group(n, 4));
    const auto base = scattering_from_channels(r, false);
    auto full = base.full();
    const auto s_ti = gen.cmatrix(1, n);
    full.set_block(0, 1, (1e-4 / s_ti.frobenius_norm()) * s_ti);
    const auto coupled = net::PartitionedScattering::from_full(full, net::PortCounts{1, n, 1});
    const auto h0 = assemble_general_channel(base, term, theta)(0, 0);
    const auto h1 = assemble_general_channel(coupled, term, theta)(0, 0);
    EXPECT_LE(std::abs(h1 - h0), 1e-3 * std::abs(h0));
  }
}

TEST(GeneralChannel, MapsTransmitVoltagesToReceiveVoltages) {
  Gen gen(46);
  for (int i = 0; i < 300; ++i) {
    const net::PortCounts ports{gen.index(1, 3), gen.index(1, 6), gen.index(1, 3)};
    const auto s = net::PartitionedScattering::reciprocal(gen.contraction_symmetric(ports.total(), 0.9), ports);
    std::vector<cplx> vs(ports.t), zs(ports.t), zl(ports.r);
    for (auto& x : vs) x = gen.cgauss();
    for (auto& z : zs) z = {gen.uniform(1, 150), gen.gauss(50)};
    for (auto& z : zl) z = {gen.uniform(1, 150), gen.gauss(50)};
    const auto term = net::TerminationSet::from_impedances(zs, zl, vs, z50);
    const auto theta = random_theta(gen, arch::Topology::fully(ports.i));
    const auto w = net::solve_network_waves(s, term, theta);
    const auto v = w.a + w.b;
    const auto v_t = v.block(0, 0, ports.t, 1);
    const auto v_r = v.block(ports.offset(net::Port::R), 0, ports.r, 1);
    const auto h = assemble_general_channel(s, term, theta);
    const auto pred = ris::testing::naive_product(h, v_t);
    EXPECT_LE((pred - v_r).frobenius_norm(), 1e-8 * std::max(1.0, v_r.frobenius_norm()));
  }
}

TEST(ScatteringFromChannels, ReciprocalAndForwardOnly) {
  Gen gen(47);
  const auto r = random_realization(gen, 4);
  const auto rec = scattering_from_channels(r, true);
  EXPECT_EQ(rec.reciprocity_defect(), 0.0);
  EXPECT_EQ(rec.rt()(0, 0), r.h_rt);
  EXPECT_EQ(rec.it()(2, 0), r.h_it[2]);
  EXPECT_EQ(rec.ti()(0, 2), r.h_it[2]);
  const auto fwd = scattering_from_channels(r, false);
  EXPECT_EQ(fwd.ti().max_abs(), 0.0);
  EXPECT_EQ(fwd.ri()(0, 3), r.h_ri[3]);
}

TEST(GeometryRealization, PathlossSetsAveragePower) {
  const Geometry2D g;
  const PathlossParams p;
  const RicianSpec k{0.0, 0.0, 0.0};
  double it = 0.0, rt = 0.0;
  const int n = 20'000;
  for (int t = 0; t < n; ++t) {
    RandomStream rng(6, t);
    const auto r = draw_geometry_realization(g, p, k, rng);
    ASSERT_EQ(r.n_i(), g.n_i);
    it += std::norm(r.h_it[0]);
    rt += std::norm(r.h_rt);
  }
  EXPECT_NEAR(it / n / pathloss(distance(g.tx, g.ris_center), p, Link::IT), 1.0, 0.05);
  EXPECT_NEAR(rt / n / pathloss(distance(g.tx, g.rx), p, Link::RT), 1.0, 0.05);
}
