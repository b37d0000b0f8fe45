#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "ris/error.hpp"
#include "ris/optimizer.hpp"
#include "ris/scaling.hpp"

using namespace ris;
using namespace ris::opt;
using arch::Topology;
using ris::testing::Gen;

namespace {
chan::ChannelRealization rayleigh(Gen& gen, std::size_t n, bool direct = false) {
  chan::ChannelRealization r;
  r.h_it = gen.cvector(n);
  r.h_ri = gen.cvector(n);
  if (direct) r.h_rt = gen.cgauss();
  return r;
}

Objective objective(const chan::ChannelRealization& r, Topology t, bool direct = false) {
  Objective o;
  o.realization = r;
  o.topology = t;
  o.include_direct = direct;
  return o;
}

double achieved(const chan::ChannelRealization& r, const ComplexMatrix& theta, bool direct) {
  auto copy = r;
  if (!direct) copy.h_rt = 0.0;
  return std::norm(chan::assemble_simplified_channel(copy, theta));
}
}  // namespace

TEST(SolveSingle, Example) {
  chan::ChannelRealization r;
  r.h_ri = {1.0, cplx(0.0, 1.0)};
  r.h_it = {1.0, 1.0};
  const auto res = solve_single(objective(r, Topology::single(2)));
  EXPECT_NEAR(res.power, 4.0, 1e-14);
  EXPECT_NEAR(res.gap, 0.0, 1e-15);
  EXPECT_FALSE(res.reactance.has_value());
  EXPECT_NEAR(achieved(r, res.theta, false), 4.0, 1e-14);
}

TEST(Solve, SingleElementIsTheSameForEveryTopology) {
  Gen gen(61);
  const auto r = rayleigh(gen, 1);
  const auto res = solve(objective(r, Topology::fully(1)), {});
  EXPECT_EQ(res.topology, Topology::single(1));
  EXPECT_NEAR(res.power, std::norm(r.h_ri[0] * r.h_it[0]), 1e-14);
}

TEST(Solve, ZeroChannelGivesZeroPower) {
  chan::ChannelRealization r;
  r.h_it.assign(4, 0.0);
  r.h_ri.assign(4, 0.0);
  const auto res = solve(objective(r, Topology::fully(4)), {});
  EXPECT_EQ(res.power, 0.0);
  EXPECT_TRUE(arch::validate_theta(res.theta, Topology::fully(4)).passed);
}

TEST(Solve, MatchesExhaustiveSearchOnTwoElements) {
  Gen gen(62);
  for (int i = 0; i < 30; ++i) {
    const auto r = rayleigh(gen, 2);
    const double bound = scaling::fully_connected_bound(r.h_ri, r.h_it);
    const double grid = ris::testing::grid_search_2x2(r.h_ri, r.h_it, 0.01);
    EXPECT_GE(grid, bound * (1 - 1e-3));
    EXPECT_LE(grid, bound * (1 + 1e-12));
    const auto res = solve(objective(r, Topology::fully(2)), {});
    EXPECT_LE(res.gap, 1e-4);
    EXPECT_GE(res.power, grid * (1 - 1e-9));
    EXPECT_NEAR(achieved(r, res.theta, false), res.power, 1e-9 * res.power);
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  Gen gen(63);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 8, ng = i % 2 ? 4 : 8;
    const auto obj = objective(rayleigh(gen, n), Topology::group(n, ng));
    arch::ReactanceParams x(obj.topology);
    for (auto& v : x.values()) v = gen.gauss(60.0);
    const auto g = objective_gradient(obj, x);
    double scale = 0.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double fd = ris::testing::central_difference(
          [&](double t) {
            auto y = x;
            y.values()[k] = t;
            return objective_value(obj, y);
          },
          x.values()[k], 1e-4);
      EXPECT_LE(std::abs(fd - g[k]), 1e-5 * std::max(std::abs(g[k]), 1e-3 * scale))
          << "coordinate " << k;
    }
  }
}

TEST(Solve, EveryIterateIsAValidNetwork) {
  Gen gen(64);
  const auto obj = objective(rayleigh(gen, 8), Topology::group(8, 4));
  std::size_t steps = 0;
  solve_group(obj, {}, [&](const arch::ReactanceParams& x, double cascade) {
    ++steps;
    const auto theta = arch::theta_from_reactance(x, obj.z0);
    ASSERT_TRUE(arch::validate_theta(theta, obj.topology, 1e-9).passed);
    EXPECT_NEAR(cascade, objective_value(obj, x), 1e-9 * (1.0 + cascade));
  });
  EXPECT_GT(steps, 0u);
}

TEST(Solve, ReachesTheBoundForGroupAndFully) {
  Gen gen(65);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 16;
    const auto r = rayleigh(gen, n);
    for (std::size_t ng : {2u, 4u, 16u}) {
      const auto res = solve(objective(r, Topology::group(n, ng)), {});
      EXPECT_NEAR(res.bound, scaling::group_connected_bound(r.h_ri, r.h_it, ng), 1e-12 * res.bound);
      EXPECT_TRUE(arch::validate_theta(res.theta, Topology::group(n, ng), 1e-8).passed);
      EXPECT_NEAR(achieved(r, res.theta, false), res.power, 1e-8 * res.power);
      EXPECT_FALSE(res.capped);
      worst = std::max(worst, res.gap);
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Solve, LargerGroupsNeverLose) {
  Gen gen(66);
  for (int i = 0; i < 50; ++i) {
    const auto r = rayleigh(gen, 8);
    double prev = 0.0;
    for (std::size_t ng : {1u, 2u, 4u, 8u}) {
      const double p = solve(objective(r, Topology::group(8, ng)), {}).power;
      EXPECT_GE(p, prev * (1 - 1e-8));
      prev = p;
    }
  }
}

TEST(Solve, LineOfSightMakesArchitecturesEquivalent) {
  Gen gen(67);
  const std::size_t n = 8;
  chan::ChannelRealization r;
  for (std::size_t k = 0; k < n; ++k) {
    r.h_it.push_back(std::polar(1.0, gen.uniform(0, 6.3)));
    r.h_ri.push_back(std::polar(1.0, gen.uniform(0, 6.3)));
  }
  for (std::size_t ng : {1u, 2u, 8u})
    EXPECT_NEAR(solve(objective(r, Topology::group(n, ng)), {}).power, 64.0, 1e-6);
}

TEST(Solve, TransmitPowerScalesLinearly) {
  Gen gen(68);
  const auto r = rayleigh(gen, 8);
  auto obj = objective(r, Topology::group(8, 4));
  const double p1 = solve(obj, {}).power;
  obj.p_t = 10.0;
  EXPECT_NEAR(solve(obj, {}).power, 10.0 * p1, 1e-7 * p1);
}

TEST(Solve, DirectPathIsAddedCoherently) {
  Gen gen(69);
  for (int i = 0; i < 50; ++i) {
    const auto r = rayleigh(gen, 8, true);
    for (std::size_t ng : {1u, 4u, 8u}) {
      const auto res = solve(objective(r, Topology::group(8, ng), true), {});
      EXPECT_GE(res.power, res.cascade_power);
      EXPECT_NEAR(res.power, align_direct_phase(r.h_rt, std::sqrt(res.cascade_power) * cplx(1.0), 1.0),
                  1e-9 * res.power);
      EXPECT_NEAR(achieved(r, res.theta, true), res.power, 1e-8 * res.power);
      EXPECT_LE(res.gap, 1e-6);
    }
  }
}

TEST(Solve, Deterministic) {
  Gen gen(70);
  const auto obj = objective(rayleigh(gen, 16), Topology::group(16, 4));
  SolverConfig cfg;
  cfg.seed = 123;
  const auto a = solve(obj, cfg), b = solve(obj, cfg);
  EXPECT_EQ(a.power, b.power);
  EXPECT_EQ(a.theta, b.theta);
}

TEST(Objective, Validation) {
  Gen gen(71);
  EXPECT_THROW(objective(rayleigh(gen, 4), Topology::fully(8)).validate(), DomainError);
  SolverConfig cfg;
  cfg.reactance_cap = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  EXPECT_NEAR(align_direct_phase(cplx(0, 1), cplx(-2, 0), 2.0), 18.0, 1e-14);
}
