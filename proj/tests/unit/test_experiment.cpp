#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "ris/error.hpp"
#include "ris/experiment.hpp"
#include "ris/scaling.hpp"

using namespace ris;
using namespace ris::sim;

namespace {
ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  c.n_i_list = {2, 4, 8};
  c.group_sizes = {1, 2, kFully};
  c.rician_k_db_list = {0.0, 10.0};
  c.trials = 40;
  c.seed = 17;
  c.geometry.n_i = 8;
  return c;
}

void expect_same_rows(const ResultTable& a, const ResultTable& b) {
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    EXPECT_EQ(x.experiment, y.experiment);
    EXPECT_EQ(x.n_i, y.n_i);
    EXPECT_EQ(x.n_g, y.n_g);
    // bitwise, NaN included
    EXPECT_EQ(std::memcmp(&x.mean_power_watts, &y.mean_power_watts, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&x.std_error, &y.std_error, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&x.gain_vs_single, &y.gain_vs_single, sizeof(double)), 0);
  }
}
}  // namespace

TEST(ExperimentNames, ParseBothSpellings) {
  EXPECT_EQ(parse_experiment("rician_geometry"), ExperimentKind::RicianGeometry);
  EXPECT_EQ(parse_experiment("BoundTightness"), ExperimentKind::BoundTightness);
  EXPECT_EQ(parse_experiment(experiment_name(ExperimentKind::PowerGainCurve)), ExperimentKind::PowerGainCurve);
  EXPECT_THROW(parse_experiment("scaling"), ConfigError);
}

TEST(ExperimentConfig, GroupSizesForResolvesFullyAndSkipsOversize) {
  ExperimentConfig c;
  c.group_sizes = {kFully, 2, 8};
  EXPECT_EQ(c.group_sizes_for(4), (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_EQ(c.group_sizes_for(8), (std::vector<std::size_t>{1, 2, 8}));
  EXPECT_EQ(c.group_sizes_for(1), (std::vector<std::size_t>{1}));
}

TEST(ExperimentConfig, RejectsInvalidSettings) {
  auto c = small(ExperimentKind::ScalingRayleigh);
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.trials = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.group_sizes = {3};
  bad.n_i_list = {8};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.n_i_list = {};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.p_t = -1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.solver.bound_tolerance = -1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.geometry.rx = bad.geometry.tx;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(run_rician_geometry(c), ConfigError);
}

TEST(ExperimentConfig, TransmitPowerDefaults) {
  ExperimentConfig c;
  EXPECT_EQ(c.effective_p_t(), 1.0);
  c.experiment = ExperimentKind::RicianGeometry;
  EXPECT_EQ(c.effective_p_t(), 10.0);
  c.p_t = 3.0;
  EXPECT_EQ(c.effective_p_t(), 3.0);
}

TEST(SampleStats, Example) {
  const auto s = sample_stats({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std_error, 1.0 / std::sqrt(3.0));
  EXPECT_TRUE(std::isnan(sample_stats({4.0}).std_error));
}

TEST(Experiments, IndependentOfThreadCount) {
  for (auto kind : {ExperimentKind::ScalingRayleigh, ExperimentKind::RicianGeometry, ExperimentKind::BoundTightness,
                    ExperimentKind::PowerGainCurve}) {
    auto c = small(kind);
    c.threads = 1;
    const auto a = run_experiment(c);
    c.threads = 4;
    const auto b = run_experiment(c);
    expect_same_rows(a, b);
  }
}

TEST(Experiments, PointsDoNotDependOnOtherPoints) {
  auto c = small(ExperimentKind::ScalingRayleigh);
  const auto all = run_experiment(c);
  c.n_i_list = {4};
  const auto one = run_experiment(c);
  for (const auto& row : one.rows) {
    const auto* match = all.find(row.experiment, row.n_i, row.n_g);
    ASSERT_NE(match, nullptr);
    EXPECT_EQ(match->mean_power_watts, row.mean_power_watts);
  }
}

TEST(Experiments, RowsAreOrderedAndLabelled) {
  const auto t = run_experiment(small(ExperimentKind::ScalingRayleigh));
  ASSERT_FALSE(t.rows.empty());
  EXPECT_EQ(t.seed, 17u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& p = t.rows[i - 1];
    const auto& r = t.rows[i];
    EXPECT_TRUE(p.n_i < r.n_i || (p.n_i == r.n_i && (p.experiment != r.experiment || p.n_g < r.n_g)));
  }
  for (const auto& r : t.rows) {
    EXPECT_TRUE(r.experiment == "scaling_rayleigh:optimized" || r.experiment == "scaling_rayleigh:bound");
    EXPECT_EQ(r.trials, 40u);
    EXPECT_NEAR(r.analytic_value, scaling::expected_power_rayleigh({r.n_i, r.n_g}), 1e-12 * r.analytic_value);
  }
}

TEST(Experiments, SingleElementHasUnitGain) {
  auto c = small(ExperimentKind::PowerGainCurve);
  c.n_i_list = {1, 4};
  c.optimize = false;
  const auto t = run_experiment(c);
  const auto* one = t.find("power_gain_curve:bound", 1, 1);
  ASSERT_NE(one, nullptr);
  EXPECT_EQ(one->gain_vs_single, 1.0);
  EXPECT_EQ(t.find("power_gain_curve:bound", 1, 2), nullptr);
  const auto* four = t.find("power_gain_curve:bound", 4, 4);
  ASSERT_NE(four, nullptr);
  EXPECT_NEAR(four->analytic_value, scaling::power_gain({4, 4}).gain_group, 1e-12);
}

TEST(Experiments, RicianRowsCarryTheFactor) {
  const auto t = run_experiment(small(ExperimentKind::RicianGeometry));
  for (double k : {0.0, 10.0})
    for (const char* label : {"rician_geometry:received", "rician_geometry:cascade"}) {
      const auto* single = t.find(label, 8, 1, k);
      const auto* fully = t.find(label, 8, 8, k);
      ASSERT_NE(single, nullptr);
      ASSERT_NE(fully, nullptr);
      EXPECT_EQ(single->gain_vs_single, 1.0);
      EXPECT_GT(fully->gain_vs_single, 1.0);
    }
}

TEST(Experiments, OptimizedMeanTracksTheExpectedBound) {
  auto c = small(ExperimentKind::ScalingRayleigh);
  c.n_i_list = {8};
  c.trials = 1000;
  const auto t = run_experiment(c);
  for (std::size_t ng : {1u, 2u, 8u}) {
    const auto* r = t.find("scaling_rayleigh:optimized", 8, ng);
    ASSERT_NE(r, nullptr);
    EXPECT_LE(std::abs(r->mean_power_watts - r->analytic_value), 4 * r->std_error);
  }
}

TEST(Experiments, TightnessRowsSummarizeTheGap) {
  const auto t = run_experiment(small(ExperimentKind::BoundTightness));
  const auto* mean = t.find("bound_tightness:gap_mean", 8, 8);
  const auto* p95 = t.find("bound_tightness:gap_p95", 8, 8);
  const auto* max = t.find("bound_tightness:gap_max", 8, 8);
  ASSERT_TRUE(mean && p95 && max);
  EXPECT_LE(mean->mean_power_watts, max->mean_power_watts);
  EXPECT_LE(p95->mean_power_watts, max->mean_power_watts);
  EXPECT_LE(max->mean_power_watts, 1e-6);
}
