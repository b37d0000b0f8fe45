#pragma once
// Seeded Monte Carlo experiments. Trial t at a point (n_i[, k_db]) draws its
// channel from RandomStream(derive_seed(seed, point), t), so results do not
// depend on the thread count or on which other points are requested. All
// group sizes at a point share the same draws.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ris/channel.hpp"
#include "ris/optimizer.hpp"

namespace ris::sim {

enum class ExperimentKind { ScalingRayleigh, PowerGainCurve, RicianGeometry, BoundTightness };

std::string_view experiment_name(ExperimentKind kind);
// Accepts snake_case ("rician_geometry") or CamelCase ("RicianGeometry").
ExperimentKind parse_experiment(std::string_view name);

// Group size meaning "one group spanning every element".
inline constexpr std::size_t kFully = 0;

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::ScalingRayleigh;
  std::vector<std::size_t> n_i_list{2, 4, 8, 16, 32};
  std::vector<std::size_t> group_sizes{1, 2, 4, kFully};
  std::vector<double> rician_k_db_list{0.0, 3.0, 10.0};
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  chan::Geometry2D geometry;
  chan::PathlossParams pathloss;
  // NaN selects the experiment default: 10 W for RicianGeometry, 1 otherwise.
  double p_t = std::numeric_limits<double>::quiet_NaN();
  opt::SolverConfig solver;
  // false: Monte Carlo of the closed-form bounds only, no optimizer.
  bool optimize = true;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string output_path;
  std::string format = "csv";

  double effective_p_t() const;
  // Group sizes that apply to n_i, resolved (kFully -> n_i), deduplicated,
  // always starting with 1. Sizes larger than n_i are skipped.
  std::vector<std::size_t> group_sizes_for(std::size_t n_i) const;
  // Throws ConfigError.
  void validate() const;
};

struct ResultRow {
  std::string experiment;  // "<experiment>:<quantity>"
  std::size_t n_i = 0;
  std::size_t n_g = 0;
  double k_db = std::numeric_limits<double>::quiet_NaN();
  double mean_power_watts = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double analytic_value = std::numeric_limits<double>::quiet_NaN();
  double gain_vs_single = std::numeric_limits<double>::quiet_NaN();
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<ResultRow> rows;

  // First row with this label and (n_i, n_g[, k_db]); nullptr if absent.
  const ResultRow* find(std::string_view experiment, std::size_t n_i, std::size_t n_g,
                        double k_db = std::numeric_limits<double>::quiet_NaN()) const;
};

inline constexpr const char* kResultColumns[] = {
    "experiment", "n_i", "n_g", "k_db", "mean_power_watts", "std_error", "analytic_value",
    "gain_vs_single", "trials", "seed"};

ResultTable run_scaling_rayleigh(const ExperimentConfig& cfg);
ResultTable run_power_gain_curve(const ExperimentConfig& cfg);
ResultTable run_rician_geometry(const ExperimentConfig& cfg);
ResultTable run_bound_tightness(const ExperimentConfig& cfg);
// Dispatches on cfg.experiment.
ResultTable run_experiment(const ExperimentConfig& cfg);

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n); NaN for n < 2
};

SampleStats sample_stats(const std::vector<double>& x);

}  // namespace ris::sim
