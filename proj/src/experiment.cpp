#include "ris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "ris/error.hpp"
#include "ris/rng.hpp"
#include "ris/scaling.hpp"
#include "ris/serialize.hpp"

namespace ris::sim {

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ScalingRayleigh:
      return "scaling_rayleigh";
    case ExperimentKind::PowerGainCurve:
      return "power_gain_curve";
    case ExperimentKind::RicianGeometry:
      return "rician_geometry";
    case ExperimentKind::BoundTightness:
      return "bound_tightness";
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  struct Alias {
    std::string_view snake, camel;
    ExperimentKind kind;
  };
  static constexpr Alias aliases[] = {
      {"scaling_rayleigh", "ScalingRayleigh", ExperimentKind::ScalingRayleigh},
      {"power_gain_curve", "PowerGainCurve", ExperimentKind::PowerGainCurve},
      {"rician_geometry", "RicianGeometry", ExperimentKind::RicianGeometry},
      {"bound_tightness", "BoundTightness", ExperimentKind::BoundTightness},
  };
  for (const auto& a : aliases) {
    if (name == a.snake || name == a.camel) return a.kind;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

double ExperimentConfig::effective_p_t() const {
  if (!std::isnan(p_t)) return p_t;
  return experiment == ExperimentKind::RicianGeometry ? 10.0 : 1.0;
}

std::vector<std::size_t> ExperimentConfig::group_sizes_for(std::size_t n_i) const {
  std::vector<std::size_t> out{1};
  for (std::size_t g : group_sizes) {
    const std::size_t ng = g == kFully ? n_i : g;
    if (ng > n_i) continue;
    if (std::find(out.begin(), out.end(), ng) == out.end()) out.push_back(ng);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (n_i_list.empty()) throw ConfigError("n_i_list must not be empty");
  if (group_sizes.empty()) throw ConfigError("group_sizes must not be empty");
  for (std::size_t n : n_i_list) {
    if (n == 0) throw ConfigError("n_i_list entries must be positive");
    for (std::size_t g : group_sizes) {
      if (g != kFully && g <= n && n % g != 0) {
        throw ConfigError("group size " + std::to_string(g) + " does not divide n_i = " +
                          std::to_string(n));
      }
    }
  }
  if (experiment == ExperimentKind::RicianGeometry && rician_k_db_list.empty()) {
    throw ConfigError("rician_k_db_list must not be empty");
  }
  for (double k : rician_k_db_list) {
    if (!std::isfinite(k)) throw ConfigError("Rician factors must be finite dB values");
  }
  const double pt = effective_p_t();
  if (!(pt > 0.0) || !std::isfinite(pt)) throw ConfigError("p_t must be positive");
  try {
    chan::Geometry2D g = geometry;
    g.n_i = 1;
    g.validate();
    pathloss.validate();
    solver.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

const ResultRow* ResultTable::find(std::string_view experiment, std::size_t n_i, std::size_t n_g,
                                   double k_db) const {
  for (const auto& r : rows) {
    const bool k_match = std::isnan(k_db) ? std::isnan(r.k_db) : r.k_db == k_db;
    if (r.experiment == experiment && r.n_i == n_i && r.n_g == n_g && k_match) return &r;
  }
  return nullptr;
}

SampleStats sample_stats(const std::vector<double>& x) {
  SampleStats s;
  if (x.empty()) return {std::nan(""), std::nan("")};
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / n;
  if (x.size() < 2) {
    s.std_error = std::nan("");
    return s;
  }
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(t) for t in [0, trials); rethrows the failure of the lowest trial.
template <class Fn>
void parallel_trials(std::size_t trials, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, trials);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t failed_trial = trials;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t t; !failed.load(std::memory_order_relaxed) && (t = next.fetch_add(1)) < trials;) {
      try {
        fn(t);
      } catch (...) {
        std::lock_guard lock(mu);
        if (t < failed_trial) {
          failed_trial = t;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

arch::Topology topology_for(std::size_t n_i, std::size_t n_g) { return arch::Topology::group(n_i, n_g); }

struct TrialOutcome {
  std::vector<double> optimized;  // per group size, P_T |c|^2
  std::vector<double> bound;
  std::vector<double> gap;
  std::vector<double> received;  // with the aligned direct channel
};

std::uint64_t point_seed(std::uint64_t seed, std::size_t n_i) { return derive_seed(seed, n_i); }

std::uint64_t point_seed(std::uint64_t seed, std::size_t n_i, double k_db) {
  return derive_seed(point_seed(seed, n_i), std::bit_cast<std::uint64_t>(k_db));
}

// Rayleigh h_ri, h_it ~ CN(0, I), no direct channel; every group size sees
// the same draw.
std::vector<TrialOutcome> rayleigh_point(const ExperimentConfig& cfg, std::size_t n_i,
                                         const std::vector<std::size_t>& ngs, bool optimize) {
  const std::uint64_t pseed = point_seed(cfg.seed, n_i);
  const double p_t = cfg.effective_p_t();
  std::vector<TrialOutcome> out(cfg.trials);
  parallel_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    RandomStream rng(pseed, t);
    const auto real = chan::draw_rayleigh_realization(n_i, rng);
    TrialOutcome& o = out[t];
    for (std::size_t ng : ngs) {
      const auto topo = topology_for(n_i, ng);
      const double bound = p_t * scaling::topology_bound(real.h_ri, real.h_it, topo);
      o.bound.push_back(bound);
      if (!optimize) continue;
      if (ng == 1) {
        o.optimized.push_back(bound);
        o.gap.push_back(0.0);
        continue;
      }
      opt::Objective obj{real, false, topo, net::ReferenceImpedance(50.0), p_t};
      opt::SolverConfig sc = cfg.solver;
      sc.seed = derive_seed(pseed, t);
      const auto r = opt::solve_group(obj, sc);
      o.optimized.push_back(r.power);
      o.gap.push_back(r.gap);
    }
  });
  return out;
}

std::vector<double> column(const std::vector<TrialOutcome>& trials,
                           std::vector<double> TrialOutcome::*field, std::size_t idx) {
  std::vector<double> v;
  v.reserve(trials.size());
  for (const auto& t : trials) v.push_back((t.*field)[idx]);
  return v;
}

ResultTable make_table(const ExperimentConfig& cfg) {
  ResultTable t;
  t.config_hash = io::config_hash(cfg);
  t.seed = cfg.seed;
  return t;
}

ResultRow make_row(const ExperimentConfig& cfg, std::string label, std::size_t n_i, std::size_t n_g,
                   const SampleStats& s, double analytic, double gain) {
  ResultRow r;
  r.experiment = std::move(label);
  r.n_i = n_i;
  r.n_g = n_g;
  r.mean_power_watts = s.mean;
  r.std_error = s.std_error;
  r.analytic_value = analytic;
  r.gain_vs_single = gain;
  r.trials = cfg.trials;
  r.seed = cfg.seed;
  return r;
}

void require_kind(const ExperimentConfig& cfg, ExperimentKind kind) {
  if (cfg.experiment != kind) {
    throw ConfigError("config is for experiment '" + std::string(experiment_name(cfg.experiment)) +
                      "', expected '" + std::string(experiment_name(kind)) + "'");
  }
  cfg.validate();
}

double expected(std::size_t n_i, std::size_t n_g, double p_t) {
  return p_t * scaling::expected_power_rayleigh({n_i, n_g, scaling::ChannelKind::Rayleigh});
}

}  // namespace

ResultTable run_scaling_rayleigh(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::ScalingRayleigh);
  ResultTable table = make_table(cfg);
  const double p_t = cfg.effective_p_t();
  for (std::size_t n_i : cfg.n_i_list) {
    const auto ngs = cfg.group_sizes_for(n_i);
    const auto trials = rayleigh_point(cfg, n_i, ngs, cfg.optimize);
    const auto single_bound = sample_stats(column(trials, &TrialOutcome::bound, 0));
    for (std::size_t k = 0; k < ngs.size(); ++k) {
      const double analytic = expected(n_i, ngs[k], p_t);
      if (cfg.optimize) {
        const auto s = sample_stats(column(trials, &TrialOutcome::optimized, k));
        const double single = sample_stats(column(trials, &TrialOutcome::optimized, 0)).mean;
        table.rows.push_back(make_row(cfg, "scaling_rayleigh:optimized", n_i, ngs[k], s, analytic, s.mean / single));
      }
      const auto b = sample_stats(column(trials, &TrialOutcome::bound, k));
      table.rows.push_back(make_row(cfg, "scaling_rayleigh:bound", n_i, ngs[k], b, analytic, b.mean / single_bound.mean));
    }
  }
  return table;
}

ResultTable run_power_gain_curve(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::PowerGainCurve);
  ResultTable table = make_table(cfg);
  const std::string label = cfg.optimize ? "power_gain_curve:optimized" : "power_gain_curve:bound";
  for (std::size_t n_i : cfg.n_i_list) {
    const auto ngs = cfg.group_sizes_for(n_i);
    const auto trials = rayleigh_point(cfg, n_i, ngs, cfg.optimize);
    auto field = cfg.optimize ? &TrialOutcome::optimized : &TrialOutcome::bound;
    const double single = sample_stats(column(trials, field, 0)).mean;
    for (std::size_t k = 0; k < ngs.size(); ++k) {
      const auto s = sample_stats(column(trials, field, k));
      const double analytic = scaling::power_gain({n_i, ngs[k], scaling::ChannelKind::Rayleigh}).gain_group;
      table.rows.push_back(make_row(cfg, label, n_i, ngs[k], s, analytic, s.mean / single));
    }
  }
  return table;
}

ResultTable run_rician_geometry(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::RicianGeometry);
  ResultTable table = make_table(cfg);
  const double p_t = cfg.effective_p_t();
  for (std::size_t n_i : cfg.n_i_list) {
    const auto ngs = cfg.group_sizes_for(n_i);
    chan::Geometry2D geom = cfg.geometry;
    geom.n_i = n_i;
    for (double k_db : cfg.rician_k_db_list) {
      const std::uint64_t pseed = point_seed(cfg.seed, n_i, k_db);
      chan::RicianSpec rician;
      rician.k_it = chan::RicianSpec::db_to_linear(k_db);
      std::vector<TrialOutcome> out(cfg.trials);
      parallel_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        RandomStream rng(pseed, t);
        const auto real = chan::draw_geometry_realization(geom, cfg.pathloss, rician, rng);
        TrialOutcome& o = out[t];
        for (std::size_t ng : ngs) {
          opt::Objective obj{real, false, topology_for(n_i, ng), net::ReferenceImpedance(50.0), p_t};
          opt::SolverConfig sc = cfg.solver;
          sc.seed = derive_seed(pseed, t);
          const auto r = cfg.optimize ? opt::solve(obj, sc) : opt::SolveResult{};
          const double cascade_power =
              cfg.optimize ? r.cascade_power : p_t * scaling::topology_bound(real.h_ri, real.h_it, obj.topology);
          o.optimized.push_back(cascade_power);
          o.received.push_back(opt::align_direct_phase(real.h_rt, std::sqrt(cascade_power / p_t), p_t));
        }
      });
      const double single_rx = sample_stats(column(out, &TrialOutcome::received, 0)).mean;
      const double single_cas = sample_stats(column(out, &TrialOutcome::optimized, 0)).mean;
      for (std::size_t k = 0; k < ngs.size(); ++k) {
        const auto rx = sample_stats(column(out, &TrialOutcome::received, k));
        const auto cas = sample_stats(column(out, &TrialOutcome::optimized, k));
        auto r1 = make_row(cfg, "rician_geometry:received", n_i, ngs[k], rx, kNaN, rx.mean / single_rx);
        auto r2 = make_row(cfg, "rician_geometry:cascade", n_i, ngs[k], cas, kNaN, cas.mean / single_cas);
        r1.k_db = r2.k_db = k_db;
        table.rows.push_back(std::move(r1));
        table.rows.push_back(std::move(r2));
      }
    }
  }
  return table;
}

ResultTable run_bound_tightness(const ExperimentConfig& cfg) {
  require_kind(cfg, ExperimentKind::BoundTightness);
  ResultTable table = make_table(cfg);
  const double p_t = cfg.effective_p_t();
  for (std::size_t n_i : cfg.n_i_list) {
    const auto ngs = cfg.group_sizes_for(n_i);
    const auto trials = rayleigh_point(cfg, n_i, ngs, true);
    const double single = sample_stats(column(trials, &TrialOutcome::optimized, 0)).mean;
    for (std::size_t k = 0; k < ngs.size(); ++k) {
      auto gaps = column(trials, &TrialOutcome::gap, k);
      const auto power = sample_stats(column(trials, &TrialOutcome::optimized, k));
      table.rows.push_back(make_row(cfg, "bound_tightness:optimized", n_i, ngs[k], power,
                                    expected(n_i, ngs[k], p_t), power.mean / single));
      table.rows.push_back(make_row(cfg, "bound_tightness:gap_mean", n_i, ngs[k], sample_stats(gaps), kNaN, kNaN));
      std::sort(gaps.begin(), gaps.end());
      // nearest-rank percentile
      const std::size_t rank95 = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(gaps.size())));
      const SampleStats p95{gaps[std::max<std::size_t>(rank95, 1) - 1], kNaN};
      const SampleStats mx{gaps.back(), kNaN};
      table.rows.push_back(make_row(cfg, "bound_tightness:gap_p95", n_i, ngs[k], p95, kNaN, kNaN));
      table.rows.push_back(make_row(cfg, "bound_tightness:gap_max", n_i, ngs[k], mx, kNaN, kNaN));
    }
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::ScalingRayleigh:
      return run_scaling_rayleigh(cfg);
    case ExperimentKind::PowerGainCurve:
      return run_power_gain_curve(cfg);
    case ExperimentKind::RicianGeometry:
      return run_rician_geometry(cfg);
    case ExperimentKind::BoundTightness:
      return run_bound_tightness(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace ris::sim
