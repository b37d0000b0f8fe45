#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/generators.hpp"
#include "ris/error.hpp"
#include "ris/serialize.hpp"

using namespace ris;
using namespace ris::io;
using ris::testing::Gen;

namespace {
std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ris_serialize_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sim::ResultTable sample_table() {
  sim::ResultTable t;
  t.config_hash = 0x0123456789abcdefULL;
  t.seed = 77;
  sim::ResultRow a;
  a.experiment = "scaling_rayleigh:bound";
  a.n_i = 8;
  a.n_g = 2;
  a.mean_power_watts = 53.47365421038616;
  a.std_error = 0.1 / 3.0;
  a.analytic_value = 53.4736542103861585;
  a.gain_vs_single = 1.2;
  a.trials = 100;
  a.seed = 77;
  sim::ResultRow b = a;
  b.experiment = "rician_geometry:received";
  b.k_db = 10.0;
  b.std_error = std::nan("");
  b.gain_vs_single = 1e-300;
  t.rows = {a, b};
  return t;
}

void expect_rows_equal(const sim::ResultRow& x, const sim::ResultRow& y) {
  EXPECT_EQ(x.experiment, y.experiment);
  EXPECT_EQ(x.n_i, y.n_i);
  EXPECT_EQ(x.n_g, y.n_g);
  auto same = [](double p, double q) { return (std::isnan(p) && std::isnan(q)) || p == q; };
  EXPECT_TRUE(same(x.k_db, y.k_db));
  EXPECT_TRUE(same(x.mean_power_watts, y.mean_power_watts));
  EXPECT_TRUE(same(x.std_error, y.std_error));
  EXPECT_TRUE(same(x.analytic_value, y.analytic_value));
  EXPECT_TRUE(same(x.gain_vs_single, y.gain_vs_single));
  EXPECT_EQ(x.trials, y.trials);
  EXPECT_EQ(x.seed, y.seed);
}
}  // namespace

TEST(JsonRoundTrip, MatrixTopologyReactanceRealization) {
  Gen gen(81);
  const auto m = gen.cmatrix(3, 5);
  EXPECT_EQ(matrix_from_json(to_json(m)), m);

  for (const auto& t : {arch::Topology::single(4), arch::Topology::group(8, 4), arch::Topology::fully(3)})
    EXPECT_EQ(topology_from_json(to_json(t)), t);

  arch::ReactanceParams r(arch::Topology::group(8, 2));
  for (auto& v : r.values()) v = gen.gauss(100);
  const auto r2 = reactance_from_json(to_json(r));
  EXPECT_EQ(r2.topology(), r.topology());
  EXPECT_TRUE(std::equal(r.values().begin(), r.values().end(), r2.values().begin()));

  chan::ChannelRealization c;
  c.h_rt = gen.cgauss();
  c.h_it = gen.cvector(4);
  c.h_ri = gen.cvector(4);
  c.seed = 5;
  c.stream = 6;
  const auto c2 = realization_from_json(to_json(c));
  EXPECT_EQ(c2.h_rt, c.h_rt);
  EXPECT_EQ(c2.h_it, c.h_it);
  EXPECT_EQ(c2.h_ri, c.h_ri);
  EXPECT_EQ(c2.stream, 6u);
}

TEST(JsonRoundTrip, ExperimentConfigEveryField) {
  sim::ExperimentConfig c;
  c.experiment = sim::ExperimentKind::RicianGeometry;
  c.n_i_list = {3, 6};
  c.group_sizes = {1, 3, sim::kFully};
  c.rician_k_db_list = {-3.0, 5.5};
  c.trials = 12;
  c.seed = 0xfedcba9876543210ULL;
  c.geometry.tx = {1.0, -2.0};
  c.geometry.wavelength = 0.05;
  c.pathloss.alpha_ri = 2.2;
  c.p_t = 4.0;
  c.solver.restarts = 7;
  c.solver.reactance_cap = 1e6;
  c.optimize = false;
  c.threads = 3;
  c.output_path = "out.csv";
  c.format = "json";
  const auto j = to_json(c);
  const auto back = config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.group_sizes, c.group_sizes);
  EXPECT_EQ(j.at("group_sizes").back(), "fully");
}

TEST(ConfigParsing, PartialAndInvalidInput) {
  const auto c = config_from_json(json::parse(R"({"experiment": "BoundTightness", "trials": 5})"));
  EXPECT_EQ(c.experiment, sim::ExperimentKind::BoundTightness);
  EXPECT_EQ(c.trials, 5u);
  EXPECT_EQ(c.seed, sim::ExperimentConfig{}.seed);
  EXPECT_THROW(config_from_json(json::parse(R"({"trails": 5})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"geometry": {"tx": [0, 0], "z": 1}})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"trials": "many"})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"group_sizes": ["all"]})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"group_sizes": [0]})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"solver": {"restart": 2}})")), ConfigError);
}

TEST(ConfigParsing, LoadConfigErrors) {
  EXPECT_THROW(load_config("/nonexistent/dir/config.json"), IoError);
  const auto p = temp_file("malformed.json");
  std::ofstream(p) << "{ \"trials\": ";
  EXPECT_THROW(load_config(p.string()), ConfigError);
  std::ofstream(p) << R"({"trials": 9})";
  EXPECT_EQ(load_config(p.string()).trials, 9u);
  std::filesystem::remove(p);
}

TEST(ConfigHash, IgnoresPresentationFields) {
  sim::ExperimentConfig a;
  auto b = a;
  b.threads = 8;
  b.output_path = "x.json";
  b.format = "json";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  auto c = a;
  c.solver.restarts = 1;
  EXPECT_NE(config_hash(a), config_hash(c));
}

TEST(Csv, EmptyTableHasMetadataAndHeaderOnly) {
  sim::ResultTable t;
  t.config_hash = 0xabc;
  t.seed = 4;
  const auto csv = to_csv(t);
  EXPECT_EQ(csv,
            "# config_hash=0000000000000abc seed=4\n"
            "experiment,n_i,n_g,k_db,mean_power_watts,std_error,analytic_value,gain_vs_single,trials,seed\n");
  const auto back = parse_csv(csv);
  EXPECT_TRUE(back.rows.empty());
  EXPECT_EQ(back.config_hash, 0xabcu);
}

TEST(Csv, RoundTripIsExact) {
  const auto t = sample_table();
  const auto back = parse_csv(to_csv(t));
  EXPECT_EQ(back.config_hash, t.config_hash);
  EXPECT_EQ(back.seed, t.seed);
  ASSERT_EQ(back.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) expect_rows_equal(back.rows[i], t.rows[i]);
  EXPECT_THROW(parse_csv(""), DomainError);
  EXPECT_THROW(parse_csv("# config_hash=0 seed=0\nwrong,header\n"), DomainError);
}

TEST(Json, ResultTableRoundTripIsExact) {
  const auto t = sample_table();
  const auto j = to_json(t);
  EXPECT_TRUE(j.at("rows").at(1).at("std_error").is_null());
  const auto back = table_from_json(json::parse(render(t, Format::Json)));
  ASSERT_EQ(back.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) expect_rows_equal(back.rows[i], t.rows[i]);
}

TEST(Output, RepeatedRunsAreByteIdentical) {
  sim::ExperimentConfig c;
  c.n_i_list = {2, 4};
  c.trials = 30;
  c.seed = 5;
  for (auto f : {Format::Csv, Format::Json}) {
    auto t1 = sim::run_experiment(c);
    t1.config_hash = config_hash(c);
    auto t2 = sim::run_experiment(c);
    t2.config_hash = config_hash(c);
    EXPECT_EQ(render(t1, f), render(t2, f));
  }
}

TEST(Output, EmitWritesAndReportsThePathOnFailure) {
  const auto p = temp_file("table.csv");
  emit(sample_table(), Format::Csv, p.string());
  EXPECT_EQ(slurp(p), to_csv(sample_table()));
  std::filesystem::remove(p);
  try {
    emit(sample_table(), Format::Json, "/nonexistent/dir/out.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), "/nonexistent/dir/out.json");
  }
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}
