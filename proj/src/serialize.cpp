#include "ris/serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ris/error.hpp"

namespace ris::io {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// nlohmann maps NaN to null on output; map it back.
double number_or_nan(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json point_json(chan::Point p) { return json::array({p.x, p.y}); }

chan::Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("points are [x, y] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw ConfigError(std::string("unknown key '") + k + "' in " + where);
  }
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (const cplx& v : m.data()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != rows * cols || im.size() != rows * cols) {
    throw DomainError("matrix JSON: entry count does not match dimensions");
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < rows * cols; ++k) m.data()[k] = {re[k].get<double>(), im[k].get<double>()};
  if (!m.all_finite()) throw DomainError("matrix JSON: non-finite entry");
  return m;
}

json to_json(const arch::Topology& t) {
  return {{"kind", arch::kind_name(t.kind())}, {"n_i", t.n_i()}, {"n_g", t.n_g()}};
}

arch::Topology topology_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto n_i = j.at("n_i").get<std::size_t>();
  if (kind == "single") return arch::Topology::single(n_i);
  if (kind == "fully") return arch::Topology::fully(n_i);
  if (kind == "group") return arch::Topology::group(n_i, j.at("n_g").get<std::size_t>());
  throw DomainError("unknown topology kind '" + kind + "'");
}

json to_json(const arch::ReactanceParams& r) {
  return {{"topology", to_json(r.topology())},
          {"upper_triangles_ohms", std::vector<double>(r.values().begin(), r.values().end())}};
}

arch::ReactanceParams reactance_from_json(const json& j) {
  return {topology_from_json(j.at("topology")), j.at("upper_triangles_ohms").get<std::vector<double>>()};
}

json to_json(const chan::ChannelRealization& r) {
  return {{"h_rt", to_json(ComplexMatrix{{r.h_rt}})},
          {"h_it", to_json(ComplexMatrix::column(r.h_it))},
          {"h_ri", to_json(ComplexMatrix::row(r.h_ri))},
          {"seed", r.seed},
          {"stream", r.stream}};
}

chan::ChannelRealization realization_from_json(const json& j) {
  chan::ChannelRealization r;
  const auto h_rt = matrix_from_json(j.at("h_rt"));
  const auto h_it = matrix_from_json(j.at("h_it"));
  const auto h_ri = matrix_from_json(j.at("h_ri"));
  if (h_rt.size() != 1 || h_it.cols() != 1 || h_ri.rows() != 1) {
    throw DomainError("realization JSON: expected scalar h_rt, column h_it, row h_ri");
  }
  r.h_rt = h_rt(0, 0);
  r.h_it.assign(h_it.data().begin(), h_it.data().end());
  r.h_ri.assign(h_ri.data().begin(), h_ri.data().end());
  read_if(j, "seed", r.seed);
  read_if(j, "stream", r.stream);
  r.validate();
  return r;
}

json to_json(const opt::SolveResult& r) {
  json j = {{"topology", to_json(r.topology)},
            {"power", r.power},
            {"cascade_power", r.cascade_power},
            {"bound", r.bound},
            {"gap", r.gap},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"capped", r.capped},
            {"finite_difference_gradient", r.finite_difference_gradient},
            {"seed", r.seed},
            {"theta", to_json(r.theta)}};
  if (r.reactance) j["reactance"] = to_json(*r.reactance);
  return j;
}

json to_json(const opt::SolverConfig& c) {
  return {{"max_iterations", c.max_iterations},   {"gradient_tolerance", c.gradient_tolerance},
          {"step_tolerance", c.step_tolerance},   {"restarts", c.restarts},
          {"seed", c.seed},                       {"bound_tolerance", c.bound_tolerance},
          {"reactance_cap", c.reactance_cap},     {"max_reanchors", c.max_reanchors}};
}

opt::SolverConfig solver_config_from_json(const json& j) {
  reject_unknown(j,
                 {"max_iterations", "gradient_tolerance", "step_tolerance", "restarts", "seed",
                  "bound_tolerance", "reactance_cap", "max_reanchors"},
                 "solver");
  opt::SolverConfig c;
  read_if(j, "max_iterations", c.max_iterations);
  read_if(j, "gradient_tolerance", c.gradient_tolerance);
  read_if(j, "step_tolerance", c.step_tolerance);
  read_if(j, "restarts", c.restarts);
  read_if(j, "seed", c.seed);
  read_if(j, "bound_tolerance", c.bound_tolerance);
  read_if(j, "reactance_cap", c.reactance_cap);
  read_if(j, "max_reanchors", c.max_reanchors);
  return c;
}

namespace {

json results_json(const sim::ExperimentConfig& c) {
  json groups = json::array();
  for (std::size_t g : c.group_sizes) {
    if (g == sim::kFully) {
      groups.push_back("fully");
    } else {
      groups.push_back(g);
    }
  }
  const auto& g = c.geometry;
  const auto& p = c.pathloss;
  json j = {{"experiment", std::string(sim::experiment_name(c.experiment))},
            {"n_i_list", c.n_i_list},
            {"group_sizes", groups},
            {"rician_k_db_list", c.rician_k_db_list},
            {"trials", c.trials},
            {"seed", c.seed},
            {"geometry",
             {{"tx", point_json(g.tx)},
              {"rx", point_json(g.rx)},
              {"ris_center", point_json(g.ris_center)},
              {"ris_spacing", g.ris_spacing},
              {"wavelength", g.wavelength}}},
            {"pathloss",
             {{"c0_db", p.c0_db},
              {"d0", p.d0},
              {"alpha_rt", p.alpha_rt},
              {"alpha_it", p.alpha_it},
              {"alpha_ri", p.alpha_ri}}},
            {"p_t", c.effective_p_t()},
            {"optimize", c.optimize},
            {"solver", to_json(c.solver)}};
  return j;
}

}  // namespace

json to_json(const sim::ExperimentConfig& c) {
  json j = results_json(c);
  j["threads"] = c.threads;
  j["output_path"] = c.output_path;
  j["format"] = c.format;
  return j;
}

sim::ExperimentConfig config_from_json(const json& j) {
  try {
    reject_unknown(j,
                   {"experiment", "n_i_list", "group_sizes", "rician_k_db_list", "trials", "seed",
                    "geometry", "pathloss", "p_t", "optimize", "solver", "threads", "output_path",
                    "format"},
                   "config");
    sim::ExperimentConfig c;
    if (j.contains("experiment")) c.experiment = sim::parse_experiment(j.at("experiment").get<std::string>());
    read_if(j, "n_i_list", c.n_i_list);
    if (j.contains("group_sizes")) {
      c.group_sizes.clear();
      for (const auto& g : j.at("group_sizes")) {
        if (g.is_string()) {
          if (g.get<std::string>() != "fully") throw ConfigError("group size strings must be \"fully\"");
          c.group_sizes.push_back(sim::kFully);
        } else {
          const auto v = g.get<std::int64_t>();
          if (v < 1) throw ConfigError("group sizes must be positive or \"fully\"");
          c.group_sizes.push_back(static_cast<std::size_t>(v));
        }
      }
    }
    read_if(j, "rician_k_db_list", c.rician_k_db_list);
    read_if(j, "trials", c.trials);
    read_if(j, "seed", c.seed);
    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      reject_unknown(g, {"tx", "rx", "ris_center", "ris_spacing", "wavelength"}, "geometry");
      if (g.contains("tx")) c.geometry.tx = point_from_json(g.at("tx"));
      if (g.contains("rx")) c.geometry.rx = point_from_json(g.at("rx"));
      if (g.contains("ris_center")) c.geometry.ris_center = point_from_json(g.at("ris_center"));
      read_if(g, "ris_spacing", c.geometry.ris_spacing);
      read_if(g, "wavelength", c.geometry.wavelength);
    }
    if (j.contains("pathloss")) {
      const auto& p = j.at("pathloss");
      reject_unknown(p, {"c0_db", "d0", "alpha_rt", "alpha_it", "alpha_ri"}, "pathloss");
      read_if(p, "c0_db", c.pathloss.c0_db);
      read_if(p, "d0", c.pathloss.d0);
      read_if(p, "alpha_rt", c.pathloss.alpha_rt);
      read_if(p, "alpha_it", c.pathloss.alpha_it);
      read_if(p, "alpha_ri", c.pathloss.alpha_ri);
    }
    if (j.contains("p_t") && !j.at("p_t").is_null()) c.p_t = j.at("p_t").get<double>();
    read_if(j, "optimize", c.optimize);
    if (j.contains("solver")) c.solver = solver_config_from_json(j.at("solver"));
    read_if(j, "threads", c.threads);
    read_if(j, "output_path", c.output_path);
    read_if(j, "format", c.format);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

sim::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config", path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t config_hash(const sim::ExperimentConfig& c) {
  const std::string text = results_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {
// Missing values are null rather than a NaN float.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace

json to_json(const sim::ResultTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"n_i", r.n_i},
                    {"n_g", r.n_g},
                    {"k_db", finite_or_null(r.k_db)},
                    {"mean_power_watts", finite_or_null(r.mean_power_watts)},
                    {"std_error", finite_or_null(r.std_error)},
                    {"analytic_value", finite_or_null(r.analytic_value)},
                    {"gain_vs_single", finite_or_null(r.gain_vs_single)},
                    {"trials", r.trials},
                    {"seed", r.seed}});
  }
  json cols = json::array();
  for (const char* c : sim::kResultColumns) cols.push_back(c);
  return {{"config_hash", hex64(t.config_hash)}, {"seed", t.seed}, {"columns", cols}, {"rows", rows}};
}

sim::ResultTable table_from_json(const json& j) {
  sim::ResultTable t;
  t.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
  t.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& r : j.at("rows")) {
    sim::ResultRow row;
    row.experiment = r.at("experiment").get<std::string>();
    row.n_i = r.at("n_i").get<std::size_t>();
    row.n_g = r.at("n_g").get<std::size_t>();
    row.k_db = number_or_nan(r.at("k_db"));
    row.mean_power_watts = number_or_nan(r.at("mean_power_watts"));
    row.std_error = number_or_nan(r.at("std_error"));
    row.analytic_value = number_or_nan(r.at("analytic_value"));
    row.gain_vs_single = number_or_nan(r.at("gain_vs_single"));
    row.trials = r.at("trials").get<std::size_t>();
    row.seed = r.at("seed").get<std::uint64_t>();
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string to_csv(const sim::ResultTable& t) {
  std::ostringstream out;
  out << "# config_hash=" << hex64(t.config_hash) << " seed=" << t.seed << '\n';
  bool first = true;
  for (const char* c : sim::kResultColumns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << '\n';
  for (const auto& r : t.rows) {
    out << r.experiment << ',' << r.n_i << ',' << r.n_g << ',' << fmt_double(r.k_db) << ','
        << fmt_double(r.mean_power_watts) << ',' << fmt_double(r.std_error) << ','
        << fmt_double(r.analytic_value) << ',' << fmt_double(r.gain_vs_single) << ',' << r.trials
        << ',' << r.seed << '\n';
  }
  return out.str();
}

sim::ResultTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  sim::ResultTable t;
  auto fail = [](const std::string& why) -> void { throw DomainError("result CSV: " + why); };
  if (!std::getline(in, line)) fail("empty input");
  unsigned long long hash = 0, seed = 0;
  if (std::sscanf(line.c_str(), "# config_hash=%llx seed=%llu", &hash, &seed) != 2) fail("missing metadata line");
  t.config_hash = hash;
  t.seed = seed;
  if (!std::getline(in, line)) fail("missing header");
  {
    std::string expected;
    for (const char* c : sim::kResultColumns) expected += (expected.empty() ? "" : ",") + std::string(c);
    if (line != expected) fail("unexpected header '" + line + "'");
  }
  auto num = [](const std::string& s) { return s.empty() ? kNaN : std::stod(s); };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != std::size(sim::kResultColumns)) fail("wrong field count in '" + line + "'");
    sim::ResultRow r;
    r.experiment = f[0];
    r.n_i = std::stoull(f[1]);
    r.n_g = std::stoull(f[2]);
    r.k_db = num(f[3]);
    r.mean_power_watts = num(f[4]);
    r.std_error = num(f[5]);
    r.analytic_value = num(f[6]);
    r.gain_vs_single = num(f[7]);
    r.trials = std::stoull(f[8]);
    r.seed = std::stoull(f[9]);
    t.rows.push_back(std::move(r));
  }
  return t;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

std::string render(const sim::ResultTable& t, Format f) {
  return f == Format::Csv ? to_csv(t) : to_json(t).dump(2) + "\n";
}

void emit(const sim::ResultTable& t, Format f, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output for writing", path);
  out << render(t, f);
  out.flush();
  if (!out) throw IoError("write failed", path);
}

}  // namespace ris::io
