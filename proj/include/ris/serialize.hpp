#pragma once
// JSON encodings for fixtures, configs and results, and the CSV result
// format. Matrices are {rows, cols, re[], im[]} in row-major order.

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "ris/architecture.hpp"
#include "ris/channel.hpp"
#include "ris/experiment.hpp"
#include "ris/matrix.hpp"
#include "ris/optimizer.hpp"

namespace ris::io {

using json = nlohmann::json;

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json to_json(const arch::Topology& t);
arch::Topology topology_from_json(const json& j);

json to_json(const arch::ReactanceParams& r);
arch::ReactanceParams reactance_from_json(const json& j);

json to_json(const chan::ChannelRealization& r);
chan::ChannelRealization realization_from_json(const json& j);

json to_json(const opt::SolveResult& r);

json to_json(const opt::SolverConfig& c);
opt::SolverConfig solver_config_from_json(const json& j);

// Every ExperimentConfig field round-trips. Unknown keys raise ConfigError.
json to_json(const sim::ExperimentConfig& c);
sim::ExperimentConfig config_from_json(const json& j);
// Throws IoError when unreadable, ConfigError when malformed.
sim::ExperimentConfig load_config(const std::string& path);

// FNV-1a 64 over the canonical JSON of the fields that affect results
// (everything except output_path, format and threads).
std::uint64_t config_hash(const sim::ExperimentConfig& c);

json to_json(const sim::ResultTable& t);
sim::ResultTable table_from_json(const json& j);

// "# config_hash=<hex> seed=<n>", the column header, then one line per row.
// Numbers use %.17g; missing values are empty fields.
std::string to_csv(const sim::ResultTable& t);
sim::ResultTable parse_csv(const std::string& text);

enum class Format { Csv, Json };
Format parse_format(const std::string& name);
std::string render(const sim::ResultTable& t, Format f);
// Throws IoError carrying the path on failure.
void emit(const sim::ResultTable& t, Format f, const std::string& path);

}  // namespace ris::io
