#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "graphon/graphon.hpp"
#include "graphon/networks.hpp"
#include "graphon/pattern.hpp"

namespace graphon {

struct ExperimentConfig;

using Json = nlohmann::json;

/// Reals in text output: 12 significant digits.
std::string format_real(double x);

/// {"block_values": [[...]], "block_measures": [...], "signal": [...], "signal_bound": r};
/// measures default to uniform, the signal to 1.
Json to_json(const StepGraphonSignal& w);
StepGraphonSignal step_graphon_from_json(const Json& j);

/// {"n": n, "edges": [[i, j], ...], "features": [...]}; features default to 1.
Json to_json(const GraphSignal& g);
GraphSignal graph_from_json(const Json& j);

/// {"nodes": n, "edges": [[i, j, multiplicity], ...], "exponents": [...]};
/// a bare string is looked up with pattern_by_name.
Json to_json(const Pattern& pattern);
Pattern pattern_from_json(const Json& j);

/// {"type": "mpnn"|"iwn", "activation": name, "layers": [{k_in, k_out, d_in,
/// d_out, coeffs, bias}]}. MPNN layers store their weight matrix in coeffs
/// (out, in) and have k_in = k_out = 1.
Json to_json(const MpnnModel& model);
Json to_json(const IwnModel& model);
std::variant<MpnnModel, IwnModel> model_from_json(const Json& j);

/// Fields of ExperimentConfig by name; absent fields keep `base` values.
ExperimentConfig config_from_json(const Json& j, const ExperimentConfig& base);
Json to_json(const ExperimentConfig& cfg);

/// Throws Error when the file cannot be read or parsed.
Json read_json_file(const std::filesystem::path& path);
std::variant<MpnnModel, IwnModel> read_model_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace graphon
