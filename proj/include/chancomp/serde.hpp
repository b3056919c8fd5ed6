// JSON / CSV serialization of designs, decoder tables, experiment configs
// and reports.
#pragma once

#include <string>

#include <json.hpp>

#include "chancomp/design.hpp"
#include "chancomp/harness.hpp"
#include "chancomp/modem.hpp"

namespace chancomp {

nlohmann::json design_to_json(const ModulationDesign& design);
ModulationDesign design_from_json(const nlohmann::json& j);

nlohmann::json table_to_json(const DecoderTable& table);
DecoderTable table_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const NmseReport& report, const ExperimentConfig* configEcho = nullptr);

// CSV with the fixed column order: scheme, snr_db, nmse, trials, clamp_count.
std::string report_to_csv(const NmseReport& report);

// Value-table file {"K":…, "q":…, "values":[… q^K reals in index order]}.
FunctionSpec load_table_function(const std::string& path);

ModulationDesign load_design(const std::string& path);
void save_design(const ModulationDesign& design, const std::string& path);

ExperimentConfig load_config(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace chancomp
