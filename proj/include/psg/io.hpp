#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "psg/estimates.hpp"
#include "psg/fd_oracle.hpp"
#include "psg/model.hpp"
#include "psg/volterra.hpp"

namespace psg {

using Json = nlohmann::ordered_json;

std::string artifact_version();

/// %.17g, with nan/inf spelled out.
std::string format_g17(double v);

/// `# key = value` lines for the resolved config, preceded by the command and version.
void write_comment_block(std::ostream& out, const std::string& command, const ConfigMap& resolved);

Json meta_json(const std::string& command, const ConfigMap& resolved);
Json params_json(const MediumParams& params);
Json grid_json(const SpaceTimeGrid& grid);
Json solve_report_json(const SolveReport& report, const MediumParams& params, const SpaceTimeGrid& grid);
Json layer_report_json(const LayerReport& report);
Json cross_validation_json(const CrossValidation& cv);

}  // namespace psg
