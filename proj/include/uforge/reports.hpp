#pragma once

#include <filesystem>

#include <json.hpp>

#include "uforge/bch.hpp"
#include "uforge/drift.hpp"
#include "uforge/freelie.hpp"
#include "uforge/optimizer.hpp"
#include "uforge/tangent.hpp"

namespace uforge {

nlohmann::json to_json(const SpanningReport& report);
nlohmann::json to_json(const CommutatorSpanReport& report);
nlohmann::json to_json(const SlopeReport& report);
nlohmann::json to_json(const DescentReport& report, const DescentConfig& cfg);
nlohmann::json to_json(const CompileReport& report, const DescentConfig& cfg);
nlohmann::json to_json(const DriftRankReport& report);

void save_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace uforge
