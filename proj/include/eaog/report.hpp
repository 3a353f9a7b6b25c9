#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "eaog/planner_loop.hpp"

namespace eaog {

/// Row names of the module timing table, in report order.
inline constexpr const char* kModuleRows[] = {
    "AND/OR Graph expansion",     "Graph Net Search",
    "Motion Planner (right arm)", "Motion Planner (left arm)",
    "Motion Planner (base)",
};

/// Structured metrics document. Wall-clock fields are the ones whose key
/// contains "[s]" or starts with "wall_".
nlohmann::json metrics_document(const PlanTrace& trace);

/// Line-delimited records: world, step, transition and final records.
std::string trace_jsonl(const PlanTrace& trace);

nlohmann::json world_record(const World& world);

/// Zeroes every wall-clock field (see metrics_document) recursively.
nlohmann::json mask_timings(nlohmann::json doc);
std::string mask_timings_jsonl(const std::string& text);

}  // namespace eaog
