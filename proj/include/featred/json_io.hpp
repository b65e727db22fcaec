#pragma once

#include <json.hpp>

#include "featred/bounds.hpp"
#include "featred/feature_pipeline.hpp"
#include "featred/graph_model.hpp"
#include "featred/harness.hpp"

namespace featred {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// {m, edges: [[u, v], ...] with u < v sorted, conflicts: {"v": [sorted]}}, 1-based.
// Vertices with empty T(v) are omitted from `conflicts`.
Json instance_to_json(const Instance& inst);
// Accepts one-sided conflict lists only if they are already consistent; throws DomainError otherwise.
Instance instance_from_json(const Json& j);

Json to_json(const BoundReport& report);
Json to_json(const LemmaReport& report);
Json to_json(const ChernoffReport& report);
Json to_json(const SelectionReport& report);

// Serialized text with a trailing newline.
std::string dump(const Json& j);

}  // namespace featred
