#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "elicit/regret.hpp"

namespace elicit {

/// Parsed instance file.
///
/// JSON document, element indices 1-based:
///   {"kind": "uniform"|"graphic"|"scheduling"|"partition",
///    "n": <elements>, "p": <attribute columns>,
///    "k": <rank>                          (uniform)
///    "vertices": <count>, "edges": [[u, v], ...]   (graphic, vertices 0-based)
///    "deadlines": [d1, ..., dn]           (scheduling)
///    "blocks": [[e, ...], ...]            (partition)
///    "Y": [[y11, ..., y1p], ...],         (n rows of p entries)
///    "sense": "min"|"max"                 (optional)
///    "name": "..."}                       (optional)
struct InstanceDocument {
  MatroidInstance matroid;
  AttributeMatrix attributes;
  std::optional<Sense> sense;
  std::string name;

  Problem problem(Sense fallback = Sense::Max) const;
};

/// Throws InputError for schema violations (missing fields, wrong types)
/// and InconsistentInstance when the fields do not describe a valid matroid.
InstanceDocument instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const InstanceDocument& doc);

InstanceDocument load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const InstanceDocument& doc);

/// The eight-job scheduling instance used as the worked example.
InstanceDocument toy_scheduling_instance();

}  // namespace elicit
