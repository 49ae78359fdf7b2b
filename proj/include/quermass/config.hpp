#pragma once

// Run configuration documents (JSON). Every key is known; unknown keys and
// missing required keys raise ConfigError naming the dotted key.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quermass/flow.hpp"
#include "quermass/geometry.hpp"

namespace quermass {

struct OutputConfig {
  std::string trajectory_path = "trajectory.csv";
  int snapshot_every = 0;  // recorded rows between snapshots; 0 = none
  std::string snapshot_dir = "snapshots";
  std::string report_path;  // verification report CSV; empty = none
};

struct SweepConfig {
  std::vector<ShapeSpec> shapes;
  std::vector<double> eps;
  std::vector<int> modes;  // fixed harmonics for perturbed spheres
  std::uint64_t seed_first = 0;
  std::uint64_t seed_count = 0;  // random-harmonic perturbed spheres
  std::vector<int> k;
  std::string output_dir = "sweep";
};

struct RunConfig {
  FlowConfig flow;
  ShapeSpec shape = shape::Sphere{};
  OutputConfig output;
  std::optional<SweepConfig> sweep;
};

/// Parses and validates a document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
/// Full document with every field written out.
nlohmann::json to_json(const RunConfig& cfg);

/// Reads a file, applies `key=value` overrides (value parsed as JSON when
/// possible, else taken as a string) and parses. Throws ConfigError.
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});
/// Applies one `dotted.key=value` override in place.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json shape_to_json(const ShapeSpec& s);
/// Throws ConfigError(key_prefix + ...).
ShapeSpec shape_from_json(const nlohmann::json& j, const std::string& prefix);

}  // namespace quermass
