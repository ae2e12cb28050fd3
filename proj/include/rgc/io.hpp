#pragma once

// File formats: point clouds as JSON, records as JSON lines, plus the
// metadata block that heads every output file.

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "rgc/experiments.hpp"
#include "rgc/manifold.hpp"

namespace rgc::io {

inline constexpr const char* kToolName = "rgc";
inline constexpr const char* kToolVersion = "1.0.0";

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t value);

// {"meta": {"tool", "version", "config_hash", "seed", ...extra}}
nlohmann::json meta_block(const std::string& config_hash, std::uint64_t seed, const nlohmann::json& extra = {});

nlohmann::json manifold_to_json(const ManifoldSpec& spec);
ManifoldSpec manifold_from_json(const nlohmann::json& j);

// {"meta": ..., "manifold": ..., "seed", "mode", "n", "density", "generator", "points": [[...], ...]}
void write_cloud_json(std::ostream& os, const PointCloud& cloud, const nlohmann::json& meta);
// Accepts the format above or a bare array of points (taken as Euclidean).
PointCloud read_cloud_json(std::istream& is);
PointCloud read_cloud_file(const std::string& path);

nlohmann::json record_to_json(const experiments::ExperimentRecord& record);

}  // namespace rgc::io
