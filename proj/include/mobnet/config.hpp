#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "mobnet/errors.hpp"
#include "mobnet/metrics.hpp"
#include "mobnet/network.hpp"

namespace mobnet {

// One analysis run: where the data lives, which years to cover, and the
// policy switches. Relative paths resolve against the config file's
// directory.
struct RunConfig {
  std::filesystem::path data_dir;
  std::filesystem::path schema_dir;
  int year_first = 0;
  int year_last = 0;
  UniversePolicy universe_policy = UniversePolicy::SpecialNeedsUnion;
  StemSplitPolicy stem_split = StemSplitPolicy::Binary;
  std::optional<std::filesystem::path> geo_table;
  std::optional<std::filesystem::path> population_table;
  std::filesystem::path output_dir = "out";
  int rounding = 4;
};

inline UniversePolicy parse_universe_policy(const std::string& s) {
  if (s == "sn_union") return UniversePolicy::SpecialNeedsUnion;
  if (s == "all_participants") return UniversePolicy::AllParticipants;
  throw ParseError("unknown universe_policy '" + s + "' (expected sn_union or all_participants)");
}

inline StemSplitPolicy parse_stem_split_policy(const std::string& s) {
  if (s == "binary") return StemSplitPolicy::Binary;
  if (s == "full_field") return StemSplitPolicy::FullField;
  throw ParseError("unknown stem_split_policy '" + s + "' (expected binary or full_field)");
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }

  RunConfig config;
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  try {
    config.data_dir = resolve(doc.at("data_dir").get<std::string>());
    config.schema_dir = resolve(doc.at("schema_dir").get<std::string>());
    const auto& years = doc.at("years");
    config.year_first = years.at(0).get<int>();
    config.year_last = years.at(1).get<int>();
    if (doc.contains("universe_policy")) {
      config.universe_policy = parse_universe_policy(doc.at("universe_policy").get<std::string>());
    }
    if (doc.contains("stem_split_policy")) {
      config.stem_split = parse_stem_split_policy(doc.at("stem_split_policy").get<std::string>());
    }
    if (doc.contains("geo_table")) config.geo_table = resolve(doc.at("geo_table").get<std::string>());
    if (doc.contains("population_table")) {
      config.population_table = resolve(doc.at("population_table").get<std::string>());
    }
    if (doc.contains("output_dir")) config.output_dir = resolve(doc.at("output_dir").get<std::string>());
    if (doc.contains("rounding")) config.rounding = doc.at("rounding").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return config;
}

inline void validate_config(const RunConfig& config) {
  if (config.year_first > config.year_last) throw DataError("empty year range");
  if (config.rounding < 0 || config.rounding > 12) {
    throw DataError("rounding must be between 0 and 12 decimal places");
  }
  if (!std::filesystem::is_directory(config.data_dir)) {
    throw DataError("data_dir does not exist: " + config.data_dir.string());
  }
  if (!std::filesystem::is_directory(config.schema_dir)) {
    throw DataError("schema_dir does not exist: " + config.schema_dir.string());
  }
  if (config.geo_table && !std::filesystem::is_regular_file(*config.geo_table)) {
    throw DataError("geo_table does not exist: " + config.geo_table->string());
  }
  if (config.population_table && !std::filesystem::is_regular_file(*config.population_table)) {
    throw DataError("population_table does not exist: " + config.population_table->string());
  }
}

}  // namespace mobnet
