#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobnet/config.hpp"
#include "mobnet/errors.hpp"
#include "mobnet/ingest.hpp"
#include "mobnet/network.hpp"
#include "mobnet/records.hpp"
#include "mobnet/schema.hpp"

namespace mobnet {

// Everything parsed from one data directory: raw records per year (all
// mobility types), plus the rejects and warnings accumulated across files.
struct Ingested {
  std::map<int, std::vector<MobilityRecord>> raw_by_year;
  std::map<int, SchemaMap> schemas;
  std::vector<RejectReport> rejects;
  std::vector<std::string> warnings;
};

// Scans schema_dir for *.json, parses each year's data file against its
// schema. Each schema names its own data file, so the schema set is the
// manifest of the run.
inline Ingested ingest_all(const RunConfig& config) {
  Ingested result;
  std::vector<std::filesystem::path> schema_paths;
  for (const auto& entry : std::filesystem::directory_iterator(config.schema_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      schema_paths.push_back(entry.path());
    }
  }
  std::sort(schema_paths.begin(), schema_paths.end());
  if (schema_paths.empty()) {
    throw DataError("no schema files found in " + config.schema_dir.string());
  }

  for (const auto& path : schema_paths) {
    SchemaMap schema =
        load_schema_file(path, std::make_pair(config.year_first, config.year_last));
    if (schema.file.empty()) {
      throw ParseError(path.string() + ": schema does not name a data file");
    }
    if (result.schemas.count(schema.year)) {
      throw DataError("two schemas declare year " + std::to_string(schema.year));
    }
    const std::filesystem::path data_path = config.data_dir / schema.file;
    std::ifstream in(data_path, std::ios::binary);
    if (!in) throw ParseError("cannot open data file " + data_path.string());
    ParseResult parsed = parse_records(in, schema, schema.file);
    result.raw_by_year[schema.year] = std::move(parsed.records);
    result.rejects.insert(result.rejects.end(), parsed.rejects.begin(), parsed.rejects.end());
    result.warnings.insert(result.warnings.end(), parsed.warnings.begin(),
                           parsed.warnings.end());
    result.schemas[schema.year] = std::move(schema);
  }
  return result;
}

// Study-mobility records across all ingested years, special-needs or not.
inline std::vector<MobilityRecord> study_cohort(const Ingested& ingested) {
  std::vector<MobilityRecord> cohort;
  CohortFilter study_only;
  study_only.mobility_type = MobilityType::Study;
  for (const auto& [year, records] : ingested.raw_by_year) {
    const auto filtered = filter_cohort(records, study_only);
    cohort.insert(cohort.end(), filtered.begin(), filtered.end());
  }
  return cohort;
}

// The two network families of a run. The special-needs networks carry the
// analysis; the full networks only supply total incoming flows for the
// inclusiveness denominators, so they always span every participant.
struct YearNetworks {
  std::vector<std::string> sn_universe;
  std::vector<std::string> full_universe;
  std::map<int, Network> sn;
  std::map<int, Network> full;
};

inline YearNetworks build_year_networks(const Ingested& ingested, const RunConfig& config) {
  const std::vector<MobilityRecord> cohort = study_cohort(ingested);
  CohortFilter sn_only;
  sn_only.special_needs_only = true;
  const std::vector<MobilityRecord> sn_cohort = filter_cohort(cohort, sn_only);

  std::optional<GeoTable> geo;
  if (config.geo_table) {
    std::ifstream in(*config.geo_table, std::ios::binary);
    if (!in) throw ParseError("cannot open geo table " + config.geo_table->string());
    geo = load_geo_table(in);
  }
  const GeoTable* geo_ptr = geo ? &*geo : nullptr;

  YearNetworks nets;
  nets.sn_universe = build_universe(
      config.universe_policy == UniversePolicy::SpecialNeedsUnion ? sn_cohort : cohort,
      config.universe_policy);
  nets.full_universe = build_universe(cohort, UniversePolicy::AllParticipants);

  for (const auto& [year, records] : ingested.raw_by_year) {
    CohortFilter one_year;
    one_year.year = year;
    const auto year_sn = filter_cohort(sn_cohort, one_year);
    const auto year_full = filter_cohort(cohort, one_year);
    nets.sn.emplace(year, build_network(year_sn, year, nets.sn_universe, geo_ptr));
    nets.full.emplace(year, build_network(year_full, year, nets.full_universe, geo_ptr));
  }
  return nets;
}

}  // namespace mobnet
