#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "mobnet/errors.hpp"
#include "mobnet/records.hpp"

namespace mobnet {

enum class SpecialNeedsEncoding { YesNo, Amount };

inline const std::array<std::string_view, 8>& canonical_fields() {
  static const std::array<std::string_view, 8> fields = {
      "home_institution", "host_institution", "home_country", "host_country",
      "gender",           "field_of_study",   "mobility_type", "special_needs"};
  return fields;
}

// Per-vintage description of a mobility data file: which source column feeds
// each canonical field and how the loosely coded values decode. The source
// portal's exports are not stable across years, so these live in external
// config files rather than in code.
struct SchemaMap {
  int year = 0;
  std::string file;  // data file described by this schema, relative to the data dir
  char delimiter = ',';
  std::map<std::string, std::string> column_bindings;  // canonical field -> source header
  SpecialNeedsEncoding special_needs_encoding = SpecialNeedsEncoding::Amount;
  std::map<std::string, Gender> gender_tokens;          // extra uppercased token mappings
  std::map<std::string, MobilityType> mobility_tokens;  // extra uppercased token mappings

  Gender decode_gender(std::string_view token) const {
    const std::string t = detail::collapse_spaces(detail::trim(token), /*upper=*/true);
    if (auto it = gender_tokens.find(t); it != gender_tokens.end()) return it->second;
    if (t == "F" || t == "FEMALE") return Gender::F;
    if (t == "M" || t == "MALE") return Gender::M;
    return Gender::Unknown;
  }

  MobilityType decode_mobility(std::string_view token) const {
    const std::string t = detail::collapse_spaces(detail::trim(token), /*upper=*/true);
    if (auto it = mobility_tokens.find(t); it != mobility_tokens.end()) return it->second;
    if (t == "S" || t == "STUDY" || t == "SMS") return MobilityType::Study;
    if (t == "P" || t == "PLACEMENT" || t == "TRAINEESHIP" || t == "SMP")
      return MobilityType::Placement;
    return MobilityType::Other;
  }
};

inline void validate_schema(const SchemaMap& schema,
                            std::optional<std::pair<int, int>> year_range = std::nullopt) {
  if (schema.year <= 0) throw ParseError("schema: missing or invalid year");
  for (const std::string_view f : canonical_fields()) {
    const auto it = schema.column_bindings.find(std::string(f));
    if (it == schema.column_bindings.end() || it->second.empty()) {
      throw ParseError("schema for year " + std::to_string(schema.year) +
                       ": canonical field '" + std::string(f) + "' has no column binding");
    }
  }
  for (const auto& [field, column] : schema.column_bindings) {
    bool known = false;
    for (const std::string_view f : canonical_fields()) known |= (field == f);
    if (!known) {
      throw ParseError("schema for year " + std::to_string(schema.year) +
                       ": unknown canonical field '" + field + "'");
    }
  }
  if (year_range && (schema.year < year_range->first || schema.year > year_range->second)) {
    throw ParseError("schema year " + std::to_string(schema.year) +
                     " outside the configured analysis range " +
                     std::to_string(year_range->first) + "-" + std::to_string(year_range->second));
  }
}

inline SchemaMap load_schema(std::istream& in,
                             std::optional<std::pair<int, int>> year_range = std::nullopt) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema: invalid JSON: ") + e.what());
  }
  SchemaMap schema;
  try {
    schema.year = doc.at("year").get<int>();
    if (doc.contains("file")) schema.file = doc.at("file").get<std::string>();
    if (doc.contains("delimiter")) {
      const auto d = doc.at("delimiter").get<std::string>();
      if (d.size() != 1) throw ParseError("schema: delimiter must be a single character");
      schema.delimiter = d[0];
    }
    for (const auto& [field, column] : doc.at("columns").items()) {
      schema.column_bindings[field] = column.get<std::string>();
    }
    if (doc.contains("special_needs_encoding")) {
      const auto enc = doc.at("special_needs_encoding").get<std::string>();
      if (enc == "yes_no") {
        schema.special_needs_encoding = SpecialNeedsEncoding::YesNo;
      } else if (enc == "amount") {
        schema.special_needs_encoding = SpecialNeedsEncoding::Amount;
      } else {
        throw ParseError("schema: unknown special_needs_encoding '" + enc + "'");
      }
    }
    if (doc.contains("gender_tokens")) {
      for (const auto& [token, g] : doc.at("gender_tokens").items()) {
        const auto v = g.get<std::string>();
        Gender gv = v == "F" ? Gender::F : v == "M" ? Gender::M : Gender::Unknown;
        schema.gender_tokens[detail::collapse_spaces(token, true)] = gv;
      }
    }
    if (doc.contains("mobility_tokens")) {
      for (const auto& [token, m] : doc.at("mobility_tokens").items()) {
        const auto v = m.get<std::string>();
        MobilityType mv = v == "study"       ? MobilityType::Study
                          : v == "placement" ? MobilityType::Placement
                                             : MobilityType::Other;
        schema.mobility_tokens[detail::collapse_spaces(token, true)] = mv;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
  validate_schema(schema, year_range);
  return schema;
}

inline SchemaMap load_schema_file(const std::filesystem::path& path,
                                  std::optional<std::pair<int, int>> year_range = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema file " + path.string());
  try {
    return load_schema(in, year_range);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Schema of the normalized record CSV written by serialize_records: identity
// bindings, comma delimiter, grant stored as an amount.
inline SchemaMap canonical_record_schema(int year) {
  SchemaMap schema;
  schema.year = year;
  schema.delimiter = ',';
  schema.special_needs_encoding = SpecialNeedsEncoding::Amount;
  for (const std::string_view f : canonical_fields()) {
    schema.column_bindings[std::string(f)] = std::string(f);
  }
  schema.column_bindings["special_needs"] = "special_needs_grant";
  return schema;
}

}  // namespace mobnet
