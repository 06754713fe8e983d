#pragma once

#include <charconv>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobnet/csv.hpp"
#include "mobnet/errors.hpp"
#include "mobnet/records.hpp"
#include "mobnet/schema.hpp"

namespace mobnet {

// One excluded row: which file and data row, the canonical field at fault
// (empty for row-level problems) and a human-readable cause.
struct RejectReport {
  std::string file;
  std::size_t row = 0;  // 1-based data row index, header excluded
  std::string field;
  std::string cause;
};

struct ParseResult {
  std::vector<MobilityRecord> records;
  std::vector<RejectReport> rejects;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool is_alpha2_upper(std::string_view s) {
  return s.size() == 2 && s[0] >= 'A' && s[0] <= 'Z' && s[1] >= 'A' && s[1] <= 'Z';
}

}  // namespace detail

// Parses one tabular mobility file against its schema. Well-formed rows
// become records carrying the schema's year; malformed rows become rejects;
// ordering is preserved. Missing special-needs cells decode to grant 0 and
// are flagged in the warnings, not rejected.
inline ParseResult parse_records(std::istream& in, const SchemaMap& schema,
                                 std::string_view file_label = {}) {
  ParseResult result;
  CsvReader reader(in, schema.delimiter);

  std::vector<std::string> header;
  if (!reader.next(header)) throw ParseError("empty input: no header row");

  std::map<std::string, std::size_t> column_index;  // canonical field -> cell index
  for (const auto& [field, column] : schema.column_bindings) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (detail::trim(header[i]) == column) {
        column_index[field] = i;
        found = true;
        break;
      }
    }
    if (!found) {
      throw ParseError("column '" + column + "' (bound to field '" + field +
                       "') not found in header");
    }
  }

  const std::string file(file_label);
  auto reject = [&](std::size_t row, std::string field, std::string cause) {
    result.rejects.push_back({file, row, std::move(field), std::move(cause)});
  };

  std::vector<std::string> cells;
  std::size_t row = 0;
  while (reader.next(cells)) {
    ++row;
    if (cells.size() != header.size()) {
      reject(row, "", "expected " + std::to_string(header.size()) + " cells, got " +
                          std::to_string(cells.size()));
      continue;
    }
    auto cell = [&](std::string_view field) {
      return detail::trim(cells[column_index.at(std::string(field))]);
    };

    MobilityRecord rec;
    rec.year = schema.year;
    rec.home_institution = InstitutionCode::of(cell("home_institution"));
    rec.host_institution = InstitutionCode::of(cell("host_institution"));
    if (rec.home_institution.normalized.empty()) {
      reject(row, "home_institution", "empty institution code");
      continue;
    }
    if (rec.host_institution.normalized.empty()) {
      reject(row, "host_institution", "empty institution code");
      continue;
    }
    if (rec.home_institution == rec.host_institution) {
      reject(row, "host_institution", "home and host institution identical");
      continue;
    }

    rec.home_country = detail::collapse_spaces(cell("home_country"), /*upper=*/true);
    rec.host_country = detail::collapse_spaces(cell("host_country"), /*upper=*/true);
    if (!detail::is_alpha2_upper(rec.home_country)) {
      reject(row, "home_country", "invalid country code '" + cell("home_country") + "'");
      continue;
    }
    if (!detail::is_alpha2_upper(rec.host_country)) {
      reject(row, "host_country", "invalid country code '" + cell("host_country") + "'");
      continue;
    }

    rec.gender = schema.decode_gender(cell("gender"));
    rec.mobility_type = schema.decode_mobility(cell("mobility_type"));

    rec.field_of_study = cell("field_of_study");
    if (rec.field_of_study.empty()) {
      reject(row, "field_of_study", "empty field of study");
      continue;
    }

    const std::string sn = cell("special_needs");
    if (sn.empty()) {
      rec.special_needs_grant = 0.0;
      result.warnings.push_back(file + ": row " + std::to_string(row) +
                                ": missing special-needs value treated as 0");
    } else if (schema.special_needs_encoding == SpecialNeedsEncoding::YesNo) {
      const std::string t = detail::collapse_spaces(sn, /*upper=*/true);
      if (t == "YES" || t == "Y" || t == "TRUE" || t == "1") {
        rec.special_needs_grant = 1.0;  // boolean encoding maps to the +1 sentinel
      } else if (t == "NO" || t == "N" || t == "FALSE" || t == "0") {
        rec.special_needs_grant = 0.0;
      } else {
        reject(row, "special_needs", "unrecognized yes/no token '" + sn + "'");
        continue;
      }
    } else {
      const auto amount = detail::parse_amount(sn);
      if (!amount) {
        reject(row, "special_needs", "unparsable grant amount '" + sn + "'");
        continue;
      }
      if (*amount < 0) {
        reject(row, "special_needs", "negative grant amount '" + sn + "'");
        continue;
      }
      rec.special_needs_grant = *amount;
    }

    result.records.push_back(std::move(rec));
  }
  return result;
}

inline void write_reject_csv(std::ostream& os, std::span<const RejectReport> rejects) {
  write_csv_row(os, std::vector<std::string>{"file", "row", "field", "cause"});
  for (const RejectReport& r : rejects) {
    write_csv_row(os, std::vector<std::string>{r.file, std::to_string(r.row), r.field, r.cause});
  }
}

// Normalized record CSV; parse_records(canonical_record_schema(year)) reads
// it back to an identical record list.
inline void serialize_records(std::ostream& os, std::span<const MobilityRecord> records) {
  write_csv_row(os, std::vector<std::string>{"year", "home_institution", "host_institution",
                                             "home_country", "host_country", "gender",
                                             "field_of_study", "mobility_type",
                                             "special_needs_grant"});
  for (const MobilityRecord& r : records) {
    write_csv_row(os, std::vector<std::string>{
                          std::to_string(r.year), r.home_institution.normalized,
                          r.host_institution.normalized, r.home_country, r.host_country,
                          std::string(gender_token(r.gender)), r.field_of_study,
                          std::string(mobility_token(r.mobility_type)),
                          detail::shortest_double(r.special_needs_grant)});
  }
}

}  // namespace mobnet
