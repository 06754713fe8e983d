#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mobnet/errors.hpp"

namespace mobnet {

enum class Gender { F, M, Unknown };
enum class MobilityType { Study, Placement, Other };
enum class StemClass { Stem, NonStem };

inline std::string_view gender_token(Gender g) {
  switch (g) {
    case Gender::F: return "F";
    case Gender::M: return "M";
    default: return "U";
  }
}

inline std::string_view mobility_token(MobilityType t) {
  switch (t) {
    case MobilityType::Study: return "study";
    case MobilityType::Placement: return "placement";
    default: return "other";
  }
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

inline std::string collapse_spaces(std::string_view s, bool upper) {
  std::string out;
  out.reserve(s.size());
  bool in_gap = false;
  for (const char c : s) {
    if (c == ' ' || c == '\t') {
      in_gap = !out.empty();
      continue;
    }
    if (in_gap) out.push_back(' ');
    in_gap = false;
    out.push_back(upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                        : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace detail

// Canonical node identity: uppercased, trimmed, interior whitespace runs
// collapsed to single spaces. No fuzzy matching. Idempotent by construction.
inline std::string normalize_institution(std::string_view raw) {
  return detail::collapse_spaces(raw, /*upper=*/true);
}

struct InstitutionCode {
  std::string raw;
  std::string normalized;

  static InstitutionCode of(std::string_view token) {
    return {std::string(token), normalize_institution(token)};
  }

  friend bool operator==(const InstitutionCode& a, const InstitutionCode& b) {
    return a.normalized == b.normalized;
  }
  friend auto operator<=>(const InstitutionCode& a, const InstitutionCode& b) {
    return a.normalized <=> b.normalized;
  }
};

// One normalized student-mobility row. The special-needs grant is kept as a
// non-negative amount; data vintages that only carry a yes/no flag map "yes"
// to the sentinel 1. Downstream logic must only ever test grant > 0.
struct MobilityRecord {
  int year = 0;
  InstitutionCode home_institution;
  InstitutionCode host_institution;
  std::string home_country;  // ISO 3166 alpha-2
  std::string host_country;
  Gender gender = Gender::Unknown;
  std::string field_of_study;
  MobilityType mobility_type = MobilityType::Other;
  double special_needs_grant = 0.0;

  bool has_special_needs() const { return special_needs_grant > 0.0; }

  auto key() const {
    return std::tie(year, home_institution.normalized, host_institution.normalized,
                    home_country, host_country, gender, field_of_study, mobility_type,
                    special_needs_grant);
  }
  friend bool operator==(const MobilityRecord& a, const MobilityRecord& b) {
    return a.key() == b.key();
  }
  friend bool operator<(const MobilityRecord& a, const MobilityRecord& b) {
    return a.key() < b.key();
  }
};

// ISCED-F 2013 broad fields, lowercase/collapsed form.
inline const std::vector<std::pair<std::string_view, StemClass>>& isced_broad_fields() {
  static const std::vector<std::pair<std::string_view, StemClass>> fields = {
      {"generic programmes and qualifications", StemClass::NonStem},
      {"education", StemClass::NonStem},
      {"arts and humanities", StemClass::NonStem},
      {"social sciences, journalism and information", StemClass::NonStem},
      {"business, administration and law", StemClass::NonStem},
      {"natural sciences, mathematics and statistics", StemClass::Stem},
      {"information and communication technologies (icts)", StemClass::Stem},
      {"information and communication technologies", StemClass::Stem},
      {"icts", StemClass::Stem},
      {"engineering, manufacturing and construction", StemClass::Stem},
      {"agriculture, forestry, fisheries and veterinary", StemClass::NonStem},
      {"health and welfare", StemClass::NonStem},
      {"services", StemClass::NonStem},
  };
  return fields;
}

// Lowercased, whitespace-collapsed field label, used as the canonical field
// identity when connections are split by full field.
inline std::string normalize_field_label(std::string_view label) {
  return detail::collapse_spaces(detail::trim(label), /*upper=*/false);
}

// STEM = engineering/manufacturing/construction, ICTs, natural sciences/
// mathematics/statistics; every other broad field is non-STEM. Labels that
// are not ISCED-F broad fields raise instead of defaulting to non-STEM.
inline StemClass classify_stem(std::string_view field_label) {
  const std::string norm = normalize_field_label(field_label);
  for (const auto& [label, cls] : isced_broad_fields()) {
    if (norm == label) return cls;
  }
  throw UnclassifiedFieldError(std::string(field_label));
}

struct CohortFilter {
  std::optional<MobilityType> mobility_type = MobilityType::Study;
  bool special_needs_only = false;
  std::optional<Gender> gender;
  std::optional<int> year;
};

// Pure predicate filter: output is an order-preserving subset of the input.
inline std::vector<MobilityRecord> filter_cohort(std::span<const MobilityRecord> records,
                                                 const CohortFilter& f = {}) {
  std::vector<MobilityRecord> out;
  for (const MobilityRecord& r : records) {
    if (f.mobility_type && r.mobility_type != *f.mobility_type) continue;
    if (f.special_needs_only && !r.has_special_needs()) continue;
    if (f.gender && r.gender != *f.gender) continue;
    if (f.year && r.year != *f.year) continue;
    out.push_back(r);
  }
  return out;
}

}  // namespace mobnet
