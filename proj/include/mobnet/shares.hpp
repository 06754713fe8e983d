#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mobnet/csv.hpp"
#include "mobnet/errors.hpp"
#include "mobnet/format.hpp"
#include "mobnet/records.hpp"

namespace mobnet {

enum class PopGender { F, M, All };

struct PopulationRow {
  std::int64_t he_enrollment = 0;
  double impairment_share = 0.0;  // fraction in [0,1]

  double estimated_sn_population() const {
    return static_cast<double>(he_enrollment) * impairment_share;
  }
};

// Per-country higher-education enrollment and impairment shares, keyed by
// (country, gender). Operator-supplied; the library never fetches it.
class PopulationTable {
 public:
  void add(const std::string& country, PopGender gender, PopulationRow row) {
    rows_[{country, gender}] = row;
  }

  std::optional<PopulationRow> get(const std::string& country, PopGender gender) const {
    const auto it = rows_.find({country, gender});
    if (it == rows_.end()) return std::nullopt;
    return it->second;
  }

  // Gendered rows must add up to the All row when all three are present:
  // enrollment exactly, estimated special-needs populations within 0.1%.
  void validate() const {
    std::set<std::string> countries;
    for (const auto& [key, row] : rows_) {
      if (row.he_enrollment < 0) throw DataError("negative enrollment for " + key.first);
      if (row.impairment_share < 0.0 || row.impairment_share > 1.0) {
        throw DataError("impairment share outside [0,1] for " + key.first);
      }
      countries.insert(key.first);
    }
    for (const std::string& country : countries) {
      const auto f = get(country, PopGender::F);
      const auto m = get(country, PopGender::M);
      const auto all = get(country, PopGender::All);
      if (!f || !m || !all) continue;
      if (f->he_enrollment + m->he_enrollment != all->he_enrollment) {
        throw DataError("population table: gendered enrollment does not sum to total for " +
                        country);
      }
      const double split = f->estimated_sn_population() + m->estimated_sn_population();
      const double total = all->estimated_sn_population();
      if (std::abs(split - total) > 1e-3 * std::max(total, 1.0)) {
        throw DataError(
            "population table: gendered special-needs estimates do not sum to total for " +
            country);
      }
    }
  }

 private:
  std::map<std::pair<std::string, PopGender>, PopulationRow> rows_;
};

// Header: country,gender,he_enrollment,impairment_share with gender one of
// F, M, All.
inline PopulationTable load_population_table(std::istream& in, char delimiter = ',') {
  CsvReader reader(in, delimiter);
  std::vector<std::string> row;
  if (!reader.next(row)) throw ParseError("population table: empty file");
  if (row.size() != 4 || detail::trim(row[0]) != "country") {
    throw ParseError(
        "population table: expected header country,gender,he_enrollment,impairment_share");
  }
  PopulationTable table;
  while (reader.next(row)) {
    if (row.size() != 4) {
      throw ParseError("population table: row " + std::to_string(reader.record_number()) +
                       ": expected 4 cells");
    }
    const std::string country = detail::collapse_spaces(detail::trim(row[0]), /*upper=*/true);
    const std::string gender = detail::trim(row[1]);
    PopGender g;
    if (gender == "F") {
      g = PopGender::F;
    } else if (gender == "M") {
      g = PopGender::M;
    } else if (gender == "All" || gender == "ALL" || gender == "all") {
      g = PopGender::All;
    } else {
      throw ParseError("population table: row " + std::to_string(reader.record_number()) +
                       ": unknown gender '" + gender + "'");
    }
    PopulationRow data;
    const auto enrollment = detail::parse_amount(detail::trim(row[2]));
    const auto share = detail::parse_amount(detail::trim(row[3]));
    if (!enrollment || !share) {
      throw ParseError("population table: row " + std::to_string(reader.record_number()) +
                       ": unparsable numbers");
    }
    data.he_enrollment = static_cast<std::int64_t>(*enrollment);
    data.impairment_share = *share;
    table.add(country, g, data);
  }
  table.validate();
  return table;
}

struct ShareTimeseriesEntry {
  int year = 0;
  std::int64_t sn_total = 0;
  std::int64_t total = 0;
  std::int64_t sn_female = 0;
  std::int64_t sn_male = 0;
  double sn_over_total_pct = 0.0;
  std::optional<double> female_male_ratio;  // defined only when sn_male > 0
};

// Yearly share of special-needs participants among all participants, with
// the female/male ratio of the special-needs group. Expects study-mobility
// records (special-needs and not) covering every requested year.
inline std::vector<ShareTimeseriesEntry> sn_share_timeseries(
    std::span<const MobilityRecord> records, std::span<const int> years) {
  std::vector<ShareTimeseriesEntry> out;
  for (const int year : years) {
    ShareTimeseriesEntry entry;
    entry.year = year;
    for (const MobilityRecord& r : records) {
      if (r.year != year) continue;
      ++entry.total;
      if (!r.has_special_needs()) continue;
      ++entry.sn_total;
      if (r.gender == Gender::F) ++entry.sn_female;
      if (r.gender == Gender::M) ++entry.sn_male;
    }
    if (entry.total == 0) throw MissingYearError(year);
    entry.sn_over_total_pct =
        100.0 * static_cast<double>(entry.sn_total) / static_cast<double>(entry.total);
    if (entry.sn_male > 0) {
      entry.female_male_ratio =
          static_cast<double>(entry.sn_female) / static_cast<double>(entry.sn_male);
    }
    out.push_back(entry);
  }
  return out;
}

struct CountryShareRow {
  std::string country;
  std::int64_t sn_outgoing_m = 0;
  std::int64_t sn_outgoing_f = 0;
  std::int64_t sn_outgoing_total = 0;  // includes unknown gender
  std::int64_t total_outgoing = 0;
  std::optional<double> sn_population_share_m_pct;
  std::optional<double> sn_population_share_f_pct;
  std::optional<double> sn_population_share_all_pct;
  double sn_over_total_pct = 0.0;
  std::optional<double> total_over_population_pct;
};

struct ShareReport {
  int year = 0;
  std::vector<CountryShareRow> rows;       // sorted by country code
  std::vector<std::string> omitted;        // countries lacking population rows
  // aggregates over every input country, the omitted ones included
  std::int64_t aggregate_sn_outgoing = 0;
  std::int64_t aggregate_total_outgoing = 0;
  double aggregate_sn_over_total_pct = 0.0;
};

// Outgoing special-needs participants per home country as a share of the
// estimated special-needs student population, by gender and overall.
// Countries without a population row are omitted from the share rows and
// reported in `omitted`; every input country lands in exactly one of the two.
inline ShareReport country_shares(std::span<const MobilityRecord> records, int year,
                                  const PopulationTable& population) {
  struct Counts {
    std::int64_t sn_m = 0, sn_f = 0, sn_total = 0, total = 0;
  };
  std::map<std::string, Counts> by_country;
  for (const MobilityRecord& r : records) {
    if (r.year != year) continue;
    Counts& c = by_country[r.home_country];
    ++c.total;
    if (!r.has_special_needs()) continue;
    ++c.sn_total;
    if (r.gender == Gender::M) ++c.sn_m;
    if (r.gender == Gender::F) ++c.sn_f;
  }

  ShareReport report;
  report.year = year;
  auto share_pct = [&](const std::string& country, std::int64_t outgoing,
                       const std::optional<PopulationRow>& pop) -> std::optional<double> {
    if (!pop) return std::nullopt;
    const double sn_population = pop->estimated_sn_population();
    if (sn_population <= 0.0) {
      if (outgoing > 0) {
        throw DataError("country '" + country +
                        "' has outgoing special-needs students but a zero estimated "
                        "special-needs population");
      }
      return 0.0;
    }
    return 100.0 * static_cast<double>(outgoing) / sn_population;
  };

  for (const auto& [country, counts] : by_country) {
    const auto pop_all = population.get(country, PopGender::All);
    if (!pop_all) {
      report.omitted.push_back(country);
      continue;
    }
    CountryShareRow row;
    row.country = country;
    row.sn_outgoing_m = counts.sn_m;
    row.sn_outgoing_f = counts.sn_f;
    row.sn_outgoing_total = counts.sn_total;
    row.total_outgoing = counts.total;
    row.sn_population_share_all_pct = share_pct(country, counts.sn_total, pop_all);
    row.sn_population_share_m_pct =
        share_pct(country, counts.sn_m, population.get(country, PopGender::M));
    row.sn_population_share_f_pct =
        share_pct(country, counts.sn_f, population.get(country, PopGender::F));
    row.sn_over_total_pct =
        100.0 * static_cast<double>(counts.sn_total) / static_cast<double>(counts.total);
    if (pop_all->he_enrollment > 0) {
      row.total_over_population_pct = 100.0 * static_cast<double>(counts.total) /
                                      static_cast<double>(pop_all->he_enrollment);
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& [country, counts] : by_country) {
    report.aggregate_sn_outgoing += counts.sn_total;
    report.aggregate_total_outgoing += counts.total;
  }
  if (report.aggregate_total_outgoing > 0) {
    report.aggregate_sn_over_total_pct = 100.0 *
                                         static_cast<double>(report.aggregate_sn_outgoing) /
                                         static_cast<double>(report.aggregate_total_outgoing);
  }
  return report;
}

// Table-1-shaped CSV: country, male share, female share, overall share.
inline void write_share_csv(std::ostream& os, const ShareReport& report, int decimals = 4) {
  write_csv_row(os, std::vector<std::string>{"country", "M_pct", "F_pct", "overall_pct"});
  auto cell = [&](const std::optional<double>& v) {
    return v ? format_fixed(*v, decimals) : std::string("NA");
  };
  for (const CountryShareRow& row : report.rows) {
    write_csv_row(os, std::vector<std::string>{row.country, cell(row.sn_population_share_m_pct),
                                               cell(row.sn_population_share_f_pct),
                                               cell(row.sn_population_share_all_pct)});
  }
}

inline void write_timeseries_csv(std::ostream& os, std::span<const ShareTimeseriesEntry> entries,
                                 int decimals = 4) {
  write_csv_row(os, std::vector<std::string>{"year", "sn_participants", "total_participants",
                                             "sn_female", "sn_male", "sn_over_total_pct",
                                             "female_male_ratio"});
  for (const ShareTimeseriesEntry& e : entries) {
    write_csv_row(os, std::vector<std::string>{
                          std::to_string(e.year), std::to_string(e.sn_total),
                          std::to_string(e.total), std::to_string(e.sn_female),
                          std::to_string(e.sn_male), format_fixed(e.sn_over_total_pct, decimals),
                          e.female_male_ratio ? format_fixed(*e.female_male_ratio, decimals)
                                              : std::string("NA")});
  }
}

}  // namespace mobnet
