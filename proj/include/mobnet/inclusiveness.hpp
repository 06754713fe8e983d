#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mobnet/csv.hpp"
#include "mobnet/errors.hpp"
#include "mobnet/format.hpp"
#include "mobnet/network.hpp"
#include "mobnet/ratio.hpp"

namespace mobnet {

// How far a university's share of its country's incoming special-needs
// students deviates from its share of all incoming students. raw_index is
//   (i_sn_u / i_sn_c) * (i_c / i_u)
// over weighted in-strengths; bounded_index maps it through (I-1)/(I+1)
// into [-1, 1), with 0 meaning the university sits exactly on its country's
// average.
struct InclusivenessScore {
  std::string institution;
  int year = 0;
  std::int64_t incoming_sn_university = 0;  // i_sn_u
  std::int64_t incoming_sn_country = 0;     // i_sn_c
  std::int64_t incoming_university = 0;     // i_u
  std::int64_t incoming_country = 0;        // i_c
  Ratio raw_index;
  Ratio bounded_index;
};

// (I-1)/(I+1): the strictly increasing bijection from [0, inf) onto [-1, 1)
// with bound(1) = 0 and bound(1/x) = -bound(x).
inline double bound(double raw_index) {
  if (raw_index < 0) throw DataError("inclusiveness index must be non-negative");
  return (raw_index - 1.0) / (raw_index + 1.0);
}

inline Ratio bound_ratio(const Ratio& raw_index) {
  if (raw_index.num() < 0) throw DataError("inclusiveness index must be non-negative");
  return Ratio(raw_index.num() - raw_index.den(), raw_index.num() + raw_index.den());
}

// Computes the score of one institution for one year. The special-needs
// network supplies the numerator strengths, the full network the
// denominators; both must cover the same year and the full network decides
// each node's country.
inline InclusivenessScore compute_index(const std::string& institution, const Network& sn,
                                        const Network& full) {
  if (sn.year() != full.year()) {
    throw DataError("special-needs and full networks cover different years");
  }
  if (!full.has_node(institution)) {
    throw DataError("institution '" + institution + "' outside the node universe");
  }
  const std::string& country = full.attrs(institution).country;
  if (country.empty()) {
    throw DataError("institution '" + institution + "' has no country attribution");
  }

  InclusivenessScore score;
  score.institution = institution;
  score.year = full.year();
  score.incoming_university = full.in_strength(institution);
  score.incoming_sn_university = sn.in_strength(institution);
  for (const std::string& node : full.nodes()) {
    if (full.attrs(node).country != country) continue;
    score.incoming_country += full.in_strength(node);
    score.incoming_sn_country += sn.in_strength(node);
  }
  if (score.incoming_sn_country == 0) throw CountryNoIncomingSnError(country);
  if (score.incoming_university == 0) throw UniversityNoIncomingError(institution);

  score.raw_index = Ratio(score.incoming_sn_university * score.incoming_country,
                          score.incoming_sn_country * score.incoming_university);
  score.bounded_index = bound_ratio(score.raw_index);
  return score;
}

// Institutions that received at least one special-needs student in every
// window year.
inline std::vector<std::string> persistent_receivers(const std::map<int, Network>& sn_by_year,
                                                     std::span<const int> window) {
  if (window.empty()) throw DataError("empty year window");
  std::vector<const Network*> nets;
  for (const int year : window) {
    const auto it = sn_by_year.find(year);
    if (it == sn_by_year.end()) throw MissingYearError(year);
    nets.push_back(&it->second);
  }
  std::vector<std::string> persistent;
  for (const std::string& node : nets.front()->nodes()) {
    const bool everywhere = std::all_of(nets.begin(), nets.end(), [&](const Network* net) {
      return net->in_strength(node) >= 1;
    });
    if (everywhere) persistent.push_back(node);
  }
  return persistent;
}

struct PeriodAverage {
  std::string institution;
  std::vector<int> window;
  double mean_bounded_index = 0.0;
};

inline PeriodAverage period_average(const std::string& institution,
                                    const std::map<int, InclusivenessScore>& by_year,
                                    std::span<const int> window) {
  if (window.empty()) throw DataError("empty year window");
  PeriodAverage avg;
  avg.institution = institution;
  double sum = 0.0;
  for (const int year : window) {
    const auto it = by_year.find(year);
    if (it == by_year.end()) throw MissingYearError(year);
    avg.window.push_back(year);
    sum += it->second.bounded_index.value();
  }
  avg.mean_bounded_index = sum / static_cast<double>(window.size());
  return avg;
}

struct SlopegraphRow {
  std::string institution;
  double early_mean = 0.0;
  double late_mean = 0.0;
  double delta = 0.0;
};

// One row per institution: mean bounded index over the early window, over
// the late window, and the change. Sorted by late mean descending, ties by
// institution code.
inline std::vector<SlopegraphRow> slopegraph_table(
    std::span<const std::string> institutions,
    const std::map<std::string, std::map<int, InclusivenessScore>>& scores,
    std::span<const int> early, std::span<const int> late) {
  std::vector<SlopegraphRow> rows;
  for (const std::string& institution : institutions) {
    const auto it = scores.find(institution);
    if (it == scores.end()) throw DataError("no scores for institution '" + institution + "'");
    const PeriodAverage e = period_average(institution, it->second, early);
    const PeriodAverage l = period_average(institution, it->second, late);
    rows.push_back({institution, e.mean_bounded_index, l.mean_bounded_index,
                    l.mean_bounded_index - e.mean_bounded_index});
  }
  std::sort(rows.begin(), rows.end(), [](const SlopegraphRow& a, const SlopegraphRow& b) {
    if (a.late_mean != b.late_mean) return a.late_mean > b.late_mean;
    return a.institution < b.institution;
  });
  return rows;
}

inline void write_slopegraph_csv(std::ostream& os, std::span<const SlopegraphRow> rows,
                                 int decimals = 4) {
  write_csv_row(os, std::vector<std::string>{"institution", "early_mean", "late_mean", "delta"});
  for (const SlopegraphRow& row : rows) {
    write_csv_row(os, std::vector<std::string>{row.institution,
                                               format_fixed(row.early_mean, decimals),
                                               format_fixed(row.late_mean, decimals),
                                               format_fixed(row.delta, decimals)});
  }
}

}  // namespace mobnet
