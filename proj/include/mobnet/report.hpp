#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mobnet/csv.hpp"
#include "mobnet/format.hpp"
#include "mobnet/metrics.hpp"
#include "mobnet/network.hpp"

namespace mobnet {

// The full statistics bundle for one (year, slice): activity counts,
// centralization, mixing and strength. Assortativity and reciprocity are
// optional because they are undefined on (near-)empty slices; the report
// renders them as NA rather than failing.
struct MetricsReport {
  int year = 0;
  std::string slice_label;
  std::int64_t universe = 0;
  std::int64_t active = 0;
  std::int64_t sending = 0;
  std::int64_t receiving = 0;
  std::int64_t partnerships = 0;
  std::int64_t active_connections = 0;
  std::int64_t isolates = 0;
  Ratio density;
  Ratio degree_all, degree_out, degree_in;
  double closeness_all = 0.0, closeness_out = 0.0, closeness_in = 0.0;
  std::optional<double> assortativity;
  std::optional<Ratio> reciprocity;
  std::int64_t strength_total = 0;
  std::int64_t strength_stem = 0;
  std::int64_t strength_non_stem = 0;
};

inline MetricsReport compute_report(const Network& net,
                                    StemSplitPolicy policy = StemSplitPolicy::Binary,
                                    std::string slice_label = "all") {
  MetricsReport report;
  report.year = net.year();
  report.slice_label = std::move(slice_label);
  report.universe = static_cast<std::int64_t>(net.nodes().size());
  report.active = active_count(net);
  report.isolates = isolate_count(net);
  const auto roles = node_roles(net);
  for (const auto& [node, role] : roles) {
    if (role == NodeRole::Sender || role == NodeRole::Both) ++report.sending;
    if (role == NodeRole::Receiver || role == NodeRole::Both) ++report.receiving;
  }
  report.partnerships = partnerships(net);
  report.active_connections = active_connections(net, policy);
  report.density = density(net);
  report.degree_all = degree_centralization(net, Direction::All);
  report.degree_out = degree_centralization(net, Direction::Out);
  report.degree_in = degree_centralization(net, Direction::In);
  report.closeness_all = closeness_centralization(net, Direction::All);
  report.closeness_out = closeness_centralization(net, Direction::Out);
  report.closeness_in = closeness_centralization(net, Direction::In);
  try {
    report.assortativity = assortativity(net);
  } catch (const DataError&) {
    report.assortativity = std::nullopt;
  }
  try {
    report.reciprocity = reciprocity(net);
  } catch (const DataError&) {
    report.reciprocity = std::nullopt;
  }
  const StrengthCounts s = strength(net);
  report.strength_total = s.total;
  report.strength_stem = s.stem;
  report.strength_non_stem = s.non_stem;
  return report;
}

// The three-column view of one year's network: everyone, male flows only,
// female flows only.
struct ReportColumns {
  MetricsReport all, male, female;
};

inline ReportColumns compute_report_columns(const Network& net,
                                            StemSplitPolicy policy = StemSplitPolicy::Binary) {
  CohortSlice male, female;
  male.gender = Gender::M;
  female.gender = Gender::F;
  return ReportColumns{
      compute_report(net, policy, "all"),
      compute_report(subnetwork(net, male), policy, "M"),
      compute_report(subnetwork(net, female), policy, "F"),
  };
}

namespace detail {

struct ReportRow {
  std::string name;   // CSV metric identifier
  std::string label;  // table row label
  bool indent = false;
  std::string all, m, f;
};

inline std::vector<ReportRow> report_rows(const ReportColumns& c, int decimals) {
  auto count = [](std::int64_t v) { return std::to_string(v); };
  auto ratio = [&](const Ratio& r) { return format_ratio_fixed(r, decimals); };
  auto real = [&](double v) { return format_fixed(v, decimals); };
  auto opt_real = [&](const std::optional<double>& v) {
    return v ? format_fixed(*v, decimals) : std::string("NA");
  };
  auto opt_ratio = [&](const std::optional<Ratio>& v) {
    return v ? format_ratio_fixed(*v, decimals) : std::string("NA");
  };
  auto row3 = [&](auto&& fmt, auto&& proj) {
    return std::array<std::string, 3>{fmt(proj(c.all)), fmt(proj(c.male)), fmt(proj(c.female))};
  };

  std::vector<ReportRow> rows;
  auto add = [&](std::string name, std::string label, bool indent,
                 std::array<std::string, 3> vals) {
    rows.push_back({std::move(name), std::move(label), indent, std::move(vals[0]),
                    std::move(vals[1]), std::move(vals[2])});
  };

  add("active_universities", "Active Universities", false,
      row3(count, [](const MetricsReport& r) { return r.active; }));
  add("sending", "sending", true, row3(count, [](const MetricsReport& r) { return r.sending; }));
  add("receiving", "receiving", true,
      row3(count, [](const MetricsReport& r) { return r.receiving; }));
  add("university_partnerships", "University partnerships", false,
      row3(count, [](const MetricsReport& r) { return r.partnerships; }));
  add("active_connections", "Active connections", false,
      row3(count, [](const MetricsReport& r) { return r.active_connections; }));
  add("isolates", "Isolates", false,
      row3(count, [](const MetricsReport& r) { return r.isolates; }));
  add("density", "Density", false, row3(ratio, [](const MetricsReport& r) { return r.density; }));
  add("degree_centralization", "Degree", false,
      row3(ratio, [](const MetricsReport& r) { return r.degree_all; }));
  add("degree_centralization_out", "out", true,
      row3(ratio, [](const MetricsReport& r) { return r.degree_out; }));
  add("degree_centralization_in", "in", true,
      row3(ratio, [](const MetricsReport& r) { return r.degree_in; }));
  add("closeness_centralization", "Closeness", false,
      row3(real, [](const MetricsReport& r) { return r.closeness_all; }));
  add("closeness_centralization_out", "out", true,
      row3(real, [](const MetricsReport& r) { return r.closeness_out; }));
  add("closeness_centralization_in", "in", true,
      row3(real, [](const MetricsReport& r) { return r.closeness_in; }));
  add("assortativity", "Assortativity", false,
      row3(opt_real, [](const MetricsReport& r) { return r.assortativity; }));
  add("reciprocity", "Reciprocity", false,
      row3(opt_ratio, [](const MetricsReport& r) { return r.reciprocity; }));
  add("strength", "Strength", false,
      row3(count, [](const MetricsReport& r) { return r.strength_total; }));
  add("strength_stem", "STEM", true,
      row3(count, [](const MetricsReport& r) { return r.strength_stem; }));
  add("strength_non_stem", "non-STEM", true,
      row3(count, [](const MetricsReport& r) { return r.strength_non_stem; }));
  return rows;
}

}  // namespace detail

inline void write_report_csv(std::ostream& os, const ReportColumns& columns, int decimals = 4) {
  write_csv_row(os, std::vector<std::string>{"metric", "all", "M", "F"});
  for (const auto& row : detail::report_rows(columns, decimals)) {
    write_csv_row(os, std::vector<std::string>{row.name, row.all, row.m, row.f});
  }
}

// Aligned plain-text table with the classic row structure: activity counts
// up top, centralization and mixing in the middle, strength at the bottom.
// Reciprocity is kept out of the text table and reported in the CSV only.
inline std::string render_report_table(const ReportColumns& columns, int decimals = 4,
                                       std::string_view title = {}) {
  std::ostringstream os;
  if (!title.empty()) os << title << "\n";
  constexpr int label_width = 26;
  constexpr int col_width = 10;
  auto pad_label = [&](const std::string& label, bool indent) {
    std::string text = (indent ? "    " : "") + label;
    if (text.size() < label_width) text.append(label_width - text.size(), ' ');
    return text;
  };
  auto pad_value = [&](const std::string& v) {
    std::string text = v;
    if (text.size() < col_width) text.insert(0, col_width - text.size(), ' ');
    return text;
  };
  os << pad_label("", false) << pad_value("all") << pad_value("M") << pad_value("F") << "\n";
  for (const auto& row : detail::report_rows(columns, decimals)) {
    if (row.name == "reciprocity") continue;
    os << pad_label(row.label, row.indent) << pad_value(row.all) << pad_value(row.m)
       << pad_value(row.f) << "\n";
  }
  return os.str();
}

}  // namespace mobnet
