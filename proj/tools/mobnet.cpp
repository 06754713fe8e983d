// Command-line driver: ingest mobility data, compute network statistics and
// inclusiveness tables, export GeoJSON/DOT/CSV artifacts.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobnet/mobnet.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliOptions {
  std::string config_path = "mobnet.json";
  std::optional<std::string> data_dir, schema_dir, years, out_dir;
  std::optional<std::string> universe_policy, stem_split, geo_table, population_table;
  std::optional<int> rounding;
};

std::pair<int, int> parse_year_range(const std::string& text) {
  try {
    const auto dash = text.find('-');
    if (dash == std::string::npos) {
      const int y = std::stoi(text);
      return {y, y};
    }
    return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
  } catch (const std::logic_error&) {
    throw UsageError("invalid year range '" + text + "' (expected YYYY or YYYY-YYYY)");
  }
}

std::vector<int> expand_window(const std::string& text) {
  const auto [first, last] = parse_year_range(text);
  if (first > last) throw UsageError("empty year window '" + text + "'");
  std::vector<int> years;
  for (int y = first; y <= last; ++y) years.push_back(y);
  return years;
}

mobnet::RunConfig effective_config(const CliOptions& opts) {
  mobnet::RunConfig config = mobnet::load_config(opts.config_path);
  const fs::path cwd = fs::current_path();
  auto resolve = [&](const std::string& p) {
    const fs::path fp(p);
    return fp.is_absolute() ? fp : cwd / fp;
  };
  if (opts.data_dir) config.data_dir = resolve(*opts.data_dir);
  if (opts.schema_dir) config.schema_dir = resolve(*opts.schema_dir);
  if (opts.years) {
    const auto [first, last] = parse_year_range(*opts.years);
    config.year_first = first;
    config.year_last = last;
  }
  if (opts.out_dir) config.output_dir = resolve(*opts.out_dir);
  if (opts.geo_table) config.geo_table = resolve(*opts.geo_table);
  if (opts.population_table) config.population_table = resolve(*opts.population_table);
  if (opts.universe_policy) config.universe_policy = mobnet::parse_universe_policy(*opts.universe_policy);
  if (opts.stem_split) config.stem_split = mobnet::parse_stem_split_policy(*opts.stem_split);
  if (opts.rounding) config.rounding = *opts.rounding;
  mobnet::validate_config(config);
  return config;
}

mobnet::CohortSlice make_slice(const std::string& gender, const std::string& stem) {
  mobnet::CohortSlice slice;
  if (gender == "F") slice.gender = mobnet::Gender::F;
  else if (gender == "M") slice.gender = mobnet::Gender::M;
  else if (gender != "all") throw UsageError("unknown slice '" + gender + "'");
  if (stem == "stem") slice.stem = mobnet::StemClass::Stem;
  else if (stem == "nonstem") slice.stem = mobnet::StemClass::NonStem;
  else if (stem != "all") throw UsageError("unknown stem slice '" + stem + "'");
  return slice;
}

std::string slice_suffix(const std::string& gender, const std::string& stem) {
  std::string suffix;
  if (gender != "all") suffix += "_" + gender;
  if (stem != "all") suffix += "_" + stem;
  return suffix;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mobnet::DataError("cannot write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
  return out;
}

const mobnet::Network& network_for_year(const std::map<int, mobnet::Network>& nets, int year,
                                        const mobnet::RunConfig& config) {
  if (year < config.year_first || year > config.year_last) {
    throw mobnet::DataError("no data for year " + std::to_string(year) +
                            " (outside configured range " + std::to_string(config.year_first) +
                            "-" + std::to_string(config.year_last) + ")");
  }
  const auto it = nets.find(year);
  if (it == nets.end()) throw mobnet::DataError("no data for year " + std::to_string(year));
  return it->second;
}

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_ingest(const mobnet::RunConfig& config) {
  const mobnet::Ingested ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  for (const auto& [year, records] : ingested.raw_by_year) {
    auto out = open_output(config.output_dir / ("records_" + std::to_string(year) + ".csv"));
    mobnet::serialize_records(out, records);
    std::cout << "year " << year << ": " << records.size() << " records\n";
  }
  auto rejects = open_output(config.output_dir / "rejects.csv");
  mobnet::write_reject_csv(rejects, ingested.rejects);
  std::cout << ingested.rejects.size() << " rejected rows\n";
  return 0;
}

int cmd_metrics(const mobnet::RunConfig& config, int year, const std::string& gender,
                const std::string& stem) {
  const auto ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  const auto nets = mobnet::build_year_networks(ingested, config);
  const mobnet::Network& base = network_for_year(nets.sn, year, config);
  const mobnet::Network sliced = mobnet::subnetwork(base, make_slice(gender, stem));
  const auto columns = mobnet::compute_report_columns(sliced, config.stem_split);

  const std::string suffix = slice_suffix(gender, stem);
  const std::string stem_name = "metrics_" + std::to_string(year) + suffix;
  {
    auto out = open_output(config.output_dir / (stem_name + ".csv"));
    mobnet::write_report_csv(out, columns, config.rounding);
  }
  const std::string title =
      "Summary statistics - special-needs mobility network - " + std::to_string(year) +
      (suffix.empty() ? "" : " (" + suffix.substr(1) + ")");
  const std::string table = mobnet::render_report_table(columns, config.rounding, title);
  {
    auto out = open_output(config.output_dir / (stem_name + ".txt"));
    out << table;
  }
  std::cout << table;
  return 0;
}

int cmd_top(const mobnet::RunConfig& config, int year, const std::string& direction,
            std::size_t k) {
  const auto ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  const auto nets = mobnet::build_year_networks(ingested, config);
  const mobnet::Network& net = network_for_year(nets.sn, year, config);
  const auto dir = direction == "in" ? mobnet::Direction::In : mobnet::Direction::Out;
  const auto ranking = mobnet::top_k(net, dir, k);

  auto out = open_output(config.output_dir /
                         ("top_" + direction + "_" + std::to_string(year) + ".csv"));
  mobnet::write_csv_row(out, std::vector<std::string>{"rank", "institution", "degree"});
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    mobnet::write_csv_row(out, std::vector<std::string>{std::to_string(i + 1),
                                                        ranking[i].institution,
                                                        std::to_string(ranking[i].degree)});
  }
  return 0;
}

int cmd_inclusiveness(const mobnet::RunConfig& config, const std::string& early_text,
                      const std::string& late_text) {
  const std::vector<int> early = expand_window(early_text);
  const std::vector<int> late = expand_window(late_text);
  std::vector<int> union_window = early;
  union_window.insert(union_window.end(), late.begin(), late.end());
  std::sort(union_window.begin(), union_window.end());
  union_window.erase(std::unique(union_window.begin(), union_window.end()), union_window.end());

  const auto ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  const auto nets = mobnet::build_year_networks(ingested, config);

  const std::vector<std::string> persistent =
      mobnet::persistent_receivers(nets.sn, union_window);
  std::map<std::string, std::map<int, mobnet::InclusivenessScore>> scores;
  for (const std::string& institution : persistent) {
    for (const int year : union_window) {
      scores[institution].emplace(
          year, mobnet::compute_index(institution, nets.sn.at(year), nets.full.at(year)));
    }
  }
  const auto rows = mobnet::slopegraph_table(persistent, scores, early, late);
  auto out = open_output(config.output_dir / "slopegraph.csv");
  mobnet::write_slopegraph_csv(out, rows, config.rounding);
  std::cout << rows.size() << " persistent receiving institutions\n";
  return 0;
}

int cmd_shares(const mobnet::RunConfig& config, std::optional<int> year) {
  const auto ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  const auto cohort = mobnet::study_cohort(ingested);
  std::vector<int> years;
  for (const auto& [y, records] : ingested.raw_by_year) years.push_back(y);

  const auto timeseries = mobnet::sn_share_timeseries(cohort, years);
  {
    auto out = open_output(config.output_dir / "sn_share_timeseries.csv");
    mobnet::write_timeseries_csv(out, timeseries, config.rounding);
  }

  if (year) {
    if (!config.population_table) {
      throw mobnet::DataError("country shares need a population_table in the config");
    }
    std::ifstream in(*config.population_table, std::ios::binary);
    if (!in) throw mobnet::ParseError("cannot open " + config.population_table->string());
    const auto population = mobnet::load_population_table(in);
    if (!ingested.raw_by_year.count(*year)) {
      throw mobnet::DataError("no data for year " + std::to_string(*year));
    }
    const auto report = mobnet::country_shares(cohort, *year, population);
    for (const std::string& country : report.omitted) {
      std::cerr << "warning: country " << country
                << " omitted from shares (no population row)\n";
    }
    auto out = open_output(config.output_dir /
                           ("country_shares_" + std::to_string(*year) + ".csv"));
    mobnet::write_share_csv(out, report, config.rounding);
  }
  return 0;
}

int cmd_export_geo(const mobnet::RunConfig& config, int year, const std::string& gender,
                   const std::string& stem) {
  const auto ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  const auto nets = mobnet::build_year_networks(ingested, config);
  const mobnet::Network& base = network_for_year(nets.sn, year, config);
  const mobnet::Network sliced = mobnet::subnetwork(base, make_slice(gender, stem));
  const auto roles = mobnet::node_roles(sliced);
  const auto exported = mobnet::export_geojson(sliced, roles);

  const std::string suffix = slice_suffix(gender, stem);
  const std::string name = "network_" + std::to_string(year) + suffix;
  {
    auto out = open_output(config.output_dir / (name + ".geojson"));
    out << exported.document.dump(2) << "\n";
  }
  {
    auto out = open_output(config.output_dir / (name + "_missing_geo.txt"));
    for (const std::string& node : exported.nodes_without_coordinates) out << node << "\n";
  }
  return 0;
}

int cmd_export_dot(const mobnet::RunConfig& config, int year, const std::string& gender,
                   const std::string& stem) {
  const auto ingested = mobnet::ingest_all(config);
  emit_warnings(ingested.warnings);
  const auto nets = mobnet::build_year_networks(ingested, config);
  const mobnet::Network& base = network_for_year(nets.sn, year, config);
  const mobnet::Network sliced = mobnet::subnetwork(base, make_slice(gender, stem));

  const std::string suffix = slice_suffix(gender, stem);
  auto out = open_output(config.output_dir /
                         ("network_" + std::to_string(year) + suffix + ".dot"));
  out << mobnet::export_dot(sliced);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"student mobility network analytics"};
  app.require_subcommand(1);

  CliOptions opts;
  app.add_option("--config", opts.config_path, "run configuration file (JSON)");
  app.add_option("--data-dir", opts.data_dir, "override data directory");
  app.add_option("--schema-dir", opts.schema_dir, "override schema directory");
  app.add_option("--years", opts.years, "override analysis year range, e.g. 2008-2013");
  app.add_option("--out", opts.out_dir, "override output directory");
  app.add_option("--geo-table", opts.geo_table, "override geo table path");
  app.add_option("--population-table", opts.population_table, "override population table path");
  app.add_option("--universe-policy", opts.universe_policy, "sn_union or all_participants");
  app.add_option("--stem-split", opts.stem_split, "binary or full_field");
  app.add_option("--rounding", opts.rounding, "decimal places for ratios");

  auto* ingest = app.add_subcommand("ingest", "parse all data files, write normalized records");

  int year = 0;
  std::string gender = "all", stem = "all";
  auto* metrics = app.add_subcommand("metrics", "summary statistics table for one year");
  metrics->add_option("--year", year, "network year")->required();
  metrics->add_option("--slice", gender, "all, F or M");
  metrics->add_option("--stem", stem, "all, stem or nonstem");

  std::string direction = "out";
  std::size_t k = 5;
  auto* top = app.add_subcommand("top", "highest-degree institutions");
  top->add_option("--year", year, "network year")->required();
  top->add_option("--direction", direction, "in or out")
      ->check(CLI::IsMember({"in", "out"}));
  top->add_option("--k", k, "list length")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));

  std::string early, late;
  auto* inclusiveness = app.add_subcommand("inclusiveness", "slopegraph of period-mean indexes");
  inclusiveness->add_option("--early", early, "early window, e.g. 2008-2010")->required();
  inclusiveness->add_option("--late", late, "late window, e.g. 2011-2013")->required();

  std::optional<int> shares_year;
  auto* shares = app.add_subcommand("shares", "participation share tables");
  shares->add_option("--year", shares_year, "year for country shares");

  auto* export_geo = app.add_subcommand("export-geo", "GeoJSON of one year's network");
  export_geo->add_option("--year", year, "network year")->required();
  export_geo->add_option("--slice", gender, "all, F or M");
  export_geo->add_option("--stem", stem, "all, stem or nonstem");

  auto* export_dot = app.add_subcommand("export-dot", "Graphviz digraph of one year's network");
  export_dot->add_option("--year", year, "network year")->required();
  export_dot->add_option("--slice", gender, "all, F or M");
  export_dot->add_option("--stem", stem, "all, stem or nonstem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    const mobnet::RunConfig config = effective_config(opts);
    if (ingest->parsed()) return cmd_ingest(config);
    if (metrics->parsed()) return cmd_metrics(config, year, gender, stem);
    if (top->parsed()) return cmd_top(config, year, direction, k);
    if (inclusiveness->parsed()) return cmd_inclusiveness(config, early, late);
    if (shares->parsed()) return cmd_shares(config, shares_year);
    if (export_geo->parsed()) return cmd_export_geo(config, year, gender, stem);
    if (export_dot->parsed()) return cmd_export_dot(config, year, gender, stem);
  } catch (const UsageError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  } catch (const mobnet::Error& e) {
    std::cerr << "error: data: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: data: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
