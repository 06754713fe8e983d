#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mobnet/csv.hpp"
#include "mobnet/errors.hpp"
#include "mobnet/ingest.hpp"
#include "mobnet/records.hpp"

namespace mobnet {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

struct NodeAttrs {
  std::string country;  // ISO alpha-2; empty when unattributed
  std::string city;
  std::optional<GeoPoint> coord;
};

// Finest aggregation key for a flow: ordered institution pair, gender and
// field class. The full field label is retained so connections can be split
// either by the binary STEM class or by the full field.
struct WeightKey {
  std::string src;
  std::string dst;
  Gender gender = Gender::Unknown;
  StemClass stem = StemClass::NonStem;
  std::string field;  // normalized label

  friend bool operator<(const WeightKey& a, const WeightKey& b) {
    return std::tie(a.src, a.dst, a.gender, a.stem, a.field) <
           std::tie(b.src, b.dst, b.gender, b.stem, b.field);
  }
  friend bool operator==(const WeightKey& a, const WeightKey& b) {
    return std::tie(a.src, a.dst, a.gender, a.stem, a.field) ==
           std::tie(b.src, b.dst, b.gender, b.stem, b.field);
  }
};

struct CohortSlice {
  std::optional<Gender> gender;
  std::optional<StemClass> stem;

  bool matches(const WeightKey& k) const {
    if (gender && k.gender != *gender) return false;
    if (stem && k.stem != *stem) return false;
    return true;
  }
};

enum class NodeRole { Sender, Receiver, Both, Inactive };

inline std::string_view role_name(NodeRole r) {
  switch (r) {
    case NodeRole::Sender: return "sender";
    case NodeRole::Receiver: return "receiver";
    case NodeRole::Both: return "both";
    default: return "inactive";
  }
}

// Yearly directed weighted network over a fixed node universe. Isolates are
// first-class members of the node set. Immutable after construction; any
// number of readers may evaluate metrics concurrently.
class Network {
 public:
  Network(int year, std::vector<std::string> universe,
          std::map<WeightKey, std::int64_t> weights = {},
          std::map<std::string, NodeAttrs> attrs = {})
      : year_(year),
        nodes_(std::move(universe)),
        weights_(std::move(weights)),
        attrs_(std::move(attrs)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    node_set_.insert(nodes_.begin(), nodes_.end());

    std::set<std::pair<std::string, std::string>> arc_set;
    for (const auto& [key, count] : weights_) {
      if (count <= 0) throw DataError("non-positive weight for arc " + key.src + " -> " + key.dst);
      if (key.src == key.dst) throw DataError("self-loop arc at institution '" + key.src + "'");
      if (!node_set_.count(key.src))
        throw DataError("institution '" + key.src + "' outside the node universe");
      if (!node_set_.count(key.dst))
        throw DataError("institution '" + key.dst + "' outside the node universe");
      arc_set.emplace(key.src, key.dst);
      out_strength_[key.src] += count;
      in_strength_[key.dst] += count;
    }
    arcs_.assign(arc_set.begin(), arc_set.end());
    for (const auto& [src, dst] : arcs_) {
      ++out_degree_[src];
      ++in_degree_[dst];
    }
  }

  int year() const { return year_; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  bool has_node(const std::string& code) const { return node_set_.count(code) > 0; }
  const std::map<WeightKey, std::int64_t>& weights() const { return weights_; }
  const std::vector<std::pair<std::string, std::string>>& arcs() const { return arcs_; }
  std::int64_t arc_count() const { return static_cast<std::int64_t>(arcs_.size()); }

  const NodeAttrs& attrs(const std::string& code) const {
    static const NodeAttrs empty;
    const auto it = attrs_.find(code);
    return it == attrs_.end() ? empty : it->second;
  }
  const std::map<std::string, NodeAttrs>& all_attrs() const { return attrs_; }

  std::int64_t in_strength(const std::string& code) const { return lookup(in_strength_, code); }
  std::int64_t out_strength(const std::string& code) const { return lookup(out_strength_, code); }
  std::int64_t in_degree(const std::string& code) const { return lookup(in_degree_, code); }
  std::int64_t out_degree(const std::string& code) const { return lookup(out_degree_, code); }

  std::int64_t total_strength() const {
    std::int64_t sum = 0;
    for (const auto& [key, count] : weights_) sum += count;
    return sum;
  }

 private:
  static std::int64_t lookup(const std::map<std::string, std::int64_t>& m,
                             const std::string& code) {
    const auto it = m.find(code);
    return it == m.end() ? 0 : it->second;
  }

  int year_;
  std::vector<std::string> nodes_;
  std::map<WeightKey, std::int64_t> weights_;
  std::map<std::string, NodeAttrs> attrs_;
  std::set<std::string> node_set_;
  std::vector<std::pair<std::string, std::string>> arcs_;
  std::map<std::string, std::int64_t> in_strength_, out_strength_;
  std::map<std::string, std::int64_t> in_degree_, out_degree_;
};

struct GeoEntry {
  std::string city;
  std::string country;
  std::optional<GeoPoint> coord;
};

using GeoTable = std::map<std::string, GeoEntry>;

// Expects a header row (institution_code, city, country, lat, lon). Rows with
// empty lat/lon carry no coordinates; anything unparsable is fatal.
inline GeoTable load_geo_table(std::istream& in, char delimiter = ',') {
  CsvReader reader(in, delimiter);
  std::vector<std::string> row;
  if (!reader.next(row)) throw ParseError("geo table: empty file");
  if (row.size() != 5 || detail::trim(row[0]) != "institution_code") {
    throw ParseError("geo table: expected header institution_code,city,country,lat,lon");
  }
  GeoTable table;
  while (reader.next(row)) {
    if (row.size() != 5) {
      throw ParseError("geo table: row " + std::to_string(reader.record_number()) +
                       ": expected 5 cells, got " + std::to_string(row.size()));
    }
    const std::string code = normalize_institution(row[0]);
    if (code.empty()) {
      throw ParseError("geo table: row " + std::to_string(reader.record_number()) +
                       ": empty institution code");
    }
    GeoEntry entry;
    entry.city = detail::trim(row[1]);
    entry.country = detail::collapse_spaces(detail::trim(row[2]), /*upper=*/true);
    const std::string lat = detail::trim(row[3]), lon = detail::trim(row[4]);
    if (!lat.empty() || !lon.empty()) {
      const auto plat = detail::parse_amount(lat);
      const auto plon = detail::parse_amount(lon);
      if (!plat || !plon) {
        throw ParseError("geo table: row " + std::to_string(reader.record_number()) +
                         ": unparsable coordinates");
      }
      entry.coord = GeoPoint{*plat, *plon};
    }
    table[code] = std::move(entry);
  }
  return table;
}

enum class UniversePolicy { SpecialNeedsUnion, AllParticipants };

// Union of home and host institutions across all analysis years. The default
// policy restricts the union to special-needs flows, so that per-year isolate
// counts are relative to the institutions that ever took part in those flows.
inline std::vector<std::string> build_universe(std::span<const MobilityRecord> records,
                                               UniversePolicy policy =
                                                   UniversePolicy::SpecialNeedsUnion) {
  std::set<std::string> universe;
  for (const MobilityRecord& r : records) {
    if (policy == UniversePolicy::SpecialNeedsUnion && !r.has_special_needs()) continue;
    universe.insert(r.home_institution.normalized);
    universe.insert(r.host_institution.normalized);
  }
  if (universe.empty()) throw DataError("empty record set: no institutions define a universe");
  return {universe.begin(), universe.end()};
}

// Aggregates one year of records into a network over the given universe.
// Country attribution comes from the records themselves (home country when
// sending, host country when receiving); a geo table only fills cities,
// coordinates and the countries of isolates.
inline Network build_network(std::span<const MobilityRecord> records, int year,
                             std::span<const std::string> universe,
                             const GeoTable* geo = nullptr) {
  std::set<std::string> node_set(universe.begin(), universe.end());
  std::map<WeightKey, std::int64_t> weights;
  std::map<std::string, NodeAttrs> attrs;

  auto attribute_country = [&](const std::string& code, const std::string& country) {
    NodeAttrs& a = attrs[code];
    if (a.country.empty()) {
      a.country = country;
    } else if (a.country != country) {
      throw DataError("conflicting country attribution for '" + code + "': '" + a.country +
                      "' vs '" + country + "'");
    }
  };

  for (const MobilityRecord& r : records) {
    if (r.year != year) {
      throw DataError("record year " + std::to_string(r.year) + " does not match network year " +
                      std::to_string(year));
    }
    const std::string& src = r.home_institution.normalized;
    const std::string& dst = r.host_institution.normalized;
    if (!node_set.count(src)) throw DataError("institution '" + src + "' outside the node universe");
    if (!node_set.count(dst)) throw DataError("institution '" + dst + "' outside the node universe");

    WeightKey key;
    key.src = src;
    key.dst = dst;
    key.gender = r.gender;
    key.field = normalize_field_label(r.field_of_study);
    key.stem = classify_stem(r.field_of_study);
    weights[key] += 1;

    attribute_country(src, r.home_country);
    attribute_country(dst, r.host_country);
  }

  if (geo) {
    for (const std::string& code : node_set) {
      const auto it = geo->find(code);
      if (it == geo->end()) continue;
      NodeAttrs& a = attrs[code];
      a.city = it->second.city;
      a.coord = it->second.coord;
      if (a.country.empty()) a.country = it->second.country;
    }
  }

  return Network(year, {universe.begin(), universe.end()}, std::move(weights), std::move(attrs));
}

// Restriction to one gender and/or field class. The universe is unchanged, so
// isolate counts of a slice stay comparable with the full network's.
inline Network subnetwork(const Network& network, const CohortSlice& slice) {
  std::map<WeightKey, std::int64_t> kept;
  for (const auto& [key, count] : network.weights()) {
    if (slice.matches(key)) kept.emplace(key, count);
  }
  return Network(network.year(), network.nodes(), std::move(kept), network.all_attrs());
}

inline std::map<std::string, NodeRole> node_roles(const Network& network) {
  std::map<std::string, NodeRole> roles;
  for (const std::string& node : network.nodes()) {
    const bool sends = network.out_degree(node) > 0;
    const bool receives = network.in_degree(node) > 0;
    roles[node] = sends && receives    ? NodeRole::Both
                  : sends              ? NodeRole::Sender
                  : receives           ? NodeRole::Receiver
                                       : NodeRole::Inactive;
  }
  return roles;
}

}  // namespace mobnet
