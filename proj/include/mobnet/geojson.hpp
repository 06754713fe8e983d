#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobnet/metrics.hpp"
#include "mobnet/network.hpp"

namespace mobnet {

struct GeoJsonExport {
  nlohmann::ordered_json document;
  std::vector<std::string> nodes_without_coordinates;  // sidecar warning list
};

// FeatureCollection with one Point per universe node (role included, so
// inactive nodes can be drawn as background) and one LineString per
// (src, dst, gender, STEM class) flow aggregate. Coordinates are WGS84
// lon/lat. Features whose geometry cannot be placed are kept with a null
// geometry and the affected nodes are listed for the sidecar file.
inline GeoJsonExport export_geojson(const Network& net,
                                    const std::map<std::string, NodeRole>& roles) {
  GeoJsonExport result;
  nlohmann::ordered_json features = nlohmann::ordered_json::array();

  for (const std::string& node : net.nodes()) {
    const NodeAttrs& attrs = net.attrs(node);
    nlohmann::ordered_json feature;
    feature["type"] = "Feature";
    if (attrs.coord) {
      feature["geometry"] = {{"type", "Point"},
                             {"coordinates", {attrs.coord->lon, attrs.coord->lat}}};
    } else {
      feature["geometry"] = nullptr;
      result.nodes_without_coordinates.push_back(node);
    }
    nlohmann::ordered_json props;
    props["institution"] = node;
    props["country"] = attrs.country;
    const auto it = roles.find(node);
    props["role"] = std::string(role_name(it == roles.end() ? NodeRole::Inactive : it->second));
    feature["properties"] = std::move(props);
    features.push_back(std::move(feature));
  }

  // flows aggregated over field labels within a STEM class
  std::map<std::tuple<std::string, std::string, Gender, StemClass>, std::int64_t> flows;
  for (const auto& [key, count] : net.weights()) {
    flows[{key.src, key.dst, key.gender, key.stem}] += count;
  }
  for (const auto& [key, weight] : flows) {
    const auto& [src, dst, gender, stem] = key;
    const auto& src_coord = net.attrs(src).coord;
    const auto& dst_coord = net.attrs(dst).coord;
    nlohmann::ordered_json feature;
    feature["type"] = "Feature";
    if (src_coord && dst_coord) {
      feature["geometry"] = {{"type", "LineString"},
                             {"coordinates",
                              {{src_coord->lon, src_coord->lat}, {dst_coord->lon, dst_coord->lat}}}};
    } else {
      feature["geometry"] = nullptr;
    }
    nlohmann::ordered_json props;
    props["src"] = src;
    props["dst"] = dst;
    props["gender"] = std::string(gender_token(gender));
    props["stem"] = stem == StemClass::Stem ? "STEM" : "non-STEM";
    props["weight"] = weight;
    feature["properties"] = std::move(props);
    features.push_back(std::move(feature));
  }

  result.document["type"] = "FeatureCollection";
  result.document["features"] = std::move(features);
  return result;
}

}  // namespace mobnet
