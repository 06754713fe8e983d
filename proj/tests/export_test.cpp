#include <gtest/gtest.h>

#include <json.hpp>

#include "mobnet/dot.hpp"
#include "mobnet/format.hpp"
#include "mobnet/geojson.hpp"
#include "mobnet/report.hpp"

namespace mobnet {
namespace {

Network two_city_network() {
  const std::vector<std::string> universe = {"FR PARIS01", "PL WARSZAW01"};
  std::map<WeightKey, std::int64_t> weights{
      {{"FR PARIS01", "PL WARSZAW01", Gender::F, StemClass::NonStem,
        "business, administration and law"},
       1}};
  std::map<std::string, NodeAttrs> attrs{
      {"FR PARIS01", {.country = "FR", .city = "Paris", .coord = GeoPoint{48.85, 2.35}}},
      {"PL WARSZAW01", {.country = "PL", .city = "Warsaw", .coord = GeoPoint{52.23, 21.01}}},
  };
  return Network(2008, universe, weights, attrs);
}

TEST(GeoJson, SingleFlowDocument) {
  const Network net = two_city_network();
  const auto exported = export_geojson(net, node_roles(net));
  EXPECT_TRUE(exported.nodes_without_coordinates.empty());

  const auto expected = nlohmann::ordered_json::parse(R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature",
       "geometry": {"type": "Point", "coordinates": [2.35, 48.85]},
       "properties": {"institution": "FR PARIS01", "country": "FR", "role": "sender"}},
      {"type": "Feature",
       "geometry": {"type": "Point", "coordinates": [21.01, 52.23]},
       "properties": {"institution": "PL WARSZAW01", "country": "PL", "role": "receiver"}},
      {"type": "Feature",
       "geometry": {"type": "LineString",
                    "coordinates": [[2.35, 48.85], [21.01, 52.23]]},
       "properties": {"src": "FR PARIS01", "dst": "PL WARSZAW01", "gender": "F",
                      "stem": "non-STEM", "weight": 1}}
    ]
  })");
  EXPECT_EQ(exported.document, expected);
}

TEST(GeoJson, InactiveNodeKeepsRoleProperty) {
  const std::vector<std::string> universe = {"AA LONER01"};
  std::map<std::string, NodeAttrs> attrs{
      {"AA LONER01", {.country = "AA", .city = "", .coord = GeoPoint{10.0, 20.0}}}};
  const Network net(2008, universe, {}, attrs);
  const auto exported = export_geojson(net, node_roles(net));
  const auto& features = exported.document.at("features");
  ASSERT_EQ(features.size(), 1u);
  EXPECT_EQ(features[0].at("properties").at("role"), "inactive");
  EXPECT_EQ(features[0].at("geometry").at("type"), "Point");
}

TEST(GeoJson, EmptyNetworkHasNoFeatures) {
  const Network net(2008, {});
  const auto exported = export_geojson(net, {});
  EXPECT_EQ(exported.document.at("type"), "FeatureCollection");
  EXPECT_TRUE(exported.document.at("features").empty());
}

TEST(GeoJson, MissingCoordinatesGiveNullGeometryAndSidecarEntry) {
  const std::vector<std::string> universe = {"AA KNOWN01", "BB LOST01"};
  std::map<WeightKey, std::int64_t> weights{
      {{"AA KNOWN01", "BB LOST01", Gender::M, StemClass::Stem, "icts"}, 2}};
  std::map<std::string, NodeAttrs> attrs{
      {"AA KNOWN01", {.country = "AA", .city = "", .coord = GeoPoint{1.0, 2.0}}},
      {"BB LOST01", {.country = "BB"}},
  };
  const Network net(2008, universe, weights, attrs);
  const auto exported = export_geojson(net, node_roles(net));
  EXPECT_EQ(exported.nodes_without_coordinates, (std::vector<std::string>{"BB LOST01"}));
  const auto& features = exported.document.at("features");
  ASSERT_EQ(features.size(), 3u);
  EXPECT_TRUE(features[1].at("geometry").is_null());   // the unplaced node
  EXPECT_TRUE(features[2].at("geometry").is_null());   // the arc touching it
  EXPECT_EQ(features[2].at("properties").at("weight"), 2);
}

TEST(GeoJson, ValidFeatureCollectionGrammar) {
  const Network net = two_city_network();
  const auto exported = export_geojson(net, node_roles(net));
  const auto doc = nlohmann::json::parse(exported.document.dump());
  EXPECT_EQ(doc.at("type"), "FeatureCollection");
  ASSERT_TRUE(doc.at("features").is_array());
  for (const auto& feature : doc.at("features")) {
    EXPECT_EQ(feature.at("type"), "Feature");
    ASSERT_TRUE(feature.contains("geometry"));
    ASSERT_TRUE(feature.contains("properties"));
    if (!feature.at("geometry").is_null()) {
      const auto& geom = feature.at("geometry");
      EXPECT_TRUE(geom.at("type") == "Point" || geom.at("type") == "LineString");
      EXPECT_TRUE(geom.at("coordinates").is_array());
    }
  }
}

TEST(GeoJson, DeterministicBytes) {
  const Network net = two_city_network();
  const auto a = export_geojson(net, node_roles(net)).document.dump(2);
  const auto b = export_geojson(net, node_roles(net)).document.dump(2);
  EXPECT_EQ(a, b);
}

TEST(Dot, SingleArcListing) {
  const std::vector<std::string> universe = {"AA ALPHA01", "BB BETA01"};
  std::map<WeightKey, std::int64_t> weights{
      {{"AA ALPHA01", "BB BETA01", Gender::F, StemClass::NonStem, "education"}, 1},
      {{"AA ALPHA01", "BB BETA01", Gender::M, StemClass::NonStem, "education"}, 1}};
  const Network net(2008, universe, weights);
  EXPECT_EQ(export_dot(net),
            "digraph mobility_2008 {\n"
            "  \"AA ALPHA01\";\n"
            "  \"BB BETA01\";\n"
            "  \"AA ALPHA01\" -> \"BB BETA01\" [label=2];\n"
            "}\n");
}

TEST(Dot, EmptyNetworkIsHeaderAndFooterOnly) {
  const Network net(2013, {});
  EXPECT_EQ(export_dot(net), "digraph mobility_2013 {\n}\n");
}

TEST(FormatFixed, RoundingAndSignHandling) {
  EXPECT_EQ(format_fixed(0.12345, 4), "0.1235");
  EXPECT_EQ(format_fixed(-0.00004, 4), "0.0000");  // no negative zero
  EXPECT_EQ(format_fixed(-0.5418906810, 4), "-0.5419");
  EXPECT_EQ(format_fixed(1.0 / 3.0, 4), "0.3333");
}

TEST(FormatRatioFixed, ExactDecimalRounding) {
  EXPECT_EQ(format_ratio_fixed(Ratio(202, 810900), 6), "0.000249");
  EXPECT_EQ(format_ratio_fixed(Ratio(202, 810900), 4), "0.0002");
  EXPECT_EQ(format_ratio_fixed(Ratio(1, 3), 4), "0.3333");
  EXPECT_EQ(format_ratio_fixed(Ratio(-1, 2), 3), "-0.500");
  EXPECT_EQ(format_ratio_fixed(Ratio(1, 1), 4), "1.0000");
  EXPECT_EQ(format_ratio_fixed(Ratio(0, 5), 4), "0.0000");
  EXPECT_EQ(format_ratio_fixed(Ratio(3, 2), 0), "2");   // half away from zero
  EXPECT_EQ(format_ratio_fixed(Ratio(-3, 2), 0), "-2");
}

TEST(ReportTable, ZerosAndUndefinedOnEmptySlice) {
  // a universe with no flows at all still renders a full table
  const Network net(2008, {"AA A01", "BB B01", "CC C01"});
  const auto columns = compute_report_columns(net);
  EXPECT_EQ(columns.all.active, 0);
  EXPECT_EQ(columns.all.isolates, 3);
  EXPECT_FALSE(columns.all.assortativity.has_value());
  EXPECT_FALSE(columns.all.reciprocity.has_value());
  const std::string table = render_report_table(columns, 4, "empty");
  EXPECT_NE(table.find("Assortativity"), std::string::npos);
  EXPECT_NE(table.find("NA"), std::string::npos);
  std::ostringstream csv;
  write_report_csv(csv, columns, 4);
  EXPECT_NE(csv.str().find("density,0.0000,0.0000,0.0000"), std::string::npos);
}

}  // namespace
}  // namespace mobnet
