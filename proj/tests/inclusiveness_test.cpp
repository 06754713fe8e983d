#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "mobnet/inclusiveness.hpp"
#include "mobnet/pipeline.hpp"

namespace mobnet {
namespace {

TEST(Bound, AnchorValues) {
  EXPECT_DOUBLE_EQ(bound(1.0), 0.0);
  EXPECT_DOUBLE_EQ(bound(0.0), -1.0);
  EXPECT_DOUBLE_EQ(bound(3.0), 0.5);
  EXPECT_THROW(bound(-0.1), DataError);
}

TEST(Bound, ExactRationalAnchors) {
  EXPECT_EQ(bound_ratio(Ratio(1, 1)), Ratio(0, 1));
  EXPECT_EQ(bound_ratio(Ratio(0, 1)), Ratio(-1, 1));
  EXPECT_EQ(bound_ratio(Ratio(3, 1)), Ratio(1, 2));
  EXPECT_THROW(bound_ratio(Ratio(-1, 2)), DataError);
}

TEST(Bound, StrictlyMonotoneOnGrid) {
  double prev = bound(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = 0.05 * i;
    const double b = bound(x);
    EXPECT_GT(b, prev) << "x = " << x;
    EXPECT_LT(b, 1.0);
    EXPECT_GE(b, -1.0);
    prev = b;
  }
}

TEST(Bound, ReciprocalArgumentFlipsSign) {
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.1 * i;
    EXPECT_NEAR(bound(1.0 / x), -bound(x), 1e-12) << "x = " << x;
  }
}

// Two universities U and V in country CC, fed by an outside sender. The
// weights pin the four in-strength counts directly.
struct IndexFixture {
  Network sn;
  Network full;
};

IndexFixture make_fixture(std::int64_t sn_u, std::int64_t sn_v, std::int64_t full_u,
                          std::int64_t full_v) {
  const std::vector<std::string> universe = {"SS SENDER01", "CC UNIV01", "CC UNIV02"};
  std::map<std::string, NodeAttrs> attrs{
      {"SS SENDER01", {.country = "SS"}},
      {"CC UNIV01", {.country = "CC"}},
      {"CC UNIV02", {.country = "CC"}},
  };
  auto weights = [&](std::int64_t u, std::int64_t v) {
    std::map<WeightKey, std::int64_t> w;
    if (u > 0) w[{"SS SENDER01", "CC UNIV01", Gender::F, StemClass::NonStem, "education"}] = u;
    if (v > 0) w[{"SS SENDER01", "CC UNIV02", Gender::F, StemClass::NonStem, "education"}] = v;
    return w;
  };
  return {Network(2008, universe, weights(sn_u, sn_v), attrs),
          Network(2008, universe, weights(full_u, full_v), attrs)};
}

TEST(ComputeIndex, PerfectAlignmentScoresZero) {
  const auto fx = make_fixture(1, 1, 50, 50);
  const auto score = compute_index("CC UNIV01", fx.sn, fx.full);
  EXPECT_EQ(score.raw_index, Ratio(1, 1));
  EXPECT_EQ(score.bounded_index, Ratio(0, 1));
}

TEST(ComputeIndex, FormulaEvaluation) {
  // i_sn_u=2, i_sn_c=4, i_u=100, i_c=1000 -> I = 5, bounded 2/3
  const auto fx = make_fixture(2, 2, 100, 900);
  const auto score = compute_index("CC UNIV01", fx.sn, fx.full);
  EXPECT_EQ(score.incoming_sn_university, 2);
  EXPECT_EQ(score.incoming_sn_country, 4);
  EXPECT_EQ(score.incoming_university, 100);
  EXPECT_EQ(score.incoming_country, 1000);
  EXPECT_EQ(score.raw_index, Ratio(5, 1));
  EXPECT_EQ(score.bounded_index, Ratio(2, 3));
}

TEST(ComputeIndex, HostingNoneScoresMinusOne) {
  const auto fx = make_fixture(0, 3, 10, 10);
  const auto score = compute_index("CC UNIV01", fx.sn, fx.full);
  EXPECT_EQ(score.raw_index, Ratio(0, 1));
  EXPECT_EQ(score.bounded_index, Ratio(-1, 1));
}

TEST(ComputeIndex, CountryWithoutIncomingSnFails) {
  const auto fx = make_fixture(0, 0, 10, 10);
  EXPECT_THROW(compute_index("CC UNIV01", fx.sn, fx.full), CountryNoIncomingSnError);
}

TEST(ComputeIndex, UniversityWithoutIncomingFails) {
  const auto fx = make_fixture(0, 1, 0, 10);
  EXPECT_THROW(compute_index("CC UNIV01", fx.sn, fx.full), UniversityNoIncomingError);
}

TEST(ComputeIndex, MismatchedYearsFail) {
  const auto fx = make_fixture(1, 1, 10, 10);
  const Network other(2009, fx.full.nodes(), {}, fx.full.all_attrs());
  EXPECT_THROW(compute_index("CC UNIV01", fx.sn, other), DataError);
}

TEST(ComputeIndex, ScaleInvariant) {
  const auto base = make_fixture(2, 3, 40, 160);
  const auto scaled = make_fixture(2 * 7, 3 * 7, 40 * 7, 160 * 7);
  const auto a = compute_index("CC UNIV01", base.sn, base.full);
  const auto b = compute_index("CC UNIV01", scaled.sn, scaled.full);
  EXPECT_EQ(a.raw_index, b.raw_index);
  EXPECT_EQ(a.bounded_index, b.bounded_index);
}

TEST(ComputeIndex, MonotoneInOwnCounts) {
  // more special-needs students raise the index
  Ratio prev(-1, 1);
  for (std::int64_t sn_u = 0; sn_u <= 4; ++sn_u) {
    const auto fx = make_fixture(sn_u, 5 - sn_u, 100, 900);
    const auto score = compute_index("CC UNIV01", fx.sn, fx.full);
    if (sn_u > 0) EXPECT_TRUE(prev < score.bounded_index) << sn_u;
    prev = score.bounded_index;
  }
  // more total incoming students (same special-needs count) lower it
  Ratio prev_total(1, 1);
  bool first = true;
  for (std::int64_t full_u = 10; full_u <= 100; full_u += 30) {
    const auto fx = make_fixture(2, 2, full_u, 1000 - full_u);
    const auto score = compute_index("CC UNIV01", fx.sn, fx.full);
    if (!first) EXPECT_TRUE(score.bounded_index < prev_total) << full_u;
    first = false;
    prev_total = score.bounded_index;
  }
}

std::map<int, Network> yearly_inflows(const std::map<std::string, std::vector<std::int64_t>>& inflow,
                                      int first_year) {
  std::vector<std::string> universe = {"ZZ SENDER01"};
  std::size_t years = 0;
  for (const auto& [code, series] : inflow) {
    universe.push_back(code);
    years = std::max(years, series.size());
  }
  std::map<int, Network> nets;
  for (std::size_t t = 0; t < years; ++t) {
    std::map<WeightKey, std::int64_t> weights;
    for (const auto& [code, series] : inflow) {
      if (t < series.size() && series[t] > 0) {
        weights[{"ZZ SENDER01", code, Gender::F, StemClass::NonStem, "education"}] = series[t];
      }
    }
    const int year = first_year + static_cast<int>(t);
    nets.emplace(year, Network(year, universe, std::move(weights)));
  }
  return nets;
}

TEST(PersistentReceivers, HandPickedPatterns) {
  const auto nets = yearly_inflows(
      {
          {"AA STEADY01", {1, 1, 1, 1, 1, 1}},
          {"BB GAP01", {1, 1, 0, 1, 1, 1}},
          {"CC STAGGER01", {2, 0, 3, 1, 0, 2}},
          {"DD HEAVY01", {2, 1, 3, 1, 1, 2}},
      },
      2008);
  const std::vector<int> window = {2008, 2009, 2010, 2011, 2012, 2013};
  const auto persistent = persistent_receivers(nets, window);
  EXPECT_EQ(persistent, (std::vector<std::string>{"AA STEADY01", "DD HEAVY01"}));
}

TEST(PersistentReceivers, MissingYearNamesIt) {
  const auto nets = yearly_inflows({{"AA STEADY01", {1, 1, 1}}}, 2008);
  const std::vector<int> window = {2008, 2009, 2010, 2011};
  try {
    persistent_receivers(nets, window);
    FAIL() << "expected MissingYearError";
  } catch (const MissingYearError& e) {
    EXPECT_EQ(e.year(), 2011);
  }
}

TEST(PersistentReceivers, UnionWindowIsIntersectionOfWindows) {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, std::vector<std::int64_t>> inflow;
    for (int u = 0; u < 6; ++u) {
      std::vector<std::int64_t> series;
      for (int t = 0; t < 6; ++t) series.push_back(rng() % 3 == 0 ? 0 : 1 + rng() % 2);
      inflow["UU INST" + std::to_string(u)] = series;
    }
    const auto nets = yearly_inflows(inflow, 2008);
    const std::vector<int> w1 = {2008, 2009, 2010};
    const std::vector<int> w2 = {2011, 2012, 2013};
    const std::vector<int> all = {2008, 2009, 2010, 2011, 2012, 2013};
    const auto p1 = persistent_receivers(nets, w1);
    const auto p2 = persistent_receivers(nets, w2);
    const auto pu = persistent_receivers(nets, all);
    std::vector<std::string> intersection;
    std::set_intersection(p1.begin(), p1.end(), p2.begin(), p2.end(),
                          std::back_inserter(intersection));
    EXPECT_EQ(pu, intersection);
  }
}

std::map<int, InclusivenessScore> scores_from_bounded(const std::vector<Ratio>& bounded,
                                                      int first_year) {
  std::map<int, InclusivenessScore> scores;
  for (std::size_t i = 0; i < bounded.size(); ++i) {
    InclusivenessScore s;
    s.institution = "X";
    s.year = first_year + static_cast<int>(i);
    s.bounded_index = bounded[i];
    scores[s.year] = s;
  }
  return scores;
}

TEST(PeriodAverage, HandValues) {
  const std::vector<int> window = {2008, 2009, 2010};
  EXPECT_DOUBLE_EQ(period_average("X", scores_from_bounded({Ratio(0, 1), Ratio(0, 1), Ratio(0, 1)},
                                                           2008),
                                  window)
                       .mean_bounded_index,
                   0.0);
  EXPECT_DOUBLE_EQ(period_average("X",
                                  scores_from_bounded(
                                      {Ratio(1, 2), Ratio(-1, 2), Ratio(0, 1)}, 2008),
                                  window)
                       .mean_bounded_index,
                   0.0);
  EXPECT_NEAR(period_average("X",
                             scores_from_bounded({Ratio(2, 3), Ratio(0, 1), Ratio(-1, 1)}, 2008),
                             window)
                  .mean_bounded_index,
              -1.0 / 9.0, 1e-15);
}

TEST(PeriodAverage, MissingYearFails) {
  const auto scores = scores_from_bounded({Ratio(0, 1), Ratio(0, 1)}, 2008);
  const std::vector<int> window = {2008, 2009, 2010};
  EXPECT_THROW(period_average("X", scores, window), MissingYearError);
}

TEST(Slopegraph, DeltaAndOrdering) {
  std::map<std::string, std::map<int, InclusivenessScore>> scores;
  scores["AA CONST01"] = scores_from_bounded(
      {Ratio(1, 10), Ratio(1, 10), Ratio(1, 10), Ratio(1, 10), Ratio(1, 10), Ratio(1, 10)}, 2008);
  scores["BB RISER01"] = scores_from_bounded(
      {Ratio(-1, 5), Ratio(-1, 5), Ratio(-1, 5), Ratio(1, 10), Ratio(1, 10), Ratio(1, 10)}, 2008);
  const std::vector<std::string> institutions = {"AA CONST01", "BB RISER01"};
  const std::vector<int> early = {2008, 2009, 2010};
  const std::vector<int> late = {2011, 2012, 2013};
  const auto rows = slopegraph_table(institutions, scores, early, late);
  ASSERT_EQ(rows.size(), 2u);
  // equal late means tie-break by code
  EXPECT_EQ(rows[0].institution, "AA CONST01");
  EXPECT_NEAR(rows[0].delta, 0.0, 1e-15);
  EXPECT_EQ(rows[1].institution, "BB RISER01");
  EXPECT_NEAR(rows[1].early_mean, -0.2, 1e-15);
  EXPECT_NEAR(rows[1].late_mean, 0.1, 1e-15);
  EXPECT_NEAR(rows[1].delta, 0.3, 1e-15);
}

TEST(Slopegraph, EmptyInstitutionSet) {
  const auto rows = slopegraph_table({}, {}, std::vector<int>{2008}, std::vector<int>{2009});
  EXPECT_TRUE(rows.empty());
  std::ostringstream os;
  write_slopegraph_csv(os, rows);
  EXPECT_EQ(os.str(), "institution,early_mean,late_mean,delta\n");
}

// Full pipeline over the bundled six-year two-country fixture. Expected
// values are hand-derived from the fixture's flow counts.
TEST(InclusivenessEndToEnd, SixYearFixture) {
  RunConfig config;
  const std::filesystem::path base = std::filesystem::path(MOBNET_TESTDATA_DIR) / "incl6";
  config.data_dir = base / "data";
  config.schema_dir = base / "schemas";
  config.year_first = 2008;
  config.year_last = 2013;

  const Ingested ingested = ingest_all(config);
  EXPECT_TRUE(ingested.rejects.empty());
  const YearNetworks nets = build_year_networks(ingested, config);

  const std::vector<int> window = {2008, 2009, 2010, 2011, 2012, 2013};
  const auto persistent = persistent_receivers(nets.sn, window);
  EXPECT_EQ(persistent, (std::vector<std::string>{"AA UNIV01", "BB UNIV01"}));

  // yearly bounded indexes, exact
  const std::vector<Ratio> expected_a1 = {Ratio(1, 6),   Ratio(1, 6),   Ratio(1, 3),
                                          Ratio(-5, 16), Ratio(-5, 16), Ratio(-5, 16)};
  const std::vector<Ratio> expected_b1 = {Ratio(-3, 25), Ratio(3, 17), Ratio(3, 17),
                                          Ratio(1, 3),   Ratio(1, 3),  Ratio(1, 3)};
  std::map<std::string, std::map<int, InclusivenessScore>> scores;
  for (const auto& institution : persistent) {
    for (const int year : window) {
      scores[institution].emplace(
          year, compute_index(institution, nets.sn.at(year), nets.full.at(year)));
    }
  }
  for (std::size_t i = 0; i < window.size(); ++i) {
    EXPECT_EQ(scores.at("AA UNIV01").at(window[i]).bounded_index, expected_a1[i])
        << "year " << window[i];
    EXPECT_EQ(scores.at("BB UNIV01").at(window[i]).bounded_index, expected_b1[i])
        << "year " << window[i];
  }

  const std::vector<int> early = {2008, 2009, 2010};
  const std::vector<int> late = {2011, 2012, 2013};
  const auto rows = slopegraph_table(persistent, scores, early, late);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].institution, "BB UNIV01");  // late mean 1/3 sorts first
  EXPECT_NEAR(rows[0].early_mean, 33.0 / 425.0, 1e-12);
  EXPECT_NEAR(rows[0].late_mean, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(rows[1].institution, "AA UNIV01");
  EXPECT_NEAR(rows[1].early_mean, 2.0 / 9.0, 1e-12);
  EXPECT_NEAR(rows[1].late_mean, -5.0 / 16.0, 1e-12);
}

}  // namespace
}  // namespace mobnet
