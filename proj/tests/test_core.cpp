#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "fixtures.hpp"
#include "verm/core/doc.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/parallel.hpp"
#include "verm/core/report.hpp"
#include "verm/core/rng.hpp"

using namespace verm;
namespace fx = verm::testing;

namespace {

DiscrepancyReport chart_report() {
  return DiscrepancyReport::from_errors(
      TaskKind::Chart, {{"data_error", SeverityLevel::Critical, "series 0 values", "series 0 values scaled by 2"},
                        {"text_error", SeverityLevel::Minor, "title", "title reads 'x' instead of 'y'"}});
}

}  // namespace

TEST(Severity, DefaultMapLookup) {
  SeverityMap m;
  EXPECT_EQ(severity_value(SeverityLevel::Minor, m), 1.0);
  EXPECT_EQ(severity_value(SeverityLevel::Moderate, m), 2.0);
  EXPECT_EQ(severity_value(SeverityLevel::Critical, m), 3.0);
}

TEST(Severity, MapMustIncrease) {
  EXPECT_TRUE((SeverityMap{0, 1, 5}).valid());
  EXPECT_FALSE((SeverityMap{1, 1, 3}).valid());
  EXPECT_FALSE((SeverityMap{-1, 2, 3}).valid());
  EXPECT_THROW(severity_map_from_json(Json{{"minor", 3}, {"moderate", 2}, {"critical", 1}}), ConfigError);
  EXPECT_THROW(severity_map_from_json(Json{{"tiny", 1}}), ConfigError);
  EXPECT_EQ(severity_map_from_json(Json{{"critical", 10}}), (SeverityMap{1, 2, 10}));
}

TEST(Taxonomy, ClosedPerTask) {
  EXPECT_EQ(taxonomy(TaskKind::Chart).size(), 4u);
  EXPECT_EQ(taxonomy(TaskKind::Table).size(), 3u);
  EXPECT_EQ(taxonomy(TaskKind::Svg).size(), 4u);
  EXPECT_TRUE(in_taxonomy(TaskKind::Table, "numeric_error"));
  EXPECT_FALSE(in_taxonomy(TaskKind::Chart, "numeric_error"));
  EXPECT_TRUE(in_taxonomy(TaskKind::Svg, "text_symbol_error"));
}

TEST(Report, FromErrorsIsValid) {
  const auto r = chart_report();
  EXPECT_TRUE(validate_report(r).ok());
  EXPECT_EQ(r.counts.at("data_error"), 1);
  EXPECT_EQ(r.counts.at("style_error"), 0);
}

TEST(Report, ViolationsAreData) {
  auto r = chart_report();
  r.counts["data_error"] = 2;
  auto v = validate_report(r);
  ASSERT_FALSE(v.ok());
  EXPECT_NE(v.violations.front().find("counts mismatch"), std::string::npos);

  r = chart_report();
  r.errors[0].category = "numeric_error";
  r.counts = DiscrepancyReport::from_errors(TaskKind::Chart, {}).counts;
  EXPECT_FALSE(validate_report(r).ok());

  r = chart_report();
  r.errors[1].location.clear();
  EXPECT_FALSE(validate_report(r).ok());
}

TEST(Report, MissingCountKeysAreZero) {
  DiscrepancyReport r;
  r.task = TaskKind::Chart;
  EXPECT_TRUE(validate_report(r).ok());
}

TEST(Report, JsonRoundTrip) {
  const auto r = chart_report();
  EXPECT_EQ(report_from_json(to_json(r)), r);
  EXPECT_EQ(report_from_json(Json::parse(canonical_dump(to_json(r)))), r);
}

TEST(Report, StructuralParseErrors) {
  EXPECT_THROW(report_from_json(Json::parse(R"({"task":"chart"})")), DataError);
  EXPECT_THROW(report_from_json(Json::parse(R"({"task":"pie","counts":{},"errors":[]})")), DataError);
  EXPECT_THROW(
      report_from_json(Json::parse(
          R"({"task":"chart","counts":{},"errors":[{"category":"text_error","severity":"huge","location":"a","description":"b"}]})")),
      DataError);
}

TEST(Doc, JsonRoundTripAllTasks) {
  for (const auto& d : {fx::two_bar_chart(), fx::three_series_chart(), fx::small_table(),
                        fx::small_svg()}) {
    EXPECT_EQ(doc_from_json(to_json(d)), d);
    EXPECT_EQ(parse_doc(canonical_serialize(d)), d);
    EXPECT_EQ(canonical_serialize(parse_doc(canonical_serialize(d))), canonical_serialize(d));
  }
}

TEST(Doc, RawCodeSurvivesRoundTrip) {
  auto d = fx::two_bar_chart();
  d.raw_code = "plt.bar([0, 1], [3, 5])";
  EXPECT_EQ(parse_doc(canonical_serialize(d)), d);
}

TEST(Doc, ParseErrorsAreData) {
  EXPECT_THROW(parse_doc("{"), DataError);
  EXPECT_THROW(parse_doc(R"({"task":"chart"})"), DataError);
  EXPECT_THROW(parse_doc(R"({"task":"table","body":{"rows":"two"}})"), DataError);
}

TEST(Doc, ViolationsNameTheRule) {
  auto t = fx::small_table();
  t.table().cells.back().colspan = 3;
  const auto v = doc_violations(t);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v.front().find("colspan"), std::string::npos);

  auto c = fx::two_bar_chart();
  c.chart().width = 0;
  EXPECT_FALSE(doc_violations(c).empty());
  EXPECT_TRUE(doc_violations(fx::small_svg()).empty());
}

TEST(Doc, HexColours) {
  EXPECT_EQ(to_hex(Rgb{0x1f, 0x77, 0xb4}), "#1f77b4");
  EXPECT_EQ(rgb_from_hex("#1F77B4"), (Rgb{0x1f, 0x77, 0xb4}));
  EXPECT_THROW(rgb_from_hex("1f77b4"), DataError);
}

TEST(Rng, EngineMatchesTheStandard) {
  std::mt19937_64 reference(5489u);
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ULL);
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, BoundedDraws) {
  Rng r(7);
  bool lo = false, hi = false;
  for (int i = 0; i < 2000; ++i) {
    const int v = r.range(1, 4);
    ASSERT_GE(v, 1);
    ASSERT_LE(v, 4);
    lo |= v == 1;
    hi |= v == 4;
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_TRUE(lo && hi);
}

TEST(Rng, SplitIsStableAndIndependent) {
  Rng base(9);
  Rng s1 = base.split(3), s2 = base.split(3), s3 = base.split(4);
  EXPECT_EQ(s1.next(), s2.next());
  EXPECT_NE(base.split(3).next(), s3.next());
  Rng copy(9);
  EXPECT_EQ(base.next(), copy.next());
}

TEST(Parallel, ResultsByIndex) {
  std::vector<int> out(100);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
}

TEST(Parallel, FirstFailureByIndexIsRethrown) {
  std::atomic<int> ran{0};
  try {
    parallel_for(20, 3, [&](std::size_t i) {
      ++ran;
      if (i == 5 || i == 11) throw std::runtime_error("boom " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "boom 5");
  }
  EXPECT_EQ(ran.load(), 20);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(8.075), "8.075");
}
