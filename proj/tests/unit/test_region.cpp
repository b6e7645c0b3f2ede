#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cdp/error.hpp"
#include "cdp/region.hpp"
#include "cdp/region_nd.hpp"

using cdp::Error;
using cdp::ErrorKind;
using cdp::GeneralizedInterval;
using cdp::NullRegion;
using cdp::RegionND;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string parse_error(const std::string& text) {
  try {
    (void)NullRegion::parse(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    return e.what();
  }
  FAIL("expected a parse error for " << text);
  return {};
}

}  // namespace

TEST_CASE("parse: basic forms") {
  const auto narrow = NullRegion::parse("[-0.01,0.01]");
  REQUIRE(narrow.pieces().size() == 1);
  CHECK(narrow.pieces()[0] == GeneralizedInterval{-0.01, 0.01});

  const auto singles = NullRegion::parse("0;1");
  REQUIRE(singles.pieces().size() == 2);
  CHECK(singles.pieces()[0].is_singleton());
  CHECK(singles.pieces()[1] == GeneralizedInterval{1.0, 1.0});

  const auto merged = NullRegion::parse("[0,2];[1,3]");
  REQUIRE(merged.pieces().size() == 1);
  CHECK(merged.pieces()[0] == GeneralizedInterval{0.0, 3.0});

  const auto half = NullRegion::parse(" (-inf, 0] ; [0.5, inf) ");
  REQUIRE(half.pieces().size() == 2);
  CHECK(half.pieces()[0] == GeneralizedInterval{-kInf, 0.0});
  CHECK(half.pieces()[1] == GeneralizedInterval{0.5, kInf});

  CHECK(NullRegion::parse("[-inf,0];[0.5,inf]") == half);
  CHECK(NullRegion::parse("(-inf,inf)").pieces()[0] == GeneralizedInterval{-kInf, kInf});
}

TEST_CASE("parse: touching pieces merge and unsorted input sorts") {
  CHECK(NullRegion::parse("[0,1];[1,2]").pieces().size() == 1);
  CHECK(NullRegion::parse("[1,2];0;[-3,-2]").format() == "[-3,-2];0;[1,2]");
  CHECK(NullRegion::parse("1;[0,2]").format() == "[0,2]");
  CHECK(NullRegion::parse("2;2").format() == "2");
}

TEST_CASE("parse: errors name the offending token") {
  CHECK(parse_error("{0.3}").find("{0.3}") != std::string::npos);
  CHECK(parse_error("[0,abc]").find("abc") != std::string::npos);
  CHECK(parse_error("[0,1];[2,x3]").find("x3") != std::string::npos);
  CHECK(parse_error("[2,1]").find("[2,1]") != std::string::npos);
  parse_error("");
  parse_error("   ");
  parse_error("[0,1];");
  parse_error("[0,1");
  parse_error("(0,1]");
  parse_error("[0,1)");
  parse_error("[0,1,2]");
  parse_error("inf");
  parse_error("[inf,inf]");
  parse_error("nan");
  parse_error("[0,nan]");
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(NullRegion(std::vector<GeneralizedInterval>{}), Error);
  CHECK_THROWS_AS(NullRegion({{1.0, 0.0}}), Error);
  CHECK_THROWS_AS(NullRegion({{std::nan(""), 0.0}}), Error);
  CHECK_THROWS_AS(NullRegion({{kInf, kInf}}), Error);
}

TEST_CASE("contains and boundary points") {
  CHECK(NullRegion::parse("[0,1]").contains(1.0));
  CHECK(NullRegion::parse("[0,1]").contains(0.0));
  CHECK_FALSE(NullRegion::parse("[0,1]").contains(1.0000001));
  CHECK_FALSE(NullRegion::parse("0;1").contains(0.5));
  CHECK(NullRegion::parse("0;1").contains(1.0));
  CHECK(NullRegion::parse("(-inf,0];[0.5,inf)").contains(-1e300));

  CHECK(NullRegion::parse("(-inf,0];[0.5,inf)").boundary_points() == std::vector<double>{0.0, 0.5});
  CHECK(NullRegion::parse("0;[1,2]").boundary_points() == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(NullRegion::parse("(-inf,inf)").boundary_points().empty());
}

TEST_CASE("format round trip and normalization invariant on random regions") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_int_distribution<int> form(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<GeneralizedInterval> pieces;
    const int k = count(gen);
    for (int i = 0; i < k; ++i) {
      double a = u(gen);
      double b = u(gen);
      if (a > b) std::swap(a, b);
      switch (form(gen)) {
        case 0:
          pieces.push_back({a, a});
          break;
        case 1:
          pieces.push_back({-kInf, a});
          break;
        case 2:
          pieces.push_back({b, kInf});
          break;
        default:
          pieces.push_back({a, b});
      }
    }
    const NullRegion region(pieces);
    const auto& ps = region.pieces();
    for (std::size_t i = 1; i < ps.size(); ++i) CHECK(ps[i - 1].hi < ps[i].lo);
    for (const auto& p : pieces) {
      if (std::isfinite(p.lo)) CHECK(region.contains(p.lo));
      if (std::isfinite(p.hi)) CHECK(region.contains(p.hi));
    }
    const auto text = region.format();
    const auto again = NullRegion::parse(text);
    CHECK(again == region);
    CHECK(again.format() == text);
  }
}

TEST_CASE("format_number") {
  CHECK(cdp::format_number(0.1) == "0.1");
  CHECK(cdp::format_number(-kInf) == "-inf");
  CHECK(cdp::format_number(kInf) == "inf");
  CHECK(cdp::format_number(-16.51) == "-16.51");
}

TEST_CASE("RegionND rectangle") {
  const auto r = RegionND::rectangle({-1.0, -4.0}, {0.0, 4.0});
  CHECK(r.dimension() == 2);
  CHECK(r.shape_name() == "rectangle");
  CHECK(r.corners().size() == 4);
  const std::vector<double> inside{-0.5, 0.0}, edge{0.0, 1.0}, outside{0.1, 0.0};
  CHECK(r.contains(inside));
  CHECK(r.contains(edge));
  CHECK_FALSE(r.contains(outside));
  CHECK(r.on_boundary(edge, 1e-12));
  CHECK_FALSE(r.on_boundary(inside, 1e-12));
  CHECK_THROWS_AS(RegionND::rectangle({1.0, 0.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(RegionND::rectangle({0.0}, {1.0, 1.0}), Error);

  SUBCASE("infinite sides keep only finite vertices") {
    const auto band = RegionND::rectangle({-1.0, -kInf}, {0.0, kInf});
    CHECK(band.corners().empty());
    const auto plane = RegionND::rectangle({-kInf, -kInf}, {kInf, kInf});
    const std::vector<double> far{1e300, -1e300};
    CHECK(plane.contains(far));
  }
  SUBCASE("explicit corners are validated") {
    const auto only = RegionND::rectangle({-1.0, -4.0}, {0.0, 0.0}, std::vector<cdp::Point>{{0.0, 0.0}});
    REQUIRE(only.corners().size() == 1);
    CHECK_THROWS_AS(RegionND::rectangle({-1.0, -4.0}, {0.0, 0.0}, std::vector<cdp::Point>{{-0.5, -1.0}}),
                    Error);
  }
}

TEST_CASE("RegionND halfspace, quadrant complement and point set") {
  const auto h = RegionND::halfspace({1.0, 1.0}, 1.0);
  const std::vector<double> a{0.0, 0.0}, b{1.0, 1.0}, c{0.5, 0.5};
  CHECK(h.contains(a));
  CHECK_FALSE(h.contains(b));
  CHECK(h.on_boundary(c, 1e-12));
  CHECK(h.corners().empty());
  CHECK_THROWS_AS(RegionND::halfspace({0.0, 0.0}, 1.0), Error);

  const auto q = RegionND::quadrant_complement({0.0, 0.0});
  const std::vector<double> pos{1.0, 1.0}, axis{1.0, 0.0}, neg{-1.0, 5.0};
  CHECK_FALSE(q.contains(pos));
  CHECK(q.contains(axis));
  CHECK(q.contains(neg));
  CHECK(q.on_boundary(axis, 1e-12));
  CHECK_FALSE(q.on_boundary(neg, 1e-12));
  const auto flipped = RegionND::quadrant_complement({0.0, 0.0}, {-1, 1});
  const std::vector<double> nw{-1.0, 1.0};
  CHECK_FALSE(flipped.contains(nw));
  CHECK(flipped.contains(pos));
  CHECK_THROWS_AS(RegionND::quadrant_complement({0.0, 0.0}, {2, 1}), Error);

  const auto pts = RegionND::point_set({{0.0, 0.0}, {1.0, 2.0}});
  CHECK(pts.corners().size() == 2);
  const std::vector<double> p{1.0, 2.0}, not_p{1.0, 2.5};
  CHECK(pts.contains(p));
  CHECK_FALSE(pts.contains(not_p));
  CHECK_THROWS_AS(RegionND::point_set({}), Error);
}

TEST_CASE("RegionND boundary grid") {
  const std::vector<double> lo{-10.0, -10.0}, hi{10.0, 10.0};

  const auto r = RegionND::rectangle({-1.0, -1.0}, {1.0, 1.0});
  const auto grid = r.boundary_grid(lo, hi);
  CHECK(grid.size() == 4 + 4 * 64);
  for (const auto& g : grid) CHECK(r.on_boundary(g, 1e-12));

  const auto h = RegionND::halfspace({1.0, 2.0}, 3.0);
  const auto hg = h.boundary_grid(lo, hi);
  CHECK(hg.size() == 129);
  for (const auto& g : hg) CHECK(h.on_boundary(g, 1e-9));

  const auto q = RegionND::quadrant_complement({0.0, 0.0});
  const auto qg = q.boundary_grid(lo, hi);
  CHECK(qg.size() >= 65);
  for (const auto& g : qg) CHECK(q.on_boundary(g, 1e-12));

  const auto band = RegionND::rectangle({-1.0, -kInf}, {0.0, kInf});
  for (const auto& g : band.boundary_grid(lo, hi)) {
    CHECK(std::isfinite(g[0]));
    CHECK(std::isfinite(g[1]));
  }

  const auto pts = RegionND::point_set({{3.0, 4.0}});
  CHECK(pts.boundary_grid(lo, hi) == std::vector<cdp::Point>{{3.0, 4.0}});
}
