#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tesslab/geometry.hpp"
#include "test_util.hpp"

using namespace tesslab::geometry;
using testutil::random_polygon;

namespace {

ConvexPolygon unit_square() {
  return ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

ConvexPolygon right_triangle() {
  return ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {0, 1}});
}

}  // namespace

TEST_CASE("polygon area: closed forms and fan-triangulation oracle") {
  CHECK(polygon_area(unit_square()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(polygon_area(right_triangle()) == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(101);
  for (int i = 0; i < 300; ++i) {
    const auto poly = random_polygon(rng, 14);
    const double oracle = testutil::fan_area_oracle(poly.vertices());
    CHECK(polygon_area(poly) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("polygon area: invariance under rotation of the vertex list and rigid motions") {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto poly = random_polygon(rng);
    const double a = polygon_area(poly);

    auto rotated_list = poly.vertices();
    std::rotate(rotated_list.begin(), rotated_list.begin() + 1, rotated_list.end());
    CHECK(polygon_area(ConvexPolygon::from_vertices(rotated_list)) ==
          doctest::Approx(a).epsilon(1e-12));

    const double theta = unit(rng) * 2.0 * kPi;
    const double tx = (unit(rng) - 0.5) * 40.0, ty = (unit(rng) - 0.5) * 40.0;
    std::vector<Point2> moved;
    for (const auto& p : poly.vertices()) {
      moved.push_back({p.x * std::cos(theta) - p.y * std::sin(theta) + tx,
                       p.x * std::sin(theta) + p.y * std::cos(theta) + ty});
    }
    CHECK(polygon_area(ConvexPolygon::from_vertices(moved)) ==
          doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("polygon perimeter: closed forms and side-sum oracle") {
  CHECK(polygon_perimeter(unit_square()) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(polygon_perimeter(right_triangle()) ==
        doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

  std::mt19937_64 rng(103);
  for (int i = 0; i < 300; ++i) {
    const auto poly = random_polygon(rng);
    CHECK(polygon_perimeter(poly) ==
          doctest::Approx(testutil::side_sum_oracle(poly.vertices())).epsilon(1e-12));
  }
}

TEST_CASE("polygon centroid: closed forms, oracle, inside the polygon") {
  const Point2 sc = polygon_centroid(unit_square());
  CHECK(sc.x == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sc.y == doctest::Approx(0.5).epsilon(1e-12));
  const Point2 tc = polygon_centroid(right_triangle());
  CHECK(tc.x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(tc.y == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  std::mt19937_64 rng(104);
  for (int i = 0; i < 300; ++i) {
    const auto poly = random_polygon(rng);
    const Point2 c = polygon_centroid(poly);
    const Point2 oracle = testutil::centroid_oracle(poly.vertices());
    CHECK(c.x == doctest::Approx(oracle.x).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(oracle.y).epsilon(1e-12));
    CHECK(contains_point(poly, c, 0.0));
  }
}

TEST_CASE("support width: unit square closed forms and Cauchy mean width") {
  const auto square = unit_square();
  CHECK(support_width(square, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(support_width(square, kPi / 4.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // Mean width over directions equals perimeter/pi (quadrature oracle).
  CHECK(testutil::mean_width_quadrature(square) == doctest::Approx(4.0 / kPi).epsilon(1e-6));

  std::mt19937_64 rng(105);
  for (int i = 0; i < 20; ++i) {
    const auto poly = random_polygon(rng);
    CHECK(testutil::mean_width_quadrature(poly) ==
          doctest::Approx(polygon_perimeter(poly) / kPi).epsilon(1e-5));
  }
}

TEST_CASE("support width: unoriented normal direction") {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto poly = random_polygon(rng);
    const double theta = unit(rng) * 2.0 * kPi;
    const Point2 v{std::cos(theta), std::sin(theta)};
    const Point2 neg{-v.x, -v.y};
    CHECK(support_width(poly, v) == support_width(poly, neg));  // bit exact
    const double phi = unit(rng) * kPi;
    CHECK(support_width(poly, phi + kPi) ==
          doctest::Approx(support_width(poly, phi)).epsilon(1e-12));
  }
}

TEST_CASE("line: normalization keeps the point set") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double phi = unit(rng) * kPi;
    const double p = (unit(rng) - 0.5) * 10.0;
    const Line a(p, phi);
    const Line b(-p, phi + kPi);  // same line, flipped parametrisation
    CHECK(b.phi() >= 0.0);
    CHECK(b.phi() < kPi);
    const Point2 q{(unit(rng) - 0.5) * 10.0, (unit(rng) - 0.5) * 10.0};
    CHECK(a.signed_distance(q) == doctest::Approx(b.signed_distance(q)).epsilon(1e-9));
  }
}

TEST_CASE("split: unit square by x = 0.5") {
  const auto res = split_polygon(unit_square(), Line(0.5, 0.0));
  REQUIRE(res.status == SplitResult::Status::kHit);
  CHECK(polygon_area(*res.neg) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(polygon_area(*res.pos) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.chord.length() == doctest::Approx(1.0).epsilon(1e-12));
  // neg is the side with <z, v> <= p.
  for (const auto& p : res.neg->vertices()) CHECK(p.x <= 0.5 + kEpsPoint);
  for (const auto& p : res.pos->vertices()) CHECK(p.x >= 0.5 - kEpsPoint);
}

TEST_CASE("split: miss and vertex grazing") {
  CHECK(split_polygon(unit_square(), Line(2.0, 0.0)).status ==
        SplitResult::Status::kNoIntersection);
  CHECK(split_polygon(unit_square(), Line(1.0, 0.0)).status ==
        SplitResult::Status::kNoIntersection);
  // Diagonal through two opposite corners still splits the interior.
  const auto res = split_polygon(unit_square(), Line(0.0, 3.0 * kPi / 4.0));
  REQUIRE(res.status == SplitResult::Status::kHit);
  CHECK(polygon_area(*res.neg) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("split conservation: area and perimeter over random polygon/line pairs") {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto poly = random_polygon(rng, 10);
    const double phi = unit(rng) * kPi;
    const Interval span = projection_interval(poly, {std::cos(phi), std::sin(phi)});
    const double p = span.lo + unit(rng) * span.length();
    const auto res = split_polygon(poly, Line(p, phi));
    if (res.status != SplitResult::Status::kHit) continue;
    ++hits;

    const double area = polygon_area(poly);
    CHECK(std::abs(polygon_area(*res.neg) + polygon_area(*res.pos) - area) <= 1e-9 * area);
    const double perim = polygon_perimeter(poly) + 2.0 * res.chord.length();
    CHECK(std::abs(polygon_perimeter(*res.neg) + polygon_perimeter(*res.pos) - perim) <=
          1e-9 * perim);

    // Chord endpoints are shared verbatim by both parts.
    const auto has = [](const ConvexPolygon& part, Point2 q) {
      for (const auto& v : part.vertices()) {
        if (v.x == q.x && v.y == q.y) return true;
      }
      return false;
    };
    for (const Point2 q : {res.chord.a, res.chord.b}) {
      CHECK(has(*res.neg, q));
      CHECK(has(*res.pos, q));
    }

    // The parts re-merge to the original vertex set plus the chord: every
    // original corner survives verbatim in one of the parts.
    for (const auto& v : poly.vertices()) {
      CHECK((has(*res.neg, v) || has(*res.pos, v)));
    }
  }
  CHECK(hits > 9000);  // nearly every sampled line hits
}

TEST_CASE("polygon validation: degenerate inputs are rejected") {
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {1, 0}}), DegenerateGeometry);
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {2, 0}}), DegenerateGeometry);
  CHECK_THROWS_AS(ConvexPolygon::from_vertices({{0, 0}, {1e-12, 0}, {0, 1e-12}}),
                  DegenerateGeometry);
  // Non-convex input.
  CHECK_THROWS_AS(
      ConvexPolygon::from_vertices({{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}),
      DegenerateGeometry);
  // Clockwise input is reoriented, collinear points are merged.
  const auto poly =
      ConvexPolygon::from_vertices({{0, 1}, {0.5, 1}, {1, 1}, {1, 0}, {0, 0}});
  CHECK(poly.corner_count() == 4);
  CHECK(polygon_area(poly) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collinear overlap") {
  const Segment s{{0, 0}, {2, 0}};
  const auto hit = collinear_overlap(s, Segment{{1, 0}, {3, 0}});
  REQUIRE(hit.has_value());
  CHECK(hit->a.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hit->b.x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(hit->a.y) <= 1e-12);

  CHECK(!collinear_overlap(Segment{{0, 0}, {1, 0}}, Segment{{1, 0}, {2, 0}}).has_value());
  CHECK(!collinear_overlap(Segment{{0, 0}, {1, 0}}, Segment{{0, 1}, {1, 1}}).has_value());
  CHECK(!collinear_overlap(Segment{{0, 0}, {1, 0}}, Segment{{0.5, -1}, {0.5, 1}}).has_value());

  // Containment and reversed orientation.
  const auto inner = collinear_overlap(s, Segment{{1.5, 0}, {0.5, 0}});
  REQUIRE(inner.has_value());
  CHECK(inner->length() == doctest::Approx(1.0).epsilon(1e-12));
}
