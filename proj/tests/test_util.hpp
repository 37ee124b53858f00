// Shared helpers for the test suites: generators for random convex input and
// independent oracle implementations (deliberately different algorithms or
// precision than the library paths they check).
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tesslab/geometry.hpp"

namespace testutil {

using tesslab::geometry::ConvexPolygon;
using tesslab::geometry::kPi;
using tesslab::geometry::Point2;

// Convex hull (Andrew monotone chain) of random points in a random box;
// independent of the library's polygon normalization.
inline std::vector<Point2> random_hull(std::mt19937_64& rng, int points = 12,
                                       double scale = 2.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cx = (unit(rng) - 0.5) * 10.0;
  const double cy = (unit(rng) - 0.5) * 10.0;
  std::vector<Point2> pts;
  for (int i = 0; i < points; ++i) {
    pts.push_back({cx + (unit(rng) - 0.5) * scale, cy + (unit(rng) - 0.5) * scale});
  }
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  const auto turn = [](Point2 o, Point2 a, Point2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

inline ConvexPolygon random_polygon(std::mt19937_64& rng, int points = 12) {
  for (;;) {
    auto hull = random_hull(rng, points);
    if (hull.size() < 3) continue;
    return ConvexPolygon::from_vertices(std::move(hull));
  }
}

// Fan triangulation area from the first hull vertex, in long double.
inline double fan_area_oracle(const std::vector<Point2>& v) {
  long double acc = 0.0L;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const long double ax = static_cast<long double>(v[i].x) - v[0].x;
    const long double ay = static_cast<long double>(v[i].y) - v[0].y;
    const long double bx = static_cast<long double>(v[i + 1].x) - v[0].x;
    const long double by = static_cast<long double>(v[i + 1].y) - v[0].y;
    acc += ax * by - ay * bx;
  }
  return static_cast<double>(acc / 2.0L);
}

inline double side_sum_oracle(const std::vector<Point2>& v) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    acc += std::hypot(static_cast<long double>(b.x - a.x), static_cast<long double>(b.y - a.y));
  }
  return static_cast<double>(acc);
}

// Area-weighted centroid from a fan triangulation (triangle centroids).
inline Point2 centroid_oracle(const std::vector<Point2>& v) {
  long double area = 0.0L, cx = 0.0L, cy = 0.0L;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const long double ax = static_cast<long double>(v[i].x) - v[0].x;
    const long double ay = static_cast<long double>(v[i].y) - v[0].y;
    const long double bx = static_cast<long double>(v[i + 1].x) - v[0].x;
    const long double by = static_cast<long double>(v[i + 1].y) - v[0].y;
    const long double tri = (ax * by - ay * bx) / 2.0L;
    area += tri;
    cx += tri * (ax + bx) / 3.0L;
    cy += tri * (ay + by) / 3.0L;
  }
  return {static_cast<double>(v[0].x + cx / area), static_cast<double>(v[0].y + cy / area)};
}

// Midpoint-rule quadrature of the support width over directions in [0, pi).
inline double mean_width_quadrature(const ConvexPolygon& poly, int nodes = 1024) {
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double phi = (i + 0.5) * kPi / nodes;
    acc += tesslab::geometry::support_width(poly, phi);
  }
  return acc / nodes;
}

struct MeanVar {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanVar mean_and_se(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = ss / (static_cast<double>(xs.size()) - 1.0);
  return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace testutil
