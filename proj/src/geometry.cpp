#include "tesslab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tesslab::geometry {

namespace {

// Shoelace signed area, computed relative to the first vertex so that the
// result is translation-stable far from the origin.
double signed_area(const std::vector<Point2>& v) {
  if (v.size() < 3) return 0.0;
  double acc = 0.0;
  const Point2 o = v[0];
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    acc += cross(v[i] - o, v[i + 1] - o);
  }
  return 0.5 * acc;
}

bool collinear_corner(Point2 a, Point2 b, Point2 c) {
  const Point2 u = b - a;
  const Point2 w = c - b;
  return std::abs(cross(u, w)) <= kEpsAngle * norm(u) * norm(w);
}

}  // namespace

Line::Line(double signed_distance, double normal_angle) {
  double a = normal_angle;
  double s = signed_distance;
  while (a >= kPi) {
    a -= kPi;
    s = -s;
  }
  while (a < 0.0) {
    a += kPi;
    s = -s;
  }
  if (a >= kPi) {  // rounding guard for a + pi landing exactly on pi
    a -= kPi;
    s = -s;
  }
  phi_ = a;
  p_ = s;
  nx_ = std::cos(a);
  ny_ = std::sin(a);
}

RectWindow::RectWindow(double x0, double y0, double x1, double y1)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1) {
  if (!(x0 < x1) || !(y0 < y1)) {
    throw std::invalid_argument("RectWindow: requires x0 < x1 and y0 < y1");
  }
}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Point2> vertices) {
  for (const Point2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DegenerateGeometry("polygon vertex not finite");
    }
  }

  // Drop consecutive near-duplicate points (including the wrap-around pair).
  std::vector<Point2> v;
  v.reserve(vertices.size());
  for (const Point2& p : vertices) {
    if (v.empty() || distance(v.back(), p) > kEpsPoint) v.push_back(p);
  }
  while (v.size() > 1 && distance(v.front(), v.back()) <= kEpsPoint) v.pop_back();

  if (v.size() < 3) throw DegenerateGeometry("fewer than 3 distinct vertices");

  const double area2 = signed_area(v);
  if (std::abs(area2) <= kEpsArea) throw DegenerateGeometry("polygon area below tolerance");
  if (area2 < 0.0) std::reverse(v.begin(), v.end());

  // Merge collinear middle vertices until stable so the list holds corners only.
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size();) {
      const std::size_t n = v.size();
      const Point2 a = v[(i + n - 1) % n];
      const Point2 b = v[i];
      const Point2 c = v[(i + 1) % n];
      if (collinear_corner(a, b, c)) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }

  if (v.size() < 3) throw DegenerateGeometry("polygon collapsed during normalization");
  if (signed_area(v) <= kEpsArea) throw DegenerateGeometry("polygon area below tolerance");

  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % n];
    const Point2 c = v[(i + 2) % n];
    if (cross(b - a, c - b) <= 0.0) throw DegenerateGeometry("polygon not strictly convex");
  }

  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::from_convex_ccw(std::vector<Point2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw DegenerateGeometry("fewer than 3 vertices");
  for (const Point2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DegenerateGeometry("polygon vertex not finite");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[i];
    const Point2 b = vertices[(i + 1) % n];
    const Point2 c = vertices[(i + 2) % n];
    if (distance(a, b) <= kEpsPoint) throw DegenerateGeometry("duplicate corner");
    if (cross(b - a, c - b) <= 0.0) throw DegenerateGeometry("not strictly convex CCW");
  }
  if (signed_area(vertices) <= kEpsArea) throw DegenerateGeometry("polygon area below tolerance");
  return ConvexPolygon(std::move(vertices));
}

double polygon_area(const ConvexPolygon& poly) { return signed_area(poly.vertices()); }

double polygon_perimeter(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += distance(v[i], v[(i + 1) % v.size()]);
  }
  return acc;
}

Point2 polygon_centroid(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  const Point2 o = v[0];
  double area2 = 0.0;
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Point2 a = v[i] - o;
    const Point2 b = v[i + 1] - o;
    const double c = cross(a, b);
    area2 += c;
    cx += c * (a.x + b.x);
    cy += c * (a.y + b.y);
  }
  return {o.x + cx / (3.0 * area2), o.y + cy / (3.0 * area2)};
}

double polygon_diameter(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      best = std::max(best, distance(v[i], v[j]));
    }
  }
  return best;
}

Interval projection_interval(const ConvexPolygon& poly, Point2 unit_normal) {
  const auto& v = poly.vertices();
  double lo = dot(v[0], unit_normal);
  double hi = lo;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double s = dot(v[i], unit_normal);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

double support_width(const ConvexPolygon& poly, Point2 unit_normal) {
  return projection_interval(poly, unit_normal).length();
}

double support_width(const ConvexPolygon& poly, double phi) {
  return support_width(poly, Point2{std::cos(phi), std::sin(phi)});
}

bool contains_point(const ConvexPolygon& poly, Point2 q, double tol) {
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    const Point2 e = b - a;
    if (cross(e, q - a) < -tol * norm(e)) return false;
  }
  return true;
}

SplitResult split_polygon(const ConvexPolygon& poly, const Line& line) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = line.signed_distance(v[i]);
  const auto [smin_it, smax_it] = std::minmax_element(s.begin(), s.end());
  const double smin = *smin_it;
  const double smax = *smax_it;
  if (smin >= -kEpsPoint || smax <= kEpsPoint) {
    return SplitResult{SplitResult::Status::kNoIntersection, std::nullopt, std::nullopt, {}};
  }

  std::vector<Point2> neg, pos, on_line;
  neg.reserve(n + 2);
  pos.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (s[i] <= kEpsPoint) neg.push_back(v[i]);
    if (s[i] >= -kEpsPoint) pos.push_back(v[i]);
    if (std::abs(s[i]) <= kEpsPoint) on_line.push_back(v[i]);
    const bool crosses = (s[i] < -kEpsPoint && s[j] > kEpsPoint) ||
                         (s[i] > kEpsPoint && s[j] < -kEpsPoint);
    if (crosses) {
      const double t = s[i] / (s[i] - s[j]);
      const Point2 q = v[i] + t * (v[j] - v[i]);
      neg.push_back(q);
      pos.push_back(q);
      on_line.push_back(q);
    }
  }

  // The chord endpoints are the extreme on-line points along the line
  // direction; a convex polygon yields exactly two of them.
  const Point2 u = line.direction();
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < on_line.size(); ++i) {
    if (dot(u, on_line[i]) < dot(u, on_line[lo])) lo = i;
    if (dot(u, on_line[i]) > dot(u, on_line[hi])) hi = i;
  }
  if (on_line.size() < 2 || distance(on_line[lo], on_line[hi]) <= kEpsPoint) {
    return SplitResult{SplitResult::Status::kDegenerate, std::nullopt, std::nullopt, {}};
  }
  const Segment chord{on_line[lo], on_line[hi]};

  SplitResult out;
  try {
    ConvexPolygon a = ConvexPolygon::from_vertices(std::move(neg));
    ConvexPolygon b = ConvexPolygon::from_vertices(std::move(pos));
    // Reject parts with corners too close together: they would defeat the
    // global vertex identification tolerance downstream.
    for (const ConvexPolygon* part : {&a, &b}) {
      const auto& w = part->vertices();
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (distance(w[i], w[(i + 1) % w.size()]) < 4.0 * kEpsPoint) {
          return SplitResult{SplitResult::Status::kDegenerate, std::nullopt, std::nullopt, {}};
        }
      }
    }
    out.status = SplitResult::Status::kHit;
    out.neg = std::move(a);
    out.pos = std::move(b);
    out.chord = chord;
  } catch (const DegenerateGeometry&) {
    return SplitResult{SplitResult::Status::kDegenerate, std::nullopt, std::nullopt, {}};
  }
  return out;
}

std::optional<Point2> line_intersection(const Line& a, const Line& b) {
  const Point2 na = a.normal();
  const Point2 nb = b.normal();
  const double det = na.x * nb.y - na.y * nb.x;
  if (std::abs(det) < kEpsAngle) return std::nullopt;
  return Point2{(a.p() * nb.y - b.p() * na.y) / det, (na.x * b.p() - nb.x * a.p()) / det};
}

std::optional<Segment> collinear_overlap(const Segment& s, const Segment& t) {
  const double len = s.length();
  if (len <= kEpsPoint) return std::nullopt;
  const Point2 u = (1.0 / len) * (s.b - s.a);

  // Both endpoints of t must lie on the supporting line of s.
  if (std::abs(cross(u, t.a - s.a)) > kEpsPoint) return std::nullopt;
  if (std::abs(cross(u, t.b - s.a)) > kEpsPoint) return std::nullopt;

  double t0 = dot(u, t.a - s.a);
  double t1 = dot(u, t.b - s.a);
  if (t0 > t1) std::swap(t0, t1);
  const double lo = std::max(0.0, t0);
  const double hi = std::min(len, t1);
  if (hi - lo <= kEpsPoint) return std::nullopt;  // disjoint or point contact
  return Segment{s.a + lo * u, s.a + hi * u};
}

}  // namespace tesslab::geometry
