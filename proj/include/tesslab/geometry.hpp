// Planar convex geometry used by the tessellation generators: points, lines
// in (signed distance, normal angle) form, convex polygons with tolerance
// based predicates, and polygon splitting.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tesslab::geometry {

inline constexpr double kPi = 3.14159265358979323846;

// All inputs are continuous random lines, so exact degeneracies have
// probability zero; tolerance-based predicates are sufficient.
inline constexpr double kEpsPoint = 1e-9;   // point identification (absolute, window units)
inline constexpr double kEpsArea = 1e-12;   // polygon degeneracy
inline constexpr double kEpsAngle = 1e-12;  // collinearity (relative sine)

struct DegenerateGeometry : std::runtime_error {
  explicit DegenerateGeometry(const std::string& what) : std::runtime_error(what) {}
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Undirected line {z : <z, v> = p} with unit normal v = (cos phi, sin phi).
// phi is normalized into [0, pi); reducing the angle by an odd multiple of
// pi flips the sign of p so the point set is unchanged.
class Line {
 public:
  Line(double signed_distance, double normal_angle);

  double p() const { return p_; }
  double phi() const { return phi_; }
  Point2 normal() const { return {nx_, ny_}; }
  // Unit vector along the line (normal rotated by +pi/2).
  Point2 direction() const { return {-ny_, nx_}; }
  double signed_distance(Point2 z) const { return z.x * nx_ + z.y * ny_ - p_; }

 private:
  double p_;
  double phi_;
  double nx_, ny_;
};

struct Segment {
  Point2 a;
  Point2 b;

  double length() const { return distance(a, b); }
  Point2 midpoint() const { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }
};

// Axis-aligned rectangular observation window.
class RectWindow {
 public:
  RectWindow(double x0, double y0, double x1, double y1);

  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double width() const { return x1_ - x0_; }
  double height() const { return y1_ - y0_; }
  double area() const { return width() * height(); }
  Point2 center() const { return {0.5 * (x0_ + x1_), 0.5 * (y0_ + y1_)}; }
  // Radius of the circumscribed disc (half diagonal).
  double circumradius() const { return 0.5 * std::sqrt(width() * width() + height() * height()); }

  bool contains(Point2 p, double tol = 0.0) const {
    return p.x >= x0_ - tol && p.x <= x1_ + tol && p.y >= y0_ - tol && p.y <= y1_ + tol;
  }
  bool on_boundary(Point2 p, double tol = kEpsPoint) const {
    return contains(p, tol) &&
           (std::abs(p.x - x0_) <= tol || std::abs(p.x - x1_) <= tol ||
            std::abs(p.y - y0_) <= tol || std::abs(p.y - y1_) <= tol);
  }
  bool contains_window(const RectWindow& sub, double tol = kEpsPoint) const {
    return sub.x0_ >= x0_ - tol && sub.y0_ >= y0_ - tol && sub.x1_ <= x1_ + tol &&
           sub.y1_ <= y1_ + tol;
  }

 private:
  double x0_, y0_, x1_, y1_;
};

// Closed convex polygon; vertices are exactly the geometric corners, in CCW
// order. Construction normalizes the vertex list (drops duplicate points and
// collinear middle vertices, fixes orientation) and validates convexity and
// a minimum area; hanging vertices of a tessellation are never stored here.
class ConvexPolygon {
 public:
  static ConvexPolygon from_vertices(std::vector<Point2> vertices);

  // Validating constructor for vertices that are already strictly convex
  // corners in CCW order; never alters the coordinates. Used where vertex
  // bits must be preserved exactly across cells.
  static ConvexPolygon from_convex_ccw(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return v_; }
  std::size_t corner_count() const { return v_.size(); }

 private:
  explicit ConvexPolygon(std::vector<Point2> v) : v_(std::move(v)) {}
  std::vector<Point2> v_;
};

double polygon_area(const ConvexPolygon& poly);
double polygon_perimeter(const ConvexPolygon& poly);
Point2 polygon_centroid(const ConvexPolygon& poly);

// Max pairwise vertex distance; upper bound for support_width over all angles.
double polygon_diameter(const ConvexPolygon& poly);

// Width of the polygon in the (unoriented) normal direction: the test is
// sign-symmetric in the direction vector, so v and -v give identical bits.
double support_width(const ConvexPolygon& poly, Point2 unit_normal);
double support_width(const ConvexPolygon& poly, double phi);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Range of <vertex, unit_normal> over the polygon vertices.
Interval projection_interval(const ConvexPolygon& poly, Point2 unit_normal);

bool contains_point(const ConvexPolygon& poly, Point2 q, double tol = kEpsPoint);

// Outcome of splitting a convex polygon with a line. kHit carries the two
// parts (neg: <z,v> <= p side) and the chord; kNoIntersection means the open
// interior misses the line; kDegenerate means a part failed the polygon
// invariants and the caller must resample or skip the line.
struct SplitResult {
  enum class Status { kHit, kNoIntersection, kDegenerate };
  Status status = Status::kNoIntersection;
  std::optional<ConvexPolygon> neg;
  std::optional<ConvexPolygon> pos;
  Segment chord{};
};

SplitResult split_polygon(const ConvexPolygon& poly, const Line& line);

// Positive-length intersection of two collinear segments; std::nullopt if the
// segments are not collinear within tolerance or only touch in a point.
std::optional<Segment> collinear_overlap(const Segment& s, const Segment& t);

// Intersection point of two lines from their canonical parameters;
// std::nullopt when nearly parallel. Identical inputs give identical bits.
std::optional<Point2> line_intersection(const Line& a, const Line& b);

}  // namespace tesslab::geometry
