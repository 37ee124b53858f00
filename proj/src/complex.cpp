#include "tesslab/complex.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tesslab::complex {

using geometry::ConvexPolygon;
using geometry::distance;
using geometry::kEpsPoint;
using geometry::Point2;
using geometry::RectWindow;

namespace {

// Spatial hash for tolerance-based point identification. A query point is
// matched against stored points in its own and the 8 surrounding buckets, so
// any pair within eps is found as long as the bucket size is >= eps.
class PointDedup {
 public:
  explicit PointDedup(double eps) : eps_(eps), inv_(1.0 / (2.0 * eps)) {}

  std::uint32_t insert(Point2 p, std::vector<Point2>& points) {
    const long long bx = cell_of(p.x);
    const long long by = cell_of(p.y);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(bx + dx, by + dy));
        if (it == buckets_.end()) continue;
        for (std::uint32_t id : it->second) {
          if (distance(points[id], p) <= eps_) return id;
        }
      }
    }
    const auto id = static_cast<std::uint32_t>(points.size());
    points.push_back(p);
    buckets_[key(bx, by)].push_back(id);
    return id;
  }

 private:
  long long cell_of(double v) const { return static_cast<long long>(std::floor(v * inv_)); }
  static std::uint64_t key(long long x, long long y) {
    return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(y);
  }

  double eps_;
  double inv_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

// Uniform grid over the window for "which vertices lie on this segment"
// queries.
class VertexGrid {
 public:
  VertexGrid(const RectWindow& w, const std::vector<Point2>& points) : w_(w) {
    const double target = std::sqrt(w.area() / std::max<std::size_t>(points.size(), 1));
    bin_ = std::clamp(target, 1e-6 * std::min(w.width(), w.height()), w.width());
    nx_ = static_cast<int>(std::ceil(w.width() / bin_)) + 1;
    ny_ = static_cast<int>(std::ceil(w.height() / bin_)) + 1;
    bins_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::uint32_t id = 0; id < points.size(); ++id) {
      bins_[index_of(points[id])].push_back(id);
    }
  }

  template <typename Fn>
  void for_candidates(Point2 a, Point2 b, double eps, Fn&& fn) const {
    const double lox = std::min(a.x, b.x) - eps, hix = std::max(a.x, b.x) + eps;
    const double loy = std::min(a.y, b.y) - eps, hiy = std::max(a.y, b.y) + eps;
    const int bx0 = clampx(static_cast<int>(std::floor((lox - w_.x0()) / bin_)));
    const int bx1 = clampx(static_cast<int>(std::floor((hix - w_.x0()) / bin_)));
    const int by0 = clampy(static_cast<int>(std::floor((loy - w_.y0()) / bin_)));
    const int by1 = clampy(static_cast<int>(std::floor((hiy - w_.y0()) / bin_)));
    for (int bx = bx0; bx <= bx1; ++bx) {
      for (int by = by0; by <= by1; ++by) {
        for (std::uint32_t id : bins_[static_cast<std::size_t>(by) * nx_ + bx]) fn(id);
      }
    }
  }

 private:
  int clampx(int v) const { return std::clamp(v, 0, nx_ - 1); }
  int clampy(int v) const { return std::clamp(v, 0, ny_ - 1); }
  std::size_t index_of(Point2 p) const {
    const int bx = clampx(static_cast<int>(std::floor((p.x - w_.x0()) / bin_)));
    const int by = clampy(static_cast<int>(std::floor((p.y - w_.y0()) / bin_)));
    return static_cast<std::size_t>(by) * nx_ + bx;
  }

  RectWindow w_;
  double bin_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::uint32_t>> bins_;
};

bool segment_on_window_boundary(Point2 a, Point2 b, const RectWindow& w) {
  const double eps = kEpsPoint;
  if (std::abs(a.x - w.x0()) <= eps && std::abs(b.x - w.x0()) <= eps) return true;
  if (std::abs(a.x - w.x1()) <= eps && std::abs(b.x - w.x1()) <= eps) return true;
  if (std::abs(a.y - w.y0()) <= eps && std::abs(b.y - w.y0()) <= eps) return true;
  if (std::abs(a.y - w.y1()) <= eps && std::abs(b.y - w.y1()) <= eps) return true;
  return false;
}

}  // namespace

TessellationComplex build_complex(std::vector<ConvexPolygon> cells, const RectWindow& window) {
  TessellationComplex out(window);
  out.cells_ = std::move(cells);
  const auto& cs = out.cells_;

  // Pass 1: identify corners across cells -> global vertex ids.
  PointDedup dedup(kEpsPoint);
  std::vector<std::vector<std::uint32_t>> corner_ids(cs.size());
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& verts = cs[ci].vertices();
    corner_ids[ci].reserve(verts.size());
    for (const Point2& p : verts) {
      corner_ids[ci].push_back(dedup.insert(p, out.vertices_));
    }
  }

  out.boundary_vertex_.resize(out.vertices_.size());
  for (std::size_t v = 0; v < out.vertices_.size(); ++v) {
    out.boundary_vertex_[v] = window.on_boundary(out.vertices_[v]);
  }

  // Pass 2: subdivide every cell side at all vertices lying on it; each
  // resulting sub-segment is a 1-plate instance keyed by its vertex id pair.
  VertexGrid grid(window, out.vertices_);
  std::unordered_map<std::uint64_t, std::uint32_t> edge_index;
  out.topo_.resize(cs.size());
  out.adjacency_.resize(cs.size());

  std::vector<std::pair<double, std::uint32_t>> on_side;  // (param along side, vid)
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& verts = cs[ci].vertices();
    const std::size_t n = verts.size();
    CellTopology& topo = out.topo_[ci];
    topo.cell_id = static_cast<std::int32_t>(ci);
    topo.corners = static_cast<std::uint32_t>(n);

    for (std::size_t k = 0; k < n; ++k) {
      const Point2 a = out.vertices_[corner_ids[ci][k]];
      const Point2 b = out.vertices_[corner_ids[ci][(k + 1) % n]];
      const double len = distance(a, b);
      const Point2 u = (1.0 / len) * (b - a);

      on_side.clear();
      grid.for_candidates(a, b, kEpsPoint, [&](std::uint32_t vid) {
        const Point2 q = out.vertices_[vid] - a;
        if (std::abs(cross(u, q)) > kEpsPoint) return;
        const double t = dot(u, q);
        if (t < -kEpsPoint || t > len + kEpsPoint) return;
        on_side.emplace_back(t, vid);
      });
      std::sort(on_side.begin(), on_side.end());
      on_side.erase(std::unique(on_side.begin(), on_side.end(),
                                [](const auto& x, const auto& y) { return x.second == y.second; }),
                    on_side.end());
      if (on_side.size() < 2 || on_side.front().second != corner_ids[ci][k] ||
          on_side.back().second != corner_ids[ci][(k + 1) % n]) {
        throw InconsistentComplex("cell side lost its endpoints during subdivision");
      }

      topo.n0 += static_cast<std::uint32_t>(on_side.size()) - 1;  // corners counted once around
      topo.n1 += static_cast<std::uint32_t>(on_side.size()) - 1;

      for (std::size_t s = 0; s + 1 < on_side.size(); ++s) {
        std::uint32_t va = on_side[s].second;
        std::uint32_t vb = on_side[s + 1].second;
        if (va > vb) std::swap(va, vb);
        const std::uint64_t key = (static_cast<std::uint64_t>(va) << 32) | vb;

        auto [it, inserted] = edge_index.try_emplace(
            key, static_cast<std::uint32_t>(out.edges_.size()));
        if (inserted) {
          Edge e;
          e.va = va;
          e.vb = vb;
          e.length = distance(out.vertices_[va], out.vertices_[vb]);
          e.on_window_boundary =
              segment_on_window_boundary(out.vertices_[va], out.vertices_[vb], window);
          out.edges_.push_back(e);
        }
        Edge& e = out.edges_[it->second];
        if (e.cell_count >= 2) {
          throw InconsistentComplex("1-plate with more than two incident cells");
        }
        e.cells[e.cell_count++] = static_cast<std::int32_t>(ci);
      }
    }
  }

  // Consistency: interior 1-plates have exactly two incident cells,
  // window-boundary 1-plates exactly one.
  for (const Edge& e : out.edges_) {
    if (e.on_window_boundary && e.cell_count != 1) {
      throw InconsistentComplex("window-boundary 1-plate not incident to exactly one cell");
    }
    if (!e.on_window_boundary && e.cell_count != 2) {
      throw InconsistentComplex("interior 1-plate not incident to exactly two cells");
    }
  }

  // Pass 3: adjacency (one entry per shared interior 1-plate) and flags.
  for (std::uint32_t ei = 0; ei < out.edges_.size(); ++ei) {
    const Edge& e = out.edges_[ei];
    if (e.on_window_boundary) continue;
    out.adjacency_[e.cells[0]].push_back({e.cells[1], ei});
    out.adjacency_[e.cells[1]].push_back({e.cells[0], ei});
  }
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    CellTopology& topo = out.topo_[ci];
    topo.neighbor_plate_count = static_cast<std::uint32_t>(out.adjacency_[ci].size());
    std::vector<std::int32_t> ids;
    ids.reserve(out.adjacency_[ci].size());
    for (const Adjacency& adj : out.adjacency_[ci]) ids.push_back(adj.neighbor);
    std::sort(ids.begin(), ids.end());
    topo.neighbor_distinct_count =
        static_cast<std::uint32_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
    for (std::uint32_t vid : corner_ids[ci]) {
      if (out.boundary_vertex_[vid]) topo.touches_boundary = true;
    }
    // Hanging vertices on boundary sides are on the window edge as well, so
    // checking corners is enough for cells of a tiling.
  }

  return out;
}

namespace {

std::vector<int> interior_vertex_edge_counts(const TessellationComplex& c,
                                             std::vector<std::vector<std::uint32_t>>* incident) {
  std::vector<int> degree(c.vertices().size(), 0);
  if (incident) incident->assign(c.vertices().size(), {});
  for (std::uint32_t ei = 0; ei < c.edges().size(); ++ei) {
    const Edge& e = c.edges()[ei];
    degree[e.va]++;
    degree[e.vb]++;
    if (incident) {
      (*incident)[e.va].push_back(ei);
      (*incident)[e.vb].push_back(ei);
    }
  }
  return degree;
}

}  // namespace

std::map<int, int> vertex_degrees(const TessellationComplex& c) {
  const std::vector<int> degree = interior_vertex_edge_counts(c, nullptr);
  std::map<int, int> hist;
  for (std::uint32_t v = 0; v < degree.size(); ++v) {
    if (!c.vertex_on_window_boundary(v)) hist[degree[v]]++;
  }
  return hist;
}

std::map<int, int> collinear_pair_histogram(const TessellationComplex& c) {
  // Two incident edges count as collinear when the sine of the angle between
  // them is below 1e-6: far above the numeric noise of recovered plates and
  // far below the separation of independently drawn directions.
  constexpr double kSinTol = 1e-6;
  std::vector<std::vector<std::uint32_t>> incident;
  interior_vertex_edge_counts(c, &incident);

  std::map<int, int> hist;
  for (std::uint32_t v = 0; v < c.vertices().size(); ++v) {
    if (c.vertex_on_window_boundary(v)) continue;
    const auto& edges = incident[v];
    int pairs = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& a = c.edges()[edges[i]];
      const Point2 da = c.vertices()[a.vb] - c.vertices()[a.va];
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        const Edge& b = c.edges()[edges[j]];
        const Point2 db = c.vertices()[b.vb] - c.vertices()[b.va];
        if (std::abs(cross(da, db)) <= kSinTol * norm(da) * norm(db)) ++pairs;
      }
    }
    hist[pairs]++;
  }
  return hist;
}

double edge_length_density(const TessellationComplex& c) {
  double total = 0.0;
  for (const Edge& e : c.edges()) {
    if (!e.on_window_boundary) total += e.length;
  }
  return total / c.window().area();
}

CellTopology cell_topology(const TessellationComplex& c, std::size_t cell_id) {
  if (cell_id >= c.cells().size()) throw std::out_of_range("cell_topology: unknown cell id");
  return c.topology(cell_id);
}

long long euler_characteristic(const TessellationComplex& c) {
  return static_cast<long long>(c.vertices().size()) -
         static_cast<long long>(c.edges().size()) + static_cast<long long>(c.cells().size());
}

}  // namespace tesslab::complex
