// Recovery of the tessellation complex from a list of cells: deduplicated
// vertices (0-plates), edges (1-plates) obtained by subdividing cell sides
// at every vertex lying on them, incidences, and the per-1-plate neighbor
// relation. This is what makes the non face-to-face case work: a hanging
// vertex is a corner of the cells on one side of a chord and is recovered
// as a subdivision point on the side of the cell across it.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "tesslab/geometry.hpp"

namespace tesslab::complex {

struct InconsistentComplex : std::runtime_error {
  explicit InconsistentComplex(const std::string& what) : std::runtime_error(what) {}
};

struct Edge {
  std::uint32_t va = 0;  // vertex ids, va < vb
  std::uint32_t vb = 0;
  std::array<std::int32_t, 2> cells{-1, -1};
  int cell_count = 0;
  bool on_window_boundary = false;
  double length = 0.0;
};

struct Adjacency {
  std::int32_t neighbor = -1;  // cell id across the shared 1-plate
  std::uint32_t edge = 0;      // the shared 1-plate
};

// Per-cell topology relative to the recovered complex.
struct CellTopology {
  std::int32_t cell_id = -1;
  std::uint32_t corners = 0;                 // polygon 0-faces
  std::uint32_t n0 = 0;                      // 0-plates on the cell boundary
  std::uint32_t n1 = 0;                      // 1-plates on the cell boundary
  std::uint32_t neighbor_plate_count = 0;    // one entry per shared interior 1-plate
  std::uint32_t neighbor_distinct_count = 0; // distinct neighbor cells
  bool touches_boundary = false;
};

class TessellationComplex {
 public:
  const std::vector<geometry::ConvexPolygon>& cells() const { return cells_; }
  const std::vector<geometry::Point2>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const geometry::RectWindow& window() const { return window_; }

  const CellTopology& topology(std::size_t cell_id) const { return topo_.at(cell_id); }
  const std::vector<Adjacency>& neighbors(std::size_t cell_id) const {
    return adjacency_.at(cell_id);
  }
  bool vertex_on_window_boundary(std::uint32_t vid) const { return boundary_vertex_[vid]; }
  geometry::Segment edge_segment(const Edge& e) const {
    return {vertices_[e.va], vertices_[e.vb]};
  }

 private:
  friend TessellationComplex build_complex(std::vector<geometry::ConvexPolygon> cells,
                                           const geometry::RectWindow& window);
  explicit TessellationComplex(const geometry::RectWindow& w) : window_(w) {}

  geometry::RectWindow window_;
  std::vector<geometry::ConvexPolygon> cells_;
  std::vector<geometry::Point2> vertices_;
  std::vector<Edge> edges_;
  std::vector<CellTopology> topo_;
  std::vector<std::vector<Adjacency>> adjacency_;
  std::vector<bool> boundary_vertex_;
};

// Requires cells that tile the window (generator postcondition). Throws
// InconsistentComplex if an interior 1-plate does not have exactly two
// incident cells.
TessellationComplex build_complex(std::vector<geometry::ConvexPolygon> cells,
                                  const geometry::RectWindow& window);

// Histogram of edge degrees over interior vertices (window-boundary
// vertices excluded).
std::map<int, int> vertex_degrees(const TessellationComplex& c);

// Histogram, over interior vertices, of the number of collinear pairs among
// the incident edges.
std::map<int, int> collinear_pair_histogram(const TessellationComplex& c);

// Total length of interior 1-plates (each counted once) per unit window area.
double edge_length_density(const TessellationComplex& c);

CellTopology cell_topology(const TessellationComplex& c, std::size_t cell_id);

// Bounded-subdivision Euler characteristic V - E + F (cells only, no outer
// face); equals 1 for every consistently recovered complex.
long long euler_characteristic(const TessellationComplex& c);

}  // namespace tesslab::complex
