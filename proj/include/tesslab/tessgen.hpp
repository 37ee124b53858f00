// Generators for the two tessellation models inside a rectangular window:
// Poisson line tessellations (independent lines, all thrown at once) and
// STIT tessellations (recursive cell division with exponential lifetimes).
#pragma once

#include <vector>

#include "tesslab/geometry.hpp"
#include "tesslab/rng.hpp"

namespace tesslab::tessgen {

// Directional distribution of line normals on [0, pi). Either isotropic
// (uniform) or a discrete mixture of at least two distinct atoms, so that
// the generated lines span the plane.
class DirectionLaw {
 public:
  struct Atom {
    double phi;     // normal angle in [0, pi)
    double weight;  // > 0; weights sum to 1
  };

  static DirectionLaw isotropic();
  static DirectionLaw discrete(std::vector<Atom> atoms);

  bool is_isotropic() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // One normal angle drawn from the law (ignores cell geometry).
  double sample_phi(RngStream& rng) const;

 private:
  DirectionLaw() = default;
  std::vector<Atom> atoms_;  // empty <=> isotropic
};

struct PltParams {
  double gamma;  // line intensity; equals the edge length density L_A
  DirectionLaw law;
  geometry::RectWindow window;
};

struct StitParams {
  double t;  // construction time; equals the edge length density L_A
  DirectionLaw law;
  geometry::RectWindow window;
};

// Counters for rare tolerance-degenerate events during generation.
struct GenStats {
  int degenerate_events = 0;
  long long divisions = 0;
};

// A replication aborts after this many tolerance-degenerate splits (these
// are probability-zero events; a run of them indicates a bug, and silently
// dropping more could bias the statistics).
inline constexpr int kMaxDegenerateEvents = 10;
// Guard against a runaway division process (wrong lifetime rates).
inline constexpr long long kMaxDivisions = 1'000'000;

// Lines hitting the disc circumscribing the window; the count is Poisson
// with mean gamma * 2 * circumradius, p is uniform around the projection of
// the window centre and phi is drawn from the law.
std::vector<geometry::Line> sample_poisson_lines(const PltParams& params, RngStream& rng);

// Convex cell that remembers the supporting line of every edge. Splitting
// computes each new vertex by intersecting the cutting line with the edge's
// supporting line, from canonical line parameters: the two cells flanking an
// edge produce bit-identical vertices, with no error accumulation across
// split generations (clipping via edge endpoints amplifies rounding by
// 1/sin(angle) per generation and can push twin copies of one vertex apart
// further than the point-identification tolerance).
struct EdgedCell {
  geometry::ConvexPolygon poly;
  std::vector<geometry::Line> edge_lines;  // edge_lines[k] supports (v[k], v[k+1])

  static EdgedCell window_cell(const geometry::RectWindow& w);
};

struct EdgedSplit {
  geometry::SplitResult::Status status = geometry::SplitResult::Status::kNoIntersection;
  std::optional<EdgedCell> neg;
  std::optional<EdgedCell> pos;
};

EdgedSplit split_edged_cell(const EdgedCell& cell, const geometry::Line& cut);

// Cells obtained by splitting the window with every line in turn.
std::vector<geometry::ConvexPolygon> build_plt(const std::vector<geometry::Line>& lines,
                                               const geometry::RectWindow& window,
                                               GenStats* stats = nullptr);

// Total rate at which random lines hit the cell: integral of the support
// width over the directional law (isotropic: perimeter / pi).
double cell_hitting_rate(const geometry::ConvexPolygon& cell, const DirectionLaw& law);

// A line distributed as the hitting measure restricted to lines meeting the
// interior of the cell: phi has density support_width * law, and p given phi
// is uniform on the projection interval. Always hits the open interior.
geometry::Line sample_dividing_line(const geometry::ConvexPolygon& cell, const DirectionLaw& law,
                                    RngStream& rng);

// Recursive cell division up to time t, starting from the window.
std::vector<geometry::ConvexPolygon> stit_construct(const StitParams& params, RngStream& rng,
                                                    GenStats* stats = nullptr);

}  // namespace tesslab::tessgen
