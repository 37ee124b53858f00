#include "tesslab/tessgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tesslab::tessgen {

using geometry::ConvexPolygon;
using geometry::kEpsPoint;
using geometry::kPi;
using geometry::Line;
using geometry::Point2;
using geometry::RectWindow;
using geometry::SplitResult;

DirectionLaw DirectionLaw::isotropic() { return DirectionLaw(); }

DirectionLaw DirectionLaw::discrete(std::vector<Atom> atoms) {
  if (atoms.size() < 2) {
    throw std::invalid_argument("DirectionLaw: discrete law needs >= 2 atoms");
  }
  double total = 0.0;
  for (auto& a : atoms) {
    if (!(a.weight > 0.0)) throw std::invalid_argument("DirectionLaw: weights must be positive");
    if (!(a.phi >= 0.0) || !(a.phi < kPi)) {
      throw std::invalid_argument("DirectionLaw: atom angles must lie in [0, pi)");
    }
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("DirectionLaw: weights must sum to 1");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (std::abs(atoms[i].phi - atoms[j].phi) <= 1e-12) {
        throw std::invalid_argument("DirectionLaw: atoms must be distinct");
      }
    }
  }
  DirectionLaw law;
  law.atoms_ = std::move(atoms);
  return law;
}

double DirectionLaw::sample_phi(RngStream& rng) const {
  if (is_isotropic()) return rng.uniform(0.0, kPi);
  double u = rng.uniform01();
  for (const Atom& a : atoms_) {
    if (u < a.weight) return a.phi;
    u -= a.weight;
  }
  return atoms_.back().phi;  // guard against accumulated rounding
}

std::vector<Line> sample_poisson_lines(const PltParams& params, RngStream& rng) {
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
    throw std::invalid_argument("sample_poisson_lines: gamma must be positive and finite");
  }
  const double r0 = params.window.circumradius();
  const Point2 c = params.window.center();
  const long n = rng.poisson(params.gamma * 2.0 * r0);

  std::vector<Line> lines;
  lines.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double phi = params.law.sample_phi(rng);
    const Point2 v{std::cos(phi), std::sin(phi)};
    const double p = dot(c, v) + rng.uniform(-r0, r0);
    lines.emplace_back(p, phi);
  }
  return lines;
}

EdgedCell EdgedCell::window_cell(const RectWindow& w) {
  EdgedCell cell{ConvexPolygon::from_convex_ccw({{w.x0(), w.y0()},
                                                 {w.x1(), w.y0()},
                                                 {w.x1(), w.y1()},
                                                 {w.x0(), w.y1()}}),
                 {}};
  cell.edge_lines = {Line(w.y0(), kPi / 2.0), Line(w.x1(), 0.0), Line(w.y1(), kPi / 2.0),
                     Line(w.x0(), 0.0)};
  return cell;
}

EdgedSplit split_edged_cell(const EdgedCell& cell, const Line& cut) {
  using Status = geometry::SplitResult::Status;
  const auto& v = cell.poly.vertices();
  const std::size_t n = v.size();

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = cut.signed_distance(v[i]);
  const auto [smin_it, smax_it] = std::minmax_element(s.begin(), s.end());
  if (*smin_it >= -kEpsPoint || *smax_it <= kEpsPoint) {
    return {Status::kNoIntersection, std::nullopt, std::nullopt};
  }

  std::vector<geometry::Point2> neg_v, pos_v;
  std::vector<Line> neg_l, pos_l;
  neg_v.reserve(n + 2);
  pos_v.reserve(n + 2);
  neg_l.reserve(n + 2);
  pos_l.reserve(n + 2);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const Line& m = cell.edge_lines[k];
    if (std::abs(s[k]) <= kEpsPoint) {
      // Chord endpoint at an existing corner; the boundary continues along
      // the original edge on its own side and along the chord on the other.
      neg_v.push_back(v[k]);
      neg_l.push_back(s[k1] <= kEpsPoint ? m : cut);
      pos_v.push_back(v[k]);
      pos_l.push_back(s[k1] >= -kEpsPoint ? m : cut);
      continue;
    }
    if (s[k] < 0.0) {
      neg_v.push_back(v[k]);
      neg_l.push_back(m);
    } else {
      pos_v.push_back(v[k]);
      pos_l.push_back(m);
    }
    const bool crosses =
        (s[k] < -kEpsPoint && s[k1] > kEpsPoint) || (s[k] > kEpsPoint && s[k1] < -kEpsPoint);
    if (crosses) {
      // New vertex from the canonical line parameters: every cell flanking
      // this edge computes the same bits.
      const auto q = geometry::line_intersection(cut, m);
      if (!q) return {Status::kDegenerate, std::nullopt, std::nullopt};
      if (s[k] < 0.0) {  // leaving the negative side
        neg_v.push_back(*q);
        neg_l.push_back(cut);
        pos_v.push_back(*q);
        pos_l.push_back(m);
      } else {
        neg_v.push_back(*q);
        neg_l.push_back(m);
        pos_v.push_back(*q);
        pos_l.push_back(cut);
      }
    }
  }

  // Children with corners too close together would defeat the global vertex
  // identification tolerance downstream.
  for (const auto* child : {&neg_v, &pos_v}) {
    if (child->size() < 3) return {Status::kDegenerate, std::nullopt, std::nullopt};
    for (std::size_t i = 0; i < child->size(); ++i) {
      if (geometry::distance((*child)[i], (*child)[(i + 1) % child->size()]) <
          4.0 * kEpsPoint) {
        return {Status::kDegenerate, std::nullopt, std::nullopt};
      }
    }
  }

  try {
    EdgedCell neg{ConvexPolygon::from_convex_ccw(std::move(neg_v)), std::move(neg_l)};
    EdgedCell pos{ConvexPolygon::from_convex_ccw(std::move(pos_v)), std::move(pos_l)};
    return {Status::kHit, std::move(neg), std::move(pos)};
  } catch (const geometry::DegenerateGeometry&) {
    return {Status::kDegenerate, std::nullopt, std::nullopt};
  }
}

std::vector<ConvexPolygon> build_plt(const std::vector<Line>& lines, const RectWindow& window,
                                     GenStats* stats) {
  GenStats local;
  GenStats& gs = stats ? *stats : local;

  std::vector<EdgedCell> cells;
  cells.push_back(EdgedCell::window_cell(window));

  std::vector<std::pair<std::size_t, EdgedSplit>> splits;
  for (const Line& line : lines) {
    // A line is applied transactionally: if it produces a tolerance-thin
    // sliver in any cell it is dropped entirely. Splitting the remaining
    // cells anyway would leave the skipped cell with hanging vertices,
    // which a line arrangement cannot have; dropping the line only thins
    // the process by the (counted, capped) degenerate-event rate.
    splits.clear();
    bool degenerate = false;
    for (std::size_t i = 0; i < cells.size() && !degenerate; ++i) {
      EdgedSplit res = split_edged_cell(cells[i], line);
      switch (res.status) {
        case geometry::SplitResult::Status::kHit:
          splits.emplace_back(i, std::move(res));
          break;
        case geometry::SplitResult::Status::kNoIntersection:
          break;
        case geometry::SplitResult::Status::kDegenerate:
          degenerate = true;
          break;
      }
    }
    if (degenerate) {
      if (++gs.degenerate_events > kMaxDegenerateEvents) {
        throw geometry::DegenerateGeometry("build_plt: too many degenerate splits");
      }
      continue;
    }
    for (auto& [index, res] : splits) {
      cells[index] = std::move(*res.neg);
      cells.push_back(std::move(*res.pos));
      ++gs.divisions;
    }
  }

  std::vector<ConvexPolygon> out;
  out.reserve(cells.size());
  for (auto& cell : cells) out.push_back(std::move(cell.poly));
  return out;
}

double cell_hitting_rate(const ConvexPolygon& cell, const DirectionLaw& law) {
  if (law.is_isotropic()) {
    // Cauchy's formula: the mean width over uniform directions is perimeter/pi.
    return geometry::polygon_perimeter(cell) / kPi;
  }
  double rate = 0.0;
  for (const auto& a : law.atoms()) {
    rate += a.weight * geometry::support_width(cell, a.phi);
  }
  return rate;
}

Line sample_dividing_line(const ConvexPolygon& cell, const DirectionLaw& law, RngStream& rng) {
  constexpr int kMaxIter = 1 << 20;

  double phi = 0.0;
  if (law.is_isotropic()) {
    // Rejection on phi with the diameter as envelope; acceptance >= 2/pi
    // for convex cells.
    const double diam = geometry::polygon_diameter(cell);
    int iter = 0;
    for (;;) {
      phi = rng.uniform(0.0, kPi);
      if (rng.uniform01() * diam <= geometry::support_width(cell, phi)) break;
      if (++iter > kMaxIter) {
        throw std::runtime_error("sample_dividing_line: rejection sampling stalled");
      }
    }
  } else {
    const double rate = cell_hitting_rate(cell, law);
    double u = rng.uniform01() * rate;
    phi = law.atoms().back().phi;
    for (const auto& a : law.atoms()) {
      const double mass = a.weight * geometry::support_width(cell, a.phi);
      if (u < mass) {
        phi = a.phi;
        break;
      }
      u -= mass;
    }
  }

  const Point2 v{std::cos(phi), std::sin(phi)};
  const geometry::Interval span = projection_interval(cell, v);
  int iter = 0;
  for (;;) {
    const double p = rng.uniform(span.lo, span.hi);
    // Match the split predicate: the line must meet the open interior.
    if (p > span.lo + kEpsPoint && p < span.hi - kEpsPoint) return Line(p, phi);
    if (++iter > kMaxIter) {
      throw std::runtime_error("sample_dividing_line: degenerate projection interval");
    }
  }
}

std::vector<ConvexPolygon> stit_construct(const StitParams& params, RngStream& rng,
                                          GenStats* stats) {
  if (!(params.t > 0.0) || !std::isfinite(params.t)) {
    throw std::invalid_argument("stit_construct: t must be positive and finite");
  }
  GenStats local;
  GenStats& gs = stats ? *stats : local;

  struct Item {
    EdgedCell cell;
    double remaining;
  };

  std::vector<Item> work;
  work.push_back({EdgedCell::window_cell(params.window), params.t});

  std::vector<ConvexPolygon> final_cells;
  while (!work.empty()) {
    Item item = std::move(work.back());
    work.pop_back();

    const double rate = cell_hitting_rate(item.cell.poly, params.law);
    const double lifetime = rng.exponential(rate);
    if (lifetime > item.remaining) {
      final_cells.push_back(std::move(item.cell.poly));
      continue;
    }
    const double remaining = item.remaining - lifetime;

    for (;;) {
      const Line line = sample_dividing_line(item.cell.poly, params.law, rng);
      EdgedSplit res = split_edged_cell(item.cell, line);
      if (res.status == SplitResult::Status::kHit) {
        work.push_back({std::move(*res.neg), remaining});
        work.push_back({std::move(*res.pos), remaining});
        break;
      }
      // kNoIntersection cannot occur by the sampler's postcondition;
      // tolerance-degenerate chords are resampled.
      if (++gs.degenerate_events > kMaxDegenerateEvents) {
        throw geometry::DegenerateGeometry("stit_construct: too many degenerate splits");
      }
    }
    if (++gs.divisions > kMaxDivisions) {
      throw std::runtime_error("stit_construct: division guard exceeded (rate bug?)");
    }
  }
  return final_cells;
}

}  // namespace tesslab::tessgen
