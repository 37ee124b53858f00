#include "tesslab/secondorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tesslab::secondorder {

using geometry::kPi;
using geometry::Point2;
using geometry::RectWindow;

MarkedPointPattern extract_centres(const complex::TessellationComplex& c,
                                   const RectWindow& sub) {
  if (!c.window().contains_window(sub)) {
    throw std::invalid_argument("extract_centres: sub-window not inside the complex window");
  }
  MarkedPointPattern out{PointPattern{{}, sub}, {}};
  for (std::size_t i = 0; i < c.cells().size(); ++i) {
    const auto& cell = c.cells()[i];
    const Point2 g = geometry::polygon_centroid(cell);
    if (!sub.contains(g)) continue;
    out.pattern.points.push_back(g);
    out.marks.push_back({geometry::polygon_area(cell), geometry::polygon_perimeter(cell),
                         static_cast<double>(cell.corner_count())});
  }
  return out;
}

double translation_weight(const RectWindow& w, double dx, double dy) {
  const double ax = w.width() - std::abs(dx);
  const double ay = w.height() - std::abs(dy);
  if (ax <= 0.0 || ay <= 0.0) {
    throw ZeroOverlap("translation_weight: displacement exceeds window size");
  }
  return ax * ay;
}

namespace {

// Sorted copy of the pattern (points with marks attached) in lexicographic
// order; makes pair enumeration canonical.
struct SortedPattern {
  std::vector<Point2> pts;
  std::vector<Marks> marks;
};

SortedPattern sorted_pattern(const MarkedPointPattern& p) {
  const std::size_t n = p.pattern.points.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Point2& pa = p.pattern.points[a];
    const Point2& pb = p.pattern.points[b];
    return pa.x != pb.x ? pa.x < pb.x : pa.y < pb.y;
  });
  SortedPattern s;
  s.pts.reserve(n);
  s.marks.reserve(n);
  const bool marked = p.marks.size() == n;
  for (std::size_t i : order) {
    s.pts.push_back(p.pattern.points[i]);
    s.marks.push_back(marked ? p.marks[i] : Marks{});
  }
  return s;
}

}  // namespace

SecondOrderAccumulator::SecondOrderAccumulator(const RGrid& grid, double bandwidth)
    : grid_(grid), h_(bandwidth) {
  k_num_.assign(grid.n, 0.0);
  k_pairs_.assign(grid.n, 0);
  g_num_.assign(grid.n, 0.0);
  kern_den_.assign(grid.n, 0.0);
  kern_pairs_.assign(grid.n, 0);
  for (auto& v : kmm_num_) v.assign(grid.n, 0.0);
}

void SecondOrderAccumulator::add_pattern(const MarkedPointPattern& p) {
  const RectWindow& w = p.pattern.window;
  const std::size_t n = p.pattern.points.size();
  const SortedPattern sp = sorted_pattern(p);

  n_points_ += static_cast<long long>(n);
  ++n_patterns_;
  window_area_ += w.area();
  lambda2_sum_ += static_cast<double>(n) * (static_cast<double>(n) - 1.0) / (w.area() * w.area());
  const bool marked = p.marks.size() == n;
  if (marked) {
    // Canonical order, so mark means are permutation-invariant bit for bit.
    for (const Marks& m : sp.marks) {
      mark_sum_[0] += m.area;
      mark_sum_[1] += m.perimeter;
      mark_sum_[2] += m.corners;
    }
  }

  const double step = grid_.step();
  const double r_cut = grid_.r_max + h_;
  const double r_cut2 = r_cut * r_cut;

  // Grid binning for neighbor candidate enumeration within r_cut.
  const double bin = std::max(r_cut, 1e-9);
  const int bx_n = std::max(1, static_cast<int>(std::ceil(w.width() / bin)));
  const int by_n = std::max(1, static_cast<int>(std::ceil(w.height() / bin)));
  std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(bx_n) * by_n);
  const auto bin_of = [&](Point2 q) {
    const int bx = std::clamp(static_cast<int>((q.x - w.x0()) / bin), 0, bx_n - 1);
    const int by = std::clamp(static_cast<int>((q.y - w.y0()) / bin), 0, by_n - 1);
    return std::pair<int, int>{bx, by};
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto [bx, by] = bin_of(sp.pts[i]);
    bins[static_cast<std::size_t>(by) * bx_n + bx].push_back(i);
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    const Point2 xi = sp.pts[i];
    const auto [bx, by] = bin_of(xi);
    for (int cx = std::max(0, bx - 1); cx <= std::min(bx_n - 1, bx + 1); ++cx) {
      for (int cy = std::max(0, by - 1); cy <= std::min(by_n - 1, by + 1); ++cy) {
        for (std::uint32_t j : bins[static_cast<std::size_t>(cy) * bx_n + cx]) {
          if (j <= i) continue;  // unordered pairs once, in canonical order
          const Point2 xj = sp.pts[j];
          const double dx = xj.x - xi.x;
          const double dy = xj.y - xi.y;
          const double d2 = dx * dx + dy * dy;
          if (d2 > r_cut2) continue;
          const double d = std::sqrt(d2);
          const double invw = 1.0 / translation_weight(w, dx, dy);

          if (d <= grid_.r_max) {
            // First grid index with r >= d.
            const int idx = std::min(grid_.n - 1,
                                     static_cast<int>(std::ceil(d / step - 1e-12)));
            k_num_[idx] += invw;
            k_pairs_[idx] += 2;
          }

          if (h_ > 0.0) {
            const int lo = std::max(0, static_cast<int>(std::ceil((d - h_) / step)));
            const int hi = std::min(grid_.n - 1, static_cast<int>(std::floor((d + h_) / step)));
            for (int gi = lo; gi <= hi; ++gi) {
              const double u = (grid_.r(gi) - d) / h_;
              const double kern = 0.75 / h_ * (1.0 - u * u);
              if (kern <= 0.0) continue;
              const double c = kern * invw;
              g_num_[gi] += c;
              kern_den_[gi] += c;
              kern_pairs_[gi] += 2;
              if (marked) {
                kmm_num_[0][gi] += c * sp.marks[i].area * sp.marks[j].area;
                kmm_num_[1][gi] += c * sp.marks[i].perimeter * sp.marks[j].perimeter;
                kmm_num_[2][gi] += c * sp.marks[i].corners * sp.marks[j].corners;
              }
            }
          }
        }
      }
    }
  }
}

void SecondOrderAccumulator::merge(const SecondOrderAccumulator& other) {
  n_points_ += other.n_points_;
  n_patterns_ += other.n_patterns_;
  window_area_ += other.window_area_;
  lambda2_sum_ += other.lambda2_sum_;
  for (int i = 0; i < grid_.n; ++i) {
    k_num_[i] += other.k_num_[i];
    k_pairs_[i] += other.k_pairs_[i];
    g_num_[i] += other.g_num_[i];
    kern_den_[i] += other.kern_den_[i];
    kern_pairs_[i] += other.kern_pairs_[i];
    for (int m = 0; m < 3; ++m) kmm_num_[m][i] += other.kmm_num_[m][i];
  }
  for (int m = 0; m < 3; ++m) mark_sum_[m] += other.mark_sum_[m];
}

CurveEstimate SecondOrderAccumulator::k() const {
  CurveEstimate e;
  e.n_used = n_points_;
  e.bandwidth = 0.0;
  e.r.resize(grid_.n);
  e.value.resize(grid_.n);
  e.n_pairs.resize(grid_.n);
  double acc = 0.0;
  long long pacc = 0;
  for (int i = 0; i < grid_.n; ++i) {
    acc += k_num_[i];
    pacc += k_pairs_[i];
    e.r[i] = grid_.r(i);
    e.value[i] = 2.0 * acc / lambda2_sum_;
    e.n_pairs[i] = pacc;
  }
  return e;
}

CurveEstimate SecondOrderAccumulator::pcf() const {
  CurveEstimate e;
  e.n_used = n_points_;
  e.bandwidth = h_;
  e.r.resize(grid_.n);
  e.value.resize(grid_.n);
  e.n_pairs.resize(grid_.n);
  for (int i = 0; i < grid_.n; ++i) {
    e.r[i] = grid_.r(i);
    e.n_pairs[i] = kern_pairs_[i];
    if (i == 0 || kern_pairs_[i] == 0) {
      e.value[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.value[i] = g_num_[i] / (kPi * e.r[i] * lambda2_sum_);
    }
  }
  return e;
}

CurveEstimate SecondOrderAccumulator::kmm(MarkSelector mark) const {
  const int m = static_cast<int>(mark);
  const double mu = n_points_ > 0 ? mark_sum_[m] / static_cast<double>(n_points_) : 0.0;
  CurveEstimate e;
  e.n_used = n_points_;
  e.bandwidth = h_;
  e.r.resize(grid_.n);
  e.value.resize(grid_.n);
  e.n_pairs.resize(grid_.n);
  for (int i = 0; i < grid_.n; ++i) {
    e.r[i] = grid_.r(i);
    e.n_pairs[i] = kern_pairs_[i];
    if (kern_pairs_[i] == 0 || kern_den_[i] <= 0.0 || mu <= 0.0) {
      e.value[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.value[i] = kmm_num_[m][i] / (mu * mu * kern_den_[i]);
    }
  }
  return e;
}

CurveEstimate estimate_K(const PointPattern& p, const RGrid& grid) {
  if (p.points.size() < 2) throw InsufficientPoints("estimate_K: need at least 2 points");
  SecondOrderAccumulator acc(grid, 0.0);
  acc.add_pattern(MarkedPointPattern{p, {}});
  return acc.k();
}

CurveEstimate estimate_pcf(const PointPattern& p, const RGrid& grid, const KernelSpec& kernel) {
  if (p.points.size() < 2) throw InsufficientPoints("estimate_pcf: need at least 2 points");
  if (!(kernel.h > 0.0)) throw std::invalid_argument("estimate_pcf: bandwidth must be positive");
  SecondOrderAccumulator acc(grid, kernel.h);
  acc.add_pattern(MarkedPointPattern{p, {}});
  return acc.pcf();
}

CurveEstimate estimate_kmm(const MarkedPointPattern& p, MarkSelector mark, const RGrid& grid,
                           const KernelSpec& kernel) {
  if (p.pattern.points.size() < 2) {
    throw InsufficientPoints("estimate_kmm: need at least 2 points");
  }
  if (p.marks.size() != p.pattern.points.size()) {
    throw std::invalid_argument("estimate_kmm: marks must parallel points");
  }
  if (!(kernel.h > 0.0)) throw std::invalid_argument("estimate_kmm: bandwidth must be positive");
  SecondOrderAccumulator acc(grid, kernel.h);
  acc.add_pattern(p);
  return acc.kmm(mark);
}

PointPattern poisson_pattern(const RectWindow& w, double intensity, RngStream& rng) {
  const long n = rng.poisson(intensity * w.area());
  PointPattern p{{}, w};
  p.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    p.points.push_back({rng.uniform(w.x0(), w.x1()), rng.uniform(w.y0(), w.y1())});
  }
  return p;
}

}  // namespace tesslab::secondorder
