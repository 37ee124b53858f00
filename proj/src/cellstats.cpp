#include "tesslab/cellstats.hpp"

#include <algorithm>
#include <cmath>

namespace tesslab::cellstats {

using complex::TessellationComplex;

std::vector<CellRecord> minus_sample(const TessellationComplex& c) {
  const std::size_t n = c.cells().size();
  std::vector<CellRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& topo = c.topology(i);
    CellRecord& r = records[i];
    r.cell_id = static_cast<std::int32_t>(i);
    r.area = geometry::polygon_area(c.cells()[i]);
    r.perimeter = geometry::polygon_perimeter(c.cells()[i]);
    r.corners = topo.corners;
    r.n0 = topo.n0;
    r.n1 = topo.n1;
    r.neighbors = c.neighbors(i);
    r.eligible = !topo.touches_boundary;
  }
  const geometry::RectWindow& w = c.window();
  for (std::size_t i = 0; i < n; ++i) {
    if (!records[i].eligible) continue;
    for (const auto& adj : records[i].neighbors) {
      if (c.topology(adj.neighbor).touches_boundary) {
        records[i].eligible = false;
        break;
      }
    }
    if (!records[i].eligible) continue;

    // Translation freedom of the observed neighborhood inside the window.
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    const auto grow = [&](std::int32_t id) {
      for (const auto& v : c.cells()[static_cast<std::size_t>(id)].vertices()) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
      }
    };
    grow(records[i].cell_id);
    for (const auto& adj : records[i].neighbors) grow(adj.neighbor);
    const double fx = w.width() - (x1 - x0);
    const double fy = w.height() - (y1 - y0);
    records[i].weight = fx > 0.0 && fy > 0.0 ? w.area() / (fx * fy) : 0.0;
    if (records[i].weight <= 0.0) records[i].eligible = false;
  }
  return records;
}

void NeighborhoodAccumulator::add(const std::vector<CellRecord>& records) {
  for (const CellRecord& r : records) {
    if (!r.eligible) continue;
    const double w = r.weight;
    double nb_c0 = 0.0, nb_v2 = 0.0, nb_v1 = 0.0;
    for (const auto& adj : r.neighbors) {
      const CellRecord& nb = records[adj.neighbor];
      nb_c0 += nb.corners;
      nb_v2 += nb.area;
      nb_v1 += nb.perimeter;
    }
    s_[kCount] += 1.0;
    s_[kWeight] += w;
    s_[kSumC0] += w * nb_c0;
    s_[kSumV2] += w * nb_v2;
    s_[kSumV1] += w * nb_v1;
    s_[kBarC0] += w * nb_c0 / r.n1;
    s_[kBarV2] += w * nb_v2 / r.n1;
    s_[kBarV1] += w * nb_v1 / r.n1;
    s_[kNeighbor] += w * static_cast<double>(r.neighbors.size());
    double distinct = 0.0;
    {
      std::vector<std::int32_t> ids;
      ids.reserve(r.neighbors.size());
      for (const auto& adj : r.neighbors) ids.push_back(adj.neighbor);
      std::sort(ids.begin(), ids.end());
      distinct = static_cast<double>(std::unique(ids.begin(), ids.end()) - ids.begin());
    }
    s_[kNeighborDistinct] += w * distinct;
    s_[kN0] += w * r.n0;
    s_[kN1] += w * r.n1;
    s_[kArea] += w * r.area;
    s_[kPerimeter] += w * r.perimeter;
    s_[kCorners] += w * r.corners;
    s_[kW0C0] += w * static_cast<double>(r.n0) * r.corners;
    s_[kW0V2] += w * static_cast<double>(r.n0) * r.area;
    s_[kW0V1] += w * static_cast<double>(r.n0) * r.perimeter;
    s_[kW1C0] += w * static_cast<double>(r.n1) * r.corners;
    s_[kW1V2] += w * static_cast<double>(r.n1) * r.area;
    s_[kW1V1] += w * static_cast<double>(r.n1) * r.perimeter;
    s_[kAreaNbPerim] += w * r.area * nb_v1;
    s_[kPerimNbArea] += w * r.perimeter * nb_v2;
  }
}

void NeighborhoodAccumulator::merge(const NeighborhoodAccumulator& other) {
  for (std::size_t i = 0; i < kFieldCount; ++i) s_[i] += other.s_[i];
}

Estimate jackknife(const std::vector<NeighborhoodAccumulator>& per_rep,
                   const std::function<double(const NeighborhoodAccumulator&)>& statistic) {
  NeighborhoodAccumulator total;
  for (const auto& rep : per_rep) total.merge(rep);

  Estimate est;
  est.value = statistic(total);
  const std::size_t j = per_rep.size();
  if (j < 2) return est;

  std::vector<double> leave_out(j);
  double mean = 0.0;
  for (std::size_t i = 0; i < j; ++i) {
    NeighborhoodAccumulator rest = total;
    for (std::size_t f = 0; f < NeighborhoodAccumulator::kFieldCount; ++f) {
      rest.values()[f] -= per_rep[i].values()[f];
    }
    leave_out[i] = statistic(rest);
    mean += leave_out[i];
  }
  mean /= static_cast<double>(j);
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  est.se = std::sqrt(ss * static_cast<double>(j - 1) / static_cast<double>(j));
  return est;
}

namespace {

using A = NeighborhoodAccumulator;

double ratio(const A& a, A::Field num, A::Field den) {
  return a[num] / a[den];
}

}  // namespace

NeighborhoodSummary neighborhood_summary(const std::vector<NeighborhoodAccumulator>& per_rep,
                                         std::string model_tag) {
  NeighborhoodAccumulator total;
  for (const auto& rep : per_rep) total.merge(rep);
  if (total[A::kCount] < 1.0) {
    throw EmptySample("neighborhood_summary: no eligible cells");
  }

  NeighborhoodSummary s;
  s.model = std::move(model_tag);
  s.sample_size = static_cast<long long>(total[A::kCount]);
  s.replications = static_cast<int>(per_rep.size());

  const auto over_m = [&](A::Field f) {
    return jackknife(per_rep, [f](const A& a) { return ratio(a, f, A::kWeight); });
  };
  s.c0_22 = over_m(A::kSumC0);
  s.v2_22 = over_m(A::kSumV2);
  s.v1_22 = over_m(A::kSumV1);
  s.bar_c0 = over_m(A::kBarC0);
  s.bar_v2 = over_m(A::kBarV2);
  s.bar_v1 = over_m(A::kBarV1);
  s.mean_neighbors = over_m(A::kNeighbor);
  s.mean_distinct_neighbors = over_m(A::kNeighborDistinct);
  s.mean_n0 = over_m(A::kN0);
  s.mean_corners = over_m(A::kCorners);
  s.mean_area = over_m(A::kArea);
  s.mean_perimeter = over_m(A::kPerimeter);

  const auto over_nb = [&](A::Field f) {
    return jackknife(per_rep, [f](const A& a) { return ratio(a, f, A::kNeighbor); });
  };
  s.tilde_c0 = over_nb(A::kSumC0);
  s.tilde_v2 = over_nb(A::kSumV2);
  s.tilde_v1 = over_nb(A::kSumV1);
  return s;
}

NeighborhoodSummary neighborhood_summary(const std::vector<std::vector<CellRecord>>& per_rep,
                                         std::string model_tag) {
  std::vector<NeighborhoodAccumulator> accs(per_rep.size());
  for (std::size_t i = 0; i < per_rep.size(); ++i) accs[i].add(per_rep[i]);
  return neighborhood_summary(accs, std::move(model_tag));
}

WeightedMeans weighted_typical_means(const std::vector<CellRecord>& records, CellWeight weight) {
  double wsum = 0.0;
  WeightedMeans m;
  for (const CellRecord& r : records) {
    if (!r.eligible) continue;
    const double w = r.weight * (weight == CellWeight::kN0 ? r.n0 : r.n1);
    wsum += w;
    m.corners += w * r.corners;
    m.area += w * r.area;
    m.perimeter += w * r.perimeter;
  }
  if (wsum <= 0.0) throw EmptySample("weighted_typical_means: no eligible cells");
  m.corners /= wsum;
  m.area /= wsum;
  m.perimeter /= wsum;
  return m;
}

TypicalMeans typical_cell_means(const std::vector<CellRecord>& records) {
  double m = 0.0;
  TypicalMeans t;
  for (const CellRecord& r : records) {
    if (!r.eligible) continue;
    m += r.weight;
    t.area += r.weight * r.area;
    t.perimeter += r.weight * r.perimeter;
    t.corners += r.weight * r.corners;
    t.n0 += r.weight * r.n0;
    t.neighbors += r.weight * static_cast<double>(r.neighbors.size());
  }
  if (m < 1.0) throw EmptySample("typical_cell_means: no eligible cells");
  t.area /= m;
  t.perimeter /= m;
  t.corners /= m;
  t.n0 /= m;
  t.neighbors /= m;
  return t;
}

TheoreticalPltValues plt_theoretical(double la) {
  if (!(la > 0.0)) throw std::invalid_argument("plt_theoretical: la must be positive");
  const double pi = geometry::kPi;
  TheoreticalPltValues v;
  v.la = la;
  v.n0_22 = pi * pi / 2.0 + 12.0;
  v.v2_22 = pi * pi * pi / (2.0 * la * la);
  v.v1_22 = pi * pi * pi / (2.0 * la) + 4.0 * pi / la;
  // The typical cell has 4 neighbors in the mean.
  v.tilde_n0 = v.n0_22 / 4.0;
  v.tilde_v2 = v.v2_22 / 4.0;
  v.tilde_v1 = v.v1_22 / 4.0;
  return v;
}

IdentityCheck weighted_identity_check(const std::vector<NeighborhoodAccumulator>& per_rep,
                                      CellChar f, CellWeight weight) {
  const A::Field sum_field = f == CellChar::kCorners  ? A::kSumC0
                             : f == CellChar::kArea   ? A::kSumV2
                                                      : A::kSumV1;
  A::Field w_field;
  if (weight == CellWeight::kN0) {
    w_field = f == CellChar::kCorners ? A::kW0C0 : f == CellChar::kArea ? A::kW0V2 : A::kW0V1;
  } else {
    w_field = f == CellChar::kCorners ? A::kW1C0 : f == CellChar::kArea ? A::kW1V2 : A::kW1V1;
  }

  IdentityCheck out;
  NeighborhoodAccumulator total;
  for (const auto& rep : per_rep) total.merge(rep);
  out.lhs = ratio(total, sum_field, A::kWeight);
  out.rhs = ratio(total, w_field, A::kWeight);
  const Estimate gap = jackknife(per_rep, [&](const A& a) {
    return (a[sum_field] - a[w_field]) / a[A::kWeight];
  });
  out.gap = gap.value;
  out.gap_se = gap.se;
  return out;
}

IdentityCheck symmetry_identity_check(const std::vector<NeighborhoodAccumulator>& per_rep) {
  IdentityCheck out;
  NeighborhoodAccumulator total;
  for (const auto& rep : per_rep) total.merge(rep);
  out.lhs = ratio(total, A::kAreaNbPerim, A::kWeight);
  out.rhs = ratio(total, A::kPerimNbArea, A::kWeight);
  const Estimate gap = jackknife(per_rep, [](const A& a) {
    return (a[A::kAreaNbPerim] - a[A::kPerimNbArea]) / a[A::kWeight];
  });
  out.gap = gap.value;
  out.gap_se = gap.se;
  return out;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptySample("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical_value: bad alpha");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace tesslab::cellstats
