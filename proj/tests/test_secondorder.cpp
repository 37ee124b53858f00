#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tesslab/runner.hpp"
#include "tesslab/secondorder.hpp"
#include "test_util.hpp"

using namespace tesslab;
using namespace tesslab::secondorder;
using geometry::kPi;
using geometry::Point2;
using geometry::RectWindow;

namespace {

PointPattern csr(const RectWindow& w, double intensity, std::uint64_t seed, std::uint64_t rep) {
  RngStream rng(seed, rep);
  return poisson_pattern(w, intensity, rng);
}

bool same_curve_bits(const CurveEstimate& a, const CurveEstimate& b) {
  if (a.value.size() != b.value.size()) return false;
  for (std::size_t i = 0; i < a.value.size(); ++i) {
    const bool na = std::isnan(a.value[i]), nb = std::isnan(b.value[i]);
    if (na != nb) return false;
    if (!na && a.value[i] != b.value[i]) return false;
  }
  return a.n_pairs == b.n_pairs;
}

}  // namespace

TEST_CASE("translation weight: closed form") {
  CHECK(translation_weight(RectWindow(0, 0, 1, 1), 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(translation_weight(RectWindow(0, 0, 1, 1), 0.5, 0.0) == doctest::Approx(0.5));
  CHECK(translation_weight(RectWindow(0, 0, 2, 1), 1.0, 0.5) == doctest::Approx(0.5));
  CHECK(translation_weight(RectWindow(0, 0, 1, 1), -0.25, 0.25) ==
        doctest::Approx(0.5625));
  CHECK_THROWS_AS(translation_weight(RectWindow(0, 0, 1, 1), 1.0, 0.0), ZeroOverlap);
  CHECK_THROWS_AS(translation_weight(RectWindow(0, 0, 1, 1), 0.0, -1.5), ZeroOverlap);
}

TEST_CASE("extract_centres: grid cells and sub-window filtering") {
  std::vector<geometry::ConvexPolygon> cells;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cells.push_back(geometry::ConvexPolygon::from_vertices(
          {{i + 0.0, j + 0.0}, {i + 1.0, j + 0.0}, {i + 1.0, j + 1.0}, {i + 0.0, j + 1.0}}));
    }
  }
  const auto cx = complex::build_complex(cells, RectWindow(0, 0, 2, 2));

  const auto full = extract_centres(cx, RectWindow(0, 0, 2, 2));
  REQUIRE(full.pattern.points.size() == 4);
  for (const auto& m : full.marks) {
    CHECK(m.area == doctest::Approx(1.0));
    CHECK(m.perimeter == doctest::Approx(4.0));
    CHECK(m.corners == doctest::Approx(4.0));
  }

  // Only centroids inside the sub-window are kept.
  const auto one = extract_centres(cx, RectWindow(0, 0, 1, 1));
  CHECK(one.pattern.points.size() == 1);
  CHECK(one.pattern.points[0].x == doctest::Approx(0.5));

  CHECK_THROWS_AS(extract_centres(cx, RectWindow(0, 0, 3, 3)), std::invalid_argument);
}

TEST_CASE("estimate_K: two-point pattern has a jump at the pair distance") {
  PointPattern p{{{0.2, 0.5}, {0.5, 0.5}}, RectWindow(0, 0, 1, 1)};
  const RGrid grid{0.5, 101};
  const auto k = estimate_K(p, grid);
  // lambda^2 = n(n-1)/|W|^2 = 2; ordered pair sum = 2/w with w = 0.7.
  for (int i = 0; i < grid.n; ++i) {
    const double expect = grid.r(i) < 0.3 ? 0.0 : 1.0 / 0.7;
    CHECK(k.value[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(estimate_K(PointPattern{{{0.1, 0.1}}, RectWindow(0, 0, 1, 1)}, grid),
                  InsufficientPoints);
}

TEST_CASE("estimate_K: zero below the spacing of a regular grid") {
  PointPattern p{{}, RectWindow(0, 0, 1, 1)};
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) p.points.push_back({0.05 + i * 0.1, 0.05 + j * 0.1});
  }
  const auto k = estimate_K(p, RGrid{0.25, 256});
  for (int i = 0; i < 256; ++i) {
    if (k.r[i] < 0.099) {
      CHECK(k.value[i] == 0.0);
    }
    if (k.r[i] > 0.101) break;
  }
}

TEST_CASE("estimate_K: CSR pattern matches pi r^2 within envelopes") {
  const RectWindow w(0, 0, 1, 1);
  const RGrid grid{0.25, 128};
  std::vector<std::vector<double>> curves;
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = csr(w, 100.0, 301, rep);
    if (p.points.size() < 2) continue;
    curves.push_back(estimate_K(p, grid).value);
  }
  // Pooled mean within 3 standard errors of pi r^2 at a few radii.
  for (const int idx : {32, 64, 96, 127}) {
    std::vector<double> vals;
    for (const auto& c : curves) vals.push_back(c[idx]);
    const auto [mean, se] = testutil::mean_and_se(vals);
    const double r = grid.r(idx);
    CHECK(std::abs(mean - kPi * r * r) <= 3.0 * se);
  }
}

TEST_CASE("estimate_pcf: flat at 1 for CSR") {
  // Matches the documented baseline: intensity 0.3 on [-50,50]^2, pooled
  // over 100 replications, |g - 1| <= 0.05 on [0.5, 2].
  const RectWindow w(-50, -50, 50, 50);
  const RGrid grid{2.5, 128};
  SecondOrderAccumulator acc(grid, stoyan_bandwidth(0.3));
  for (int rep = 0; rep < 100; ++rep) {
    acc.add_pattern(MarkedPointPattern{csr(w, 0.3, 303, rep), {}});
  }
  const auto g = acc.pcf();
  for (int i = 0; i < grid.n; ++i) {
    if (g.r[i] < 0.5 || g.r[i] > 2.0) continue;
    CHECK(std::abs(g.value[i] - 1.0) <= 0.05);
  }
}

TEST_CASE("pcf/K consistency: integrating 2 pi r g(r) recovers K") {
  const RectWindow w(-25, -25, 25, 25);
  const RGrid grid{8.0, 256};
  const double h = stoyan_bandwidth(1.0);
  SecondOrderAccumulator acc(grid, h);
  for (int rep = 0; rep < 12; ++rep) {
    acc.add_pattern(MarkedPointPattern{csr(w, 1.0, 307, rep), {}});
  }
  const auto g = acc.pcf();
  const auto k = acc.k();
  const double step = grid.step();
  double integral = 0.0;
  double prev = 0.0;  // integrand at r=0
  for (int i = 1; i < grid.n; ++i) {
    const double cur = std::isnan(g.value[i]) ? 0.0 : 2.0 * kPi * g.r[i] * g.value[i];
    integral += 0.5 * (prev + cur) * step;
    prev = cur;
    if (g.r[i] >= 5.0 * h && g.r[i] <= grid.r_max / 2.0) {
      CHECK(integral == doctest::Approx(k.value[i]).epsilon(0.02));
    }
  }
}

TEST_CASE("estimate_kmm: constant marks give exactly 1") {
  const RectWindow w(0, 0, 10, 10);
  auto p = csr(w, 3.0, 311, 0);
  MarkedPointPattern mp{p, {}};
  mp.marks.assign(p.points.size(), Marks{2.5, 2.5, 2.5});
  const RGrid grid{2.5, 64};
  const auto k = estimate_kmm(mp, MarkSelector::kArea, grid, KernelSpec{0.3});
  for (int i = 0; i < grid.n; ++i) {
    if (!std::isnan(k.value[i])) CHECK(std::abs(k.value[i] - 1.0) <= 1e-12);
  }
}

TEST_CASE("estimate_kmm: independent random marks stay near 1") {
  const RectWindow w(-25, -25, 25, 25);
  const RGrid grid{2.5, 64};
  SecondOrderAccumulator acc(grid, stoyan_bandwidth(1.0));
  RngStream marks_rng(313, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = csr(w, 1.0, 313, rep + 1);
    MarkedPointPattern mp{p, {}};
    mp.marks.resize(p.points.size());
    for (auto& m : mp.marks) {
      const double v = marks_rng.uniform(0.5, 1.5);
      m = Marks{v, v, v};
    }
    acc.add_pattern(mp);
  }
  const auto k = acc.kmm(MarkSelector::kArea);
  for (int i = 0; i < grid.n; ++i) {
    if (k.r[i] < 0.5) continue;
    REQUIRE(!std::isnan(k.value[i]));
    CHECK(std::abs(k.value[i] - 1.0) <= 0.05);
  }
}

TEST_CASE("estimators: exact invariance under input permutation") {
  const RectWindow w(0, 0, 20, 20);
  auto p = csr(w, 2.0, 317, 0);
  MarkedPointPattern mp{p, {}};
  RngStream mrng(317, 99);
  mp.marks.resize(p.points.size());
  for (auto& m : mp.marks) m = Marks{mrng.uniform(0, 2), mrng.uniform(0, 3), 3.0};

  MarkedPointPattern shuffled = mp;
  std::mt19937_64 sh(5);
  std::vector<std::size_t> order(mp.pattern.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), sh);
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.pattern.points[i] = mp.pattern.points[order[i]];
    shuffled.marks[i] = mp.marks[order[i]];
  }

  const RGrid grid{5.0, 256};
  const KernelSpec kern{0.4};
  CHECK(same_curve_bits(estimate_K(mp.pattern, grid), estimate_K(shuffled.pattern, grid)));
  CHECK(same_curve_bits(estimate_pcf(mp.pattern, grid, kern),
                        estimate_pcf(shuffled.pattern, grid, kern)));
  CHECK(same_curve_bits(estimate_kmm(mp, MarkSelector::kArea, grid, kern),
                        estimate_kmm(shuffled, MarkSelector::kArea, grid, kern)));
}

TEST_CASE("estimators: translation covariance and mark scaling") {
  const RectWindow w(0, 0, 20, 20);
  auto p = csr(w, 1.5, 331, 0);
  MarkedPointPattern mp{p, {}};
  RngStream mrng(331, 99);
  mp.marks.resize(p.points.size());
  for (auto& m : mp.marks) m = Marks{mrng.uniform(0.1, 2), 1.0, 4.0};

  const RGrid grid{5.0, 128};
  const KernelSpec kern{0.5};

  MarkedPointPattern moved = mp;
  moved.pattern.window = RectWindow(100, -40, 120, -20);
  for (auto& q : moved.pattern.points) q = {q.x + 100.0, q.y - 40.0};

  const auto g0 = estimate_pcf(mp.pattern, grid, kern);
  const auto g1 = estimate_pcf(moved.pattern, grid, kern);
  const auto k0 = estimate_K(mp.pattern, grid);
  const auto k1 = estimate_K(moved.pattern, grid);
  const auto m0 = estimate_kmm(mp, MarkSelector::kArea, grid, kern);
  const auto m1 = estimate_kmm(moved, MarkSelector::kArea, grid, kern);
  for (int i = 0; i < grid.n; ++i) {
    if (!std::isnan(g0.value[i])) {
      CHECK(g1.value[i] == doctest::Approx(g0.value[i]).epsilon(1e-12));
    }
    CHECK(k1.value[i] == doctest::Approx(k0.value[i]).epsilon(1e-12));
    if (!std::isnan(m0.value[i])) {
      CHECK(m1.value[i] == doctest::Approx(m0.value[i]).epsilon(1e-12));
    }
  }

  // Scaling all marks leaves kmm unchanged.
  MarkedPointPattern scaled = mp;
  for (auto& m : scaled.marks) m.area *= 37.5;
  const auto ms = estimate_kmm(scaled, MarkSelector::kArea, grid, kern);
  for (int i = 0; i < grid.n; ++i) {
    if (!std::isnan(m0.value[i])) {
      CHECK(ms.value[i] == doctest::Approx(m0.value[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("pcf pooling: tessellation centres, PLT clusters more than STIT") {
  // Small-scale version of the cell-centre comparison; the acceptance suite
  // runs the full protocol.
  run::SimSpec spec;
  spec.window = RectWindow(-25, -25, 25, 25);
  spec.reps = 30;
  spec.threads = 2;
  const RectWindow sub(-15, -15, 15, 15);

  spec.model = run::Model::kPlt;
  spec.seed = 401;
  const auto plt = run::run_second_order_pipeline(spec, sub, 128);
  spec.model = run::Model::kStit;
  spec.seed = 402;
  const auto stit = run::run_second_order_pipeline(spec, sub, 128);

  CHECK(plt.intensity == doctest::Approx(1.0 / kPi).epsilon(0.1));
  CHECK(stit.intensity == doctest::Approx(1.0 / kPi).epsilon(0.1));

  double plt_excess = 0.0, stit_excess = 0.0;
  int used = 0;
  for (int i = 0; i < 128; ++i) {
    const double r = plt.g.r[i];
    if (r < 0.3 || r > 1.0) continue;
    if (std::isnan(plt.g.value[i]) || std::isnan(stit.g.value[i])) continue;
    plt_excess += plt.g.value[i];
    stit_excess += stit.g.value[i];
    ++used;
  }
  REQUIRE(used > 5);
  CHECK(plt_excess > stit_excess);

  // Area marks: nearby cells are smaller than average.
  double kmm_small_plt = 0.0;
  int n_small = 0;
  for (int i = 0; i < 128; ++i) {
    const double r = plt.kmm_area.r[i];
    if (r < 0.3 || r > 1.0 || std::isnan(plt.kmm_area.value[i])) continue;
    kmm_small_plt += plt.kmm_area.value[i];
    ++n_small;
  }
  CHECK(kmm_small_plt / n_small < 1.0);
}
