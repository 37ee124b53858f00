// Fast invariant suite behind `tesslab selfcheck`: exercises the geometry
// kernel, the recovered complexes and the neighbor statistics end to end at
// small scale. Target runtime is well under two minutes.
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tesslab/runner.hpp"

namespace tesslab::run {

namespace {

using geometry::ConvexPolygon;
using geometry::kPi;
using geometry::Line;
using geometry::Point2;
using geometry::RectWindow;

struct Reporter {
  std::ostream& out;
  bool all_ok = true;

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    out << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
    all_ok = all_ok && ok;
  }
};

ConvexPolygon random_convex_polygon(RngStream& rng) {
  const int n = 3 + static_cast<int>(rng.uniform01() * 8);
  const double rx = 0.5 + 2.0 * rng.uniform01();
  const double ry = 0.5 + 2.0 * rng.uniform01();
  const double rot = rng.uniform(0.0, kPi);
  const Point2 c{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
  std::vector<double> angles(n);
  for (auto& a : angles) a = rng.uniform(0.0, 2.0 * kPi);
  std::sort(angles.begin(), angles.end());
  std::vector<Point2> pts;
  for (double a : angles) {
    const double x = rx * std::cos(a), y = ry * std::sin(a);
    pts.push_back({c.x + x * std::cos(rot) - y * std::sin(rot),
                   c.y + x * std::sin(rot) + y * std::cos(rot)});
  }
  return ConvexPolygon::from_vertices(std::move(pts));
}

bool split_conservation(RngStream& rng, int trials, std::string& detail) {
  double worst_area = 0.0, worst_perim = 0.0;
  for (int i = 0; i < trials; ++i) {
    ConvexPolygon poly = random_convex_polygon(rng);
    const double phi = rng.uniform(0.0, kPi);
    const auto span = projection_interval(poly, {std::cos(phi), std::sin(phi)});
    const double p = rng.uniform(span.lo + 0.05 * span.length(), span.hi - 0.05 * span.length());
    const auto res = split_polygon(poly, Line(p, phi));
    if (res.status != geometry::SplitResult::Status::kHit) continue;
    const double a = polygon_area(poly);
    const double da =
        std::abs(polygon_area(*res.neg) + polygon_area(*res.pos) - a) / a;
    const double per = polygon_perimeter(poly) + 2.0 * res.chord.length();
    const double dp =
        std::abs(polygon_perimeter(*res.neg) + polygon_perimeter(*res.pos) - per) / per;
    worst_area = std::max(worst_area, da);
    worst_perim = std::max(worst_perim, dp);
  }
  std::ostringstream os;
  os << "max rel err area " << worst_area << ", perimeter " << worst_perim;
  detail = os.str();
  return worst_area <= 1e-9 && worst_perim <= 1e-9;
}

// Independent arrangement count: a line dissection of a convex window has
// 1 + #chords + #interior crossings cells.
bool plt_arrangement_count(std::uint64_t seed, int reps, std::string& detail) {
  const RectWindow w(-10.0, -10.0, 10.0, 10.0);
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rng(seed, static_cast<std::uint64_t>(rep));
    const tessgen::PltParams params{0.4, tessgen::DirectionLaw::isotropic(), w};
    const auto lines = tessgen::sample_poisson_lines(params, rng);

    long long chords = 0, crossings = 0;
    std::vector<int> hits;
    for (const auto& line : lines) {
      // A line hits the open window iff the corner signed distances straddle 0.
      double smin = 1e30, smax = -1e30;
      for (const Point2 corner : {Point2{w.x0(), w.y0()}, Point2{w.x1(), w.y0()},
                                  Point2{w.x1(), w.y1()}, Point2{w.x0(), w.y1()}}) {
        const double s = line.signed_distance(corner);
        smin = std::min(smin, s);
        smax = std::max(smax, s);
      }
      hits.push_back(smin < 0.0 && smax > 0.0 ? 1 : 0);
      if (hits.back()) ++chords;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (!hits[i]) continue;
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (!hits[j]) continue;
        const Point2 ni = lines[i].normal(), nj = lines[j].normal();
        const double det = ni.x * nj.y - ni.y * nj.x;
        if (std::abs(det) < 1e-12) continue;
        const double x = (lines[i].p() * nj.y - lines[j].p() * ni.y) / det;
        const double y = (ni.x * lines[j].p() - nj.x * lines[i].p()) / det;
        if (x > w.x0() && x < w.x1() && y > w.y0() && y < w.y1()) ++crossings;
      }
    }

    const auto cells = tessgen::build_plt(lines, w);
    const long long expected = 1 + chords + crossings;
    if (static_cast<long long>(cells.size()) != expected) {
      std::ostringstream os;
      os << "rep " << rep << ": got " << cells.size() << " cells, arrangement count "
         << expected;
      detail = os.str();
      return false;
    }
  }
  detail = std::to_string(reps) + " replications matched exactly";
  return true;
}

}  // namespace

bool selfcheck(int threads, std::ostream& out) {
  Reporter rep{out};
  std::string detail;

  // Geometry closed forms.
  {
    const auto square = ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto tri = ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {0, 1}});
    const bool ok = std::abs(polygon_area(square) - 1.0) < 1e-12 &&
                    std::abs(polygon_perimeter(square) - 4.0) < 1e-12 &&
                    std::abs(polygon_area(tri) - 0.5) < 1e-12 &&
                    std::abs(support_width(square, 0.0) - 1.0) < 1e-12 &&
                    std::abs(support_width(square, kPi / 4.0) - std::sqrt(2.0)) < 1e-12 &&
                    std::abs(tessgen::cell_hitting_rate(
                                 square, tessgen::DirectionLaw::isotropic()) -
                             4.0 / kPi) < 1e-12;
    rep.check("geometry closed forms", ok);
  }

  {
    RngStream rng(20240901, 0);
    const bool ok = split_conservation(rng, 2000, detail);
    rep.check("split conservation (2000 random splits)", ok, detail);
  }

  rep.check("poisson line arrangement count", plt_arrangement_count(77, 10, detail), detail);

  // Complex consistency + model structure at small scale.
  for (const Model model : {Model::kPlt, Model::kStit}) {
    SimSpec spec;
    spec.model = model;
    spec.la = 1.0;
    spec.window = RectWindow(-25.0, -25.0, 25.0, 25.0);
    spec.seed = 4242;
    spec.reps = 8;
    spec.threads = threads;
    const auto result = run_neighbor_pipeline(spec);

    long long euler_bad = 0, degree_bad = 0, collinear_bad = 0, n0n1_bad = 0, facet_bad = 0;
    for (const auto& r : result.per_rep) {
      if (!r.euler_ok) ++euler_bad;
      degree_bad += r.degree_mismatch;
      collinear_bad += r.collinear_mismatch;
      n0n1_bad += r.n0_neq_n1;
      if (model == Model::kPlt) facet_bad += r.corners_neq_n0;
    }
    std::ostringstream os;
    os << model_name(model) << ": euler_bad=" << euler_bad << " degree_bad=" << degree_bad
       << " collinear_bad=" << collinear_bad << " n0!=n1:" << n0n1_bad;
    if (model == Model::kPlt) os << " corners!=n0:" << facet_bad;
    rep.check(std::string("complex structure, ") + model_name(model),
              euler_bad + degree_bad + collinear_bad + n0n1_bad + facet_bad == 0, os.str());

    const double la = result.pooled_edge_length_density();
    std::ostringstream os2;
    os2 << "L_A = " << std::setprecision(4) << la;
    rep.check(std::string("edge length density near 1, ") + model_name(model),
              std::abs(la - 1.0) < 0.05, os2.str());

    const auto accs = result.accumulators();
    bool identities_ok = true;
    std::ostringstream os3;
    for (const auto f : {cellstats::CellChar::kCorners, cellstats::CellChar::kArea,
                         cellstats::CellChar::kPerimeter}) {
      const auto check =
          cellstats::weighted_identity_check(accs, f, cellstats::CellWeight::kN1);
      const bool ok = std::abs(check.gap) <= 5.0 * check.gap_se;
      identities_ok = identities_ok && ok;
      os3 << cellstats::kCellCharNames[static_cast<int>(f)] << ": gap/se "
          << (check.gap_se > 0 ? check.gap / check.gap_se : 0.0) << "  ";
    }
    rep.check(std::string("neighbor sum identity, ") + model_name(model), identities_ok,
              os3.str());

    const double tilde = result.summary.tilde_c0.value;
    const double via_ratio = result.summary.c0_22.value / result.summary.mean_neighbors.value;
    rep.check(std::string("tilde = sum/mean-neighbors identity, ") + model_name(model),
              std::abs(tilde - via_ratio) <= 1e-12 * std::abs(tilde));
  }

  // Closed-form table values.
  {
    const auto v = cellstats::plt_theoretical(1.0);
    const bool ok = std::abs(v.n0_22 - (kPi * kPi / 2.0 + 12.0)) < 1e-12 &&
                    std::abs(v.v2_22 - kPi * kPi * kPi / 2.0) < 1e-12 &&
                    std::abs(v.v1_22 - (kPi * kPi * kPi / 2.0 + 4.0 * kPi)) < 1e-12;
    rep.check("theoretical neighbor sums", ok);
  }

  out << (rep.all_ok ? "selfcheck: all checks passed\n" : "selfcheck: FAILURES detected\n");
  return rep.all_ok;
}

}  // namespace tesslab::run
