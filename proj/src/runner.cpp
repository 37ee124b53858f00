#include "tesslab/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace tesslab::run {

using complex::TessellationComplex;
using geometry::ConvexPolygon;
using geometry::Point2;
using geometry::RectWindow;

const char* model_name(Model m) { return m == Model::kPlt ? "plt" : "stit"; }

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TESSLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_reps(int reps, int threads, const std::function<void(int)>& fn) {
  threads = std::min(resolve_threads(threads), reps);
  if (threads <= 1) {
    for (int i = 0; i < reps; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= reps) return;
      try {
        fn(rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ConvexPolygon> generate_cells(const SimSpec& spec, int rep, tessgen::GenStats* stats) {
  RngStream rng(spec.seed, static_cast<std::uint64_t>(rep));
  if (spec.model == Model::kPlt) {
    const tessgen::PltParams params{spec.la, spec.law, spec.window};
    const auto lines = tessgen::sample_poisson_lines(params, rng);
    return tessgen::build_plt(lines, spec.window, stats);
  }
  const tessgen::StitParams params{spec.la, spec.law, spec.window};
  return tessgen::stit_construct(params, rng, stats);
}

RepStats analyze_replication(Model model, const TessellationComplex& c, bool collect_samples) {
  RepStats out;
  out.cells = static_cast<long long>(c.cells().size());
  out.window_area = c.window().area();
  out.interior_edge_length = complex::edge_length_density(c) * out.window_area;
  out.euler_ok = complex::euler_characteristic(c) == 1;

  const RectWindow& w = c.window();
  const double margin = 0.025 * std::min(w.width(), w.height());
  const RectWindow core(w.x0() + margin, w.y0() + margin, w.x1() - margin, w.y1() - margin);
  out.core_area = core.area();

  for (std::uint32_t v = 0; v < c.vertices().size(); ++v) {
    if (c.vertex_on_window_boundary(v)) continue;
    if (core.contains(c.vertices()[v])) ++out.core_vertices;
  }
  for (const auto& e : c.edges()) {
    if (e.on_window_boundary) continue;
    if (c.vertex_on_window_boundary(e.va) || c.vertex_on_window_boundary(e.vb)) continue;
    if (core.contains(c.edge_segment(e).midpoint())) ++out.core_edges;
  }

  const int want_degree = model == Model::kPlt ? 4 : 3;
  const int want_collinear = model == Model::kPlt ? 2 : 1;
  for (const auto& [degree, count] : complex::vertex_degrees(c)) {
    out.interior_vertices += count;
    if (degree != want_degree) out.degree_mismatch += count;
  }
  for (const auto& [pairs, count] : complex::collinear_pair_histogram(c)) {
    if (pairs != want_collinear) out.collinear_mismatch += count;
  }

  const auto records = cellstats::minus_sample(c);
  out.nbr.add(records);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& topo = c.topology(i);
    if (!topo.touches_boundary) {
      ++out.interior_cells;
      if (topo.n0 != topo.n1) ++out.n0_neq_n1;
      if (topo.corners != topo.n0) ++out.corners_neq_n0;
      if (core.contains(geometry::polygon_centroid(c.cells()[i]))) ++out.core_cells;
    }
    if (collect_samples && records[i].eligible) {
      out.areas.push_back(records[i].area);
      out.perimeters.push_back(records[i].perimeter);
    }
  }
  return out;
}

std::vector<cellstats::NeighborhoodAccumulator> NeighborRunResult::accumulators() const {
  std::vector<cellstats::NeighborhoodAccumulator> accs;
  accs.reserve(per_rep.size());
  for (const auto& r : per_rep) accs.push_back(r.nbr);
  return accs;
}

double NeighborRunResult::pooled_edge_length_density() const {
  double len = 0.0, area = 0.0;
  for (const auto& r : per_rep) {
    len += r.interior_edge_length;
    area += r.window_area;
  }
  return len / area;
}

namespace {

double pooled_core_intensity(const std::vector<RepStats>& reps, long long RepStats::* field) {
  double count = 0.0, area = 0.0;
  for (const auto& r : reps) {
    count += static_cast<double>(r.*field);
    area += r.core_area;
  }
  return count / area;
}

std::vector<double> thin_to(const std::vector<const std::vector<double>*>& parts,
                            std::size_t target) {
  std::size_t total = 0;
  for (const auto* p : parts) total += p->size();
  if (target == 0 || target >= total) {
    std::vector<double> all;
    all.reserve(total);
    for (const auto* p : parts) all.insert(all.end(), p->begin(), p->end());
    return all;
  }
  // Deterministic stride thinning over the pooled, replication-ordered data.
  const std::size_t stride = total / target;
  std::vector<double> out;
  out.reserve(target);
  std::size_t index = 0;
  for (const auto* p : parts) {
    for (double v : *p) {
      if (index % stride == 0 && out.size() < target) out.push_back(v);
      ++index;
    }
  }
  return out;
}

}  // namespace

double NeighborRunResult::pooled_lambda0() const {
  return pooled_core_intensity(per_rep, &RepStats::core_vertices);
}
double NeighborRunResult::pooled_lambda1() const {
  return pooled_core_intensity(per_rep, &RepStats::core_edges);
}
double NeighborRunResult::pooled_lambda2() const {
  return pooled_core_intensity(per_rep, &RepStats::core_cells);
}

std::vector<double> NeighborRunResult::sample_areas(std::size_t target) const {
  std::vector<const std::vector<double>*> parts;
  for (const auto& r : per_rep) parts.push_back(&r.areas);
  return thin_to(parts, target);
}

std::vector<double> NeighborRunResult::sample_perimeters(std::size_t target) const {
  std::vector<const std::vector<double>*> parts;
  for (const auto& r : per_rep) parts.push_back(&r.perimeters);
  return thin_to(parts, target);
}

NeighborRunResult run_neighbor_pipeline(const SimSpec& spec, bool collect_samples) {
  NeighborRunResult result;
  result.spec = spec;
  result.per_rep.resize(static_cast<std::size_t>(spec.reps));
  parallel_for_reps(spec.reps, spec.threads, [&](int rep) {
    const auto cells = generate_cells(spec, rep);
    const auto cx = complex::build_complex(cells, spec.window);
    result.per_rep[static_cast<std::size_t>(rep)] =
        analyze_replication(spec.model, cx, collect_samples);
  });
  result.summary = cellstats::neighborhood_summary(result.accumulators(), model_name(spec.model));
  return result;
}

namespace {

SecondOrderRunResult pool_with_bandwidth(
    const std::vector<secondorder::MarkedPointPattern>& patterns, const RectWindow& window,
    int grid_n, std::optional<double> bandwidth, int threads) {
  const auto grid = secondorder::RGrid::for_window(window, grid_n);

  long long total_points = 0;
  for (const auto& p : patterns) total_points += static_cast<long long>(p.pattern.points.size());
  const double intensity =
      static_cast<double>(total_points) / (window.area() * static_cast<double>(patterns.size()));
  const double h = bandwidth ? *bandwidth : secondorder::stoyan_bandwidth(intensity);

  std::vector<secondorder::SecondOrderAccumulator> accs(
      patterns.size(), secondorder::SecondOrderAccumulator(grid, h));
  parallel_for_reps(static_cast<int>(patterns.size()), threads,
                    [&](int rep) { accs[rep].add_pattern(patterns[rep]); });
  secondorder::SecondOrderAccumulator total(grid, h);
  for (const auto& acc : accs) total.merge(acc);

  SecondOrderRunResult out;
  out.sub_window = window;
  out.bandwidth = h;
  out.intensity = intensity;
  out.k = total.k();
  out.g = total.pcf();
  out.kmm_area = total.kmm(secondorder::MarkSelector::kArea);
  out.kmm_perimeter = total.kmm(secondorder::MarkSelector::kPerimeter);
  out.kmm_corners = total.kmm(secondorder::MarkSelector::kCorners);
  return out;
}

}  // namespace

SecondOrderRunResult run_second_order_pipeline(const SimSpec& spec,
                                               const RectWindow& sub_window, int grid_n,
                                               std::optional<double> bandwidth) {
  std::vector<secondorder::MarkedPointPattern> patterns(static_cast<std::size_t>(spec.reps),
                                                        secondorder::MarkedPointPattern{
                                                            {{}, sub_window}, {}});
  parallel_for_reps(spec.reps, spec.threads, [&](int rep) {
    const auto cells = generate_cells(spec, rep);
    const auto cx = complex::build_complex(cells, spec.window);
    patterns[static_cast<std::size_t>(rep)] = secondorder::extract_centres(cx, sub_window);
  });
  SecondOrderRunResult out =
      pool_with_bandwidth(patterns, sub_window, grid_n, bandwidth, spec.threads);
  out.spec = spec;
  return out;
}

SecondOrderRunResult pool_patterns(const std::vector<secondorder::MarkedPointPattern>& patterns,
                                   const RectWindow& window, int grid_n,
                                   std::optional<double> bandwidth) {
  if (patterns.empty()) {
    throw secondorder::InsufficientPoints("pool_patterns: no patterns");
  }
  return pool_with_bandwidth(patterns, window, grid_n, bandwidth, 0);
}

}  // namespace tesslab::run
