// Replication orchestration shared by the CLI and the test suites.
// Replications are independent (distinct RNG stream ids) and run in
// parallel; every merge is a sum of per-replication results taken in
// replication order, so outputs are identical for any thread count.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tesslab/cellstats.hpp"
#include "tesslab/complex.hpp"
#include "tesslab/secondorder.hpp"
#include "tesslab/tessgen.hpp"

namespace tesslab::run {

enum class Model { kPlt, kStit };

const char* model_name(Model m);

struct SimSpec {
  Model model = Model::kPlt;
  double la = 1.0;
  tessgen::DirectionLaw law = tessgen::DirectionLaw::isotropic();
  geometry::RectWindow window{-100.0, -100.0, 100.0, 100.0};
  std::uint64_t seed = 1;
  int reps = 1;
  int threads = 0;  // 0: TESSLAB_THREADS env or hardware concurrency
};

// Environment/default resolution for the worker count.
int resolve_threads(int requested);

// Runs fn(rep) for rep in [0, reps) on up to `threads` workers. Exceptions
// are captured and rethrown on the calling thread.
void parallel_for_reps(int reps, int threads, const std::function<void(int)>& fn);

// Cells of replication `rep` (RNG stream id = rep).
std::vector<geometry::ConvexPolygon> generate_cells(const SimSpec& spec, int rep,
                                                    tessgen::GenStats* stats = nullptr);

// Everything the neighbor-statistics experiment needs from one replication.
struct RepStats {
  cellstats::NeighborhoodAccumulator nbr;
  long long cells = 0;
  double window_area = 0.0;
  double interior_edge_length = 0.0;  // edge length density numerator

  // Reduced-window plate intensity counts (fully observed plates whose
  // reference point lies in the eroded core).
  double core_area = 0.0;
  long long core_vertices = 0;
  long long core_edges = 0;
  long long core_cells = 0;

  // Structural audit over interior vertices / cells.
  long long interior_vertices = 0;
  long long degree_mismatch = 0;     // degree != 4 (PLT) or != 3 (STIT)
  long long collinear_mismatch = 0;  // collinear incident pairs != 2 (PLT) or != 1 (STIT)
  long long interior_cells = 0;
  long long n0_neq_n1 = 0;
  long long corners_neq_n0 = 0;      // face-to-face violations (must be 0 for PLT)
  bool euler_ok = false;

  std::vector<double> areas;       // eligible-cell samples (optional)
  std::vector<double> perimeters;
};

RepStats analyze_replication(Model model, const complex::TessellationComplex& c,
                             bool collect_samples);

struct NeighborRunResult {
  SimSpec spec;
  std::vector<RepStats> per_rep;  // replication order
  cellstats::NeighborhoodSummary summary;

  std::vector<cellstats::NeighborhoodAccumulator> accumulators() const;
  double pooled_edge_length_density() const;
  double pooled_lambda0() const;
  double pooled_lambda1() const;
  double pooled_lambda2() const;
  // Deterministic subsample of pooled eligible-cell values.
  std::vector<double> sample_areas(std::size_t target) const;
  std::vector<double> sample_perimeters(std::size_t target) const;
};

NeighborRunResult run_neighbor_pipeline(const SimSpec& spec, bool collect_samples = false);

struct SecondOrderRunResult {
  SimSpec spec;
  geometry::RectWindow sub_window{-30.0, -30.0, 30.0, 30.0};
  double bandwidth = 0.0;
  double intensity = 0.0;  // pooled centre intensity in the sub-window
  secondorder::CurveEstimate k;
  secondorder::CurveEstimate g;
  secondorder::CurveEstimate kmm_area;
  secondorder::CurveEstimate kmm_perimeter;
  secondorder::CurveEstimate kmm_corners;
};

// Generates patterns of cell centres per replication, picks the bandwidth by
// Stoyan's rule from the pooled intensity (unless overridden), and pools the
// estimators. grid_n points on [0, min-side(sub)/4].
SecondOrderRunResult run_second_order_pipeline(const SimSpec& spec,
                                               const geometry::RectWindow& sub_window,
                                               int grid_n = 512,
                                               std::optional<double> bandwidth = std::nullopt);

// Same pooling for externally provided patterns (all on one window).
SecondOrderRunResult pool_patterns(const std::vector<secondorder::MarkedPointPattern>& patterns,
                                   const geometry::RectWindow& window, int grid_n = 512,
                                   std::optional<double> bandwidth = std::nullopt);

// Fast end-to-end invariant suite (geometry oracles, complex consistency,
// model structure, neighbor identities at small scale). Prints one line per
// check; returns false if any check fails.
bool selfcheck(int threads, std::ostream& out);

}  // namespace tesslab::run
