// tesslab command line: simulate tessellations, compute neighbor statistics
// and second-order summary curves, print the closed-form table, run the
// selfcheck suite.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tesslab/io.hpp"
#include "tesslab/runner.hpp"

namespace fs = std::filesystem;
using namespace tesslab;

namespace {

struct CommonOpts {
  std::string model = "both";
  double la = 1.0;
  std::string law = "isotropic";
  std::vector<double> window;
  int reps = 0;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& o, const char* default_model) {
  o.model = default_model;
  cmd->add_option("--model", o.model, "Tessellation model: plt, stit or both")
      ->check(CLI::IsMember({"plt", "stit", "both"}));
  cmd->add_option("--la", o.la, "Edge length density (line intensity / construction time)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--law", o.law,
                  "Direction law: isotropic or atoms:phi1:w1,phi2:w2,...");
  cmd->add_option("--window", o.window,
                  "Window: `lo hi` for [lo,hi]^2 or `x0 y0 x1 y1`")
      ->expected(2, 4);
  cmd->add_option("--reps", o.reps, "Number of replications");
  cmd->add_option("--seed", o.seed, "Base seed; replication i uses stream id i");
  cmd->add_option("--threads", o.threads,
                  "Worker threads (0: TESSLAB_THREADS env or hardware)");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

geometry::RectWindow parse_window(const std::vector<double>& v,
                                  const geometry::RectWindow& fallback) {
  if (v.empty()) return fallback;
  if (v.size() == 2) {
    if (!(v[0] < v[1])) throw CLI::ValidationError("--window", "requires lo < hi");
    return geometry::RectWindow(v[0], v[0], v[1], v[1]);
  }
  if (v.size() == 4) {
    if (!(v[0] < v[2]) || !(v[1] < v[3])) {
      throw CLI::ValidationError("--window", "requires x0 < x1 and y0 < y1");
    }
    return geometry::RectWindow(v[0], v[1], v[2], v[3]);
  }
  throw CLI::ValidationError("--window", "expects 2 or 4 values");
}

std::vector<run::Model> models_of(const std::string& name) {
  if (name == "plt") return {run::Model::kPlt};
  if (name == "stit") return {run::Model::kStit};
  return {run::Model::kPlt, run::Model::kStit};
}

// Distinct models of one command get decoupled seeds so their replication
// streams stay independent.
std::uint64_t seed_for(std::uint64_t base, run::Model m, const std::string& model_opt) {
  if (model_opt != "both") return base;
  return m == run::Model::kPlt ? base : base + 1;
}

run::SimSpec make_spec(const CommonOpts& o, run::Model model,
                       const geometry::RectWindow& window, int reps) {
  run::SimSpec spec;
  spec.model = model;
  spec.la = o.la;
  spec.law = io::parse_law(o.law);
  spec.window = window;
  spec.seed = seed_for(o.seed, model, o.model);
  spec.reps = reps;
  spec.threads = o.threads;
  return spec;
}

int default_neighbor_reps(double la, const geometry::RectWindow& w) {
  // Aim for ~500k pooled minus-sampled cells: cell intensity la^2/pi, about
  // 90% of cells eligible at the default window size.
  const double per_rep = 0.9 * la * la / geometry::kPi * w.area();
  return std::max(1, static_cast<int>(std::ceil(500000.0 / std::max(per_rep, 1.0))));
}

int cmd_simulate(const CommonOpts& o) {
  const auto window = parse_window(o.window, geometry::RectWindow(-100, -100, 100, 100));
  const int reps = o.reps > 0 ? o.reps : 1;
  for (const run::Model model : models_of(o.model)) {
    const auto spec = make_spec(o, model, window, reps);
    std::vector<std::vector<geometry::ConvexPolygon>> cells(reps);
    run::parallel_for_reps(reps, o.threads,
                           [&](int rep) { cells[rep] = run::generate_cells(spec, rep); });
    for (int rep = 0; rep < reps; ++rep) {
      io::CellsFileHeader header;
      header.model = run::model_name(model);
      header.la = o.la;
      header.law = io::law_to_string(spec.law);
      header.window = window;
      header.seed = spec.seed;
      header.rep = rep;
      char name[64];
      std::snprintf(name, sizeof(name), "cells_%s_rep%04d.csv", run::model_name(model), rep);
      io::write_cells_file(fs::path(o.out_dir) / name, header, cells[rep]);
      std::cout << "wrote " << (fs::path(o.out_dir) / name).string() << " ("
                << cells[rep].size() << " cells)\n";
    }
  }
  return 0;
}

void print_summary(const cellstats::NeighborhoodSummary& s) {
  std::printf("%s: %lld eligible cells over %d replications\n", s.model.c_str(), s.sample_size,
              s.replications);
  const auto row = [](const char* name, const cellstats::Estimate& e) {
    std::printf("  %-16s %10.4f  (se %.4f)\n", name, e.value, e.se);
  };
  row("C0_22", s.c0_22);
  row("bar_C0", s.bar_c0);
  row("tilde_C0", s.tilde_c0);
  row("V2_22", s.v2_22);
  row("bar_V2", s.bar_v2);
  row("tilde_V2", s.tilde_v2);
  row("V1_22", s.v1_22);
  row("bar_V1", s.bar_v1);
  row("tilde_V1", s.tilde_v1);
  row("mean_neighbors", s.mean_neighbors);
  row("mean_n0", s.mean_n0);
  row("mean_area", s.mean_area);
  row("mean_perimeter", s.mean_perimeter);
}

int cmd_neighbor_stats(const CommonOpts& o, const std::string& cells_dir) {
  std::optional<cellstats::NeighborhoodSummary> stit, plt;
  double theoretic_la = o.la;

  if (!cells_dir.empty()) {
    // Pool replications from previously simulated cells files.
    std::map<std::string, std::vector<fs::path>> by_model;
    for (const auto& entry : fs::directory_iterator(cells_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("cells_", 0) != 0 || entry.path().extension() != ".csv") continue;
      const auto file = io::read_cells_file(entry.path());
      by_model[file.header.model].push_back(entry.path());
    }
    if (by_model.empty()) throw std::runtime_error("no cells_*.csv files in " + cells_dir);
    for (auto& [model_name, paths] : by_model) {
      std::sort(paths.begin(), paths.end());
      const run::Model model = model_name == "plt" ? run::Model::kPlt : run::Model::kStit;
      std::vector<cellstats::NeighborhoodAccumulator> accs(paths.size());
      run::parallel_for_reps(static_cast<int>(paths.size()), o.threads, [&](int rep) {
        const auto file = io::read_cells_file(paths[rep]);
        const auto cx = complex::build_complex(file.cells, file.header.window);
        accs[rep] = run::analyze_replication(model, cx, false).nbr;
      });
      auto summary = cellstats::neighborhood_summary(accs, model_name);
      theoretic_la = io::read_cells_file(paths.front()).header.la;
      (model == run::Model::kPlt ? plt : stit) = std::move(summary);
    }
  } else {
    const auto window = parse_window(o.window, geometry::RectWindow(-100, -100, 100, 100));
    const int reps = o.reps > 0 ? o.reps : default_neighbor_reps(o.la, window);
    for (const run::Model model : models_of(o.model)) {
      const auto spec = make_spec(o, model, window, reps);
      auto result = run::run_neighbor_pipeline(spec);
      std::printf("%s: L_A estimate %.4f (target %g)\n", run::model_name(model),
                  result.pooled_edge_length_density(), o.la);
      (model == run::Model::kPlt ? plt : stit) = std::move(result.summary);
    }
  }

  const auto table_path = fs::path(o.out_dir) / "table2.csv";
  io::write_table_csv(table_path, stit, plt, cellstats::plt_theoretical(theoretic_la));
  if (stit) print_summary(*stit);
  if (plt) print_summary(*plt);
  std::cout << "wrote " << table_path.string() << "\n";
  return 0;
}

int cmd_second_order(const CommonOpts& o, const std::vector<double>& sub_window_opt,
                     const std::string& selftest, bool dump_patterns) {
  const auto window = parse_window(o.window, geometry::RectWindow(-50, -50, 50, 50));
  const auto sub = parse_window(sub_window_opt, geometry::RectWindow(-30, -30, 30, 30));
  if (!window.contains_window(sub)) {
    throw std::runtime_error("--sub-window must lie inside --window");
  }
  const int reps = o.reps > 0 ? o.reps : 100;

  const auto write_curves = [&](const run::SecondOrderRunResult& r, const std::string& tag) {
    io::write_curve_csv(fs::path(o.out_dir) / ("K_" + tag + ".csv"), r.k);
    io::write_curve_csv(fs::path(o.out_dir) / ("g_" + tag + ".csv"), r.g);
    io::write_curve_csv(fs::path(o.out_dir) / ("kmm_area_" + tag + ".csv"), r.kmm_area);
    io::write_curve_csv(fs::path(o.out_dir) / ("kmm_perimeter_" + tag + ".csv"),
                        r.kmm_perimeter);
    io::write_curve_csv(fs::path(o.out_dir) / ("kmm_corners_" + tag + ".csv"), r.kmm_corners);
    std::printf("%s: %lld centres pooled, intensity %.4f, bandwidth %.4f\n", tag.c_str(),
                r.g.n_used, r.intensity, r.bandwidth);
  };

  if (selftest == "csr") {
    // Poisson noise at the pooled tessellation intensity: the pair
    // correlation must be flat at 1.
    std::vector<secondorder::MarkedPointPattern> patterns(reps,
                                                          secondorder::MarkedPointPattern{
                                                              {{}, sub}, {}});
    run::parallel_for_reps(reps, o.threads, [&](int rep) {
      RngStream rng(o.seed, static_cast<std::uint64_t>(rep));
      const auto pts = secondorder::poisson_pattern(sub, o.la * o.la / geometry::kPi, rng);
      patterns[rep].pattern = pts;
      patterns[rep].marks.assign(pts.points.size(), secondorder::Marks{1.0, 1.0, 1.0});
    });
    const auto pooled = run::pool_patterns(patterns, sub);
    write_curves(pooled, "csr");
    return 0;
  }

  const double margin =
      std::min(std::min(sub.x0() - window.x0(), window.x1() - sub.x1()),
               std::min(sub.y0() - window.y0(), window.y1() - sub.y1()));
  if (margin < 6.0 / o.la) {
    std::cerr << "warning: sub-window margin " << margin
              << " may be smaller than the largest cells; edge effects possible\n";
  }

  for (const run::Model model : models_of(o.model)) {
    const auto spec = make_spec(o, model, window, reps);
    const auto result = run::run_second_order_pipeline(spec, sub);
    write_curves(result, run::model_name(model));
    if (dump_patterns) {
      // Re-derive the per-replication patterns for inspection.
      run::parallel_for_reps(reps, o.threads, [&](int rep) {
        const auto cells = run::generate_cells(spec, rep);
        const auto cx = complex::build_complex(cells, spec.window);
        const auto pattern = secondorder::extract_centres(cx, sub);
        char name[64];
        std::snprintf(name, sizeof(name), "pattern_%s_rep%04d.csv", run::model_name(model),
                      rep);
        io::write_pattern_csv(fs::path(o.out_dir) / name, pattern);
      });
    }
  }
  return 0;
}

int cmd_table1(double la) {
  const auto v = cellstats::plt_theoretical(la);
  std::printf("Closed-form neighbor sums, isotropic Poisson line tessellation, L_A = %g\n", la);
  std::printf("  C0_22 = N0_22 = %.5f\n", v.n0_22);
  std::printf("  V2_22 = %.5f\n", v.v2_22);
  std::printf("  V1_22 = %.5f\n", v.v1_22);
  std::printf("  tilde_C0 = %.5f\n", v.tilde_n0);
  std::printf("  tilde_V2 = %.5f\n", v.tilde_v2);
  std::printf("  tilde_V1 = %.5f\n", v.tilde_v1);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tesslab: planar Poisson line / STIT tessellation laboratory"};
  app.require_subcommand(1);

  CommonOpts sim_opts, nbr_opts, so_opts;
  std::string cells_dir;
  std::vector<double> sub_window;
  std::string selftest;
  bool dump_patterns = false;
  double table_la = 1.0;
  int check_threads = 0;

  auto* sim = app.add_subcommand("simulate", "Generate replications and write cells files");
  add_common(sim, sim_opts, "plt");

  auto* nbr = app.add_subcommand("neighbor-stats",
                                 "Neighborhood statistics of the typical cell (table2.csv)");
  add_common(nbr, nbr_opts, "both");
  nbr->add_option("--cells-dir", cells_dir, "Read cells_*.csv files instead of simulating");

  auto* so = app.add_subcommand("second-order",
                                "K, pair- and mark-correlation curves of cell centres");
  add_common(so, so_opts, "both");
  so->add_option("--sub-window", sub_window, "Estimation window (2 or 4 values)")
      ->expected(2, 4);
  so->add_option("--selftest", selftest, "csr: run on Poisson noise instead of tessellations")
      ->check(CLI::IsMember({"csr"}));
  so->add_flag("--dump-patterns", dump_patterns, "Also write per-replication pattern CSVs");

  auto* tab = app.add_subcommand("table1", "Print the closed-form neighbor sums");
  tab->add_option("--la", table_la, "Edge length density")->check(CLI::PositiveNumber);

  auto* chk = app.add_subcommand("selfcheck", "Run the fast invariant suite");
  chk->add_option("--threads", check_threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (nbr->parsed()) return cmd_neighbor_stats(nbr_opts, cells_dir);
    if (so->parsed()) return cmd_second_order(so_opts, sub_window, selftest, dump_patterns);
    if (tab->parsed()) return cmd_table1(table_la);
    if (chk->parsed()) return run::selfcheck(check_threads, std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
