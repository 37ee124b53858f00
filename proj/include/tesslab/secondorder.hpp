// Second-order summary statistics of (marked) planar point patterns on
// rectangular windows: Ripley's K, the pair-correlation function and mark
// correlation functions, all with translation edge correction.
//
// Estimates pool over replications as ratios of summed numerators and
// denominators. Pair contributions are accumulated in a canonical point
// order (lexicographic), so results do not depend on input permutation.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tesslab/complex.hpp"
#include "tesslab/geometry.hpp"
#include "tesslab/rng.hpp"

namespace tesslab::secondorder {

struct InsufficientPoints : std::runtime_error {
  explicit InsufficientPoints(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroOverlap : std::runtime_error {
  explicit ZeroOverlap(const std::string& what) : std::runtime_error(what) {}
};

struct PointPattern {
  std::vector<geometry::Point2> points;
  geometry::RectWindow window;
};

struct Marks {
  double area = 0.0;
  double perimeter = 0.0;
  double corners = 0.0;
};

struct MarkedPointPattern {
  PointPattern pattern;
  std::vector<Marks> marks;  // parallel to pattern.points
};

enum class MarkSelector { kArea, kPerimeter, kCorners };

// Epanechnikov kernel with bandwidth h: k(u) = 0.75/h * (1 - (u/h)^2) on
// |u| < h; integrates to 1.
struct KernelSpec {
  double h = 0.1;
};

// Uniform grid of n values on [0, r_max].
struct RGrid {
  double r_max = 1.0;
  int n = 512;

  double step() const { return r_max / (n - 1); }
  double r(int i) const { return step() * i; }
  static RGrid for_window(const geometry::RectWindow& w, int n = 512) {
    return {std::min(w.width(), w.height()) / 4.0, n};
  }
};

struct CurveEstimate {
  std::vector<double> r;
  std::vector<double> value;          // NaN marks an undefined estimate
  std::vector<long long> n_pairs;     // ordered pairs contributing at each r
  long long n_used = 0;               // points entering the estimate
  double bandwidth = 0.0;             // 0 for K; values at r < h are
                                      // boundary-biased for kernel curves
};

// One point per cell whose centre of gravity lies in sub, marked with the
// cell's area, perimeter and corner count.
MarkedPointPattern extract_centres(const complex::TessellationComplex& c,
                                   const geometry::RectWindow& sub);

// Area of the window intersected with itself translated by (dx, dy).
double translation_weight(const geometry::RectWindow& w, double dx, double dy);

CurveEstimate estimate_K(const PointPattern& p, const RGrid& grid);
CurveEstimate estimate_pcf(const PointPattern& p, const RGrid& grid, const KernelSpec& kernel);
CurveEstimate estimate_kmm(const MarkedPointPattern& p, MarkSelector mark, const RGrid& grid,
                           const KernelSpec& kernel);

// Pooled estimation across replications: sufficient sums per curve, merged
// by addition.
class SecondOrderAccumulator {
 public:
  SecondOrderAccumulator(const RGrid& grid, double bandwidth);

  void add_pattern(const MarkedPointPattern& p);
  void merge(const SecondOrderAccumulator& other);

  CurveEstimate k() const;
  CurveEstimate pcf() const;
  CurveEstimate kmm(MarkSelector mark) const;

  long long total_points() const { return n_points_; }
  double mean_intensity() const { return window_area_ > 0 ? n_points_ / window_area_ : 0.0; }
  const RGrid& grid() const { return grid_; }
  double bandwidth() const { return h_; }

 private:
  RGrid grid_;
  double h_;
  long long n_points_ = 0;
  long long n_patterns_ = 0;
  double window_area_ = 0.0;   // summed over patterns
  double lambda2_sum_ = 0.0;   // sum of n(n-1)/|W|^2
  std::vector<double> k_num_;                 // per-bin, cumulated on demand
  std::vector<long long> k_pairs_;
  std::vector<double> g_num_;
  std::vector<double> kern_den_;              // kernel/weight sums (shared by kmm)
  std::vector<long long> kern_pairs_;
  std::array<std::vector<double>, 3> kmm_num_;
  std::array<double, 3> mark_sum_{};
};

// Stoyan's bandwidth rule for the pair-correlation estimator.
inline double stoyan_bandwidth(double intensity) { return 0.15 / std::sqrt(intensity); }

// Homogeneous Poisson pattern, for calibration tests.
PointPattern poisson_pattern(const geometry::RectWindow& w, double intensity, RngStream& rng);

}  // namespace tesslab::secondorder
