// Typical-cell and neighborhood statistics over minus-sampled cells:
// sums of neighbor characteristics, the two averaging schemes (per-cell
// mean vs pooled "typical neighbour" mean), weighted typical-cell means,
// and the closed-form values available for the Poisson line model.
//
// Statistics pool over replications as ratios of summed numerators and
// denominators; standard errors are leave-one-replication-out jackknife.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tesslab/complex.hpp"

namespace tesslab::cellstats {

struct EmptySample : std::runtime_error {
  explicit EmptySample(const std::string& what) : std::runtime_error(what) {}
};

struct CellRecord {
  std::int32_t cell_id = -1;
  double area = 0.0;
  double perimeter = 0.0;
  std::uint32_t corners = 0;
  std::uint32_t n0 = 0;
  std::uint32_t n1 = 0;
  std::vector<complex::Adjacency> neighbors;  // one per shared interior 1-plate
  bool eligible = false;
  // Minus-sampling correction weight |W| / |W (-) bbox(neighborhood)|:
  // larger neighborhoods have less translation freedom inside the window and
  // are undersampled, so each retained cell is reweighted by the reciprocal
  // of its selection probability. Defined (> 0) only for eligible cells.
  double weight = 0.0;
};

// Records for all cells; eligible means neither the cell nor any of its
// neighbors touches the window boundary, so the whole neighborhood is
// observed.
std::vector<CellRecord> minus_sample(const complex::TessellationComplex& c);

// The three neighbor characteristics tracked throughout: corner count,
// area, perimeter.
enum class CellChar { kCorners = 0, kArea = 1, kPerimeter = 2 };
inline constexpr std::array<const char*, 3> kCellCharNames{"corners", "area", "perimeter"};

// Sufficient statistics of one replication; merging is elementwise addition,
// so pooling is associative and order-independent.
class NeighborhoodAccumulator {
 public:
  enum Field : std::size_t {
    kCount,          // number of eligible cells (unweighted)
    kWeight,         // sum of minus-sampling weights; denominator of means
    kSumC0,          // weighted sum over eligible cells of sum of neighbor corners
    kSumV2,          // ... neighbor areas
    kSumV1,          // ... neighbor perimeters
    kBarC0,          // sum of per-cell neighbor means (divisor n1)
    kBarV2,
    kBarV1,
    kNeighbor,       // weighted sum of per-1-plate neighbor counts
    kNeighborDistinct,
    kN0,             // weighted sums of own characteristics over eligible cells
    kN1,
    kArea,
    kPerimeter,
    kCorners,
    kW0C0,           // n0-weighted sums: n0 * f
    kW0V2,
    kW0V1,
    kW1C0,           // n1-weighted sums: n1 * f
    kW1V2,
    kW1V1,
    kAreaNbPerim,    // area(x) * sum of neighbor perimeters
    kPerimNbArea,    // perimeter(x) * sum of neighbor areas
    kFieldCount
  };

  void add(const std::vector<CellRecord>& records);
  void merge(const NeighborhoodAccumulator& other);

  double operator[](Field f) const { return s_[f]; }
  const std::array<double, kFieldCount>& values() const { return s_; }
  std::array<double, kFieldCount>& values() { return s_; }

 private:
  std::array<double, kFieldCount> s_{};
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;  // jackknife over replications; 0 when fewer than 2 reps
};

struct NeighborhoodSummary {
  std::string model;
  long long sample_size = 0;  // pooled eligible cells
  int replications = 0;

  Estimate c0_22, v2_22, v1_22;           // mean sums over neighbors
  Estimate bar_c0, bar_v2, bar_v1;        // per-cell neighbor means
  Estimate tilde_c0, tilde_v2, tilde_v1;  // pooled "typical neighbour" means
  Estimate mean_neighbors;                // per-1-plate count
  Estimate mean_distinct_neighbors;
  Estimate mean_n0, mean_corners, mean_area, mean_perimeter;
};

NeighborhoodSummary neighborhood_summary(const std::vector<NeighborhoodAccumulator>& per_rep,
                                         std::string model_tag = {});

// Convenience overload matching the record-level interface.
NeighborhoodSummary neighborhood_summary(const std::vector<std::vector<CellRecord>>& per_rep,
                                         std::string model_tag = {});

enum class CellWeight { kN0, kN1 };

struct WeightedMeans {
  double corners = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
};

// Ratio-of-sums weighted means over eligible records.
WeightedMeans weighted_typical_means(const std::vector<CellRecord>& records, CellWeight weight);

struct TypicalMeans {
  double area = 0.0;
  double perimeter = 0.0;
  double corners = 0.0;
  double n0 = 0.0;
  double neighbors = 0.0;
};

TypicalMeans typical_cell_means(const std::vector<CellRecord>& records);

// Closed forms for the isotropic Poisson line tessellation with edge length
// density la: mean sums of neighbor characteristics and their "typical
// neighbour" versions (sums divided by the mean neighbor count 4).
struct TheoreticalPltValues {
  double la = 1.0;
  double n0_22 = 0.0;     // = pi^2/2 + 12, dimensionless
  double v2_22 = 0.0;     // = pi^3 / (2 la^2)
  double v1_22 = 0.0;     // = pi^3 / (2 la) + 4 pi / la
  double tilde_n0 = 0.0;
  double tilde_v2 = 0.0;
  double tilde_v1 = 0.0;
};

TheoreticalPltValues plt_theoretical(double la);

// Gap statistic for an identity that holds in expectation: value is the
// pooled per-cell gap, se its jackknife standard error.
struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double gap_se = 0.0;
};

// Sum of f over neighbors vs own f weighted by neighbor count (weight n1 or
// n0): the "typical neighbour" identity.
IdentityCheck weighted_identity_check(const std::vector<NeighborhoodAccumulator>& per_rep,
                                      CellChar f, CellWeight weight);

// Symmetry of h(x) * sum of f over neighbors under swapping (h, f) =
// (area, perimeter).
IdentityCheck symmetry_identity_check(const std::vector<NeighborhoodAccumulator>& per_rep);

// Jackknife over replications of an arbitrary statistic of pooled sums.
Estimate jackknife(const std::vector<NeighborhoodAccumulator>& per_rep,
                   const std::function<double(const NeighborhoodAccumulator&)>& statistic);

// Two-sample Kolmogorov-Smirnov distance (sup over the merged sample of the
// empirical cdf difference) and the large-sample critical value at level
// alpha.
double ks_distance(std::vector<double> a, std::vector<double> b);
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

}  // namespace tesslab::cellstats
