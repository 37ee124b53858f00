// File formats: cells files (one per replication, lossless round-trip),
// curve CSVs (r,value,n_pairs), the neighbor-statistics table CSV, and
// point-pattern CSVs. All writers go through write-to-temp + atomic rename.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tesslab/cellstats.hpp"
#include "tesslab/geometry.hpp"
#include "tesslab/secondorder.hpp"
#include "tesslab/tessgen.hpp"

namespace tesslab::io {

struct CellsFileHeader {
  int version = 1;
  std::string model;  // "plt" | "stit"
  double la = 0.0;
  std::string law;    // serialized direction law
  geometry::RectWindow window{0, 0, 1, 1};
  std::uint64_t seed = 0;
  int rep = 0;
};

struct CellsFile {
  CellsFileHeader header;
  std::vector<geometry::ConvexPolygon> cells;
};

void write_cells_file(const std::filesystem::path& path, const CellsFileHeader& header,
                      const std::vector<geometry::ConvexPolygon>& cells);
CellsFile read_cells_file(const std::filesystem::path& path);

void write_curve_csv(const std::filesystem::path& path, const secondorder::CurveEstimate& curve);

void write_pattern_csv(const std::filesystem::path& path,
                       const secondorder::MarkedPointPattern& pattern);
secondorder::MarkedPointPattern read_pattern_csv(const std::filesystem::path& path,
                                                 const geometry::RectWindow& window);

// Table of neighborhood statistics with columns
// statistic,STIT,STIT_se,PLT,PLT_se,PLT_theoretic. Absent models/values
// produce empty fields.
void write_table_csv(const std::filesystem::path& path,
                     const std::optional<cellstats::NeighborhoodSummary>& stit,
                     const std::optional<cellstats::NeighborhoodSummary>& plt,
                     const cellstats::TheoreticalPltValues& theoretic);

// Full-precision decimal formatting that round-trips doubles exactly.
std::string format_double(double v);

// Direction law <-> CLI/file syntax: "isotropic" or
// "atoms:phi1:w1,phi2:w2,...".
std::string law_to_string(const tessgen::DirectionLaw& law);
tessgen::DirectionLaw parse_law(const std::string& text);

// Writes content to path via a temp file in the same directory + rename.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace tesslab::io
