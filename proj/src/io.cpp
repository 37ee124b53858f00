#include "tesslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tesslab::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  // %.17g round-trips every finite double.
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

namespace {

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed number: '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_cells_file(const fs::path& path, const CellsFileHeader& header,
                      const std::vector<geometry::ConvexPolygon>& cells) {
  std::ostringstream out;
  out << "# tesslab-cells v" << header.version << "\n";
  out << "# model " << header.model << "\n";
  out << "# la " << format_double(header.la) << "\n";
  out << "# law " << header.law << "\n";
  out << "# window " << format_double(header.window.x0()) << " "
      << format_double(header.window.y0()) << " " << format_double(header.window.x1()) << " "
      << format_double(header.window.y1()) << "\n";
  out << "# seed " << header.seed << "\n";
  out << "# rep " << header.rep << "\n";
  out << "cell_id,k,coords\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& v = cells[i].vertices();
    out << i << "," << v.size();
    for (const auto& p : v) out << "," << format_double(p.x) << "," << format_double(p.y);
    out << "\n";
  }
  atomic_write(path, out.str());
}

CellsFile read_cells_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cells file: " + path.string());

  CellsFile file{CellsFileHeader{}, {}};
  bool window_seen = false;
  double wx0 = 0, wy0 = 0, wx1 = 1, wy1 = 1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "tesslab-cells") {
        std::string ver;
        hs >> ver;
        if (ver != "v1") throw std::runtime_error("unsupported cells file version: " + ver);
        file.header.version = 1;
      } else if (key == "model") {
        hs >> file.header.model;
      } else if (key == "la") {
        hs >> file.header.la;
      } else if (key == "law") {
        hs >> file.header.law;
      } else if (key == "window") {
        hs >> wx0 >> wy0 >> wx1 >> wy1;
        window_seen = true;
      } else if (key == "seed") {
        hs >> file.header.seed;
      } else if (key == "rep") {
        hs >> file.header.rep;
      }
      continue;
    }
    if (line.rfind("cell_id", 0) == 0) continue;  // column header

    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() < 2) throw std::runtime_error("malformed cells row: " + line);
    const std::size_t k = static_cast<std::size_t>(std::stoul(fields[1]));
    if (k < 3 || fields.size() != 2 + 2 * k) {
      throw std::runtime_error("malformed cells row (vertex count): " + line);
    }
    std::vector<geometry::Point2> verts(k);
    for (std::size_t i = 0; i < k; ++i) {
      verts[i].x = parse_double(fields[2 + 2 * i]);
      verts[i].y = parse_double(fields[3 + 2 * i]);
    }
    file.cells.push_back(geometry::ConvexPolygon::from_vertices(std::move(verts)));
  }
  if (!window_seen) throw std::runtime_error("cells file missing window header");
  file.header.window = geometry::RectWindow(wx0, wy0, wx1, wy1);
  return file;
}

void write_curve_csv(const fs::path& path, const secondorder::CurveEstimate& curve) {
  std::ostringstream out;
  out << "r,value,n_pairs\n";
  for (std::size_t i = 0; i < curve.r.size(); ++i) {
    out << format_double(curve.r[i]) << ",";
    if (std::isfinite(curve.value[i])) out << format_double(curve.value[i]);
    out << "," << curve.n_pairs[i] << "\n";
  }
  atomic_write(path, out.str());
}

void write_pattern_csv(const fs::path& path, const secondorder::MarkedPointPattern& pattern) {
  std::ostringstream out;
  out << "x,y,area,perimeter,corners\n";
  for (std::size_t i = 0; i < pattern.pattern.points.size(); ++i) {
    const auto& p = pattern.pattern.points[i];
    const auto& m = pattern.marks[i];
    out << format_double(p.x) << "," << format_double(p.y) << "," << format_double(m.area) << ","
        << format_double(m.perimeter) << "," << static_cast<long long>(m.corners) << "\n";
  }
  atomic_write(path, out.str());
}

secondorder::MarkedPointPattern read_pattern_csv(const fs::path& path,
                                                 const geometry::RectWindow& window) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pattern file: " + path.string());
  secondorder::MarkedPointPattern out{{{}, window}, {}};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("x,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = split(line, ',');
    if (fields.size() != 5) throw std::runtime_error("malformed pattern row: " + line);
    out.pattern.points.push_back({parse_double(fields[0]), parse_double(fields[1])});
    out.marks.push_back(
        {parse_double(fields[2]), parse_double(fields[3]), parse_double(fields[4])});
  }
  return out;
}

namespace {

void table_row(std::ostringstream& out, const char* name,
               const std::optional<cellstats::Estimate>& stit,
               const std::optional<cellstats::Estimate>& plt,
               const std::optional<double>& theory) {
  out << name << ",";
  if (stit) out << format_double(stit->value);
  out << ",";
  if (stit) out << format_double(stit->se);
  out << ",";
  if (plt) out << format_double(plt->value);
  out << ",";
  if (plt) out << format_double(plt->se);
  out << ",";
  if (theory) out << format_double(*theory);
  out << "\n";
}

}  // namespace

void write_table_csv(const fs::path& path,
                     const std::optional<cellstats::NeighborhoodSummary>& stit,
                     const std::optional<cellstats::NeighborhoodSummary>& plt,
                     const cellstats::TheoreticalPltValues& theoretic) {
  using cellstats::Estimate;
  using cellstats::NeighborhoodSummary;
  const auto pick = [](const std::optional<NeighborhoodSummary>& s,
                       Estimate NeighborhoodSummary::* field) -> std::optional<Estimate> {
    if (!s) return std::nullopt;
    return (*s).*field;
  };
  using NS = NeighborhoodSummary;

  std::ostringstream out;
  out << "statistic,STIT,STIT_se,PLT,PLT_se,PLT_theoretic\n";
  table_row(out, "C0_22", pick(stit, &NS::c0_22), pick(plt, &NS::c0_22), theoretic.n0_22);
  table_row(out, "bar_C0", pick(stit, &NS::bar_c0), pick(plt, &NS::bar_c0), std::nullopt);
  table_row(out, "tilde_C0", pick(stit, &NS::tilde_c0), pick(plt, &NS::tilde_c0),
            theoretic.tilde_n0);
  table_row(out, "V2_22", pick(stit, &NS::v2_22), pick(plt, &NS::v2_22), theoretic.v2_22);
  table_row(out, "bar_V2", pick(stit, &NS::bar_v2), pick(plt, &NS::bar_v2), std::nullopt);
  table_row(out, "tilde_V2", pick(stit, &NS::tilde_v2), pick(plt, &NS::tilde_v2),
            theoretic.tilde_v2);
  table_row(out, "V1_22", pick(stit, &NS::v1_22), pick(plt, &NS::v1_22), theoretic.v1_22);
  table_row(out, "bar_V1", pick(stit, &NS::bar_v1), pick(plt, &NS::bar_v1), std::nullopt);
  table_row(out, "tilde_V1", pick(stit, &NS::tilde_v1), pick(plt, &NS::tilde_v1),
            theoretic.tilde_v1);
  table_row(out, "mean_neighbors", pick(stit, &NS::mean_neighbors), pick(plt, &NS::mean_neighbors),
            4.0);
  table_row(out, "mean_distinct_neighbors", pick(stit, &NS::mean_distinct_neighbors),
            pick(plt, &NS::mean_distinct_neighbors), std::nullopt);
  table_row(out, "mean_n0", pick(stit, &NS::mean_n0), pick(plt, &NS::mean_n0), std::nullopt);
  table_row(out, "mean_corners", pick(stit, &NS::mean_corners), pick(plt, &NS::mean_corners),
            std::nullopt);
  table_row(out, "mean_area", pick(stit, &NS::mean_area), pick(plt, &NS::mean_area), std::nullopt);
  table_row(out, "mean_perimeter", pick(stit, &NS::mean_perimeter),
            pick(plt, &NS::mean_perimeter), std::nullopt);

  out << "eligible_cells,";
  if (stit) out << stit->sample_size;
  out << ",,";
  if (plt) out << plt->sample_size;
  out << ",,\n";
  atomic_write(path, out.str());
}

std::string law_to_string(const tessgen::DirectionLaw& law) {
  if (law.is_isotropic()) return "isotropic";
  std::string out = "atoms:";
  bool first = true;
  for (const auto& a : law.atoms()) {
    if (!first) out += ",";
    first = false;
    out += format_double(a.phi) + ":" + format_double(a.weight);
  }
  return out;
}

tessgen::DirectionLaw parse_law(const std::string& text) {
  if (text == "isotropic") return tessgen::DirectionLaw::isotropic();
  const std::string prefix = "atoms:";
  if (text.rfind(prefix, 0) != 0) {
    throw std::runtime_error("unknown direction law: '" + text + "'");
  }
  std::vector<tessgen::DirectionLaw::Atom> atoms;
  for (const std::string& part : split(text.substr(prefix.size()), ',')) {
    const auto kv = split(part, ':');
    if (kv.size() != 2) throw std::runtime_error("malformed direction atom: '" + part + "'");
    atoms.push_back({parse_double(kv[0]), parse_double(kv[1])});
  }
  return tessgen::DirectionLaw::discrete(std::move(atoms));
}

}  // namespace tesslab::io
