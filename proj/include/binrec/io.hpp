#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "binrec/core.hpp"
#include "binrec/experiment.hpp"
#include "binrec/ksets.hpp"
#include "binrec/random.hpp"
#include "binrec/recovery.hpp"

namespace binrec {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shortest decimal that round-trips a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad numeric field '" + s + "' in " + what);
  }
}

inline long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer field '" + s + "' in " + what);
  }
}

}  // namespace detail

/// Matrix file: header line "rows,cols", then one comma-separated row per line.
inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix file " + path);
  const auto hdr = detail::split_csv(line);
  if (hdr.size() != 2) throw ParseError("matrix header must be 'rows,cols' in " + path);
  const int rows = static_cast<int>(detail::parse_long(hdr[0], path));
  const int cols = static_cast<int>(detail::parse_long(hdr[1], path));
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw ParseError("matrix file truncated: " + path);
    const auto fields = detail::split_csv(line);
    if (static_cast<int>(fields.size()) != cols)
      throw ParseError("matrix row with wrong arity in " + path);
    for (int j = 0; j < cols; ++j) m(i, j) = detail::parse_double(fields[j], path);
  }
  return m;
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  out << m.rows() << "," << m.cols() << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

/// Vector file: header line "n", then one value per line.
inline Vector read_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vector file " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty vector file " + path);
  const int n = static_cast<int>(detail::parse_long(line, path));
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError("vector file truncated: " + path);
    v[i] = detail::parse_double(line, path);
  }
  return v;
}

inline void write_vector_csv(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  out << v.size() << "\n";
  for (double x : v) out << format_double(x) << "\n";
}

inline Formulation formulation_from_name(const std::string& name) {
  if (name == "linf") return Formulation::LinfL2;
  if (name == "l1box") return Formulation::L1Box;
  if (name == "boxfeas") return Formulation::BoxFeas;
  if (name == "nonneg") return Formulation::NonnegL1;
  if (name == "square") return Formulation::SquareInverse;
  throw ParseError("unknown formulation '" + name + "'");
}

inline DistributionKind distribution_from_name(const std::string& name) {
  if (name == "D1") return DistributionKind::D1;
  if (name == "D2") return DistributionKind::D2;
  if (name == "D3") return DistributionKind::D3;
  if (name == "D4") return DistributionKind::D4;
  throw ParseError("unknown distribution '" + name + "'");
}

// --- Sweep config (JSON document) ---

inline nlohmann::json config_to_json(const SweepConfig& cfg) {
  nlohmann::json j;
  j["mode"] = cfg.mode == SweepMode::RhoDelta ? "rho_delta" : "eta_delta";
  j["n"] = cfg.n;
  std::vector<std::string> forms, dists;
  for (Formulation f : cfg.formulations) forms.push_back(formulation_name(f));
  for (const DistributionSpec& d : cfg.distributions)
    dists.push_back(distribution_name(d.kind));
  j["formulations"] = forms;
  j["distributions"] = dists;
  j["trials_per_cell"] = cfg.trials_per_cell;
  j["base_seed"] = cfg.base_seed;
  j["tolerance"] = cfg.tolerance;
  if (!cfg.m_override.empty()) j["m_list"] = cfg.m_override;
  if (!cfg.k_override.empty()) j["k_list"] = cfg.k_override;
  if (cfg.couple_supports) j["couple_supports"] = true;
  return j;
}

inline SweepConfig config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ParseError(std::string("config: missing field '") + key + "'");
    return j.at(key);
  };
  const std::string mode = require("mode").get<std::string>();
  if (mode == "rho_delta") cfg.mode = SweepMode::RhoDelta;
  else if (mode == "eta_delta") cfg.mode = SweepMode::EtaDelta;
  else throw ParseError("config: field 'mode' must be rho_delta or eta_delta");
  cfg.n = require("n").get<int>();
  cfg.formulations.clear();
  for (const auto& f : require("formulations"))
    cfg.formulations.push_back(formulation_from_name(f.get<std::string>()));
  cfg.distributions.clear();
  for (const auto& d : require("distributions"))
    cfg.distributions.push_back({distribution_from_name(d.get<std::string>())});
  if (j.contains("trials_per_cell")) cfg.trials_per_cell = j.at("trials_per_cell").get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
  if (j.contains("m_list")) cfg.m_override = j.at("m_list").get<std::vector<int>>();
  if (j.contains("k_list")) cfg.k_override = j.at("k_list").get<std::vector<int>>();
  if (j.contains("couple_supports")) cfg.couple_supports = j.at("couple_supports").get<bool>();
  try {
    cfg.validate();
  } catch (const InputError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline SweepConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config: invalid JSON in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

/// FNV-1a over the canonical (key-sorted, compact) config serialization, so
/// reordering unrelated keys in the source file does not change the hash.
inline std::uint64_t config_hash(const SweepConfig& cfg) {
  const std::string canon = config_to_json(cfg).dump();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// --- Results table ---

inline const char* kResultsHeader =
    "distribution,formulation,n,m,k,delta,rho,eta,trials,successes,rate";

struct ResultsTable {
  std::string tool_version = "binrec 1.0";
  std::uint64_t config_hash_value = 0;
  std::uint64_t base_seed = 0;
  nlohmann::json config;
  std::vector<CellResult> rows;
};

inline ResultsTable make_results_table(const SweepConfig& cfg, std::vector<CellResult> rows) {
  ResultsTable t;
  t.config = config_to_json(cfg);
  t.config_hash_value = config_hash(cfg);
  t.base_seed = cfg.base_seed;
  t.rows = std::move(rows);
  return t;
}

inline void write_results_table(const std::string& path, const ResultsTable& table) {
  std::ofstream out(path);
  out << "# " << table.tool_version << "\n";
  out << "# config_hash=" << table.config_hash_value << "\n";
  out << "# base_seed=" << table.base_seed << "\n";
  out << "# config=" << table.config.dump() << "\n";
  out << kResultsHeader << "\n";
  for (const CellResult& c : table.rows) {
    if (!c.error.empty()) {
      out << "# error " << distribution_name(c.distribution) << ","
          << formulation_name(c.formulation) << "," << c.n << "," << c.m << "," << c.k
          << ": " << c.error << "\n";
      continue;
    }
    out << distribution_name(c.distribution) << "," << formulation_name(c.formulation)
        << "," << c.n << "," << c.m << "," << c.k << "," << format_double(c.delta()) << ","
        << format_double(c.rho()) << "," << format_double(c.eta()) << "," << c.trials << ","
        << c.successes << "," << format_double(c.rate()) << "\n";
  }
}

inline ResultsTable read_results_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open results table " + path);
  ResultsTable table;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# config_hash=", 0) == 0)
        table.config_hash_value = std::stoull(line.substr(14));
      else if (line.rfind("# base_seed=", 0) == 0)
        table.base_seed = std::stoull(line.substr(12));
      else if (line.rfind("# config=", 0) == 0)
        table.config = nlohmann::json::parse(line.substr(9));
      continue;
    }
    if (!saw_header) {
      if (line != kResultsHeader) throw ParseError("unexpected table header in " + path);
      saw_header = true;
      continue;
    }
    const auto f = detail::split_csv(line);
    if (f.size() != 11) throw ParseError("results row with wrong arity in " + path);
    CellResult c;
    c.distribution = distribution_from_name(f[0]);
    c.formulation = formulation_from_name(f[1]);
    c.n = static_cast<int>(detail::parse_long(f[2], path));
    c.m = static_cast<int>(detail::parse_long(f[3], path));
    c.k = static_cast<int>(detail::parse_long(f[4], path));
    c.trials = static_cast<int>(detail::parse_long(f[8], path));
    c.successes = static_cast<int>(detail::parse_long(f[9], path));
    table.rows.push_back(c);
  }
  if (!saw_header) throw ParseError("results table missing header: " + path);
  return table;
}

// --- SVG plot emission ---

struct PlotSpec {
  SweepMode mode = SweepMode::EtaDelta;
  std::vector<double> levels{0.1, 0.5, 0.9};
  bool conjecture_layer = false;   // H(eta)/2, sampled at 256 points
  bool cs_bound_layer = false;     // k log2(n/k) / n
};

namespace detail {

struct SvgMapper {
  double width = 640, height = 480, margin = 56;
  double px(double x) const { return margin + x * (width - 2 * margin); }
  double py(double y) const { return height - margin - y * (height - 2 * margin); }
};

inline std::string svg_polyline(const SvgMapper& map,
                                const std::vector<std::pair<double, double>>& pts,
                                const std::string& color, const std::string& dash) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\"";
  if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  for (const auto& [x, y] : pts) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f,%.4f ", map.px(x), map.py(y));
    os << buf;
  }
  os << "\"/>\n";
  return os.str();
}

}  // namespace detail

/// Emits a deterministic standalone SVG with level-set polylines and optional
/// analytic curves in the mode's coordinate plane (both axes span [0,1]).
inline std::string render_plot(const ResultsTable& table, const PlotSpec& spec) {
  if (table.rows.empty()) throw InputError("render_plot: empty table");
  detail::SvgMapper map;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width
     << "\" height=\"" << map.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  os << "<line x1=\"" << map.px(0) << "\" y1=\"" << map.py(0) << "\" x2=\"" << map.px(1)
     << "\" y2=\"" << map.py(0) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << map.px(0) << "\" y1=\"" << map.py(0) << "\" x2=\"" << map.px(0)
     << "\" y2=\"" << map.py(1) << "\" stroke=\"black\"/>\n";
  const bool eta_mode = spec.mode == SweepMode::EtaDelta;
  os << "<text x=\"" << map.width / 2 << "\" y=\"" << map.height - 12 << "\">"
     << (eta_mode ? "eta = k/n" : "delta = m/n") << "</text>\n";
  os << "<text x=\"12\" y=\"" << map.height / 2 << "\" transform=\"rotate(-90 12 "
     << map.height / 2 << ")\">" << (eta_mode ? "delta = m/n" : "rho = k/m")
     << "</text>\n";

  const std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                        "#8c564b", "#e377c2"};
  int layer = 0;
  double legend_y = 20;
  auto legend = [&](const std::string& label, const std::string& color) {
    os << "<text x=\"" << map.width - 180 << "\" y=\"" << legend_y << "\" fill=\"" << color
       << "\">" << label << "</text>\n";
    legend_y += 16;
  };

  // One polyline per (distribution, formulation, level).
  std::vector<std::pair<DistributionKind, Formulation>> slices;
  for (const CellResult& c : table.rows) {
    const auto key = std::make_pair(c.distribution, c.formulation);
    if (std::find(slices.begin(), slices.end(), key) == slices.end()) slices.push_back(key);
  }
  for (const auto& [dist, form] : slices) {
    std::vector<CellResult> slice;
    for (const CellResult& c : table.rows)
      if (c.distribution == dist && c.formulation == form) slice.push_back(c);
    const std::string color = colors[layer % colors.size()];
    for (double lv : spec.levels) {
      const LevelSet ls = level_set(slice, lv, spec.mode);
      if (ls.points.empty()) continue;
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : ls.points) pts.emplace_back(p.abscissa, p.ordinate);
      os << detail::svg_polyline(map, pts, color, lv == 0.5 ? "" : "4,3");
    }
    legend(std::string(distribution_name(dist)) + " " + formulation_name(form), color);
    ++layer;
  }

  if (spec.conjecture_layer && eta_mode) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 256; ++i) {
      const double eta = 0.01 + (0.99 - 0.01) * i / 255.0;
      pts.emplace_back(eta, conjecture_curve(eta));
    }
    os << detail::svg_polyline(map, pts, "black", "");
    legend("H(eta)/2", "black");
  }
  if (spec.cs_bound_layer && eta_mode) {
    const int n = table.rows.front().n;
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; k <= n; ++k) {
      const double v = cs_lower_bound_curve(n, k) / n;
      if (v <= 1.0) pts.emplace_back(static_cast<double>(k) / n, v);
    }
    os << detail::svg_polyline(map, pts, "#7f7f7f", "2,2");
    legend("k*log2(n/k)/n", "#7f7f7f");
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace binrec
