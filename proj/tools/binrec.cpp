// Command-line surface for the sparse binary recovery toolkit.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "binrec/experiment.hpp"
#include "binrec/io.hpp"
#include "binrec/ksets.hpp"
#include "binrec/random.hpp"
#include "binrec/recovery.hpp"
#include "binrec/uniqueness.hpp"

namespace {

using namespace binrec;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartial = 3;

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string field;
  while (std::getline(ss, field, ','))
    out.push_back(static_cast<int>(detail::parse_long(field, "index list")));
  return out;
}

int cmd_recover(const std::string& matrix_file, const std::string& rhs_file,
                const std::string& formulation, const std::string& truth_file, double tol) {
  const Matrix a = read_matrix_csv(matrix_file);
  const Vector b = read_vector_csv(rhs_file);
  const Formulation f = formulation_from_name(formulation);
  if (static_cast<int>(b.size()) != a.rows())
    throw ParseError("rhs length does not match matrix rows");
  if (f == Formulation::SquareInverse && a.rows() != a.cols())
    throw ParseError("square formulation requires a square matrix");

  const RecoveryResult res = recover(f, a, b);
  json out;
  out["formulation"] = formulation_name(f);
  out["status"] = res.status == LpStatus::Optimal
                      ? "optimal"
                      : (res.status == LpStatus::Infeasible ? "infeasible" : "unbounded");
  if (res.status == LpStatus::Optimal) {
    out["x_hat"] = vector_to_json(res.x_hat);
    double obj = 0.0;
    for (double x : res.x_hat) obj += x;
    out["objective"] = obj;
    if (res.auxiliary) out["radius"] = *res.auxiliary;
    if (!truth_file.empty()) {
      const Vector tv = read_vector_csv(truth_file);
      std::vector<int> support;
      for (std::size_t j = 0; j < tv.size(); ++j)
        if (tv[j] > 0.5) support.push_back(static_cast<int>(j));
      const SparseBinarySignal truth(static_cast<int>(tv.size()), support);
      out["success"] = check_success(res.x_hat, truth, tol);
    }
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_unique(const std::string& matrix_file, const std::string& support_str) {
  const Matrix a = read_matrix_csv(matrix_file);
  const SparseBinarySignal truth(a.cols(), parse_index_list(support_str));
  const UniquenessResult res = is_unique_solution(a, truth);
  json out;
  out["verdict"] = res.unique ? "Unique" : "NotUnique";
  if (res.certificate) {
    out["certificate"] = {{"normal", vector_to_json(res.certificate->normal)},
                          {"offset", res.certificate->offset},
                          {"margin", res.certificate->margin}};
  }
  if (res.witness) {
    out["witness"] = {{"alpha_zero_side", vector_to_json(res.witness->alpha_low)},
                      {"alpha_support_side", vector_to_json(res.witness->alpha_high)}};
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_ksets(const std::string& cloud_file, const std::string& random_spec, int k,
              int trials, std::uint64_t seed, bool origin) {
  json out;
  if (!cloud_file.empty()) {
    // Cloud file: a matrix whose rows are the points.
    const Matrix pts = read_matrix_csv(cloud_file);
    PointCloud cloud;
    cloud.dim = pts.cols();
    for (int i = 0; i < pts.rows(); ++i) cloud.points.push_back(pts.row(i));
    const KsetReport rep = count_ksets(cloud, k, origin);
    out = {{"n", rep.n}, {"k", rep.k}, {"count", rep.count}, {"ratio", rep.ratio}};
  } else {
    std::stringstream ss(random_spec);
    std::string dist_name, ms, ns;
    if (!std::getline(ss, dist_name, ',') || !std::getline(ss, ms, ',') ||
        !std::getline(ss, ns, ','))
      throw ParseError("--random expects dist,m,n");
    const DistributionSpec dist{distribution_from_name(dist_name)};
    const int m = static_cast<int>(detail::parse_long(ms, "--random"));
    const int n = static_cast<int>(detail::parse_long(ns, "--random"));
    const Theorem3Report rep = verify_theorem3(dist, m, n, k, trials, seed);
    out = {{"n", n},
           {"k", k},
           {"recovery_prob", {{"mean", rep.recovery_prob.mean},
                              {"stderr", rep.recovery_prob.stderr_}}},
           {"ksets_origin_augmented", {{"mean_count", rep.ksets_augmented.count},
                                       {"ratio", rep.ksets_augmented.ratio},
                                       {"ratio_stderr", rep.ksets_augmented.ratio_stderr}}},
           {"ksets_columns_only", {{"mean_count", rep.ksets_literal.count},
                                   {"ratio", rep.ksets_literal.ratio},
                                   {"ratio_stderr", rep.ksets_literal.ratio_stderr}}},
           {"gap_origin_augmented", rep.gap_augmented},
           {"gap_columns_only", rep.gap_literal},
           {"pooled_stderr_origin_augmented", rep.pooled_stderr_augmented},
           {"pooled_stderr_columns_only", rep.pooled_stderr_literal}};
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_file, const std::string& out_dir, int jobs) {
  const SweepConfig cfg = read_config(config_file);
  std::filesystem::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CellResult> cells = run_sweep(cfg, jobs);
  const auto t1 = std::chrono::steady_clock::now();

  const ResultsTable table = make_results_table(cfg, cells);
  write_results_table(out_dir + "/results.csv", table);

  json manifest;
  manifest["config"] = table.config;
  manifest["config_hash"] = table.config_hash_value;
  manifest["base_seed"] = table.base_seed;
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  int errored = 0;
  for (const CellResult& c : cells)
    if (!c.error.empty()) ++errored;
  manifest["errored_cells"] = errored;
  std::ofstream(out_dir + "/manifest.json") << manifest.dump(2) << "\n";

  if (errored > 0) {
    std::cerr << "sweep: " << errored << " cell(s) aborted with errors\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_report(const std::string& table_file, const std::string& levels_str, bool fit,
               const std::string& out_dir) {
  const ResultsTable table = read_results_table(table_file);
  const SweepConfig cfg = config_from_json(table.config);
  std::filesystem::create_directories(out_dir);

  std::vector<double> levels;
  {
    std::stringstream ss(levels_str);
    std::string field;
    while (std::getline(ss, field, ','))
      levels.push_back(detail::parse_double(field, "--levels"));
  }

  std::vector<std::pair<DistributionKind, Formulation>> slices;
  for (const CellResult& c : table.rows) {
    const auto key = std::make_pair(c.distribution, c.formulation);
    if (std::find(slices.begin(), slices.end(), key) == slices.end()) slices.push_back(key);
  }
  for (const auto& [dist, form] : slices) {
    std::vector<CellResult> slice;
    for (const CellResult& c : table.rows)
      if (c.distribution == dist && c.formulation == form) slice.push_back(c);
    const std::string tag =
        std::string(distribution_name(dist)) + "_" + formulation_name(form);
    for (double lv : levels) {
      const LevelSet ls = level_set(slice, lv, cfg.mode);
      std::ofstream out(out_dir + "/levelset_" + tag + "_" + format_double(lv) + ".csv");
      out << "abscissa,ordinate,non_monotone\n";
      if (ls.points.empty()) out << "# empty level set\n";
      for (const auto& p : ls.points)
        out << format_double(p.abscissa) << "," << format_double(p.ordinate) << ","
            << (p.non_monotone ? 1 : 0) << "\n";
    }
    if (fit && cfg.mode == SweepMode::EtaDelta && form == Formulation::L1Box) {
      const FitReport rep = fit_report(slice);
      std::ofstream out(out_dir + "/fit_" + tag + ".csv");
      out << "eta,delta_star,conjecture,deviation\n";
      for (const FitRow& row : rep.rows) {
        out << format_double(row.eta) << ",";
        if (row.delta_star)
          out << format_double(*row.delta_star) << "," << format_double(row.conjecture)
              << "," << format_double(*row.deviation);
        else
          out << "gap," << format_double(row.conjecture) << ",gap";
        out << "\n";
      }
      out << "# max_abs_deviation=" << format_double(rep.max_abs_deviation)
          << " mean_abs_deviation=" << format_double(rep.mean_abs_deviation)
          << " gaps=" << rep.gap_count << "\n";
    }
  }
  return kExitOk;
}

int cmd_plot(const std::string& table_file, const std::string& out_file,
             const std::string& levels_str, bool fit) {
  const ResultsTable table = read_results_table(table_file);
  const SweepConfig cfg = config_from_json(table.config);
  PlotSpec spec;
  spec.mode = cfg.mode;
  spec.levels.clear();
  std::stringstream ss(levels_str);
  std::string field;
  while (std::getline(ss, field, ','))
    spec.levels.push_back(detail::parse_double(field, "--levels"));
  spec.conjecture_layer = fit;
  spec.cs_bound_layer = fit;
  std::ofstream(out_file) << render_plot(table, spec);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP-based recovery of binary k-sparse solutions"};
  app.require_subcommand(1);

  std::string matrix_file, rhs_file, truth_file, support_str, cloud_file, random_spec;
  std::string config_file, out_dir = ".", table_file, out_file = "plot.svg";
  std::string formulation = "l1box", levels_str = "0.1,0.5,0.9";
  double tol = 1e-9;
  int k = 1, trials = 100, jobs = 1;
  std::uint64_t seed = 0;
  bool origin = false, fit = false;

  auto* rec = app.add_subcommand("recover", "solve one recovery instance");
  rec->add_option("--matrix", matrix_file)->required();
  rec->add_option("--rhs", rhs_file)->required();
  rec->add_option("--formulation", formulation);
  rec->add_option("--truth", truth_file);
  rec->add_option("--tol", tol);

  auto* uniq = app.add_subcommand("unique", "certify uniqueness of a binary solution");
  uniq->add_option("--matrix", matrix_file)->required();
  uniq->add_option("--support", support_str)->required();

  auto* ks = app.add_subcommand("ksets", "count k-sets or estimate their expectation");
  ks->add_option("--cloud", cloud_file);
  ks->add_option("--random", random_spec);
  ks->add_option("--k", k)->required();
  ks->add_option("--trials", trials);
  ks->add_option("--seed", seed);
  ks->add_flag("--origin", origin);

  auto* sw = app.add_subcommand("sweep", "run a Monte Carlo sweep");
  sw->add_option("--config", config_file)->required();
  sw->add_option("--out", out_dir);
  sw->add_option("--jobs", jobs);

  auto* rep = app.add_subcommand("report", "level sets, transition points, conjecture fit");
  rep->add_option("--table", table_file)->required();
  rep->add_option("--levels", levels_str);
  rep->add_flag("--fit", fit);
  rep->add_option("--out", out_dir);

  auto* pl = app.add_subcommand("plot", "render a transition chart as SVG");
  pl->add_option("--table", table_file)->required();
  pl->add_option("--out", out_file);
  pl->add_option("--levels", levels_str);
  pl->add_flag("--fit", fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitUsage : kExitOk;
  }

  try {
    if (rec->parsed()) return cmd_recover(matrix_file, rhs_file, formulation, truth_file, tol);
    if (uniq->parsed()) return cmd_unique(matrix_file, support_str);
    if (ks->parsed()) {
      if (cloud_file.empty() == random_spec.empty()) {
        std::cerr << "ksets: exactly one of --cloud / --random is required\n";
        return kExitUsage;
      }
      return cmd_ksets(cloud_file, random_spec, k, trials, seed, origin);
    }
    if (sw->parsed()) return cmd_sweep(config_file, out_dir, jobs);
    if (rep->parsed()) return cmd_report(table_file, levels_str, fit, out_dir);
    if (pl->parsed()) return cmd_plot(table_file, out_file, levels_str, fit);
  } catch (const binrec::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const binrec::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
