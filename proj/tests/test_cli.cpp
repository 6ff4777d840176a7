// End-to-end checks of the command-line surface, driven through the shell.
#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef BINREC_CLI_PATH
#define BINREC_CLI_PATH "binrec"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(BINREC_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("recover subcommand solves and judges an instance") {
  const std::string mat = tmp("cli_mat.csv"), rhs = tmp("cli_rhs.csv"),
                    truth = tmp("cli_truth.csv");
  std::ofstream(mat) << "1,3\n1,2,4\n";
  std::ofstream(rhs) << "1\n4\n";
  std::ofstream(truth) << "3\n0\n0\n1\n";
  const RunResult res = run("recover --matrix " + mat + " --rhs " + rhs +
                            " --formulation l1box --truth " + truth);
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["status"] == "optimal");
  CHECK(j["success"] == true);
  CHECK(std::abs(j["x_hat"][2].get<double>() - 1.0) < 1e-9);
}

TEST_CASE("recover square mode rejects non-square matrices") {
  const std::string mat = tmp("cli_mat2.csv"), rhs = tmp("cli_rhs2.csv");
  std::ofstream(mat) << "2,3\n1,2,4\n2,1,0\n";
  std::ofstream(rhs) << "2\n4\n2\n";
  const RunResult res = run("recover --matrix " + mat + " --rhs " + rhs +
                            " --formulation square");
  CHECK(res.exit_code == 1);
}

TEST_CASE("unique subcommand prints verdict and proof object") {
  const std::string mat = tmp("cli_mat3.csv");
  std::ofstream(mat) << "1,3\n1,2,4\n";
  const RunResult unique = run("unique --matrix " + mat + " --support 2");
  REQUIRE(unique.exit_code == 0);
  auto j = nlohmann::json::parse(unique.out);
  CHECK(j["verdict"] == "Unique");
  CHECK(j.contains("certificate"));

  std::ofstream(mat) << "1,2\n1,1\n";
  const RunResult dup = run("unique --matrix " + mat + " --support 0");
  auto j2 = nlohmann::json::parse(dup.out);
  CHECK(j2["verdict"] == "NotUnique");
  CHECK(j2.contains("witness"));
}

TEST_CASE("ksets subcommand counts the unit square") {
  const std::string cloud = tmp("cli_cloud.csv");
  std::ofstream(cloud) << "4,2\n0,0\n1,0\n1,1\n0,1\n";
  const RunResult res = run("ksets --cloud " + cloud + " --k 2");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["count"] == 4.0);
}

TEST_CASE("ksets random estimate is deterministic for a fixed seed") {
  const RunResult a = run("ksets --random D1,1,4 --k 2 --trials 20 --seed 5 --origin");
  const RunResult b = run("ksets --random D1,1,4 --k 2 --trials 20 --seed 5 --origin");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("sweep writes a table and is jobs-independent") {
  const std::string cfg = tmp("cli_cfg.json");
  std::ofstream(cfg) << R"({"mode":"eta_delta","n":20,"formulations":["l1box"],
    "distributions":["D1"],"trials_per_cell":5,"base_seed":3,
    "m_list":[10,16],"k_list":[4]})";
  const std::string d1 = tmp("cli_sweep1"), d2 = tmp("cli_sweep2");
  REQUIRE(run("sweep --config " + cfg + " --out " + d1 + " --jobs 1").exit_code == 0);
  REQUIRE(run("sweep --config " + cfg + " --out " + d2 + " --jobs 8").exit_code == 0);
  const std::string t1 = slurp(d1 + "/results.csv");
  CHECK(t1 == slurp(d2 + "/results.csv"));
  CHECK(t1.find("l1box") != std::string::npos);
  CHECK(std::filesystem::exists(d1 + "/manifest.json"));
}

TEST_CASE("malformed sweep configs name the field and exit nonzero") {
  const std::string cfg = tmp("cli_bad_cfg.json");
  std::ofstream(cfg) << R"({"n":20,"formulations":["l1box"],"distributions":["D1"]})";
  const RunResult res = run("sweep --config " + cfg);
  CHECK(res.exit_code == 1);
  CHECK(res.out.find("mode") != std::string::npos);
}

TEST_CASE("report and plot run on a sweep table") {
  const std::string cfg = tmp("cli_cfg2.json");
  std::ofstream(cfg) << R"({"mode":"eta_delta","n":20,"formulations":["l1box"],
    "distributions":["D1"],"trials_per_cell":10,"base_seed":9,
    "m_list":[2,6,10,14,18],"k_list":[4]})";
  const std::string dir = tmp("cli_sweep3");
  REQUIRE(run("sweep --config " + cfg + " --out " + dir).exit_code == 0);
  REQUIRE(run("report --table " + dir + "/results.csv --levels 0.5 --fit --out " + dir)
              .exit_code == 0);
  CHECK(std::filesystem::exists(dir + "/levelset_D1_l1box_0.5.csv"));
  CHECK(std::filesystem::exists(dir + "/fit_D1_l1box.csv"));

  const std::string svg = tmp("cli_plot.svg");
  REQUIRE(run("plot --table " + dir + "/results.csv --out " + svg + " --fit").exit_code == 0);
  const std::string body = slurp(svg);
  CHECK(body.find("<svg") != std::string::npos);
  // rerun is byte-identical
  const std::string svg2 = tmp("cli_plot2.svg");
  REQUIRE(run("plot --table " + dir + "/results.csv --out " + svg2 + " --fit").exit_code == 0);
  CHECK(body == slurp(svg2));
}
