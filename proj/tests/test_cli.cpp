#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "doctest.h"
#include "json.hpp"
#include "mecdep/vm_optimizer.hpp"

using namespace mecdep;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mec-depend");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("osp") {
    auto r = run({"osp"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["osp"].get<double>() == doctest::Approx(0.83).epsilon(0.02));
    r = run({"osp", "--theta-db", "-60"});
    CHECK(nlohmann::json::parse(r.out)["osp"].get<double>() == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("config errors exit with status 2") {
    std::string path = "cli_test_bad.json";
    std::ofstream(path) << "{\"lambda_b\": 0.1,\n \"eta\": }";
    auto r = run({"--config", path, "osp"});
    CHECK(r.code == 2);
    CHECK(r.err.find("byte offset") != std::string::npos);
    std::remove(path.c_str());
    CHECK(run({"--set", "eta=1", "osp"}).code == 2);
    CHECK(run({"sweep", "--param", "nope", "--start", "0", "--stop", "1", "--step", "1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
  }

  TEST_CASE("undefined TER exits with status 4") {
    auto r = run({"--set", "lambda_a=0", "kpis"});
    CHECK(r.code == 4);
    CHECK(r.err.find("TER") != std::string::npos);
  }

  TEST_CASE("kpis") {
    auto r = run({"--set", "delta_fail=0", "kpis"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["ter"].get<double>() == 1.0);
    r = run({"kpis", "--verbose"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["mec"]["steady_state"]["states"].size() == 21);
  }

  TEST_CASE("optimize") {
    auto r = run({"optimize", "--osp", "0.83", "--set", "deg_factor=5"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["m_star"].get<int>() == 1);
    CHECK(j["trace"].size() == 2);
  }

  TEST_CASE("sweeps") {
    auto r = run({"--set", "delta_fail=0", "sweep", "--param", "gamma_repair", "--start", "0",
                  "--stop", "5", "--step", "0.25", "--kpis", "ter"});
    REQUIRE(r.code == 0);
    auto rows = csv(r.out);
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == std::vector<std::string>{"gamma_repair", "ter"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] == "1");

    r = run({"sweep", "--param", "m_mec", "--start", "2", "--stop", "12", "--step", "2",
             "--kpis", "tec", "--osp", "0.83"});
    REQUIRE(r.code == 0);
    rows = csv(r.out);
    auto scan = opt::exhaustive_scan(validate(SystemParams{}), 0.83, 12);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      int m = std::stoi(rows[i][0]);
      CHECK(rows[i][1] == cli::format_number(scan[m - 1]));
    }
    CHECK(r.out.find('\r') == std::string::npos);
  }

  TEST_CASE("osp-verify") {
    auto a = run({"--trials", "1", "osp-verify", "--theta-start", "-10", "--theta-stop", "-10",
                  "--window-km", "30"});
    REQUIRE(a.code == 0);
    auto rows = csv(a.out);
    CHECK(rows[0] == std::vector<std::string>{"theta_db", "osp_analytical", "osp_sim", "stderr",
                                              "abs_diff"});
    CHECK(rows[1][3] == "0.5");
    std::vector<std::string> args = {"--trials", "300", "--seed", "9", "osp-verify",
                                     "--theta-step", "10", "--window-km", "30"};
    CHECK(run(args).out == run(args).out);
  }

  TEST_CASE("selftest") { CHECK(run({"selftest"}).code == 0); }

  TEST_CASE("number formatting") {
    CHECK(cli::format_number(0.1) == "0.1");
    CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(cli::SweepSpec{"x", 0.0, 1.0, 0.1}.values().size() == 11);
  }
}
