#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "choquard/cli.hpp"

using namespace choquard;

TEST_SUITE_BEGIN("cli");

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the installed binary; stdout captured through a temp file.
RunResult run_binary(const std::string& args) {
  const std::string out_file = "/tmp/choquard_cli_test_out.txt";
  const std::string cmd =
      std::string(CHOQUARD_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

}  // namespace

TEST_CASE("constants command emits the oracle table") {
  const RunResult r = run_binary("--N 5 --mu 4 constants");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("# choquard-bubbles v1", 0) == 0);
  CHECK(r.output.find("J_N,") != std::string::npos);
  CHECK(r.output.find("B0_geom,") != std::string::npos);
  // Every rel_diff column entry is small.
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);  // schema
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto pos = line.rfind(',');
    REQUIRE(pos != std::string::npos);
    const double rel = std::stod(line.substr(pos + 1));
    CHECK(rel <= 1e-7);
  }
}

TEST_CASE("invalid parameters exit with code 2") {
  CHECK(run_binary("--N 4 constants").exit_code == 2);
  CHECK(run_binary("--mu 0 constants").exit_code == 2);
  CHECK(run_binary("--mu 4.5 constants").exit_code == 2);
}

TEST_CASE("scan: 1x1 grid matches reduced_F directly") {
  const RunResult r = run_binary("--N 5 --mu 4 --k 8 scan --grid 1x1");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string schema, header, row;
  std::getline(lines, schema);
  std::getline(lines, header);
  CHECK(header == "r,Lambda,lambda,F_exact_sum,F_asymptotic,dF_dlambda");
  REQUIRE(std::getline(lines, row));
  double vals[6];
  std::replace(row.begin(), row.end(), ',', ' ');
  std::istringstream rs(row);
  for (double& v : vals) rs >> v;
  const ProblemParams params(5, 4.0);
  const EnergyConstants consts = energy_constants(params);
  const RadialPotential pot = RadialPotential::from_json(
      R"({"family":"gaussian_bump","a":0.1,"b":1.0,"r0":1.0,"w":0.2})");
  CHECK(vals[3] ==
        doctest::Approx(reduced_F(8, vals[0], vals[2], pot, consts)).epsilon(1e-10));
  CHECK(vals[4] ==
        doctest::Approx(reduced_F(8, vals[0], vals[2], pot, consts, true))
            .epsilon(1e-10));
  // No further rows.
  CHECK_FALSE(std::getline(lines, row));
}

TEST_CASE("scan: lambda column is monotone within each r block") {
  const RunResult r = run_binary("--N 5 --mu 4 --k 8 scan --grid 3x7");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  double prev_r = -1.0, prev_lambda = -1.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream rs(line);
    double rr, Lam, lam;
    rs >> rr >> Lam >> lam;
    if (rr == prev_r) CHECK(lam > prev_lambda);
    prev_r = rr;
    prev_lambda = lam;
    ++rows;
  }
  CHECK(rows == 21);
}

TEST_CASE("scan: interior maximum of F on a gaussian bump grid") {
  const RunResult r = run_binary("--N 5 --mu 4 --k 16 scan --grid 21x21");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::vector<std::array<double, 4>> rows;
  while (std::getline(lines, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream rs(line);
    std::array<double, 4> v{};
    rs >> v[0] >> v[1] >> v[2] >> v[3];
    rows.push_back(v);
  }
  REQUIRE(rows.size() == 21u * 21u);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][3] > rows[best][3]) best = i;
  const std::size_t ri = best / 21, li = best % 21;
  CHECK(ri > 0);
  CHECK(ri < 20);
  CHECK(li > 0);
  CHECK(li < 20);
}

TEST_CASE("critical-point command") {
  const RunResult r = run_binary("--N 5 --mu 4 --k 64 critical-point --case max");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"classification\": \"max\"") != std::string::npos);
  CHECK(r.output.find("\"schema\"") != std::string::npos);

  const RunResult s = run_binary(
      "--N 5 --mu 4 --k 64 --potential "
      "'{\"family\":\"gaussian_well\",\"a\":0.05,\"b\":1.0,\"r0\":1.0,\"w\":0.2}' "
      "critical-point --case saddle");
  CHECK(s.exit_code == 0);
  CHECK(s.output.find("\"classification\": \"saddle\"") != std::string::npos);
  CHECK(s.output.find("\"bracket\"") != std::string::npos);

  // Constant potential: hypothesis not met, exit 4.
  const RunResult c = run_binary(
      "--N 5 --mu 4 --k 16 --r0 1.0 --potential "
      "'{\"family\":\"constant\",\"a\":0.3}' critical-point --case max");
  CHECK(c.exit_code == 4);
}

TEST_CASE("verify suite exits 1 on failure") {
  // The kernel suite with a 1% amplitude perturbation must fail.
  const RunResult bad =
      run_binary("--N 5 --mu 4 --alpha-scale 1.01 verify --suite kernel");
  CHECK(bad.exit_code == 1);
  const RunResult good = run_binary("--N 5 --mu 4 verify --suite kernel");
  CHECK(good.exit_code == 0);
}

TEST_CASE("outputs are byte-identical for a fixed seed") {
  const RunResult a = run_binary("--N 5 --mu 4 --k 8 --seed 42 scan --grid 5x5");
  const RunResult b = run_binary("--N 5 --mu 4 --k 8 --seed 42 scan --grid 5x5");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("config file with flag override") {
  const std::string path = "/tmp/choquard_cli_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"N":5,"mu":4.0,"k":4,"seed":7})";
  }
  const RunResult r =
      run_binary("--config " + path + " --k 6 scan --grid 1x3");
  CHECK(r.exit_code == 0);
  // k = 6 (flag) wins over k = 4 (file): check via library reproduction.
  const ProblemParams params(5, 4.0);
  const EnergyConstants consts = energy_constants(params);
  const RadialPotential pot = RadialPotential::from_json(
      R"({"family":"gaussian_bump","a":0.1,"b":1.0,"r0":1.0,"w":0.2})");
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  REQUIRE(std::getline(lines, line));
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream rs(line);
  double rr, Lam, lam, fexact;
  rs >> rr >> Lam >> lam >> fexact;
  CHECK(fexact ==
        doctest::Approx(reduced_F(6, rr, lam, pot, consts)).epsilon(1e-10));
}

TEST_CASE("output file writing and I/O failure") {
  const RunResult ok = run_binary("--N 5 --mu 4 --k 4 --out /tmp/choquard_scan.csv scan --grid 2x2");
  CHECK(ok.exit_code == 0);
  std::ifstream in("/tmp/choquard_scan.csv");
  CHECK(in.good());
  const RunResult bad =
      run_binary("--N 5 --mu 4 --out /nonexistent_dir/x.csv scan --grid 1x1");
  CHECK(bad.exit_code == 3);
}

TEST_SUITE_END();
