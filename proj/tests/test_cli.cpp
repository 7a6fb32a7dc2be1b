#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

// End-to-end checks of the command-line surface, including the documented
// exit codes: 0 ok, 2 config error, 3 non-convergence.

#ifndef VISCO_CLI_PATH
#define VISCO_CLI_PATH "./visco-emc"
#endif

namespace {

int run_cli(const std::string& args) {
  const int status = std::system((std::string(VISCO_CLI_PATH) + " " + args +
                                  " > cli_test.log 2>&1")
                                     .c_str());
  return WEXITSTATUS(status);
}

void write_mini_config(const std::string& path, const std::string& solver_extra = "") {
  std::ofstream out(path);
  out << "[mesh]\ntype = box\nlengths = 1 1 1\ndivisions = 1 1 1\n"
         "[material]\nrho0 = 1000\nc1 = 4166.67\nc2 = 4166.67\nbranches = 1\n"
         "branch1.kind = hs\nbranch1.mu = 4166.67\nbranch1.eta = 416.667\n"
         "[loads]\ntraction = xmax -250 100 -300 hat(2.5, 5)\n"
         "[solver]\ndt = 0.02\nT = 0.1\nscheme = 2\n"
      << solver_extra << "[output]\ncsv = mini.csv\n";
}

}  // namespace

TEST_CASE("run completes a small problem and writes the CSV") {
  write_mini_config("cli_mini.cfg");
  CHECK(run_cli("run cli_mini.cfg --out cli_out") == 0);
  std::ifstream csv("cli_out/mini.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("t,K,Pot,H", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("scheme and dt overrides are honored") {
  write_mini_config("cli_mini.cfg");
  CHECK(run_cli("run cli_mini.cfg --out cli_out2 --scheme mp --dt 0.05") == 0);
  std::ifstream csv("cli_out2/mini.csv");
  int rows = -1;  // header
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("configuration errors exit with code 2") {
  {
    std::ofstream out("cli_bad.cfg");
    out << "[mesh]\ntype = box\n";
  }
  CHECK(run_cli("run cli_bad.cfg") == 2);
  CHECK(run_cli("run does_not_exist.cfg") == 2);
}

TEST_CASE("non-convergence exits with code 3") {
  write_mini_config("cli_stall.cfg", "l_max = 1\ntol_R = 1e-15\ntol_A = 1e-16\n");
  // a single corrector pass cannot reach those tolerances on a loaded step
  CHECK(run_cli("run cli_stall.cfg --out cli_out3 --dt 0.1") == 3);
}

TEST_CASE("verify-tangent reports success") {
  CHECK(run_cli("verify-tangent --samples 3") == 0);
}

TEST_CASE("material-point rate table") {
  CHECK(run_cli("material-point --scheme 2 --dts 4e-3,2e-3 --overkill 2e-4 --tend 0.05") ==
        0);
}
