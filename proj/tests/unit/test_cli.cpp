#include "prd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "prd/config.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

prd::RunConfig small_config(const std::string& out_dir) {
  prd::RunConfig cfg;
  cfg.params = {0.1, 0.4, 1.0, 33, 1e-3, 0.5};
  cfg.u0 = {prd::U0Spec::Kind::constant, 1.0, {}};
  cfg.v0 = 1.0;
  cfg.w0 = 0.0;
  cfg.a0 = {{0.1, 0.4}};
  cfg.out_dir = out_dir;
  cfg.stride = 100;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate writes scalar series, snapshots, and a report") {
  TempDir tmp("prd_cli_basic");
  std::ostringstream err;
  REQUIRE(prd::cmd_simulate(small_config(tmp.path.string()), err) == 0);
  CHECK(err.str().empty());

  const std::string scalars = slurp(tmp.path / "scalars.csv");
  CHECK(scalars.rfind("t,U,v,w,P,conservation_residual\n", 0) == 0);
  // Header plus one row per step plus the initial row.
  CHECK(std::count(scalars.begin(), scalars.end(), '\n') == 502);

  CHECK(fs::exists(tmp.path / "snapshot_000000.csv"));
  CHECK(fs::exists(tmp.path / "snapshot_000005.csv"));
  const std::string snap = slurp(tmp.path / "snapshot_000000.csv");
  CHECK(snap.find("x,u,r\n") != std::string::npos);

  const std::string report = slurp(tmp.path / "report.txt");
  CHECK(report.find("decay_margin = ") != std::string::npos);
  CHECK(report.find("clamp_events = 0") != std::string::npos);
}

TEST_CASE("zero-population runs keep v and w columns constant") {
  TempDir tmp("prd_cli_zero");
  auto cfg = small_config(tmp.path.string());
  cfg.u0.value = 0.0;
  std::ostringstream err;
  REQUIRE(prd::cmd_simulate(cfg, err) == 0);

  std::ifstream in(tmp.path / "scalars.csv");
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // t
    std::getline(row, cell, ',');  // U
    CHECK(cell == "0");
    std::getline(row, cell, ',');  // v
    CHECK(cell == "1");
    std::getline(row, cell, ',');  // w
    CHECK(cell == "0");
  }
}

TEST_CASE("simulate output is byte-identical across repeated runs") {
  TempDir tmp_a("prd_cli_det_a");
  TempDir tmp_b("prd_cli_det_b");
  std::ostringstream err;
  REQUIRE(prd::cmd_simulate(small_config(tmp_a.path.string()), err) == 0);
  REQUIRE(prd::cmd_simulate(small_config(tmp_b.path.string()), err) == 0);
  CHECK(slurp(tmp_a.path / "scalars.csv") == slurp(tmp_b.path / "scalars.csv"));
  CHECK(slurp(tmp_a.path / "report.txt") == slurp(tmp_b.path / "report.txt"));
  CHECK(slurp(tmp_a.path / "snapshot_000002.csv") ==
        slurp(tmp_b.path / "snapshot_000002.csv"));
}

TEST_CASE("strict mode exits nonzero when an invariant is forced to break") {
  TempDir tmp("prd_cli_strict");
  prd::RunConfig cfg;
  cfg.params = {0.49, 0.499, 1.0, 33, 0.7, 2.1};
  cfg.u0 = {prd::U0Spec::Kind::constant, 200.0, {}};
  cfg.v0 = 1.0;
  cfg.w0 = 0.4;
  cfg.a0 = {};
  cfg.out_dir = tmp.path.string();
  cfg.strict_mode = true;
  std::ostringstream err;
  CHECK(prd::cmd_simulate(cfg, err) == 2);
  CHECK(err.str().find("invariant breach") != std::string::npos);

  cfg.strict_mode = false;
  std::ostringstream err2;
  CHECK(prd::cmd_simulate(cfg, err2) == 0);
  const std::string report = slurp(tmp.path / "report.txt");
  CHECK(report.find("clamp_events = 0") == std::string::npos);
}

TEST_CASE("verification exit code flags any hard failure") {
  std::vector<prd::CriterionResult> results{
      {"1", "a", true, false, ""},
      {"10", "b", false, true, ""},  // advisory only
  };
  CHECK(prd::verification_exit_code(results) == 0);
  results.push_back({"2", "c", false, false, ""});
  CHECK(prd::verification_exit_code(results) == 1);

  std::ostringstream out;
  prd::print_verification(results, out);
  CHECK(out.str().find("[WARN] criterion 10") != std::string::npos);
  CHECK(out.str().find("[FAIL] criterion 2") != std::string::npos);
  CHECK(out.str().find("verification FAILED") != std::string::npos);
}
