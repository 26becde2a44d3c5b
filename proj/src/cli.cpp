#include "prd/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>

#include "prd/diagnostics.hpp"
#include "prd/errors.hpp"
#include "prd/output.hpp"
#include "prd/solver.hpp"

namespace prd {

namespace {

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%06zu.csv", index);
  return buf;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& err) {
  namespace fs = std::filesystem;
  try {
    const auto init = resolve_initial_data(cfg);
    RunOptions opts;
    opts.stride = cfg.stride;
    opts.strict = cfg.strict_mode;
    const auto traj = run(cfg.params, init, opts);

    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    write_scalars((dir / "scalars.csv").string(), traj);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      write_snapshot((dir / snapshot_name(i)).string(), traj.snapshots[i]);
    }

    if (cfg.write_report) {
      std::optional<AsymptoticsReport<double>> asymptotics;
      const double u0_mass = traj.initial_mass;
      if (cfg.params.x_hi < 0.5 && u0_mass > 0 && !cfg.allow_nonphysical) {
        asymptotics = make_asymptotics_report(
            traj, init, 8, decay_delta(cfg.params, cfg.w0));
      }
      std::optional<PhenotypePattern<double>> pattern;
      std::string note;
      try {
        pattern = extract_pattern(traj, 0.1 * cfg.params.t_end);
      } catch (const NotStationary& e) {
        note = e.what();
      }
      write_report((dir / "report.txt").string(), traj, asymptotics, pattern,
                   note);
    }
    return 0;
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_verify(VerifyLevel level, std::uint64_t seed, std::ostream& out) {
  const auto results = run_verification(level, seed);
  print_verification(results, out);
  return verification_exit_code(results);
}

}  // namespace prd
