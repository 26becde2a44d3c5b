#include "prd/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace prd {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_scalars(const std::string& path, const Trajectory<double>& traj) {
  auto out = open_or_throw(path);
  out << "t,U,v,w,P,conservation_residual\n";
  for (std::size_t i = 0; i < traj.scalars.size(); ++i) {
    out << format_double(traj.scalars.t[i]) << ','
        << format_double(traj.scalars.total[i]) << ','
        << format_double(traj.scalars.v[i]) << ','
        << format_double(traj.scalars.w[i]) << ','
        << format_double(traj.scalars.preisach_out[i]) << ','
        << format_double(traj.scalars.residual[i]) << '\n';
  }
}

void write_snapshot(const std::string& path, const SystemState<double>& s) {
  auto out = open_or_throw(path);
  out << "# t = " << format_double(s.t) << "\n";
  out << "x,u,r\n";
  const auto r = relay_field<double>(s.a, s.u.grid());
  for (Eigen::Index i = 0; i < s.u.size(); ++i) {
    out << format_double(s.u.grid()[i]) << ','
        << format_double(s.u.values()[i]) << ','
        << (r[i] > 0 ? "1" : "-1") << '\n';
  }
}

void write_report(const std::string& path, const Trajectory<double>& traj,
                  const std::optional<AsymptoticsReport<double>>& asymptotics,
                  const std::optional<PhenotypePattern<double>>& pattern,
                  const std::string& pattern_note) {
  auto out = open_or_throw(path);
  out << "t_final = " << format_double(traj.final_state.t) << "\n";
  out << "U_final = " << format_double(total_mass(traj.final_state.u)) << "\n";
  out << "v_final = " << format_double(traj.final_state.v) << "\n";
  out << "w_final = " << format_double(traj.final_state.w) << "\n";
  out << "initial_total = " << format_double(traj.initial_total) << "\n";
  out << "max_conservation_residual = "
      << format_double(traj.monitors.max_abs_residual) << "\n";
  out << "clamp_events = " << traj.monitors.clamp_events << "\n";
  out << "negative_density_samples = "
      << traj.monitors.negative_density_samples << "\n";
  out << "positivity_breaches = " << traj.monitors.positivity_breaches << "\n";
  out << "compatibility_breaches = " << traj.monitors.compatibility_breaches
      << "\n";
  out << "last_state_change_time = "
      << format_double(traj.last_state_change_time) << "\n";

  if (asymptotics) {
    out << "decay_margin = " << format_double(asymptotics->decay_margin)
        << "\n";
    out << "uniform_distance = "
        << format_double(asymptotics->uniform_distance) << "\n";
    for (Eigen::Index k = 0; k < asymptotics->mode_energy.size(); ++k) {
      out << "mode_energy_" << k << " = "
          << format_double(asymptotics->mode_energy[k]) << "\n";
    }
  } else {
    out << "decay_margin = n/a\n";
  }

  if (pattern) {
    out << "pattern_stationary = true\n";
    out << "pattern_n_intervals = " << pattern->n_intervals << "\n";
    int idx = 0;
    for (const auto& p : pattern->a1.parts()) {
      out << "pattern_interval_" << idx++ << " = [" << format_double(p.lo)
          << "," << format_double(p.hi) << "]\n";
    }
  } else {
    out << "pattern_stationary = false\n";
  }
  if (!pattern_note.empty()) out << "pattern_note = " << pattern_note << "\n";
}

}  // namespace prd
