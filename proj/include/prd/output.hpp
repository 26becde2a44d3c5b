// Plain-text writers for trajectories and reports. All numbers are printed
// with 17 significant digits so files are byte-identical across runs of the
// same configuration.
#pragma once

#include <optional>
#include <string>

#include "prd/diagnostics.hpp"
#include "prd/solver.hpp"

namespace prd {

std::string format_double(double x);

/// Scalar time series as CSV with columns t,U,v,w,P,conservation_residual.
void write_scalars(const std::string& path, const Trajectory<double>& traj);

/// One snapshot as CSV with columns x,u,r, preceded by a "# t = ..." line.
void write_snapshot(const std::string& path, const SystemState<double>& s);

/// Key-value report: terminal quantities, monitors, and (when available)
/// the asymptotics block and the stationary pattern.
void write_report(const std::string& path, const Trajectory<double>& traj,
                  const std::optional<AsymptoticsReport<double>>& asymptotics,
                  const std::optional<PhenotypePattern<double>>& pattern,
                  const std::string& pattern_note);

}  // namespace prd
