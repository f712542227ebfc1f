#pragma once

// Trajectory and phase-grid serialization for plotting and regression data.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fevo/integrator.hpp"

namespace fevo {

enum class ExportFormat { CSV, JSONL };

std::string_view to_string(ExportFormat f);
ExportFormat parse_export_format(std::string_view s);  // "csv" | "jsonl"

// 17 significant digits, '.' decimal point regardless of locale.
std::string format_double(double v);

// Header "t,x1,n" (PD) or "t,x1,x2,n" (OPD). Throws EmptyTrajectory.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
// One {"t":..,"x1":..[,"x2":..],"n":..} object per line. Throws EmptyTrajectory.
void write_trajectory_jsonl(const Trajectory& traj, std::ostream& os);

// Writes to `path`; throws EmptyTrajectory or IoError.
void export_trajectory(const Trajectory& traj, ExportFormat format, const std::filesystem::path& path);

// Reads samples back. The game kind is inferred from the keys; feedback is
// not recorded in the file and is taken from the argument.
Trajectory read_trajectory_jsonl(std::istream& is, bool feedback = true);
Trajectory import_trajectory_jsonl(const std::filesystem::path& path, bool feedback = true);

// Rows: coordinates followed by derivatives, e.g. "x1,n,dx1,dn".
void write_phase_grid_csv(const std::vector<GridSample>& grid, const Layout& layout, std::ostream& os);

}  // namespace fevo
