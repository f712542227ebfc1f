#pragma once

// Executes a scenario: integrates every (protocol, initial condition) pair,
// runs the requested analyses and writes trajectories and reports.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fevo/equilibria.hpp"
#include "fevo/export.hpp"
#include "fevo/oscillation.hpp"
#include "fevo/scenario.hpp"

namespace fevo {

struct RunOptions {
  std::vector<ExportFormat> formats{ExportFormat::CSV};
  std::function<void(const std::string&)> on_log;  // called once per log line, in order
};

struct TrajectoryResult {
  Protocol protocol = Protocol::Replicator;
  std::size_t ic_index = 0;  // 1-based
  PopulationState initial;
  PopulationState final_state;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t clamp_events = 0;
  double max_simplex_drift = 0.0;
  std::optional<OscillationReport> oscillation;
  std::string oscillation_note;
  std::vector<std::string> files;
};

struct ProtocolAnalysis {
  Protocol protocol = Protocol::Replicator;
  std::string field;
  std::vector<FixedPointReport> catalog;
  std::vector<FixedPointReport> search;  // empty unless fixed_points is requested
};

struct RunSummary {
  std::string scenario;
  std::vector<TrajectoryResult> trajectories;
  std::vector<ProtocolAnalysis> analyses;
  std::vector<std::string> files;
  std::vector<std::string> log;
};

// Fixed-point catalog (always) and numerical search (when requested) per protocol.
std::vector<ProtocolAnalysis> analyze(const Scenario& s);

// Writes into out_dir (created if needed):
//   trajectory_<protocol>_<k>.{csv,jsonl}, fixed_points.json,
//   phase_grid_<protocol>.csv (if requested), summary.json, run.log.
// Identical inputs produce identical files.
RunSummary run(const Scenario& s, const std::filesystem::path& out_dir, const RunOptions& opts = {});

std::string fixed_points_json(const Scenario& s, const std::vector<ProtocolAnalysis>& a);
std::string summary_json(const Scenario& s, const RunSummary& r);

}  // namespace fevo
