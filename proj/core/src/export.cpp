#include "fevo/export.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "fevo/error.hpp"
#include "json.hpp"

namespace fevo {

std::string_view to_string(ExportFormat f) { return f == ExportFormat::CSV ? "csv" : "jsonl"; }

ExportFormat parse_export_format(std::string_view s) {
  if (s == "csv") return ExportFormat::CSV;
  if (s == "jsonl") return ExportFormat::JSONL;
  throw ValidationError("unknown export format '" + std::string(s) + "' (expected csv|jsonl)");
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

namespace {

void require_samples(const Trajectory& traj) {
  if (traj.samples.empty()) throw EmptyTrajectory("cannot export an empty trajectory");
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  require_samples(traj);
  const bool opd = traj.layout.kind == GameKind::OPD;
  os << (opd ? "t,x1,x2,n\n" : "t,x1,n\n");
  for (const auto& s : traj.samples) {
    os << format_double(s.t) << ',' << format_double(s.x[0]) << ',';
    if (opd) os << format_double(s.x[1]) << ',';
    os << format_double(s.n) << '\n';
  }
}

void write_trajectory_jsonl(const Trajectory& traj, std::ostream& os) {
  require_samples(traj);
  const bool opd = traj.layout.kind == GameKind::OPD;
  for (const auto& s : traj.samples) {
    os << "{\"t\":" << format_double(s.t) << ",\"x1\":" << format_double(s.x[0]);
    if (opd) os << ",\"x2\":" << format_double(s.x[1]);
    os << ",\"n\":" << format_double(s.n) << "}\n";
  }
}

void export_trajectory(const Trajectory& traj, ExportFormat format, const std::filesystem::path& path) {
  require_samples(traj);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (format == ExportFormat::CSV) write_trajectory_csv(traj, out);
  else write_trajectory_jsonl(traj, out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Trajectory read_trajectory_jsonl(std::istream& is, bool feedback) {
  Trajectory traj;
  std::string line;
  int line_no = 0;
  bool kind_known = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    const bool opd = j.contains("x2");
    if (!kind_known) {
      traj.layout = {opd ? GameKind::OPD : GameKind::PD, feedback};
      kind_known = true;
    } else if (opd != (traj.layout.kind == GameKind::OPD)) {
      throw ParseError(line_no, "mixed PD and OPD samples");
    }
    try {
      PopulationState s;
      s.t = j.at("t").get<double>();
      s.x.push_back(j.at("x1").get<double>());
      if (opd) s.x.push_back(j.at("x2").get<double>());
      s.n = j.at("n").get<double>();
      traj.samples.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return traj;
}

Trajectory import_trajectory_jsonl(const std::filesystem::path& path, bool feedback) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_trajectory_jsonl(in, feedback);
}

void write_phase_grid_csv(const std::vector<GridSample>& grid, const Layout& layout, std::ostream& os) {
  const bool opd = layout.kind == GameKind::OPD;
  os << (opd ? "x1,x2,n,dx1,dx2,dn\n" : "x1,n,dx1,dn\n");
  for (const auto& g : grid) {
    os << format_double(g.state.x[0]) << ',';
    if (opd) os << format_double(g.state.x[1]) << ',';
    os << format_double(g.state.n) << ',' << format_double(g.derivative.dx[0]) << ',';
    if (opd) os << format_double(g.derivative.dx[1]) << ',';
    os << format_double(g.derivative.dn) << '\n';
  }
}

}  // namespace fevo
