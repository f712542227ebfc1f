#include "fevo/runner.hpp"

#include <future>
#include <fstream>
#include <sstream>

#include "fevo/error.hpp"
#include "json.hpp"

namespace fevo {

using nlohmann::ordered_json;

namespace {

ordered_json state_json(const PopulationState& s) {
  ordered_json j;
  j["x"] = s.x;
  j["n"] = s.n;
  return j;
}

ordered_json report_json(const FixedPointReport& r, bool with_jacobian) {
  ordered_json j;
  j["label"] = r.label;
  j["coordinates"] = r.coordinates;
  j["provenance"] = to_string(r.provenance);
  j["residual"] = r.residual;
  j["in_domain"] = r.in_domain;
  j["rejected"] = r.rejected;
  if (!r.note.empty()) j["note"] = r.note;
  if (r.jacobian.rows() == 0) return j;
  j["class"] = to_string(r.cls);
  j["saddle"] = r.saddle;
  j["nonsmooth"] = r.nonsmooth;
  j["jacobian_mode"] = to_string(r.jacobian_mode);
  ordered_json ev = ordered_json::array();
  for (const auto& e : r.eigenvalues) ev.push_back({e.real(), e.imag()});
  j["eigenvalues"] = ev;
  if (with_jacobian) {
    ordered_json m = ordered_json::array();
    for (std::size_t i = 0; i < r.jacobian.rows(); ++i) {
      std::vector<double> row;
      for (std::size_t c = 0; c < r.jacobian.cols(); ++c) row.push_back(r.jacobian(i, c));
      m.push_back(row);
    }
    j["jacobian"] = m;
  }
  return j;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

std::string point_text(const PopulationState& s) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (double v : s.x) os << v << ", ";
  os << "n=" << s.n << ')';
  return os.str();
}

}  // namespace

std::vector<ProtocolAnalysis> analyze(const Scenario& s) {
  std::vector<ProtocolAnalysis> out;
  for (Protocol p : s.protocols) {
    const Model m = s.model(p);
    const VectorField f = general_field(m);
    ProtocolAnalysis a;
    a.protocol = p;
    a.field = f.name;
    a.catalog = catalog_fixed_points(m, f);
    if (s.analyses.fixed_points) a.search = find_fixed_points(f, SearchDomain::unit(f.layout), s.analyses.search_resolution);
    out.push_back(std::move(a));
  }
  return out;
}

std::string fixed_points_json(const Scenario& s, const std::vector<ProtocolAnalysis>& a) {
  ordered_json j;
  j["scenario"] = s.name;
  ordered_json systems = ordered_json::array();
  for (const auto& pa : a) {
    ordered_json sys;
    sys["protocol"] = to_string(pa.protocol);
    sys["field"] = pa.field;
    ordered_json cat = ordered_json::array(), found = ordered_json::array();
    for (const auto& r : pa.catalog) cat.push_back(report_json(r, s.analyses.jacobians));
    for (const auto& r : pa.search) found.push_back(report_json(r, s.analyses.jacobians));
    sys["catalog"] = cat;
    sys["search"] = found;
    systems.push_back(sys);
  }
  j["systems"] = systems;
  return j.dump(2) + "\n";
}

std::string summary_json(const Scenario& s, const RunSummary& r) {
  ordered_json j;
  j["scenario"] = s.name;
  j["game"] = to_string(s.game.kind);
  j["feedback"] = s.coupling.has_value();
  j["rule"] = to_string(s.rule);
  j["method"] = to_string(s.integrator.method);
  j["t_end"] = s.integrator.t_end;
  j["warnings"] = s.warnings;
  ordered_json runs = ordered_json::array();
  for (const auto& t : r.trajectories) {
    ordered_json e;
    e["protocol"] = to_string(t.protocol);
    e["ic"] = t.ic_index;
    e["initial"] = state_json(t.initial);
    e["final"] = state_json(t.final_state);
    e["t_final"] = t.final_state.t;
    e["accepted_steps"] = t.accepted_steps;
    e["rejected_steps"] = t.rejected_steps;
    e["clamp_events"] = t.clamp_events;
    e["max_simplex_drift"] = t.max_simplex_drift;
    if (t.oscillation) {
      const auto& o = *t.oscillation;
      ordered_json oj;
      oj["oscillating"] = o.oscillating;
      oj["extrema"] = o.extrema_count;
      oj["trend"] = to_string(o.amplitude_trend);
      oj["mean_amplitude"] = o.mean_amplitude;
      if (o.estimated_period) oj["period"] = *o.estimated_period;
      if (o.drift_per_period) oj["drift_per_period"] = *o.drift_per_period;
      e["oscillation"] = oj;
    } else if (!t.oscillation_note.empty()) {
      e["oscillation"] = {{"note", t.oscillation_note}};
    }
    e["files"] = t.files;
    runs.push_back(e);
  }
  j["trajectories"] = runs;
  ordered_json cls = ordered_json::array();
  for (const auto& pa : r.analyses) {
    for (const auto* list : {&pa.catalog, &pa.search}) {
      for (const auto& fp : *list) {
        if (fp.rejected) continue;
        cls.push_back({{"protocol", to_string(pa.protocol)},
                       {"provenance", to_string(fp.provenance)},
                       {"point", fp.coordinates},
                       {"in_domain", fp.in_domain},
                       {"class", to_string(fp.cls)},
                       {"saddle", fp.saddle}});
      }
    }
  }
  j["fixed_points"] = cls;
  j["files"] = r.files;
  return j.dump(2) + "\n";
}

RunSummary run(const Scenario& s, const std::filesystem::path& out_dir, const RunOptions& opts) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  }

  RunSummary summary;
  summary.scenario = s.name;
  auto log = [&](const std::string& line) {
    summary.log.push_back(line);
    if (opts.on_log) opts.on_log(line);
  };
  log("scenario " + s.name + ": " + std::string(to_string(s.game.kind)) +
      (s.coupling ? ", feedback on" : ", feedback off") + ", " + std::to_string(s.initial_conditions.size()) +
      " initial condition(s), t_end " + format_double(s.integrator.t_end));
  for (const auto& w : s.warnings) log("warning: " + w);

  struct Job {
    Protocol protocol;
    std::size_t k;
  };
  std::vector<Job> jobs;
  for (Protocol p : s.protocols)
    for (std::size_t k = 0; k < s.initial_conditions.size(); ++k) jobs.push_back({p, k});

  auto work = [&](Job job) {
    const VectorField f = general_field(s.model(job.protocol));
    PopulationState ic = s.initial_conditions[job.k];
    ic.t = 0.0;
    Trajectory traj = integrate(f, ic, s.integrator);
    TrajectoryResult r;
    r.protocol = job.protocol;
    r.ic_index = job.k + 1;
    r.initial = ic;
    r.final_state = traj.back();
    r.accepted_steps = traj.accepted_steps;
    r.rejected_steps = traj.rejected_steps;
    r.clamp_events = traj.events.size();
    r.max_simplex_drift = traj.max_simplex_drift;
    if (s.analyses.oscillation) {
      const double window = s.analyses.oscillation_window > 0.0 ? s.analyses.oscillation_window : s.integrator.t_end / 3.0;
      try {
        r.oscillation = detect_oscillation(traj, 0, window);
      } catch (const InsufficientData& e) {
        r.oscillation_note = e.what();
      }
    }
    const Trajectory& out = s.analyses.output_interval > 0.0 ? resample_uniform(traj, s.analyses.output_interval) : traj;
    const std::string stem = "trajectory_" + std::string(to_string(job.protocol)) + "_" + std::to_string(job.k + 1);
    for (ExportFormat fmt : opts.formats) {
      const std::string name = stem + "." + std::string(to_string(fmt));
      export_trajectory(out, fmt, out_dir / name);
      r.files.push_back(name);
    }
    return r;
  };

  std::vector<std::future<TrajectoryResult>> futures;
  for (const Job& j : jobs) futures.push_back(std::async(std::launch::async, work, j));
  for (auto& fu : futures) summary.trajectories.push_back(fu.get());

  for (const auto& t : summary.trajectories) {
    std::string line = std::string(to_string(t.protocol)) + " ic " + std::to_string(t.ic_index) + ": " +
                       point_text(t.initial) + " -> " + point_text(t.final_state) + " at t=" +
                       format_double(t.final_state.t) + ", " + std::to_string(t.accepted_steps) + " steps";
    if (t.clamp_events) line += ", " + std::to_string(t.clamp_events) + " clamp events";
    log(line);
    if (t.oscillation) {
      const auto& o = *t.oscillation;
      std::ostringstream os;
      os << "  oscillation: " << (o.oscillating ? "yes" : "no") << ", " << o.extrema_count << " extrema, trend "
         << to_string(o.amplitude_trend);
      if (o.estimated_period) os << ", period " << *o.estimated_period;
      log(os.str());
    } else if (!t.oscillation_note.empty()) {
      log("  oscillation: " + t.oscillation_note);
    }
    for (const auto& f : t.files) summary.files.push_back(f);
  }

  summary.analyses = analyze(s);
  for (const auto& pa : summary.analyses) {
    log(std::string(to_string(pa.protocol)) + " fixed points (" + pa.field + "):");
    for (const auto* list : {&pa.catalog, &pa.search}) {
      for (const auto& fp : *list) {
        std::string line = "  [" + std::string(to_string(fp.provenance)) + "] " + fp.label;
        if (fp.rejected) line += ": rejected, " + fp.note;
        else {
          line += ": " + std::string(to_string(fp.cls));
          if (fp.saddle) line += " (saddle)";
          if (fp.nonsmooth) line += " (nonsmooth)";
          if (!fp.in_domain) line += " (out of domain)";
        }
        log(line);
      }
    }
  }
  write_text(out_dir / "fixed_points.json", fixed_points_json(s, summary.analyses));
  summary.files.push_back("fixed_points.json");

  if (s.analyses.phase_grid) {
    for (Protocol p : s.protocols) {
      const VectorField f = general_field(s.model(p));
      const auto grid = sample_phase_grid(f, *s.analyses.phase_grid);
      std::ostringstream os;
      write_phase_grid_csv(grid, f.layout, os);
      const std::string name = "phase_grid_" + std::string(to_string(p)) + ".csv";
      write_text(out_dir / name, os.str());
      summary.files.push_back(name);
      log("phase grid " + name + ": " + std::to_string(grid.size()) + " points");
    }
  }

  summary.files.push_back("summary.json");
  summary.files.push_back("run.log");
  write_text(out_dir / "summary.json", summary_json(s, summary));
  std::string text;
  for (const auto& l : summary.log) text += l + "\n";
  write_text(out_dir / "run.log", text);
  return summary;
}

}  // namespace fevo
