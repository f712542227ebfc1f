#include "fevo/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fevo/error.hpp"
#include "fevo/export.hpp"

namespace fevo {

namespace {

constexpr std::string_view kExample1 = R"(name = example1
[game]
kind = pd
R = 3
S = 0
T = 5
P = 1
[dynamics]
protocols = replicator, pairwise
[integrator]
t_end = 30
[initial_conditions]
ic = 0.9
[analyses]
fixed_points = true
jacobians = true
)";

constexpr std::string_view kExample2 = R"(name = example2
[game]
kind = pd
R = 5
S = 1
T = 3
P = 0
strict = false
[dynamics]
protocols = replicator, pairwise
[integrator]
t_end = 30
[initial_conditions]
ic = 0.1
[analyses]
fixed_points = true
)";

constexpr std::string_view kExample3 = R"(name = example3
[game]
kind = pd
R = 3
S = 0
T = 5
P = 1
[coupling]
lambda = 2
epsilon = 0.1
[dynamics]
protocols = pairwise
[integrator]
t_end = 30
[initial_conditions]
ic = 0.9, 0.9
ic = 0.9, 0.7
ic = 0.1, 0.3
ic = 0.1, 0.1
[analyses]
fixed_points = true
jacobians = true
oscillation = true
oscillation_window = 10
phase_grid = 21
)";

constexpr std::string_view kExample4Rd = R"(name = example4_rd
[game]
kind = opd
R = 3
S = 0
T = 5
P = 1
L = 2
[coupling]
lambda = 2
epsilon = 0.5
[dynamics]
protocols = replicator
[integrator]
t_end = 300
[initial_conditions]
ic = 0.9, 0.1, 0.1
ic = 0.1, 0.9, 0.9
[analyses]
fixed_points = true
jacobians = true
oscillation = true
phase_grid = 11
)";

constexpr std::string_view kExample4Pcd = R"(name = example4_pcd
[game]
kind = opd
R = 3
S = 0
T = 5
P = 1
L = 2
[coupling]
lambda = 2
epsilon = 0.5
[dynamics]
protocols = pairwise
[integrator]
t_end = 300
[initial_conditions]
ic = 0.9, 0.1, 0.1
ic = 0.1, 0.9, 0.9
[analyses]
fixed_points = true
jacobians = true
oscillation = true
oscillation_window = 100
phase_grid = 11
)";

constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kBuiltins{{
    {"example1", kExample1},
    {"example2", kExample2},
    {"example3", kExample3},
    {"example4_rd", kExample4Rd},
    {"example4_pcd", kExample4Pcd},
}};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_double(std::string_view v, int line, std::string_view key) {
  v = trim(v);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) {
    throw ParseError(line, std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::size_t parse_count(std::string_view v, int line, std::string_view key) {
  v = trim(v);
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) {
    throw ParseError(line, std::string(key) + ": expected a non-negative integer");
  }
  return out;
}

bool parse_bool(std::string_view v, int line, std::string_view key) {
  const std::string s = lower(trim(v));
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ParseError(line, std::string(key) + ": expected true or false");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = v.find(',');
    const auto item = trim(v.substr(0, c));
    if (!item.empty()) out.push_back(item);
    if (c == std::string_view::npos) break;
    v.remove_prefix(c + 1);
  }
  return out;
}

template <class F>
auto wrap(int line, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

void validate_scenario(Scenario& s) {
  s.warnings.clear();
  if (s.name.empty()) throw ValidationError("scenario needs a name");
  if (s.game.kind == GameKind::OPD && !s.game.L) throw ValidationError("OPD game needs a loner payoff L");
  if (s.game.kind == GameKind::PD && s.game.L) throw ValidationError("PD game takes no loner payoff");
  try {
    ValidatedSpec v = validate_spec(s.game, s.strictness);
    s.warnings = std::move(v.warnings);
    if (s.coupling) validate_coupling(*s.coupling);
    validate_config(s.integrator);
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
  if (s.protocols.empty()) throw ValidationError("at least one protocol is required");
  if (s.initial_conditions.empty() && !s.analyses.any()) {
    throw ValidationError("scenario requests neither initial conditions nor analyses");
  }
  for (std::size_t k = 0; k < s.initial_conditions.size(); ++k) {
    const PopulationState& ic = s.initial_conditions[k];
    try {
      validate_state(ic, s.game.kind);
    } catch (const Error& e) {
      throw ValidationError("initial condition " + std::to_string(k + 1) + ": " + e.what());
    }
    if (ic.t >= s.integrator.t_end) {
      throw ValidationError("initial condition " + std::to_string(k + 1) + " starts after t_end");
    }
  }
  if (s.analyses.phase_grid && *s.analyses.phase_grid < 2) throw ValidationError("phase_grid needs >= 2 points per axis");
  if (s.analyses.search_resolution < 4) throw ValidationError("search_resolution needs >= 4 seeds per axis");
  if (s.analyses.oscillation_window < 0.0 || !std::isfinite(s.analyses.oscillation_window)) {
    throw ValidationError("oscillation_window must be >= 0");
  }
  if (s.analyses.output_interval < 0.0 || !std::isfinite(s.analyses.output_interval)) {
    throw ValidationError("output_interval must be >= 0");
  }
}

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  Scenario s;
  s.protocols.clear();
  std::string section;
  struct RawIc {
    int line;
    std::vector<double> v;
  };
  std::vector<RawIc> ics;
  bool saw_coupling = false;
  EnvCoupling coupling;
  std::array<std::optional<double>, 5> pay;  // R S T P L
  std::optional<GameKind> kind;

  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      static constexpr std::array<std::string_view, 6> known{"game", "coupling", "dynamics", "integrator",
                                                             "initial_conditions", "analyses"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ParseError(line_no, "unknown section [" + section + "]");
      }
      if (section == "coupling") saw_coupling = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string_view val = trim(line.substr(eq + 1));
    const std::string lkey = lower(key);
    auto unknown = [&] { throw ParseError(line_no, "unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]")); };

    if (section.empty()) {
      if (lkey == "name") s.name = std::string(val);
      else unknown();
    } else if (section == "game") {
      if (lkey == "kind") kind = wrap(line_no, [&] { return parse_game_kind(lower(val)); });
      else if (key == "R") pay[0] = parse_double(val, line_no, key);
      else if (key == "S") pay[1] = parse_double(val, line_no, key);
      else if (key == "T") pay[2] = parse_double(val, line_no, key);
      else if (key == "P") pay[3] = parse_double(val, line_no, key);
      else if (key == "L") pay[4] = parse_double(val, line_no, key);
      else if (lkey == "strict") s.strictness = parse_bool(val, line_no, key) ? Strictness::Strict : Strictness::Lenient;
      else unknown();
    } else if (section == "coupling") {
      if (lkey == "lambda") coupling.lambda = parse_double(val, line_no, key);
      else if (lkey == "epsilon") coupling.epsilon = parse_double(val, line_no, key);
      else unknown();
    } else if (section == "dynamics") {
      if (lkey == "protocols" || lkey == "protocol") {
        for (auto p : split_list(val)) s.protocols.push_back(wrap(line_no, [&] { return parse_protocol(lower(p)); }));
      } else if (lkey == "rule") {
        s.rule = wrap(line_no, [&] { return parse_comparison_rule(lower(val)); });
      } else {
        unknown();
      }
    } else if (section == "integrator") {
      if (lkey == "method") s.integrator.method = wrap(line_no, [&] { return parse_method(lower(val)); });
      else if (lkey == "step") s.integrator.step = parse_double(val, line_no, key);
      else if (lkey == "abs_tol") s.integrator.abs_tol = parse_double(val, line_no, key);
      else if (lkey == "rel_tol") s.integrator.rel_tol = parse_double(val, line_no, key);
      else if (lkey == "t_end") s.integrator.t_end = parse_double(val, line_no, key);
      else if (lkey == "max_step") s.integrator.max_step = parse_double(val, line_no, key);
      else if (lkey == "max_steps") s.integrator.max_steps = parse_count(val, line_no, key);
      else unknown();
    } else if (section == "initial_conditions") {
      if (lkey != "ic") unknown();
      RawIc ic{line_no, {}};
      for (auto item : split_list(val)) ic.v.push_back(parse_double(item, line_no, key));
      ics.push_back(std::move(ic));
    } else if (section == "analyses") {
      if (lkey == "fixed_points") s.analyses.fixed_points = parse_bool(val, line_no, key);
      else if (lkey == "jacobians") s.analyses.jacobians = parse_bool(val, line_no, key);
      else if (lkey == "oscillation") s.analyses.oscillation = parse_bool(val, line_no, key);
      else if (lkey == "oscillation_window") s.analyses.oscillation_window = parse_double(val, line_no, key);
      else if (lkey == "phase_grid") {
        const std::size_t g = parse_count(val, line_no, key);
        if (g == 0) s.analyses.phase_grid.reset();
        else s.analyses.phase_grid = g;
      } else if (lkey == "search_resolution") s.analyses.search_resolution = parse_count(val, line_no, key);
      else if (lkey == "output_interval") s.analyses.output_interval = parse_double(val, line_no, key);
      else unknown();
    }
  }

  if (!kind) throw ParseError(line_no, "[game] kind is required");
  const char* names = "RSTPL";
  for (int i = 0; i < 4; ++i) {
    if (!pay[i]) throw ParseError(line_no, std::string("[game] ") + names[i] + " is required");
  }
  s.game.kind = *kind;
  s.game.R = *pay[0];
  s.game.S = *pay[1];
  s.game.T = *pay[2];
  s.game.P = *pay[3];
  s.game.L = pay[4];
  if (saw_coupling) s.coupling = coupling;
  if (s.protocols.empty()) s.protocols.push_back(Protocol::Replicator);
  if (s.name.empty()) s.name = std::filesystem::path(origin).stem().string();

  const Layout layout = s.layout();
  for (const RawIc& ic : ics) {
    PopulationState st;
    const std::size_t k = layout.strategy_coords();
    const std::size_t need = layout.dim();
    // without feedback an optional trailing n is accepted
    if (ic.v.size() != need && !(layout.feedback == false && ic.v.size() == need + 1)) {
      throw ParseError(ic.line, "ic: expected " + std::to_string(need) + " values, got " + std::to_string(ic.v.size()));
    }
    st.x.assign(ic.v.begin(), ic.v.begin() + static_cast<std::ptrdiff_t>(k));
    st.n = ic.v.size() > k ? ic.v[k] : 1.0;
    s.initial_conditions.push_back(std::move(st));
  }

  validate_scenario(s);
  return s;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [n, _] : kBuiltins) out.emplace_back(n);
  return out;
}

std::string_view builtin_text(std::string_view name) {
  for (const auto& [n, t] : kBuiltins)
    if (n == name) return t;
  throw UnknownBuiltin("unknown builtin '" + std::string(name) + "'");
}

Scenario load_scenario(std::string_view name_or_path) {
  for (const auto& [n, t] : kBuiltins)
    if (n == name_or_path) return parse_scenario(t, n);
  const std::filesystem::path p{std::string(name_or_path)};
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) {
    if (p.has_parent_path() || p.has_extension()) {
      throw IoError("cannot read scenario file '" + p.string() + "'");
    }
    throw UnknownBuiltin("unknown builtin '" + std::string(name_or_path) + "'");
  }
  std::ifstream in(p);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), p.string());
}

std::string to_config_text(const Scenario& s) {
  std::ostringstream os;
  auto num = [](double v) { return format_double(v); };
  os << "name = " << s.name << "\n[game]\nkind = " << to_string(s.game.kind) << "\nR = " << num(s.game.R)
     << "\nS = " << num(s.game.S) << "\nT = " << num(s.game.T) << "\nP = " << num(s.game.P) << "\n";
  if (s.game.L) os << "L = " << num(*s.game.L) << "\n";
  os << "strict = " << (s.strictness == Strictness::Strict ? "true" : "false") << "\n";
  if (s.coupling) {
    os << "[coupling]\nlambda = " << num(s.coupling->lambda) << "\nepsilon = " << num(s.coupling->epsilon) << "\n";
  }
  os << "[dynamics]\nprotocols = ";
  for (std::size_t i = 0; i < s.protocols.size(); ++i) os << (i ? ", " : "") << to_string(s.protocols[i]);
  os << "\nrule = " << to_string(s.rule) << "\n";
  const IntegratorConfig& c = s.integrator;
  os << "[integrator]\nmethod = " << to_string(c.method) << "\nstep = " << num(c.step) << "\nabs_tol = " << num(c.abs_tol)
     << "\nrel_tol = " << num(c.rel_tol) << "\nt_end = " << num(c.t_end) << "\nmax_step = " << num(c.max_step)
     << "\nmax_steps = " << c.max_steps << "\n";
  os << "[initial_conditions]\n";
  const Layout layout = s.layout();
  for (const PopulationState& ic : s.initial_conditions) {
    os << "ic = ";
    for (std::size_t i = 0; i < layout.strategy_coords(); ++i) os << (i ? ", " : "") << num(ic.x[i]);
    os << ", " << num(ic.n) << "\n";
  }
  const Analyses& a = s.analyses;
  os << "[analyses]\nfixed_points = " << (a.fixed_points ? "true" : "false")
     << "\njacobians = " << (a.jacobians ? "true" : "false") << "\noscillation = " << (a.oscillation ? "true" : "false")
     << "\noscillation_window = " << num(a.oscillation_window) << "\nphase_grid = " << a.phase_grid.value_or(0)
     << "\nsearch_resolution = " << a.search_resolution << "\noutput_interval = " << num(a.output_interval) << "\n";
  return os.str();
}

}  // namespace fevo
