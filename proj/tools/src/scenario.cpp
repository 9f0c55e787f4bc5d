#include "liespin_cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace liespin::cli {
namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ScenarioError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(where + ": not finite");
  return v;
}

double number_at(const json& j, const std::string& key, const std::string& where,
                 std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ScenarioError(where + ": missing '" + key + "'");
  }
  return number(j.at(key), where + "." + key);
}

Eigen::Vector3d vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ScenarioError(where + ": expected an array of 3 numbers");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

std::complex<double> complex_entry(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], where), number(j[1], where)};
  if (j.is_object()) {
    require_keys(j, {"re", "im"}, where);
    return {number_at(j, "re", where, 0.0), number_at(j, "im", where, 0.0)};
  }
  throw ScenarioError(where + ": expected a number, [re, im] or {\"re\", \"im\"}");
}

TimeGrid parse_grid(const json& j) {
  require_keys(j, {"t0", "t1", "steps"}, "grid");
  const double t0 = number_at(j, "t0", "grid", 0.0);
  const double t1 = number_at(j, "t1", "grid");
  if (!j.contains("steps") || !j.at("steps").is_number_integer() || j.at("steps").get<long long>() < 2) {
    throw ScenarioError("grid.steps: expected an integer >= 2");
  }
  if (!(t1 > t0)) throw ScenarioError("grid: t1 must exceed t0");
  return TimeGrid(t0, t1, j.at("steps").get<std::size_t>());
}

std::vector<SpinQuantumNumber> parse_spins(const json& j) {
  std::vector<SpinQuantumNumber> out;
  if (j.is_array()) {
    if (j.empty()) throw ScenarioError("spin: empty list");
    for (const auto& e : j) out.push_back(parse_spin(e));
  } else {
    out.push_back(parse_spin(j));
  }
  return out;
}

}  // namespace

bool Scenario::wants(const std::string& artifact) const {
  return outputs.empty() || std::find(outputs.begin(), outputs.end(), artifact) != outputs.end();
}

StateVector Scenario::initial_state_for(SpinQuantumNumber spin) const {
  if (initial_state) {
    if (initial_state->size() != spin.dimension()) {
      throw ScenarioError("initial_state: dimension " + std::to_string(initial_state->size()) +
                          " does not match spin dimension " + std::to_string(spin.dimension()));
    }
    return *initial_state;
  }
  StateVector psi = StateVector::Zero(spin.dimension());
  psi[0] = 1.0;
  return psi;
}

SpinQuantumNumber parse_spin(const json& j) {
  if (j.is_number_integer()) {
    const auto two_j = j.get<long long>();
    if (two_j < 1 || two_j > 200) throw ScenarioError("spin: two_j must lie in [1, 200]");
    return SpinQuantumNumber(static_cast<int>(two_j));
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    try {
      std::size_t pos = 0;
      const auto slash = s.find('/');
      if (slash == std::string::npos) {
        const int whole = std::stoi(s, &pos);
        if (pos == s.size() && whole >= 1 && whole <= 100) return SpinQuantumNumber(2 * whole);
      } else if (s.substr(slash + 1) == "2") {
        const int num = std::stoi(s.substr(0, slash), &pos);
        if (pos == slash && num >= 1 && num <= 200 && num % 2 == 1) return SpinQuantumNumber(num);
      }
    } catch (const std::logic_error&) {
    }
    throw ScenarioError("spin: cannot read '" + s + "' (use \"1/2\", \"1\", \"3/2\", ... or an integer two_j)");
  }
  throw ScenarioError("spin: expected a string such as \"1/2\" or an integer two_j");
}

Program parse_program(const json& j) {
  if (j.is_number()) return Program(number(j, "program"));
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ScenarioError("program: expected a number or an object with a 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  const std::string where = "program(" + type + ")";
  if (type == "const") {
    require_keys(j, {"type", "value"}, where);
    return Program(number_at(j, "value", where));
  }
  if (type == "linear") {
    require_keys(j, {"type", "v0", "slope"}, where);
    return Program(Program::Linear{number_at(j, "v0", where, 0.0), number_at(j, "slope", where, 0.0)});
  }
  if (type == "sinusoid") {
    require_keys(j, {"type", "amp", "freq", "phase", "offset"}, where);
    return Program(Program::Sinusoid{number_at(j, "amp", where, 0.0), number_at(j, "freq", where, 0.0),
                                     number_at(j, "phase", where, 0.0), number_at(j, "offset", where, 0.0)});
  }
  if (type == "table") {
    require_keys(j, {"type", "samples"}, where);
    if (!j.contains("samples") || !j.at("samples").is_array()) throw ScenarioError(where + ": missing samples");
    Program::Table tab;
    for (const auto& s : j.at("samples")) {
      if (!s.is_array() || s.size() != 2) throw ScenarioError(where + ": samples are [t, value] pairs");
      tab.samples.emplace_back(number(s[0], where), number(s[1], where));
    }
    return Program(std::move(tab));
  }
  if (type == "sum") {
    require_keys(j, {"type", "terms"}, where);
    if (!j.contains("terms") || !j.at("terms").is_array()) throw ScenarioError(where + ": missing terms");
    Program::Sum sum;
    for (const auto& t : j.at("terms")) sum.terms.push_back(parse_program(t));
    return Program(std::move(sum));
  }
  throw ScenarioError("program: unknown type '" + type + "'");
}

FieldSpec parse_field(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ScenarioError("field: expected an object with a 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  const std::string where = "field(" + type + ")";
  if (type == "constant") {
    require_keys(j, {"type", "b"}, where);
    if (!j.contains("b")) throw ScenarioError(where + ": missing 'b'");
    const auto b = vec3(j.at("b"), where + ".b");
    return FieldSpec(ConstantField{b[0], b[1], b[2]});
  }
  if (type == "rotating") {
    require_keys(j, {"type", "B", "theta", "omega", "phi0"}, where);
    return FieldSpec(RotatingField{number_at(j, "B", where), number_at(j, "theta", where),
                                   number_at(j, "omega", where), number_at(j, "phi0", where, 0.0)});
  }
  if (type == "polar") {
    require_keys(j, {"type", "B", "theta", "phi"}, where);
    for (const char* key : {"B", "theta", "phi"}) {
      if (!j.contains(key)) throw ScenarioError(where + ": missing '" + key + "'");
    }
    return FieldSpec(PolarField{parse_program(j.at("B")), parse_program(j.at("theta")), parse_program(j.at("phi"))});
  }
  if (type == "table") {
    require_keys(j, {"type", "samples"}, where);
    if (!j.contains("samples") || !j.at("samples").is_array()) throw ScenarioError(where + ": missing samples");
    CartesianTable tab;
    for (const auto& s : j.at("samples")) {
      if (!s.is_array() || s.size() != 4) throw ScenarioError(where + ": samples are [t, Bx, By, Bz]");
      tab.samples.push_back({number(s[0], where), number(s[1], where), number(s[2], where), number(s[3], where)});
    }
    return FieldSpec(std::move(tab));
  }
  throw ScenarioError("field: unknown type '" + type + "'");
}

Scenario parse_scenario(const json& j, const std::string& default_name) {
  require_keys(j,
               {"name", "preset", "spin", "field", "grid", "gamma", "tolerances", "initial_state", "outputs",
                "target", "initial_group"},
               "scenario");
  Scenario s;
  s.name = default_name;
  if (j.contains("name")) {
    if (!j.at("name").is_string() || j.at("name").get<std::string>().empty()) {
      throw ScenarioError("name: expected a non-empty string");
    }
    s.name = j.at("name").get<std::string>();
    if (s.name.find_first_of("/\\") != std::string::npos) throw ScenarioError("name: must not contain path separators");
  }

  bool have_field = false, have_grid = false;
  if (j.contains("preset")) {
    if (j.at("preset") != "rotating-example") throw ScenarioError("preset: unknown preset " + j.at("preset").dump());
    if (j.contains("field")) throw ScenarioError("preset: 'field' cannot be combined with a preset");
    s.field = FieldSpec(RotatingField{1.0, M_PI / 3.0, 0.5, 0.0});
    s.grid = TimeGrid(0.0, 10.0, 100000);
    have_field = have_grid = true;
  }
  if (j.contains("field")) {
    s.field = parse_field(j.at("field"));
    have_field = true;
  }
  if (!have_field) throw ScenarioError("scenario '" + s.name + "': missing 'field'");
  if (j.contains("grid")) {
    s.grid = parse_grid(j.at("grid"));
    have_grid = true;
  }
  if (!have_grid) throw ScenarioError("scenario '" + s.name + "': missing 'grid'");

  s.spins = j.contains("spin") ? parse_spins(j.at("spin")) : std::vector<SpinQuantumNumber>{SpinQuantumNumber(1)};

  if (j.contains("gamma")) {
    const auto& g = j.at("gamma");
    if (g.is_string() && g.get<std::string>() == "auto") {
      s.gamma.reset();
    } else {
      s.gamma = number(g, "gamma");
    }
  }

  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    require_keys(t, {"residual", "fidelity"}, "tolerances");
    if (t.contains("residual")) s.tolerances.residual = number(t.at("residual"), "tolerances.residual");
    s.tolerances.fidelity = number_at(t, "fidelity", "tolerances", s.tolerances.fidelity);
    if (s.tolerances.residual && !(*s.tolerances.residual > 0.0)) throw ScenarioError("tolerances.residual must be positive");
    if (!(s.tolerances.fidelity > 0.0)) throw ScenarioError("tolerances.fidelity must be positive");
  }

  if (j.contains("initial_state")) {
    const auto& v = j.at("initial_state");
    if (!v.is_array() || v.empty()) throw ScenarioError("initial_state: expected a non-empty array");
    StateVector psi(static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) psi[static_cast<Eigen::Index>(k)] = complex_entry(v[k], "initial_state");
    if (std::abs(psi.norm() - 1.0) > 1e-9) throw ScenarioError("initial_state: norm must be 1 within 1e-9");
    s.initial_state = psi;
    for (const auto& spin : s.spins) s.initial_state_for(spin);
  }

  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (!o.is_array()) throw ScenarioError("outputs: expected an array of artifact names");
    for (const auto& name : o) {
      if (!name.is_string()) throw ScenarioError("outputs: expected strings");
      const auto n = name.get<std::string>();
      if (std::find(std::begin(kArtifactNames), std::end(kArtifactNames), n) == std::end(kArtifactNames)) {
        throw ScenarioError("outputs: unknown artifact '" + n + "' (report, result, csv)");
      }
      s.outputs.push_back(n);
    }
  }

  if (j.contains("target")) {
    const auto& t = j.at("target");
    require_keys(t, {"direction", "d"}, "target");
    TargetSpec target;
    if (t.contains("direction")) target.direction = vec3(t.at("direction"), "target.direction");
    if (std::abs(target.direction.norm() - 1.0) > 1e-12) throw ScenarioError("target.direction must be a unit vector");
    if (!t.contains("d")) throw ScenarioError("target: missing 'd'");
    target.d = parse_program(t.at("d"));
    s.target = std::move(target);
  }

  if (j.contains("initial_group")) {
    const auto& g = j.at("initial_group");
    if (!g.is_array() || g.size() != 4) throw ScenarioError("initial_group: expected [x1, x2, y1, y2]");
    Eigen::Vector4d x;
    for (int k = 0; k < 4; ++k) x[k] = number(g[static_cast<std::size_t>(k)], "initial_group");
    if (std::abs(x.squaredNorm() - 1.0) >= 1e-12) throw ScenarioError("initial_group: x1^2 + x2^2 + y1^2 + y2^2 must be 1");
    s.initial_group = x;
  }
  return s;
}

ScenarioFile parse_scenario_file(const json& j, const std::string& stem) {
  ScenarioFile file;
  if (j.is_object() && j.contains("scenarios")) {
    if (j.size() != 1) throw ScenarioError("batch file: only the 'scenarios' key is allowed at top level");
    const auto& list = j.at("scenarios");
    if (!list.is_array() || list.empty()) throw ScenarioError("scenarios: expected a non-empty array");
    file.batch = true;
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
      file.scenarios.push_back(parse_scenario(list[i], stem + "-" + std::to_string(i)));
      if (!names.insert(file.scenarios.back().name).second) {
        throw ScenarioError("scenarios: duplicate name '" + file.scenarios.back().name + "'");
      }
    }
  } else {
    file.scenarios.push_back(parse_scenario(j, stem));
  }
  return file;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario file '" + path.string() + "': " + e.what());
  }
  return parse_scenario_file(j, path.stem().string());
}

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.tolerance) {
    if (!(*o.tolerance > 0.0) || !std::isfinite(*o.tolerance)) throw ScenarioError("--tolerance must be positive");
    s.tolerances.residual = *o.tolerance;
  }
  if (o.steps) {
    if (*o.steps < 2) throw ScenarioError("--steps must be at least 2");
    s.grid = TimeGrid(s.grid.t0(), s.grid.t1(), *o.steps);
  }
  if (o.gamma) {
    if (!std::isfinite(*o.gamma)) throw ScenarioError("--gamma must be finite");
    s.gamma = *o.gamma;
  }
}

std::string spin_label(SpinQuantumNumber spin) {
  return spin.two_j() % 2 == 0 ? std::to_string(spin.two_j() / 2) : std::to_string(spin.two_j()) + "_2";
}

}  // namespace liespin::cli
