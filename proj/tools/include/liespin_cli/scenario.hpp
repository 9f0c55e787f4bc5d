#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "liespin/errors.hpp"
#include "liespin/fields.hpp"
#include "liespin/program.hpp"
#include "liespin/spinrep.hpp"
#include "liespin/time_grid.hpp"

namespace liespin::cli {

/// Malformed or inconsistent scenario input. Maps to exit code 2.
class ScenarioError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Tolerances {
  std::optional<double> residual;  // absolute integrability residual
  double fidelity = 1e-6;
};

/// Explicit target b'(t) = d(t) * direction for the fsys command.
struct TargetSpec {
  Eigen::Vector3d direction{0.0, 0.0, 1.0};
  Program d;
};

struct Scenario {
  std::string name;
  std::vector<SpinQuantumNumber> spins;
  FieldSpec field = FieldSpec(ConstantField{});
  TimeGrid grid{0.0, 1.0, 2};
  std::optional<double> gamma;  // empty means "auto"
  Tolerances tolerances;
  std::optional<StateVector> initial_state;
  std::vector<std::string> outputs;
  std::optional<TargetSpec> target;
  std::optional<Eigen::Vector4d> initial_group;

  bool wants(const std::string& artifact) const;
  /// The initial state for `spin`: the given vector, or the m = j basis state.
  StateVector initial_state_for(SpinQuantumNumber spin) const;
};

struct ScenarioFile {
  std::vector<Scenario> scenarios;
  bool batch = false;
};

/// Command-line overrides applied on top of every scenario.
struct Overrides {
  std::optional<double> tolerance;
  std::optional<std::size_t> steps;
  std::optional<double> gamma;
};

inline constexpr const char* kArtifactNames[] = {"report", "result", "csv"};

SpinQuantumNumber parse_spin(const nlohmann::json& j);
Program parse_program(const nlohmann::json& j);
FieldSpec parse_field(const nlohmann::json& j);
Scenario parse_scenario(const nlohmann::json& j, const std::string& default_name);
ScenarioFile parse_scenario_file(const nlohmann::json& j, const std::string& stem);
ScenarioFile load_scenario_file(const std::filesystem::path& path);

void apply_overrides(Scenario& s, const Overrides& o);

/// "1_2", "1", "3_2", ... for file names.
std::string spin_label(SpinQuantumNumber spin);

}  // namespace liespin::cli
