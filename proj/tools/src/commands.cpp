#include "liespin_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "liespin/integrability.hpp"
#include "liespin/liesys.hpp"
#include "liespin/oracle.hpp"

namespace liespin::cli {
namespace {

using nlohmann::json;

bool emits(const Scenario& s, const std::string& artifact, bool by_default) {
  if (s.outputs.empty()) return by_default;
  return std::find(s.outputs.begin(), s.outputs.end(), artifact) != s.outputs.end();
}

std::filesystem::path artifact_path(const Scenario& s, const CommandContext& ctx, const std::string& suffix,
                                    const SpinQuantumNumber* spin = nullptr) {
  std::string stem = s.name;
  if (spin && s.spins.size() > 1) stem += "-j" + spin_label(*spin);
  return ctx.out_dir / (stem + suffix);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
}

json number_or_null(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

IntegrabilityReport analyze(const Scenario& s) {
  IntegrabilityTolerance tol;
  tol.residual = s.tolerances.residual;
  return analyze_integrability(s.field, s.grid, s.gamma, tol);
}

void print_integrability(const Scenario& s, const IntegrabilityReport& r, std::ostream& out) {
  out << "scenario: " << s.name << "\n";
  out << "verdict: " << to_string(r.verdict) << "\n";
  if (r.gamma) {
    out << "gamma: " << format_report(*r.gamma);
    if (r.solution) out << " (solved, tan(gamma/2) branch " << to_string(r.solution->branch) << ")";
    out << "\n";
  } else {
    out << "gamma: none\n";
  }
  out << "residuals: algebraic_1 " << format_report(r.r_algebraic_1) << ", algebraic_2 "
      << format_report(r.r_algebraic_2) << ", differential " << format_report(r.r_differential) << "\n";
  out << "tolerance: residual " << format_report(r.tolerance.residual) << ", gamma "
      << format_report(r.tolerance.gamma) << "\n";
  out << "samples: " << r.samples_used << " used, " << r.degenerate_samples << " degenerate\n";
  if (!r.d_samples.empty()) {
    const auto [lo, hi] = std::minmax_element(r.d_samples.begin(), r.d_samples.end());
    if (*lo == *hi) {
      out << "D: " << format_report(*lo) << " (constant)\n";
    } else {
      out << "D: range [" << format_report(*lo) << ", " << format_report(*hi) << "]\n";
    }
  }
  if (!r.message.empty()) out << "note: " << r.message << "\n";
}

json integrability_json(const Scenario& s, const IntegrabilityReport& r) {
  json j;
  j["scenario"] = s.name;
  j["verdict"] = to_string(r.verdict);
  j["gamma"] = number_or_null(r.gamma);
  j["gamma_solved"] = r.solution.has_value();
  j["branch"] = r.solution ? json(to_string(r.solution->branch)) : json(nullptr);
  j["residuals"] = {{"algebraic_1", r.r_algebraic_1},
                    {"algebraic_2", r.r_algebraic_2},
                    {"differential", r.r_differential}};
  j["tolerance"] = {{"residual", r.tolerance.residual}, {"gamma", r.tolerance.gamma}};
  j["samples_used"] = r.samples_used;
  j["degenerate_samples"] = r.degenerate_samples;
  if (!r.d_samples.empty()) {
    const auto [lo, hi] = std::minmax_element(r.d_samples.begin(), r.d_samples.end());
    j["d"] = {{"min", *lo}, {"max", *hi}};
  }
  j["message"] = r.message;
  return j;
}

void append_state(std::string& row, const StateVector& psi) {
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    row += "," + format_double(psi[k].real());
    row += "," + format_double(psi[k].imag());
  }
}

std::string state_header(const std::string& prefix, int dim) {
  std::string h;
  for (int k = 0; k < dim; ++k) {
    h += ",re_" + prefix + std::to_string(k);
    h += ",im_" + prefix + std::to_string(k);
  }
  return h;
}

json metrics_json(const ComparisonMetrics& m) {
  return {{"max_state_error", m.max_state_error},
          {"infidelity", m.infidelity},
          {"max_operator_error", m.max_operator_error},
          {"unitarity_defect", m.unitarity_defect}};
}

void print_metrics(const std::string& label, const ComparisonMetrics& m, std::ostream& out) {
  out << "  " << label << ": infidelity " << format_report(m.infidelity);
  if (m.max_state_error > 0.0 || m.max_operator_error == 0.0) out << ", max state error " << format_report(m.max_state_error);
  if (m.max_operator_error > 0.0) out << ", max operator error " << format_report(m.max_operator_error);
  out << ", unitarity defect " << format_report(m.unitarity_defect) << "\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_report(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int cmd_check(const Scenario& s, const CommandContext& ctx) {
  const auto report = analyze(s);
  std::ostringstream text;
  print_integrability(s, report, text);
  *ctx.out << text.str();
  if (emits(s, "result", true)) write_file(artifact_path(s, ctx, ".check.json"), integrability_json(s, report).dump(2) + "\n");
  if (emits(s, "report", false)) write_file(artifact_path(s, ctx, ".check.txt"), text.str());
  return report.verdict == Verdict::integrable ? kSuccess : kFailure;
}

int cmd_solve(const Scenario& s, const CommandContext& ctx) {
  const auto report = analyze(s);
  std::ostringstream text;
  print_integrability(s, report, text);
  if (report.verdict != Verdict::integrable) {
    text << "solve: field is not integrable for the reported gamma; no CSV written\n";
    *ctx.out << text.str();
    return kFailure;
  }
  for (const auto& spin : s.spins) {
    const StateVector psi0 = s.initial_state_for(spin);
    const ExactPropagator u(s.field, *report.gamma, spin);
    const auto unitaries = u.on_grid(s.grid);
    const auto thetas = u.theta_on_grid(s.grid);
    std::string csv = "t" + state_header("psi", spin.dimension()) + ",Theta,D\n";
    double norm_drift = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const double t = s.grid.at(i);
      const StateVector psi = unitaries[i] * psi0;
      norm_drift = std::max(norm_drift, std::abs(psi.norm() - 1.0));
      std::string row = format_double(t);
      append_state(row, psi);
      row += "," + format_double(thetas[i]) + "," + format_double(u.d(t)) + "\n";
      csv += row;
    }
    text << "spin " << spin.j() << ": " << s.grid.size() << " samples, Theta(t1) " << format_report(thetas.back())
         << ", norm drift " << format_report(norm_drift) << "\n";
    if (emits(s, "csv", true)) {
      const auto path = artifact_path(s, ctx, ".solve.csv", &spin);
      write_file(path, csv);
      text << "  wrote " << path.string() << "\n";
    }
  }
  *ctx.out << text.str();
  if (emits(s, "report", false)) write_file(artifact_path(s, ctx, ".solve.txt"), text.str());
  return kSuccess;
}

int cmd_oracle(const Scenario& s, const CommandContext& ctx) {
  std::ostringstream text;
  text << "scenario: " << s.name << "\n";
  for (const auto& spin : s.spins) {
    const StateVector psi0 = s.initial_state_for(spin);
    const auto rk = rk4_propagate(s.field, spin, psi0, s.grid);
    const auto mid = apply_to_state(unitary_midpoint_propagate(s.field, spin, s.grid), psi0);
    const auto m = compare(rk, mid);
    text << "spin " << spin.j() << ": rk4 norm drift " << format_report(rk.norm_drift) << ", midpoint norm drift "
         << format_report(mid.norm_drift) << ", rk4 vs midpoint max state error " << format_report(m.max_state_error)
         << "\n";
    if (emits(s, "csv", true)) {
      std::string csv = "t" + state_header("rk4_", spin.dimension()) + state_header("mid_", spin.dimension()) + "\n";
      for (std::size_t i = 0; i < s.grid.size(); ++i) {
        std::string row = format_double(s.grid.at(i));
        append_state(row, rk.states[i]);
        append_state(row, mid.states[i]);
        csv += row + "\n";
      }
      const auto path = artifact_path(s, ctx, ".oracle.csv", &spin);
      write_file(path, csv);
      text << "  wrote " << path.string() << "\n";
    }
  }
  *ctx.out << text.str();
  if (emits(s, "report", false)) write_file(artifact_path(s, ctx, ".oracle.txt"), text.str());
  return kSuccess;
}

int cmd_compare(const Scenario& s, const CommandContext& ctx) {
  const auto report = analyze(s);
  std::ostringstream text;
  print_integrability(s, report, text);
  if (report.verdict != Verdict::integrable) {
    text << "compare: field is not integrable for the reported gamma\n";
    *ctx.out << text.str();
    return kFailure;
  }
  json result = integrability_json(s, report);
  result["fidelity_tolerance"] = s.tolerances.fidelity;
  result["spins"] = json::array();
  bool pass = true;
  for (const auto& spin : s.spins) {
    const StateVector psi0 = s.initial_state_for(spin);
    const ExactPropagator u(s.field, *report.gamma, spin);
    const auto exact = exact_propagation(u, s.grid);
    const auto exact_states = apply_to_state(exact, psi0);
    const auto rk_states = rk4_propagate(s.field, spin, psi0, s.grid);
    const auto rk_ops = rk4_propagate_unitary(s.field, spin, s.grid);
    const auto mid_ops = unitary_midpoint_propagate(s.field, spin, s.grid);
    const auto state_rk = compare(exact_states, rk_states);
    const auto op_rk = compare(exact, rk_ops);
    const auto op_mid = compare(exact, mid_ops);
    const double worst = std::max({state_rk.infidelity, op_rk.infidelity, op_mid.infidelity});
    const bool ok = worst < s.tolerances.fidelity;
    pass = pass && ok;
    text << "spin " << spin.j() << " (" << (ok ? "pass" : "FAIL") << ", worst infidelity " << format_report(worst)
         << ", tolerance " << format_report(s.tolerances.fidelity) << ")\n";
    print_metrics("state vs rk4", state_rk, text);
    print_metrics("propagator vs rk4", op_rk, text);
    print_metrics("propagator vs midpoint", op_mid, text);
    result["spins"].push_back({{"two_j", spin.two_j()},
                               {"pass", ok},
                               {"state_vs_rk4", metrics_json(state_rk)},
                               {"propagator_vs_rk4", metrics_json(op_rk)},
                               {"propagator_vs_midpoint", metrics_json(op_mid)}});
  }
  result["pass"] = pass;
  *ctx.out << text.str();
  if (emits(s, "result", true)) write_file(artifact_path(s, ctx, ".compare.json"), result.dump(2) + "\n");
  if (emits(s, "report", false)) write_file(artifact_path(s, ctx, ".compare.txt"), text.str());
  return pass ? kSuccess : kFailure;
}

int cmd_fsys(const Scenario& s, const CommandContext& ctx) {
  std::ostringstream text;
  const auto b = AlgebraCurve::from_field(s.field);
  std::optional<GroupCurve> connecting;
  std::optional<TargetCurve> target;
  Eigen::Vector4d x0{1.0, 0.0, 0.0, 0.0};
  if (s.target) {
    target = TargetCurve::fixed_direction(s.target->direction, s.target->d);
    text << "scenario: " << s.name << "\n";
    text << "target: explicit, direction (" << format_report(s.target->direction[0]) << ", "
         << format_report(s.target->direction[1]) << ", " << format_report(s.target->direction[2]) << ")\n";
  } else {
    const auto report = analyze(s);
    print_integrability(s, report, text);
    if (report.verdict != Verdict::integrable) {
      text << "fsys: no target given and the field is not integrable; nothing to solve\n";
      *ctx.out << text.str();
      return kFailure;
    }
    const double gamma = *report.gamma;
    const FieldSpec field = s.field;
    target = TargetCurve::axis_z([field, gamma](double t) {
      const auto p = polar_at(field, t);
      return compute_D(p.magnitude, p.theta, gamma);
    });
    connecting = a_gamma_curve(s.field, gamma);
    x0 = connecting->value(s.grid.t0()).coords();
    text << "target: D(t) S_z from the integrability analysis, start on the connecting curve\n";
  }
  if (s.initial_group) x0 = *s.initial_group;

  const auto traj = solve_fsys(b, *target, su2::GroupElement::from_coords(x0), s.grid);
  const double drift = traj.max_first_integral_drift();
  double max_distance = 0.0;
  std::string csv = std::string("t,x1,x2,y1,y2,I_minus_1") + (connecting ? ",distance_to_connecting\n" : "\n");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& x = traj.coords(i);
    std::string row = format_double(traj.time(i));
    for (int k = 0; k < 4; ++k) row += "," + format_double(x[k]);
    row += "," + format_double(traj.first_integral(i) - 1.0);
    if (connecting) {
      const double d = su2::distance(traj.element(i), connecting->value(traj.time(i)));
      max_distance = std::max(max_distance, d);
      row += "," + format_double(d);
    }
    csv += row + "\n";
  }
  text << "first integral drift: " << format_report(drift) << "\n";
  if (connecting) text << "max distance to connecting curve: " << format_report(max_distance) << "\n";
  if (emits(s, "csv", true)) {
    const auto path = artifact_path(s, ctx, ".fsys.csv");
    write_file(path, csv);
    text << "wrote " << path.string() << "\n";
  }
  *ctx.out << text.str();
  if (emits(s, "report", false)) write_file(artifact_path(s, ctx, ".fsys.txt"), text.str());
  return drift < 1e-10 ? kSuccess : kFailure;
}

int run_scenario_command(const std::string& command, const std::filesystem::path& file, const Overrides& overrides,
                         const CommandContext& ctx) {
  using Handler = int (*)(const Scenario&, const CommandContext&);
  Handler handler = nullptr;
  if (command == "check") handler = cmd_check;
  if (command == "solve") handler = cmd_solve;
  if (command == "oracle") handler = cmd_oracle;
  if (command == "compare") handler = cmd_compare;
  if (command == "fsys") handler = cmd_fsys;
  if (!handler) {
    *ctx.err << "error: unknown command '" << command << "'\n";
    return kInputError;
  }

  ScenarioFile scenarios;
  try {
    scenarios = load_scenario_file(file);
    for (auto& s : scenarios.scenarios) apply_overrides(s, overrides);
  } catch (const std::exception& e) {
    *ctx.err << "error: " << e.what() << "\n";
    return kInputError;
  }

  struct Outcome {
    int code = kSuccess;
    std::string out;
    std::string err;
  };
  auto run_one = [&](const Scenario& s) {
    Outcome o;
    std::ostringstream out, err;
    CommandContext local{ctx.out_dir, &out, &err};
    try {
      o.code = handler(s, local);
    } catch (const std::exception& e) {
      err << "error: scenario '" << s.name << "': " << e.what() << "\n";
      o.code = kInputError;
    }
    o.out = out.str();
    o.err = err.str();
    return o;
  };

  std::vector<Outcome> outcomes;
  if (scenarios.batch) {
    std::vector<std::future<Outcome>> futures;
    for (const auto& s : scenarios.scenarios) futures.push_back(std::async(std::launch::async, run_one, std::cref(s)));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    outcomes.push_back(run_one(scenarios.scenarios.front()));
  }

  int worst = kSuccess;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (scenarios.batch) *ctx.out << (i ? "\n" : "") << "== " << scenarios.scenarios[i].name << " ==\n";
    *ctx.out << outcomes[i].out;
    *ctx.err << outcomes[i].err;
    worst = std::max(worst, outcomes[i].code);
  }
  return worst;
}

}  // namespace liespin::cli
