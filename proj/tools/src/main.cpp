#include <iostream>

#include <CLI11.hpp>

#include "liespin_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace liespin::cli;

  CLI::App app{"liespin: integrability and closed-form propagators for SU(2) spin Hamiltonians H(t) = B(t).S"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  Overrides overrides;
  std::string file;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"check", "Decide integrability and report gamma, residuals and D"},
      {"solve", "Write the closed-form propagation as CSV"},
      {"oracle", "Write RK4 and unitary-midpoint reference propagations as CSV"},
      {"compare", "Compare the closed form against both numerical oracles"},
      {"fsys", "Integrate the transformation system and write the curve as CSV"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "Scenario file (JSON)")->required();
    sub->add_option("--out", out_dir, "Directory for result and CSV files");
    sub->add_option("--tolerance", overrides.tolerance, "Absolute integrability residual tolerance");
    sub->add_option("--steps", overrides.steps, "Override the number of grid steps");
    sub->add_option("--gamma", overrides.gamma, "Use this gamma instead of solving for it");
  }

  std::string fault;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");
  selftest->add_option("--inject-fault", fault, "Deliberately break an invariant (bracket-sign)")
      ->check(CLI::IsMember({"bracket-sign"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kInputError;
  }

  CommandContext ctx{out_dir, &std::cout, &std::cerr};
  if (selftest->parsed()) {
    SelftestOptions options;
    options.flip_bracket_sign = fault == "bracket-sign";
    return cmd_selftest(options, ctx);
  }
  const auto* sub = app.get_subcommands().front();
  return run_scenario_command(sub->get_name(), file, overrides, ctx);
}
