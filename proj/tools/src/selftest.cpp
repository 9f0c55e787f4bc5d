#include <cmath>
#include <functional>
#include <iostream>
#include <random>

#include "liespin/integrability.hpp"
#include "liespin/liesys.hpp"
#include "liespin/oracle.hpp"
#include "liespin/su2.hpp"
#include "liespin_cli/commands.hpp"

namespace liespin::cli {
namespace {

struct Check {
  std::string module;
  std::string invariant;
  bool pass = false;
  std::string detail;
};

double epsilon(int i, int j, int k) { return 0.5 * (i - j) * (j - k) * (k - i); }

Eigen::Vector3d unit(int k) { return Eigen::Vector3d::Unit(k); }

FieldSpec rotating_example() { return FieldSpec(RotatingField{1.0, M_PI / 3.0, 0.5, 0.0}); }

class Suite {
 public:
  explicit Suite(const SelftestOptions& options) : options_(options) {}

  su2::AlgebraVector bracket(const su2::AlgebraVector& c, const su2::AlgebraVector& d) const {
    const auto b = su2::bracket(c, d);
    return options_.flip_bracket_sign ? -b : b;
  }
  Eigen::Matrix4d field_bracket(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) const {
    const Eigen::Matrix4d m = vector_field_bracket(a, b);
    return options_.flip_bracket_sign ? Eigen::Matrix4d(-m) : m;
  }

  void record(std::string module, std::string invariant, double value, double bound) {
    checks_.push_back({std::move(module), std::move(invariant), value < bound,
                       "value " + format_report(value) + ", bound " + format_report(bound)});
  }
  void record_range(std::string module, std::string invariant, double value, double lo, double hi) {
    checks_.push_back({std::move(module), std::move(invariant), value >= lo && value <= hi,
                       "value " + format_report(value) + ", range [" + format_report(lo) + ", " + format_report(hi) + "]"});
  }

  const std::vector<Check>& checks() const { return checks_; }

 private:
  SelftestOptions options_;
  std::vector<Check> checks_;
};

void algebra_tables(Suite& suite) {
  double table = 0.0, jacobi = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d want = Eigen::Vector3d::Zero();
      for (int k = 0; k < 3; ++k) want -= epsilon(i, j, k) * unit(k);
      const auto got = suite.bracket(su2::AlgebraVector::from(unit(i)), su2::AlgebraVector::from(unit(j)));
      table = std::max(table, (got.vec() - want).cwiseAbs().maxCoeff());
    }
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    const su2::AlgebraVector a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
    const auto sum = suite.bracket(a, suite.bracket(b, c)) + suite.bracket(b, suite.bracket(c, a)) +
                     suite.bracket(c, suite.bracket(a, b));
    jacobi = std::max(jacobi, sum.norm());
  }
  suite.record("su2", "bracket table [a_j, a_k] = -eps_jkl a_l", table, 1e-14);
  suite.record("su2", "Jacobi identity", jacobi, 1e-14);
}

void generator_tables(Suite& suite) {
  const auto gens = generator_set();
  double unprimed = 0.0, primed = 0.0, mixed = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      Eigen::Matrix4d want = Eigen::Matrix4d::Zero(), want_p = Eigen::Matrix4d::Zero();
      for (int l = 0; l < 3; ++l) {
        want -= epsilon(j, k, l) * gens.n[l];
        want_p -= epsilon(j, k, l) * gens.n_prime[l];
      }
      unprimed = std::max(unprimed, (suite.field_bracket(gens.n[j], gens.n[k]) - want).cwiseAbs().maxCoeff());
      primed = std::max(primed, (suite.field_bracket(gens.n_prime[j], gens.n_prime[k]) - want_p).cwiseAbs().maxCoeff());
      mixed = std::max(mixed, suite.field_bracket(gens.n[j], gens.n_prime[k]).cwiseAbs().maxCoeff());
    }
  }
  suite.record("liesys", "generator brackets [N_j, N_k] = -eps_jkl N_l", unprimed, 1e-14);
  suite.record("liesys", "generator brackets [N'_j, N'_k] = -eps_jkl N'_l", primed, 1e-14);
  suite.record("liesys", "generator brackets [N_j, N'_k] = 0", mixed, 1e-14);
}

void spin_algebra(Suite& suite) {
  const std::complex<double> i{0.0, 1.0};
  double comm = 0.0, casimir = 0.0;
  for (int two_j : {1, 2, 3, 4}) {
    const auto ops = build_spin_operators(SpinQuantumNumber(two_j));
    for (int a = 1; a <= 3; ++a) {
      for (int b = 1; b <= 3; ++b) {
        ComplexMatrix lhs = (i * ops.component(a)) * (i * ops.component(b)) - (i * ops.component(b)) * (i * ops.component(a));
        for (int c = 1; c <= 3; ++c) lhs += epsilon(a, b, c) * i * ops.component(c);
        comm = std::max(comm, lhs.cwiseAbs().maxCoeff());
      }
    }
    const double j = 0.5 * two_j;
    const ComplexMatrix c2 = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz -
                             j * (j + 1.0) * ComplexMatrix::Identity(ops.dimension(), ops.dimension());
    casimir = std::max(casimir, c2.cwiseAbs().maxCoeff());
  }
  suite.record("spinrep", "[iS_j, iS_k] = -eps_jkl iS_l for j <= 2", comm, 1e-12);
  suite.record("spinrep", "Casimir S^2 = j(j+1)", casimir, 1e-12);
}

AlgebraCurve random_curve(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Vector3d a{u(rng), u(rng), u(rng)}, w{u(rng), u(rng), u(rng)}, p{u(rng), u(rng), u(rng)};
  return AlgebraCurve([a, w, p](double t) {
    return Eigen::Vector3d{a[0] * std::sin(2 * w[0] * t + p[0]), a[1] * std::cos(2 * w[1] * t + p[1]),
                           a[2] + 0.5 * std::sin(w[2] * t + p[2])};
  });
}

void transformation_system(Suite& suite) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  const TimeGrid grid(0.0, 10.0, 10000);
  double drift = 0.0, composed = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto b = random_curve(rng), bp = random_curve(rng);
    Eigen::Vector4d x0{n(rng), n(rng), n(rng), n(rng)};
    x0 /= x0.norm();
    const auto traj = solve_fsys(b, bp, x0, grid);
    drift = std::max(drift, traj.max_first_integral_drift());
    const auto g = solve_group_equation(b, grid), gp = solve_group_equation(bp, grid);
    for (std::size_t i = 0; i < grid.size(); i += 100) {
      const auto c = composed_connection(gp.element(i), su2::GroupElement::from_coords(x0), g.element(i));
      composed = std::max(composed, (traj.coords(i) - c.coords()).cwiseAbs().maxCoeff());
    }
  }
  suite.record("liesys", "first integral |I(x) - 1| along solve_fsys", drift, 1e-10);
  suite.record("liesys", "composed-solution identity g' gbar0 g^-1", composed, 1e-6);
}

void flow_commutator(Suite& suite) {
  const auto ops = build_spin_operators(SpinQuantumNumber(2));
  const double e1 = flow_commutator_defect(ops.sx, ops.sz, 1e-2);
  const double e2 = flow_commutator_defect(ops.sx, ops.sz, 5e-3);
  suite.record_range("oracle", "flow commutator second difference ratio (expect 4)", e1 / e2, 3.6, 4.4);
}

void convergence(Suite& suite) {
  const auto field = rotating_example();
  const SpinQuantumNumber half(1);
  const ExactPropagator exact(field, M_PI / 2, half);
  const UnitaryMatrix ref = exact(10.0);
  std::vector<double> rk, mid, group;
  for (std::size_t steps : {100, 200, 400, 800}) {
    const TimeGrid grid(0.0, 10.0, steps);
    rk.push_back((rk4_propagate_unitary(field, half, grid).unitaries.back() - ref).cwiseAbs().maxCoeff());
    mid.push_back((unitary_midpoint_propagate(field, half, grid).unitaries.back() - ref).cwiseAbs().maxCoeff());
    const auto g = solve_group_equation(AlgebraCurve::from_field(field), grid);
    group.push_back((g.element(g.size() - 1).matrix() - ref).cwiseAbs().maxCoeff());
  }
  const auto prk = observed_orders(rk), pmid = observed_orders(mid), pgroup = observed_orders(group);
  suite.record_range("oracle", "RK4 observed order", *std::min_element(prk.begin(), prk.end()), 3.7, 4.3);
  suite.record_range("oracle", "Hilbert-space midpoint observed order", *std::min_element(pmid.begin(), pmid.end()), 1.7, 2.3);
  suite.record_range("liesys", "group midpoint observed order", *std::min_element(pgroup.begin(), pgroup.end()), 1.7, 2.3);
}

void rotating_example_check(Suite& suite) {
  const auto field = rotating_example();
  const TimeGrid grid(0.0, 10.0, 10000);
  const auto report = analyze_integrability(field, grid);
  suite.record("integrability", "rotating example gamma = pi/2", report.gamma ? std::abs(*report.gamma - M_PI / 2) : 1.0, 1e-9);
  suite.record("integrability", "rotating example D = 1/2 - sqrt(3)/2",
               std::abs(compute_D(1.0, M_PI / 3, M_PI / 2) - (0.5 - std::sqrt(0.75))), 1e-12);
  const ExactPropagator u(field, M_PI / 2, SpinQuantumNumber(1));
  const auto exact = exact_propagation(u, grid);
  const auto m = compare(exact, rk4_propagate_unitary(field, SpinQuantumNumber(1), grid));
  suite.record("integrability", "exact propagator vs RK4 infidelity", m.infidelity, 1e-8);
  suite.record("oracle", "unitarity of exact propagator samples", exact.norm_drift, 1e-10);
  const auto mid = unitary_midpoint_propagate(field, SpinQuantumNumber(3), grid);
  suite.record("oracle", "unitarity of midpoint propagator samples", mid.norm_drift, 1e-10);
}

}  // namespace

int cmd_selftest(const SelftestOptions& options, const CommandContext& ctx) {
  Suite suite(options);
  const std::vector<std::pair<std::string, std::function<void(Suite&)>>> groups{
      {"algebra tables", algebra_tables},
      {"generator brackets", generator_tables},
      {"spin algebra", spin_algebra},
      {"transformation system", transformation_system},
      {"flow commutator", flow_commutator},
      {"convergence orders", convergence},
      {"rotating example", rotating_example_check},
  };
  int failures = 0;
  for (const auto& [name, run] : groups) {
    const std::size_t before = suite.checks().size();
    try {
      run(suite);
    } catch (const std::exception& e) {
      *ctx.out << "FAIL [" << name << "] raised: " << e.what() << "\n";
      ++failures;
      continue;
    }
    *ctx.out << "group: " << name << "\n";
    for (std::size_t i = before; i < suite.checks().size(); ++i) {
      const auto& c = suite.checks()[i];
      *ctx.out << "  " << (c.pass ? "PASS" : "FAIL") << " " << c.module << ": " << c.invariant << " (" << c.detail << ")\n";
      if (!c.pass) ++failures;
    }
  }
  *ctx.out << groups.size() << " groups, " << suite.checks().size() << " invariants, " << failures << " failed\n";
  return failures == 0 ? kSuccess : kFailure;
}

}  // namespace liespin::cli
