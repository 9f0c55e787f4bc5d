#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "liespin/errors.hpp"
#include "liespin/oracle.hpp"
#include "test_support.hpp"

namespace liespin {
namespace {

using testing::max_abs;
using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

StateVector basis_state(int dim, int k) {
  StateVector v = StateVector::Zero(dim);
  v[k] = 1.0;
  return v;
}

TEST(Oracle, ZeroHamiltonianIsIdentity) {
  const FieldSpec zero(ConstantField{});
  const TimeGrid grid(0.0, 2.0, 20);
  const auto mid = unitary_midpoint_propagate(zero, SpinQuantumNumber(3), grid);
  const auto rk = rk4_propagate_unitary(zero, SpinQuantumNumber(3), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(max_abs(mid.unitaries[i] - ComplexMatrix::Identity(4, 4)), 0.0);
    EXPECT_EQ(max_abs(rk.unitaries[i] - ComplexMatrix::Identity(4, 4)), 0.0);
  }
}

TEST(Oracle, DiagonalHamiltonianGivesPhases) {
  const FieldSpec f(ConstantField{0.0, 0.0, 1.5});
  const TimeGrid grid(0.0, 4.0, 4000);
  const StateVector psi0 = StateVector::Constant(3, 1.0 / std::sqrt(3.0));
  const auto rk = rk4_propagate(f, SpinQuantumNumber(2), psi0, grid);
  const double t = grid.t1();
  for (int m = 0; m < 3; ++m) {
    const cd want = psi0[m] * std::exp(-I * 1.5 * (1.0 - m) * t);
    EXPECT_LT(std::abs(rk.states.back()[m] - want), 1e-12);
  }
  const auto mid = apply_to_state(unitary_midpoint_propagate(f, SpinQuantumNumber(2), grid), psi0);
  EXPECT_LT((mid.states.back() - rk.states.back()).norm(), 1e-12);
}

double endpoint_error(Scheme scheme, std::size_t steps, const ComplexMatrix& ref) {
  const FieldSpec f(PolarField{Program(Program::Sinusoid{0.5, 1.3, 0.0, 1.0}), Program(Program::Sinusoid{0.4, 0.8, 0.0, 1.0}),
                               Program(Program::Linear{0.0, 0.9})});
  const TimeGrid grid(0.0, 2.0, steps);
  const auto res = scheme == Scheme::rk4 ? rk4_propagate_unitary(f, SpinQuantumNumber(1), grid)
                                         : unitary_midpoint_propagate(f, SpinQuantumNumber(1), grid);
  return max_abs(res.unitaries.back() - ref);
}

TEST(Oracle, ObservedOrders) {
  const FieldSpec f(PolarField{Program(Program::Sinusoid{0.5, 1.3, 0.0, 1.0}), Program(Program::Sinusoid{0.4, 0.8, 0.0, 1.0}),
                               Program(Program::Linear{0.0, 0.9})});
  const auto ref = rk4_propagate_unitary(f, SpinQuantumNumber(1), TimeGrid(0.0, 2.0, 20000)).unitaries.back();
  std::vector<double> rk, mid;
  for (std::size_t steps : {20, 40, 80}) {
    rk.push_back(endpoint_error(Scheme::rk4, steps, ref));
    mid.push_back(endpoint_error(Scheme::unitary_midpoint, steps, ref));
  }
  for (double p : observed_orders(rk)) EXPECT_NEAR(p, 4.0, 0.3);
  for (double p : observed_orders(mid)) EXPECT_NEAR(p, 2.0, 0.3);
}

TEST(Oracle, ObservedOrdersArithmetic) {
  const auto p = observed_orders({1.0, 0.25, 0.0625});
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 2.0);
  EXPECT_DOUBLE_EQ(p[1], 2.0);
}

TEST(Oracle, MidpointStaysUnitaryOverLongRuns) {
  const FieldSpec f(RotatingField{1.0, M_PI / 3, 0.5, 0.0});
  const auto res = unitary_midpoint_propagate(f, SpinQuantumNumber(1), TimeGrid(0.0, 100.0, 100000));
  EXPECT_LT(res.norm_drift, 1e-12);
}

TEST(Oracle, Rk4RejectsUnnormalisedState) {
  const FieldSpec f(ConstantField{1.0, 0.0, 0.0});
  EXPECT_THROW(rk4_propagate(f, SpinQuantumNumber(1), StateVector::Constant(2, 1.0), TimeGrid(0.0, 1.0, 10)),
               InvalidArgument);
  EXPECT_THROW(rk4_propagate(f, SpinQuantumNumber(2), basis_state(2, 0), TimeGrid(0.0, 1.0, 10)), InvalidArgument);
}

TEST(Compare, InfidelityIgnoresGlobalPhase) {
  const FieldSpec f(RotatingField{1.0, 0.8, 0.3, 0.0});
  const TimeGrid grid(0.0, 1.0, 100);
  auto a = unitary_midpoint_propagate(f, SpinQuantumNumber(2), grid);
  auto b = a;
  for (auto& u : b.unitaries) u *= std::exp(I * 0.7);
  const auto m = compare(a, b);
  EXPECT_LT(m.infidelity, 1e-13);
  EXPECT_GT(m.max_operator_error, 0.5);

  const auto sa = apply_to_state(a, basis_state(3, 1));
  const auto sb = apply_to_state(b, basis_state(3, 1));
  EXPECT_LT(compare(sa, sb).infidelity, 1e-13);
  EXPECT_GT(compare(sa, sb).max_state_error, 0.5);
  EXPECT_EQ(compare(a, a).max_operator_error, 0.0);
}

TEST(Compare, MismatchesThrow) {
  const FieldSpec f(RotatingField{1.0, 0.8, 0.3, 0.0});
  const auto a = unitary_midpoint_propagate(f, SpinQuantumNumber(1), TimeGrid(0.0, 1.0, 10));
  const auto b = unitary_midpoint_propagate(f, SpinQuantumNumber(1), TimeGrid(0.0, 1.0, 20));
  const auto c = unitary_midpoint_propagate(f, SpinQuantumNumber(2), TimeGrid(0.0, 1.0, 10));
  EXPECT_THROW(compare(a, b), InvalidArgument);
  EXPECT_THROW(compare(a, c), InvalidArgument);
  EXPECT_THROW(compare(a, apply_to_state(a, basis_state(2, 0))), InvalidArgument);
}

TEST(Oracle, FieldHamiltonianMatchesSpinOperators) {
  const FieldSpec f(RotatingField{2.0, 0.5, 1.0, 0.0});
  const auto ops = build_spin_operators(SpinQuantumNumber(2));
  const auto h = field_hamiltonian(f, ops);
  EXPECT_LT(max_abs(h(0.7) - hamiltonian_at(f, 0.7, ops)), 1e-15);
}

}  // namespace
}  // namespace liespin
