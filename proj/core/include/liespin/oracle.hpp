#pragma once

// Reference propagation of i dpsi/dt = H(t) psi, independent of the Lie-system
// machinery: classic RK4 on coordinates and an exactly unitary exponential
// midpoint rule.

#include <functional>
#include <string>
#include <vector>

#include "liespin/fields.hpp"
#include "liespin/integrability.hpp"
#include "liespin/spinrep.hpp"
#include "liespin/time_grid.hpp"

namespace liespin {

using HamiltonianFunction = std::function<ComplexMatrix(double)>;

enum class Scheme { rk4, unitary_midpoint, exact };

std::string to_string(Scheme s);

/// Either states or unitaries on every grid point, never both.
struct PropagationResult {
  TimeGrid grid;
  Scheme scheme = Scheme::rk4;
  std::vector<StateVector> states;
  std::vector<UnitaryMatrix> unitaries;
  /// max |(|psi| - 1)| or max |U^dagger U - I| over the samples.
  double norm_drift = 0.0;

  bool holds_states() const { return !states.empty(); }
  double step() const { return grid.step(); }
};

struct ComparisonMetrics {
  double max_state_error = 0.0;     // max |psi_a - psi_b|
  double infidelity = 0.0;          // max 1 - |<psi_a|psi_b>|, or 1 - |Tr(A^dagger B)|/d for operators
  double max_operator_error = 0.0;  // max entry of |U_a - U_b|
  double unitarity_defect = 0.0;    // largest norm drift of either input
};

HamiltonianFunction field_hamiltonian(const FieldSpec& field, const SpinOperators& ops);

/// Fixed-step RK4 for dpsi/dt = -i H(t) psi. psi0 must be normalised to 1e-10.
PropagationResult rk4_propagate(const HamiltonianFunction& h, const StateVector& psi0, const TimeGrid& grid);
PropagationResult rk4_propagate(const FieldSpec& field, SpinQuantumNumber spin, const StateVector& psi0,
                                const TimeGrid& grid);
/// RK4 on the propagator itself, U(t0) = I.
PropagationResult rk4_propagate_unitary(const HamiltonianFunction& h, int dimension, const TimeGrid& grid);
PropagationResult rk4_propagate_unitary(const FieldSpec& field, SpinQuantumNumber spin, const TimeGrid& grid);

/// U_{n+1} = exp(-i h H(t_n + h/2)) U_n, U(t0) = I.
PropagationResult unitary_midpoint_propagate(const HamiltonianFunction& h, int dimension, const TimeGrid& grid);
PropagationResult unitary_midpoint_propagate(const FieldSpec& field, SpinQuantumNumber spin, const TimeGrid& grid);

/// Closed-form propagator sampled on the grid.
PropagationResult exact_propagation(const ExactPropagator& propagator, const TimeGrid& grid);

/// States U(t) psi0 from a unitary-valued result.
PropagationResult apply_to_state(const PropagationResult& unitaries, const StateVector& psi0);

/// Throws InvalidArgument on grid, mode or dimension mismatch.
ComparisonMetrics compare(const PropagationResult& a, const PropagationResult& b);

/// max entry of | F''(0) - 2 [B, A] | where F(t) = exp(-tB) exp(-tA) exp(tB) exp(tA),
/// A = -i ha and B = -i hb, F'' taken by central second differences with step t.
double flow_commutator_defect(const ComplexMatrix& ha, const ComplexMatrix& hb, double t);

/// log2(e_k / e_{k+1}) for errors measured under successive step halvings.
std::vector<double> observed_orders(const std::vector<double>& errors);

}  // namespace liespin
