#include "liespin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "liespin/errors.hpp"

namespace liespin {
namespace {

const std::complex<double> kMinusI{0.0, -1.0};

ComplexMatrix checked(ComplexMatrix h) {
  if (!h.allFinite()) throw InvalidArgument("propagation aborted: non-finite Hamiltonian");
  return h;
}

// One RK4 step for dY/dt = -i H(t) Y, Y a vector or a matrix.
template <class Y>
Y rk4_step(const HamiltonianFunction& h, double t, double dt, const Y& y) {
  const ComplexMatrix h0 = checked(h(t));
  const ComplexMatrix hm = checked(h(t + 0.5 * dt));
  const ComplexMatrix h1 = checked(h(t + dt));
  const Y k1 = kMinusI * (h0 * y);
  const Y k2 = kMinusI * (hm * (y + 0.5 * dt * k1));
  const Y k3 = kMinusI * (hm * (y + 0.5 * dt * k2));
  const Y k4 = kMinusI * (h1 * (y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::rk4: return "rk4";
    case Scheme::unitary_midpoint: return "unitary_midpoint";
    case Scheme::exact: return "exact";
  }
  return "unknown";
}

HamiltonianFunction field_hamiltonian(const FieldSpec& field, const SpinOperators& ops) {
  return [field, ops](double t) { return hamiltonian_at(field, t, ops); };
}

PropagationResult rk4_propagate(const HamiltonianFunction& h, const StateVector& psi0, const TimeGrid& grid) {
  if (!psi0.allFinite() || std::abs(psi0.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("rk4_propagate: initial state must be normalised");
  }
  PropagationResult out{grid, Scheme::rk4, {}, {}, 0.0};
  out.states.reserve(grid.size());
  out.states.push_back(psi0);
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double t = grid.at(n);
    out.states.push_back(rk4_step(h, t, grid.at(n + 1) - t, out.states.back()));
    out.norm_drift = std::max(out.norm_drift, std::abs(out.states.back().norm() - 1.0));
  }
  return out;
}

PropagationResult rk4_propagate(const FieldSpec& field, SpinQuantumNumber spin, const StateVector& psi0,
                                const TimeGrid& grid) {
  const auto ops = build_spin_operators(spin);
  if (psi0.size() != ops.dimension()) throw InvalidArgument("rk4_propagate: state dimension does not match spin");
  return rk4_propagate(field_hamiltonian(field, ops), psi0, grid);
}

PropagationResult rk4_propagate_unitary(const HamiltonianFunction& h, int dimension, const TimeGrid& grid) {
  PropagationResult out{grid, Scheme::rk4, {}, {}, 0.0};
  out.unitaries.reserve(grid.size());
  out.unitaries.push_back(UnitaryMatrix::Identity(dimension, dimension));
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double t = grid.at(n);
    out.unitaries.push_back(rk4_step(h, t, grid.at(n + 1) - t, out.unitaries.back()));
    out.norm_drift = std::max(out.norm_drift, unitarity_defect(out.unitaries.back()));
  }
  return out;
}

PropagationResult rk4_propagate_unitary(const FieldSpec& field, SpinQuantumNumber spin, const TimeGrid& grid) {
  const auto ops = build_spin_operators(spin);
  return rk4_propagate_unitary(field_hamiltonian(field, ops), ops.dimension(), grid);
}

PropagationResult unitary_midpoint_propagate(const HamiltonianFunction& h, int dimension, const TimeGrid& grid) {
  PropagationResult out{grid, Scheme::unitary_midpoint, {}, {}, 0.0};
  out.unitaries.reserve(grid.size());
  out.unitaries.push_back(UnitaryMatrix::Identity(dimension, dimension));
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double t = grid.at(n);
    const double dt = grid.at(n + 1) - t;
    UnitaryMatrix u = exp_hermitian(checked(h(t + 0.5 * dt)), dt) * out.unitaries.back();
    u += 0.5 * u * (UnitaryMatrix::Identity(dimension, dimension) - u.adjoint() * u);
    out.unitaries.push_back(std::move(u));
    out.norm_drift = std::max(out.norm_drift, unitarity_defect(out.unitaries.back()));
  }
  return out;
}

PropagationResult unitary_midpoint_propagate(const FieldSpec& field, SpinQuantumNumber spin, const TimeGrid& grid) {
  const auto ops = build_spin_operators(spin);
  return unitary_midpoint_propagate(field_hamiltonian(field, ops), ops.dimension(), grid);
}

PropagationResult exact_propagation(const ExactPropagator& propagator, const TimeGrid& grid) {
  PropagationResult out{grid, Scheme::exact, {}, propagator.on_grid(grid), 0.0};
  for (const auto& u : out.unitaries) out.norm_drift = std::max(out.norm_drift, unitarity_defect(u));
  return out;
}

PropagationResult apply_to_state(const PropagationResult& unitaries, const StateVector& psi0) {
  if (unitaries.holds_states()) throw InvalidArgument("apply_to_state: result already holds states");
  PropagationResult out{unitaries.grid, unitaries.scheme, {}, {}, 0.0};
  out.states.reserve(unitaries.unitaries.size());
  for (const auto& u : unitaries.unitaries) {
    if (u.cols() != psi0.size()) throw InvalidArgument("apply_to_state: state dimension mismatch");
    out.states.push_back(u * psi0);
    out.norm_drift = std::max(out.norm_drift, std::abs(out.states.back().norm() - psi0.norm()));
  }
  return out;
}

ComparisonMetrics compare(const PropagationResult& a, const PropagationResult& b) {
  if (!(a.grid == b.grid)) throw InvalidArgument("compare: grids differ");
  if (a.holds_states() != b.holds_states()) throw InvalidArgument("compare: cannot compare states with operators");
  ComparisonMetrics m;
  m.unitarity_defect = std::max(a.norm_drift, b.norm_drift);
  if (a.holds_states()) {
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      const auto& x = a.states[i];
      const auto& y = b.states[i];
      if (x.size() != y.size()) throw InvalidArgument("compare: dimension mismatch");
      m.max_state_error = std::max(m.max_state_error, (x - y).norm());
      m.infidelity = std::max(m.infidelity, 1.0 - std::abs(x.dot(y)));
    }
  } else {
    for (std::size_t i = 0; i < a.unitaries.size(); ++i) {
      const auto& x = a.unitaries[i];
      const auto& y = b.unitaries[i];
      if (x.rows() != y.rows() || x.cols() != y.cols()) throw InvalidArgument("compare: dimension mismatch");
      m.max_operator_error = std::max(m.max_operator_error, (x - y).cwiseAbs().maxCoeff());
      const double overlap = std::abs((x.adjoint() * y).trace()) / static_cast<double>(x.rows());
      m.infidelity = std::max(m.infidelity, 1.0 - overlap);
    }
  }
  // Rounding can push 1 - |<a|b>| slightly negative.
  m.infidelity = std::max(0.0, m.infidelity);
  return m;
}

double flow_commutator_defect(const ComplexMatrix& ha, const ComplexMatrix& hb, double t) {
  const auto flow = [&](double s) {
    // exp(sA) = exp(-i s ha)
    return ComplexMatrix(exp_hermitian(hb, -s) * exp_hermitian(ha, -s) * exp_hermitian(hb, s) * exp_hermitian(ha, s));
  };
  const ComplexMatrix a = kMinusI * ha;
  const ComplexMatrix b = kMinusI * hb;
  const auto n = ha.rows();
  const ComplexMatrix second = (flow(t) - 2.0 * ComplexMatrix::Identity(n, n) + flow(-t)) / (t * t);
  return (second - 2.0 * (b * a - a * b)).cwiseAbs().maxCoeff();
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) out.push_back(std::log2(errors[i] / errors[i + 1]));
  return out;
}

}  // namespace liespin
