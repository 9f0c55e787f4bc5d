#include "liespin/spinrep.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "liespin/errors.hpp"

namespace liespin {

SpinQuantumNumber::SpinQuantumNumber(int two_j) : two_j_(two_j) {
  if (two_j < 1) throw InvalidArgument("spin: two_j must be a positive integer, got " + std::to_string(two_j));
}

const ComplexMatrix& SpinOperators::component(int k) const {
  switch (k) {
    case 1: return sx;
    case 2: return sy;
    case 3: return sz;
    default: throw InvalidArgument("SpinOperators: component index must be 1, 2 or 3");
  }
}

SpinOperators build_spin_operators(SpinQuantumNumber spin) {
  const int n = spin.dimension();
  const double j = spin.j();
  ComplexMatrix raise = ComplexMatrix::Zero(n, n);
  ComplexMatrix sz = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = j - i;
    sz(i, i) = m;
    // <m+1| S+ |m>
    if (i > 0) raise(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  const std::complex<double> half_i{0.0, 0.5};
  return SpinOperators{spin, 0.5 * (raise + lower), -half_i * (raise - lower), sz};
}

ComplexMatrix linear_combination(const Eigen::Vector3d& v, const SpinOperators& ops) {
  return v[0] * ops.sx + v[1] * ops.sy + v[2] * ops.sz;
}

ComplexMatrix hamiltonian_at(const FieldSpec& field, double t, const SpinOperators& ops) {
  return linear_combination(eval_cartesian(field, t), ops);
}

UnitaryMatrix exp_hermitian(const ComplexMatrix& h, double s) {
  if (h.rows() != h.cols()) throw InvalidArgument("exp_hermitian: matrix is not square");
  if (!h.allFinite() || !std::isfinite(s)) throw InvalidArgument("exp_hermitian: non-finite input");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > 1e-12 * scale) throw InvalidArgument("exp_hermitian: matrix is not Hermitian");
  if (s == 0.0) return UnitaryMatrix::Identity(h.rows(), h.cols());

  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym);
  if (eig.info() != Eigen::Success) throw ConsistencyError("exp_hermitian: eigendecomposition failed");
  const Eigen::VectorXcd phases =
      (eig.eigenvalues() * (-s)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

UnitaryMatrix represent_algebra(const su2::AlgebraVector& c, const SpinOperators& ops) {
  // exp(i c.S) = exp(-i (-1) c.S)
  return exp_hermitian(linear_combination(c.vec(), ops), -1.0);
}

UnitaryMatrix represent(const su2::GroupElement& g, const SpinOperators& ops) {
  return represent_algebra(su2::log_principal(g), ops);
}

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace liespin
