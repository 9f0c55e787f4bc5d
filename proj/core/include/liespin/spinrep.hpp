#pragma once

// Spin-j irreducible representations: H(t) = B(t).S and the action
// Phi(exp(c.a)) = exp(i c.S) of SU(2) on the (2j+1)-dimensional state space.

#include <Eigen/Core>

#include "liespin/fields.hpp"
#include "liespin/su2.hpp"

namespace liespin {

using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using UnitaryMatrix = Eigen::MatrixXcd;

/// j = two_j / 2 with two_j >= 1.
class SpinQuantumNumber {
 public:
  explicit SpinQuantumNumber(int two_j);

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  int dimension() const { return two_j_ + 1; }

  bool operator==(const SpinQuantumNumber&) const = default;

 private:
  int two_j_;
};

/// Sx, Sy, Sz in the |j, m> basis ordered m = j, j-1, ..., -j (hbar = 1).
struct SpinOperators {
  SpinQuantumNumber spin;
  ComplexMatrix sx;
  ComplexMatrix sy;
  ComplexMatrix sz;

  /// S_k for k in {1, 2, 3}.
  const ComplexMatrix& component(int k) const;
  int dimension() const { return spin.dimension(); }
};

SpinOperators build_spin_operators(SpinQuantumNumber j);

/// v1 Sx + v2 Sy + v3 Sz.
ComplexMatrix linear_combination(const Eigen::Vector3d& v, const SpinOperators& ops);

/// H(t) = Bx(t) Sx + By(t) Sy + Bz(t) Sz.
ComplexMatrix hamiltonian_at(const FieldSpec& field, double t, const SpinOperators& ops);

/// exp(-i s H) by Hermitian eigendecomposition. Throws InvalidArgument when
/// H is not Hermitian to 1e-12 (relative to its largest entry).
UnitaryMatrix exp_hermitian(const ComplexMatrix& h, double s);

/// exp(i c.S), the image of exp_algebra(c).
UnitaryMatrix represent_algebra(const su2::AlgebraVector& c, const SpinOperators& ops);

/// Phi(g) = exp(i log(g).S). Throws BranchUndefined for -identity.
UnitaryMatrix represent(const su2::GroupElement& g, const SpinOperators& ops);

/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix& u);

/// max |A - A^dagger|.
double hermiticity_defect(const ComplexMatrix& a);

}  // namespace liespin
