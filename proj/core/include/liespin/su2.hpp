#pragma once

// SU(2) and su(2) in the coordinates used by the transformation system.
//
// Algebra basis (skew-Hermitian, traceless):
//   a1 = (1/2)[[0, i], [i, 0]]   a2 = (1/2)[[0, 1], [-1, 0]]   a3 = (1/2)[[i, 0], [0, -i]]
// with [a_j, a_k] = -eps_{jkl} a_l.
//
// Group elements are [[a, b], [-conj(b), conj(a)]] with a = x1 + i y1 and
// b = x2 + i y2, stored as the real 4-vector (x1, x2, y1, y2).

#include <array>
#include <complex>

#include <Eigen/Core>

namespace liespin::su2 {

using Matrix2c = Eigen::Matrix2cd;

/// Coefficients (c1, c2, c3) of c1 a1 + c2 a2 + c3 a3.
struct AlgebraVector {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  static AlgebraVector from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
  Eigen::Vector3d vec() const { return {c1, c2, c3}; }
  double norm() const;
  bool finite() const;

  AlgebraVector operator+(const AlgebraVector& o) const { return {c1 + o.c1, c2 + o.c2, c3 + o.c3}; }
  AlgebraVector operator-(const AlgebraVector& o) const { return {c1 - o.c1, c2 - o.c2, c3 - o.c3}; }
  AlgebraVector operator-() const { return {-c1, -c2, -c3}; }
  AlgebraVector operator*(double s) const { return {c1 * s, c2 * s, c3 * s}; }
  friend AlgebraVector operator*(double s, const AlgebraVector& v) { return v * s; }
};

/// Unit 4-vector (x1, x2, y1, y2). Construction renormalises; an input whose
/// norm is off by more than 1e-6 is rejected as an internal inconsistency.
class GroupElement {
 public:
  GroupElement() = default;  // identity
  GroupElement(double x1, double x2, double y1, double y2);

  static GroupElement identity() { return {}; }
  static GroupElement from_coords(const Eigen::Vector4d& x) { return {x[0], x[1], x[2], x[3]}; }
  /// Element with the given matrix entries a, b.
  static GroupElement from_ab(std::complex<double> a, std::complex<double> b);

  double x1() const { return x_[0]; }
  double x2() const { return x_[1]; }
  double y1() const { return x_[2]; }
  double y2() const { return x_[3]; }
  std::complex<double> a() const { return {x_[0], x_[2]}; }
  std::complex<double> b() const { return {x_[1], x_[3]}; }
  Eigen::Vector4d coords() const { return {x_[0], x_[1], x_[2], x_[3]}; }

  /// The defining 2x2 matrix.
  Matrix2c matrix() const;

 private:
  std::array<double, 4> x_{1.0, 0.0, 0.0, 0.0};
};

/// One member of the one-parameter family A_gamma: rotation angle gamma about
/// the in-plane axis selected by the phase b.
class AGammaElement {
 public:
  AGammaElement(double gamma, double phase);

  double gamma() const { return gamma_; }
  double phase() const { return phase_; }

  /// x1 = cos(g/2), x2 = -sin(g/2) cos b, y1 = 0, y2 = sin(g/2) sin b.
  GroupElement embed() const;
  /// Generator (gamma sin b, -gamma cos b, 0) whose exponential is embed().
  AlgebraVector generator() const;

 private:
  double gamma_;
  double phase_;
};

/// The basis matrix a_k, k in {1, 2, 3}.
Matrix2c basis_matrix(int k);
/// c1 a1 + c2 a2 + c3 a3 as a 2x2 matrix.
Matrix2c algebra_matrix(const AlgebraVector& c);
/// Coefficients of a traceless skew-Hermitian X, via c_k = -2 Tr(a_k X).
AlgebraVector project(const Matrix2c& x);

GroupElement exp_algebra(const AlgebraVector& c);
/// Inverse of exp_algebra with rotation angle |c| in [0, 2 pi).
/// Throws BranchUndefined for -identity.
AlgebraVector log_principal(const GroupElement& g);

GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);

/// [c, d] = -(c x d).
AlgebraVector bracket(const AlgebraVector& c, const AlgebraVector& d);
/// Coefficients of g (c.a) g^-1.
AlgebraVector adjoint(const GroupElement& g, const AlgebraVector& c);

/// Largest coordinate difference; -g and g count as different.
double distance(const GroupElement& g, const GroupElement& h);

}  // namespace liespin::su2
