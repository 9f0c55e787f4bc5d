#pragma once

// Right-invariant equations on SU(2) and the linear transformation system
// that connects two of them.
//
// A curve b(t) in R^3 stands for a(t) = -(b1 a1 + b2 a2 + b3 a3). A curve
// gbar(t) in SU(2) maps the equation of b onto the equation of b' when
//   dgbar/dt gbar^-1 = -b'.a + gbar (b.a) gbar^-1,
// which in the coordinates x = (x1, x2, y1, y2) of gbar is the linear system
// dx/dt = M(b, b') x with M antisymmetric.

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "liespin/fields.hpp"
#include "liespin/program.hpp"
#include "liespin/su2.hpp"
#include "liespin/time_grid.hpp"

namespace liespin {

using ScalarFunction = std::function<double(double)>;

/// t -> (b1, b2, b3).
class AlgebraCurve {
 public:
  using Function = std::function<Eigen::Vector3d(double)>;

  explicit AlgebraCurve(Function f) : f_(std::move(f)) {}

  /// b_k = B_k of the field.
  static AlgebraCurve from_field(FieldSpec field);
  static AlgebraCurve constant(const Eigen::Vector3d& b);

  Eigen::Vector3d operator()(double t) const { return f_(t); }

 private:
  Function f_;
};

/// Target curves a'(t) = -D(t) (c1 a1 + c2 a2 + c3 a3) with a fixed unit direction c.
class TargetCurve {
 public:
  /// a'(t) = -D(t) a3.
  static TargetCurve axis_z(Program d);
  static TargetCurve axis_z(ScalarFunction d);
  /// Throws InvalidArgument unless |direction| = 1 within 1e-12.
  static TargetCurve fixed_direction(const Eigen::Vector3d& direction, Program d);
  static TargetCurve fixed_direction(const Eigen::Vector3d& direction, ScalarFunction d);

  const Eigen::Vector3d& direction() const { return direction_; }
  double coefficient(double t) const { return d_(t); }
  /// b'(t) = D(t) c.
  Eigen::Vector3d operator()(double t) const { return d_(t) * direction_; }
  AlgebraCurve curve() const;

 private:
  TargetCurve(const Eigen::Vector3d& direction, ScalarFunction d);

  Eigen::Vector3d direction_;
  ScalarFunction d_;
};

using FsysMatrix = Eigen::Matrix4d;

/// The coefficient matrix (with its factor 1/2) of the transformation system,
/// rows ordered x1', x2', y1', y2'.
FsysMatrix fsys_matrix(const Eigen::Vector3d& b, const Eigen::Vector3d& b_prime);

/// Matrices of N1..N3 (coefficients of b) and N1'..N3' (coefficients of b'),
/// each acting as dx/dt = N x.
struct GeneratorSet {
  std::array<Eigen::Matrix4d, 3> n;
  std::array<Eigen::Matrix4d, 3> n_prime;
};

GeneratorSet generator_set();

/// Lie bracket of the linear vector fields x -> A x and x -> B x, which is the
/// linear field of B A - A B.
Eigen::Matrix4d vector_field_bracket(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b);

/// exp(s M) for an fsys matrix M, using the splitting into commuting left and
/// right quaternion multiplications.
Eigen::Matrix4d fsys_exponential(const Eigen::Vector3d& b, const Eigen::Vector3d& b_prime, double s);

/// Samples of a curve in SU(2) on a uniform grid. Coordinates are stored as
/// integrated, without renormalisation.
class GroupTrajectory {
 public:
  GroupTrajectory(TimeGrid grid, std::vector<Eigen::Vector4d> coords);

  const TimeGrid& grid() const { return grid_; }
  std::size_t size() const { return coords_.size(); }
  double time(std::size_t i) const { return grid_.at(i); }
  const Eigen::Vector4d& coords(std::size_t i) const { return coords_[i]; }
  su2::GroupElement element(std::size_t i) const { return su2::GroupElement::from_coords(coords_[i]); }
  /// I(x) = x1^2 + x2^2 + y1^2 + y2^2 at sample i.
  double first_integral(std::size_t i) const { return coords_[i].squaredNorm(); }
  /// max_i |I(x_i) - 1|.
  double max_first_integral_drift() const;

  /// Piecewise geodesic interpolation: exp(w log(g_{i+1} g_i^-1)) g_i.
  su2::GroupElement at(double t) const;

 private:
  TimeGrid grid_;
  std::vector<Eigen::Vector4d> coords_;
};

/// A differentiable curve in SU(2), with its coordinate derivative.
struct GroupCurve {
  std::function<su2::GroupElement(double)> value;
  std::function<Eigen::Vector4d(double)> derivative;
  bool numeric_derivative = false;

  /// Central differences with step equal to the grid step (one-sided at the ends).
  static GroupCurve from_trajectory(GroupTrajectory trajectory);
  static GroupCurve constant(const su2::GroupElement& g);
};

/// g(t) with dg/dt g^-1 = -b(t).a, g(t0) = e, by the exponential midpoint rule
/// g_{n+1} = exp(-h b(t_n + h/2)) g_n.
GroupTrajectory solve_group_equation(const AlgebraCurve& b, const TimeGrid& grid);

/// Curve connecting the equations of b and b_prime, starting at x0. Each step
/// applies the exact exponential of the midpoint fsys matrix, which is
/// orthogonal, so I(x) is conserved up to rounding. Throws InvalidArgument when
/// |I(x0) - 1| >= 1e-12.
GroupTrajectory solve_fsys(const AlgebraCurve& b, const AlgebraCurve& b_prime,
                           const Eigen::Vector4d& x0, const TimeGrid& grid);
GroupTrajectory solve_fsys(const AlgebraCurve& b, const TargetCurve& target,
                           const su2::GroupElement& g0, const TimeGrid& grid);

/// gbar(t) = g'(t) gbar(0) g(t)^-1 for solutions g, g' of the two one-sided equations.
su2::GroupElement composed_connection(const su2::GroupElement& g_prime, const su2::GroupElement& gbar0,
                                      const su2::GroupElement& g);

struct TransformedCurve {
  AlgebraCurve curve;
  /// Set when gbar's derivative comes from finite differences (accuracy O(h^2)).
  bool numeric_derivative = false;
};

/// b' with -b'.a = Ad(gbar)(-b.a) + dgbar/dt gbar^-1.
TransformedCurve transform_curve(const AlgebraCurve& b, const GroupCurve& gbar);

/// max-entry residual of dgbar/dt gbar^-1 = -b'.a + gbar (b.a) gbar^-1 at t.
double transform_residual(const AlgebraCurve& b, const AlgebraCurve& b_prime, const GroupCurve& gbar,
                          double t);

}  // namespace liespin
