#include "liespin/liesys.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "liespin/errors.hpp"

namespace liespin {
namespace {

using su2::AlgebraVector;
using su2::GroupElement;

su2::Matrix2c coordinate_matrix(const Eigen::Vector4d& x) {
  const std::complex<double> a{x[0], x[2]};
  const std::complex<double> b{x[1], x[3]};
  su2::Matrix2c m;
  m << a, b, -std::conj(b), std::conj(a);
  return m;
}

// exp(s N) for N with N^2 = -(|v|/2)^2 I.
Eigen::Matrix4d quaternion_exponential(const Eigen::Matrix4d& n, double speed, double s) {
  const double half = 0.5 * speed;
  if (half == 0.0) return Eigen::Matrix4d::Identity();
  return std::cos(half * s) * Eigen::Matrix4d::Identity() + (std::sin(half * s) / half) * n;
}

}  // namespace

AlgebraCurve AlgebraCurve::from_field(FieldSpec field) {
  return AlgebraCurve([field = std::move(field)](double t) { return eval_cartesian(field, t); });
}

AlgebraCurve AlgebraCurve::constant(const Eigen::Vector3d& b) {
  return AlgebraCurve([b](double) { return b; });
}

TargetCurve::TargetCurve(const Eigen::Vector3d& direction, ScalarFunction d)
    : direction_(direction), d_(std::move(d)) {
  if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("target curve: direction must be a unit vector");
  }
  if (!d_) throw InvalidArgument("target curve: missing coefficient function");
}

TargetCurve TargetCurve::axis_z(Program d) { return axis_z(ScalarFunction(std::move(d))); }

TargetCurve TargetCurve::axis_z(ScalarFunction d) { return TargetCurve({0.0, 0.0, 1.0}, std::move(d)); }

TargetCurve TargetCurve::fixed_direction(const Eigen::Vector3d& direction, Program d) {
  return fixed_direction(direction, ScalarFunction(std::move(d)));
}

TargetCurve TargetCurve::fixed_direction(const Eigen::Vector3d& direction, ScalarFunction d) {
  return TargetCurve(direction, std::move(d));
}

AlgebraCurve TargetCurve::curve() const {
  return AlgebraCurve([dir = direction_, d = d_](double t) -> Eigen::Vector3d { return d(t) * dir; });
}

FsysMatrix fsys_matrix(const Eigen::Vector3d& b, const Eigen::Vector3d& bp) {
  FsysMatrix m = FsysMatrix::Zero();
  m(0, 1) = bp[1] - b[1];
  m(0, 2) = -b[2] + bp[2];
  m(0, 3) = -b[0] + bp[0];
  m(1, 2) = -b[0] - bp[0];
  m(1, 3) = b[2] + bp[2];
  m(2, 3) = -b[1] - bp[1];
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) m(j, i) = -m(i, j);
  }
  return 0.5 * m;
}

GeneratorSet generator_set() {
  GeneratorSet set;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(k);
    set.n[k] = fsys_matrix(e, Eigen::Vector3d::Zero());
    set.n_prime[k] = fsys_matrix(Eigen::Vector3d::Zero(), e);
  }
  return set;
}

Eigen::Matrix4d vector_field_bracket(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
  return b * a - a * b;
}

Eigen::Matrix4d fsys_exponential(const Eigen::Vector3d& b, const Eigen::Vector3d& bp, double s) {
  const Eigen::Matrix4d right = fsys_matrix(b, Eigen::Vector3d::Zero());
  const Eigen::Matrix4d left = fsys_matrix(Eigen::Vector3d::Zero(), bp);
  return quaternion_exponential(right, b.norm(), s) * quaternion_exponential(left, bp.norm(), s);
}

GroupTrajectory::GroupTrajectory(TimeGrid grid, std::vector<Eigen::Vector4d> coords)
    : grid_(grid), coords_(std::move(coords)) {
  if (coords_.size() != grid_.size()) throw InvalidArgument("trajectory: sample count does not match grid");
}

double GroupTrajectory::max_first_integral_drift() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) worst = std::max(worst, std::abs(first_integral(i) - 1.0));
  return worst;
}

GroupElement GroupTrajectory::at(double t) const {
  const double h = grid_.step();
  if (t < grid_.t0() - 1e-12 * h || t > grid_.t1() + 1e-12 * h) {
    throw RangeError("trajectory: t = " + std::to_string(t) + " outside the grid");
  }
  const double u = std::clamp((t - grid_.t0()) / h, 0.0, static_cast<double>(grid_.steps()));
  const auto i = std::min(static_cast<std::size_t>(u), grid_.steps() - 1);
  const double w = u - static_cast<double>(i);
  const auto gi = element(i);
  if (w == 0.0) return gi;
  const auto inc = su2::compose(element(i + 1), su2::inverse(gi));
  return su2::compose(su2::exp_algebra(w * su2::log_principal(inc)), gi);
}

GroupCurve GroupCurve::from_trajectory(GroupTrajectory trajectory) {
  GroupCurve curve;
  auto shared = std::make_shared<const GroupTrajectory>(std::move(trajectory));
  curve.value = [shared](double t) { return shared->at(t); };
  curve.derivative = [shared](double t) -> Eigen::Vector4d {
    const double h = shared->grid().step();
    const double ta = std::max(shared->grid().t0(), t - h);
    const double tb = std::min(shared->grid().t1(), t + h);
    return (shared->at(tb).coords() - shared->at(ta).coords()) / (tb - ta);
  };
  curve.numeric_derivative = true;
  return curve;
}

GroupCurve GroupCurve::constant(const GroupElement& g) {
  return {[g](double) { return g; }, [](double) -> Eigen::Vector4d { return Eigen::Vector4d::Zero(); }, false};
}

GroupTrajectory solve_group_equation(const AlgebraCurve& b, const TimeGrid& grid) {
  std::vector<Eigen::Vector4d> coords;
  coords.reserve(grid.size());
  GroupElement g;
  coords.push_back(g.coords());
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double ta = grid.at(n);
    const double h = grid.at(n + 1) - ta;
    const Eigen::Vector3d bm = b(ta + 0.5 * h);
    if (!bm.allFinite()) throw InvalidArgument("solve_group_equation: non-finite coefficients");
    g = su2::compose(su2::exp_algebra(AlgebraVector::from(-h * bm)), g);
    coords.push_back(g.coords());
  }
  return {grid, std::move(coords)};
}

GroupTrajectory solve_fsys(const AlgebraCurve& b, const AlgebraCurve& bp, const Eigen::Vector4d& x0,
                           const TimeGrid& grid) {
  if (!x0.allFinite() || std::abs(x0.squaredNorm() - 1.0) >= 1e-12) {
    throw InvalidArgument("solve_fsys: initial point must satisfy I(x0) = 1 within 1e-12");
  }
  std::vector<Eigen::Vector4d> coords;
  coords.reserve(grid.size());
  Eigen::Vector4d x = x0;
  coords.push_back(x);
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double ta = grid.at(n);
    const double h = grid.at(n + 1) - ta;
    const double tm = ta + 0.5 * h;
    const Eigen::Vector3d bm = b(tm);
    const Eigen::Vector3d bpm = bp(tm);
    if (!bm.allFinite() || !bpm.allFinite()) throw InvalidArgument("solve_fsys: non-finite coefficients");
    x = fsys_exponential(bm, bpm, h) * x;
    coords.push_back(x);
  }
  return {grid, std::move(coords)};
}

GroupTrajectory solve_fsys(const AlgebraCurve& b, const TargetCurve& target, const GroupElement& g0,
                           const TimeGrid& grid) {
  return solve_fsys(b, target.curve(), g0.coords(), grid);
}

GroupElement composed_connection(const GroupElement& g_prime, const GroupElement& gbar0, const GroupElement& g) {
  return su2::compose(g_prime, su2::compose(gbar0, su2::inverse(g)));
}

TransformedCurve transform_curve(const AlgebraCurve& b, const GroupCurve& gbar) {
  AlgebraCurve out([b, gbar](double t) -> Eigen::Vector3d {
    const GroupElement g = gbar.value(t);
    const su2::Matrix2c velocity = coordinate_matrix(gbar.derivative(t)) * su2::inverse(g).matrix();
    const AlgebraVector moved = su2::adjoint(g, AlgebraVector::from(b(t)));
    return (moved - su2::project(velocity)).vec();
  });
  return {std::move(out), gbar.numeric_derivative};
}

double transform_residual(const AlgebraCurve& b, const AlgebraCurve& bp, const GroupCurve& gbar, double t) {
  const GroupElement g = gbar.value(t);
  const su2::Matrix2c gm = g.matrix();
  const su2::Matrix2c lhs = coordinate_matrix(gbar.derivative(t)) * gm.adjoint();
  const su2::Matrix2c rhs = -su2::algebra_matrix(AlgebraVector::from(bp(t))) +
                            gm * su2::algebra_matrix(AlgebraVector::from(b(t))) * gm.adjoint();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace liespin
