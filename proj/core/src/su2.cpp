#include "liespin/su2.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "liespin/errors.hpp"

namespace liespin::su2 {
namespace {

constexpr double kRenormTolerance = 1e-6;
const std::complex<double> kI{0.0, 1.0};

}  // namespace

double AlgebraVector::norm() const { return std::sqrt(c1 * c1 + c2 * c2 + c3 * c3); }

bool AlgebraVector::finite() const {
  return std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3);
}

GroupElement::GroupElement(double x1, double x2, double y1, double y2) : x_{x1, x2, y1, y2} {
  const double n2 = x1 * x1 + x2 * x2 + y1 * y1 + y2 * y2;
  if (!std::isfinite(n2)) throw InvalidArgument("GroupElement: non-finite coordinates");
  if (std::abs(n2 - 1.0) > kRenormTolerance) {
    throw ConsistencyError("GroupElement: coordinates are not a unit 4-vector (|x|^2 = " +
                           std::to_string(n2) + ")");
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (double& v : x_) v *= inv;
}

GroupElement GroupElement::from_ab(std::complex<double> a, std::complex<double> b) {
  return {a.real(), b.real(), a.imag(), b.imag()};
}

Matrix2c GroupElement::matrix() const {
  Matrix2c m;
  m << a(), b(), -std::conj(b()), std::conj(a());
  return m;
}

AGammaElement::AGammaElement(double gamma, double phase) : gamma_(gamma) {
  if (!std::isfinite(gamma) || !std::isfinite(phase)) {
    throw InvalidArgument("AGammaElement: non-finite parameters");
  }
  // gamma = 2 pi n collapses A_gamma to +-identity.
  const double turns = gamma / (2.0 * M_PI);
  if (std::abs(turns - std::round(turns)) < 1e-12) {
    throw InvalidArgument("AGammaElement: gamma must not be a multiple of 2 pi");
  }
  phase_ = std::fmod(phase, 2.0 * M_PI);
  if (phase_ < 0.0) phase_ += 2.0 * M_PI;
}

GroupElement AGammaElement::embed() const {
  const double c = std::cos(0.5 * gamma_);
  const double s = std::sin(0.5 * gamma_);
  return {c, -s * std::cos(phase_), 0.0, s * std::sin(phase_)};
}

AlgebraVector AGammaElement::generator() const {
  return {gamma_ * std::sin(phase_), -gamma_ * std::cos(phase_), 0.0};
}

Matrix2c basis_matrix(int k) {
  Matrix2c m;
  switch (k) {
    case 1: m << 0.0, kI, kI, 0.0; break;
    case 2: m << 0.0, 1.0, -1.0, 0.0; break;
    case 3: m << kI, 0.0, 0.0, -kI; break;
    default: throw InvalidArgument("basis_matrix: index must be 1, 2 or 3");
  }
  return 0.5 * m;
}

Matrix2c algebra_matrix(const AlgebraVector& c) {
  Matrix2c m;
  // c1 a1 + c2 a2 + c3 a3 written out.
  m << 0.5 * kI * c.c3, 0.5 * (c.c2 + kI * c.c1),
      0.5 * (-c.c2 + kI * c.c1), -0.5 * kI * c.c3;
  return m;
}

AlgebraVector project(const Matrix2c& x) {
  return {-2.0 * (basis_matrix(1) * x).trace().real(),
          -2.0 * (basis_matrix(2) * x).trace().real(),
          -2.0 * (basis_matrix(3) * x).trace().real()};
}

GroupElement exp_algebra(const AlgebraVector& c) {
  if (!c.finite()) throw InvalidArgument("exp_algebra: non-finite generator");
  const double delta = c.norm();
  if (delta == 0.0) return GroupElement::identity();
  const double half = 0.5 * delta;
  // sin(delta/2)/delta, kept accurate for tiny delta.
  const double s = delta < 1e-4 ? 0.5 * (1.0 - half * half / 6.0) : std::sin(half) / delta;
  return {std::cos(half), s * c.c2, s * c.c3, s * c.c1};
}

AlgebraVector log_principal(const GroupElement& g) {
  const double vnorm = std::sqrt(g.x2() * g.x2() + g.y1() * g.y1() + g.y2() * g.y2());
  if (g.x1() <= -1.0 + 1e-12 && vnorm < 1e-6) {
    throw BranchUndefined("log_principal: -identity has no principal logarithm");
  }
  if (vnorm == 0.0) return {};
  const double half = std::atan2(vnorm, g.x1());  // delta/2 in [0, pi)
  const double scale = 2.0 * half / vnorm;
  return {scale * g.y2(), scale * g.x2(), scale * g.y1()};
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  const auto a = g1.a() * g2.a() - g1.b() * std::conj(g2.b());
  const auto b = g1.a() * g2.b() + g1.b() * std::conj(g2.a());
  return GroupElement::from_ab(a, b);
}

GroupElement inverse(const GroupElement& g) { return {g.x1(), -g.x2(), -g.y1(), -g.y2()}; }

AlgebraVector bracket(const AlgebraVector& c, const AlgebraVector& d) {
  return AlgebraVector::from(-c.vec().cross(d.vec()));
}

AlgebraVector adjoint(const GroupElement& g, const AlgebraVector& c) {
  // g = cos(delta/2) + sin(delta/2) n.(2a) acts on coefficient vectors as the
  // rotation by -delta about n.
  const double w = g.x1();
  const Eigen::Vector3d v{g.y2(), g.x2(), g.y1()};
  const Eigen::Vector3d x = c.vec();
  const Eigen::Vector3d vx = v.cross(x);
  return AlgebraVector::from(x - 2.0 * w * vx + 2.0 * v.cross(vx));
}

double distance(const GroupElement& g, const GroupElement& h) {
  return (g.coords() - h.coords()).cwiseAbs().maxCoeff();
}

}  // namespace liespin::su2
