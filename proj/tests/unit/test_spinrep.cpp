#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "liespin/errors.hpp"
#include "liespin/oracle.hpp"
#include "liespin/spinrep.hpp"
#include "test_support.hpp"

namespace liespin {
namespace {

using testing::max_abs;
using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

TEST(SpinOperators, SpinHalfIsHalfPauli) {
  const auto ops = build_spin_operators(SpinQuantumNumber(1));
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, -0.5 * I, 0.5 * I, 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  EXPECT_LT(max_abs(ops.sx - sx), 1e-15);
  EXPECT_LT(max_abs(ops.sy - sy), 1e-15);
  EXPECT_LT(max_abs(ops.sz - sz), 1e-15);
}

TEST(SpinOperators, SpinOneSz) {
  const auto ops = build_spin_operators(SpinQuantumNumber(2));
  Eigen::Matrix3cd sz = Eigen::Matrix3cd::Zero();
  sz(0, 0) = 1.0;
  sz(2, 2) = -1.0;
  EXPECT_LT(max_abs(ops.sz - sz), 1e-15);
  EXPECT_EQ(ops.dimension(), 3);
}

TEST(SpinOperators, RejectsNonPositiveSpin) {
  EXPECT_THROW(SpinQuantumNumber(0), InvalidArgument);
  EXPECT_THROW(SpinQuantumNumber(-3), InvalidArgument);
  EXPECT_THROW(build_spin_operators(SpinQuantumNumber(1)).component(4), InvalidArgument);
}

class SpinAlgebra : public ::testing::TestWithParam<int> {};

TEST_P(SpinAlgebra, CommutationCasimirHermiticity) {
  const SpinQuantumNumber spin(GetParam());
  const auto ops = build_spin_operators(spin);
  const double j = spin.j();
  const double tol = 1e-12 * std::max(1.0, j * j);
  EXPECT_LT(max_abs(ops.sx * ops.sy - ops.sy * ops.sx - I * ops.sz), tol);
  EXPECT_LT(max_abs(ops.sy * ops.sz - ops.sz * ops.sy - I * ops.sx), tol);
  EXPECT_LT(max_abs(ops.sz * ops.sx - ops.sx * ops.sz - I * ops.sy), tol);
  const ComplexMatrix casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
  const auto eye = ComplexMatrix::Identity(spin.dimension(), spin.dimension());
  EXPECT_LT(max_abs(casimir - j * (j + 1.0) * eye), tol);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(hermiticity_defect(ops.component(k)), 0.0);
  for (int m = 0; m < spin.dimension(); ++m) EXPECT_EQ(ops.sz(m, m).real(), j - m);
}

INSTANTIATE_TEST_SUITE_P(Spins, SpinAlgebra, ::testing::Values(1, 2, 3, 4, 5, 7, 10));

TEST(Hamiltonian, ZAxisFieldAndRotatingPreset) {
  const auto ops = build_spin_operators(SpinQuantumNumber(1));
  const auto hz = hamiltonian_at(FieldSpec(ConstantField{0.0, 0.0, 2.0}), 0.0, ops);
  Eigen::Matrix2cd expected;
  expected << 1.0, 0.0, 0.0, -1.0;
  EXPECT_LT(max_abs(hz - expected), 1e-15);

  const auto preset = hamiltonian_at(FieldSpec(RotatingField{1.0, M_PI / 3, 0.5, 0.0}), 0.0, ops);
  const ComplexMatrix want = std::sin(M_PI / 3) * ops.sx + std::cos(M_PI / 3) * ops.sz;
  EXPECT_LT(max_abs(preset - want), 1e-15);
}

TEST(ExpHermitian, DiagonalAndPauliExamples) {
  const auto ops = build_spin_operators(SpinQuantumNumber(1));
  const double theta = 0.9;
  const auto u = exp_hermitian(ops.sz, theta);
  EXPECT_LT(std::abs(u(0, 0) - std::exp(-0.5 * I * theta)), 1e-15);
  EXPECT_LT(std::abs(u(1, 1) - std::exp(0.5 * I * theta)), 1e-15);
  EXPECT_LT(std::abs(u(0, 1)), 1e-15);
  // exp(-i pi Sx) = -i sigma_x for spin 1/2.
  const auto flip = exp_hermitian(ops.sx, M_PI);
  Eigen::Matrix2cd want;
  want << 0.0, -I, -I, 0.0;
  EXPECT_LT(max_abs(flip - want), 1e-15);
}

TEST(ExpHermitian, MatchesSeries) {
  for (int dim : {2, 3, 5, 8}) {
    for (int n = 0; n < 20; ++n) {
      const auto h = testing::random_hermitian(dim, 2.0);
      const double s = testing::uniform(-3.0, 3.0);
      const auto u = exp_hermitian(h, s);
      EXPECT_LT(max_abs(u - testing::series_exp(-I * s * h)), 1e-12);
      EXPECT_LT(unitarity_defect(u), 1e-13);
    }
  }
}

TEST(ExpHermitian, RejectsNonHermitian) {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(exp_hermitian(m, 1.0), InvalidArgument);
  Eigen::Matrix2cd tiny = Eigen::Matrix2cd::Identity();
  tiny(0, 1) = 1e-14;
  EXPECT_NO_THROW(exp_hermitian(tiny, 1.0));
}

TEST(Represent, SpinHalfIsDefiningRepresentation) {
  const auto ops = build_spin_operators(SpinQuantumNumber(1));
  for (int n = 0; n < 100; ++n) {
    const auto c = testing::random_algebra(3.0);
    const auto g = su2::exp_algebra(c);
    EXPECT_LT(max_abs(represent_algebra(c, ops) - g.matrix()), 1e-14);
    EXPECT_LT(max_abs(represent(g, ops) - g.matrix()), 1e-14);
  }
}

TEST(Represent, SpinOneRotationAboutZ) {
  const auto ops = build_spin_operators(SpinQuantumNumber(2));
  const double theta = 1.3;
  const auto u = represent_algebra({0.0, 0.0, theta}, ops);
  ComplexMatrix want = ComplexMatrix::Zero(3, 3);
  want(0, 0) = std::exp(I * theta);
  want(1, 1) = 1.0;
  want(2, 2) = std::exp(-I * theta);
  EXPECT_LT(max_abs(u - want), 1e-15);
}

TEST(Represent, HomomorphismProperty) {
  for (int two_j : {1, 2, 3, 6}) {
    const auto ops = build_spin_operators(SpinQuantumNumber(two_j));
    for (int n = 0; n < 40; ++n) {
      const auto g1 = su2::GroupElement::from_coords(testing::random_unit4());
      const auto g2 = su2::GroupElement::from_coords(testing::random_unit4());
      const auto g12 = su2::compose(g1, g2);
      if (su2::distance(g12, su2::GroupElement::from_coords({-1, 0, 0, 0})) < 1e-6) continue;
      const ComplexMatrix lhs = represent(g12, ops);
      const ComplexMatrix rhs = represent(g1, ops) * represent(g2, ops);
      EXPECT_LT(max_abs(lhs - rhs), 1e-11) << "two_j=" << two_j;
    }
  }
}

TEST(Represent, MinusIdentityIsBranchError) {
  const auto ops = build_spin_operators(SpinQuantumNumber(1));
  EXPECT_THROW(represent(su2::GroupElement::from_coords({-1, 0, 0, 0}), ops), BranchUndefined);
}

TEST(FlowCommutator, SecondDifferenceConvergesQuadratically) {
  const auto ops = build_spin_operators(SpinQuantumNumber(2));
  const ComplexMatrix ha = ops.sx;
  const ComplexMatrix hb = 0.3 * ops.sy + ops.sz;
  const double e1 = flow_commutator_defect(ha, hb, 1e-2);
  const double e2 = flow_commutator_defect(ha, hb, 5e-3);
  EXPECT_LT(e1, 1e-3);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
}

}  // namespace
}  // namespace liespin
