#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tocspin/error.hpp"
#include "tocspin/su2.hpp"

using namespace tocspin;

namespace {

Mat2C closed_generator(double c, double d) {
  // i c sz - i d sy
  return Mat2C::pauli_z() * Complex(0.0, c) + Mat2C::pauli_y() * Complex(0.0, -d);
}

}  // namespace

TEST(Su2Exponential, ClosedFormMatchesSeriesOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ut(0.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double c = u(rng), d = u(rng), t = ut(rng);
    worst = std::max(worst, distance(expm_closed(c, d, t).matrix(), oracle::expm_series(closed_generator(c, d), t)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Su2Exponential, RodriguesMatchesSeriesOracle) {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const AlgebraElement x = oracle::random_algebra(rng, 6.0);
    worst = std::max(worst, distance(expm_algebra(x, 1.3).matrix(), oracle::expm_series(x.matrix(), 1.3)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Su2Exponential, GroupLaw) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ut(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const AlgebraElement x = oracle::random_algebra(rng, 4.0);
    const double s = ut(rng), t = ut(rng);
    const Mat2C lhs = (expm_algebra(x, s) * expm_algebra(x, t)).matrix();
    worst = std::max(worst, distance(lhs, expm_algebra(x, s + t).matrix()));
  }
  EXPECT_LT(worst, 1e-11);
}

TEST(Su2Exponential, TinyAndZeroGenerators) {
  EXPECT_EQ(expm_algebra(AlgebraElement{}, 3.0).matrix(), Mat2C::identity());
  const AlgebraElement x{1e-14, -2e-14, 3e-14};
  EXPECT_LT(distance(expm_algebra(x, 1.0).matrix(), oracle::expm_series(x.matrix(), 1.0)), 1e-15);
  EXPECT_LT(distance(expm_closed(0.0, 0.0, 5.0).matrix(), Mat2C::identity()), 1e-15);
}

TEST(Su2Eigen, DecompositionReconstructs) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 500; ++i) {
    const UnitaryGate u = oracle::random_su2(rng);
    const EigenDecomp2 e = eig_su2(u);
    ASSERT_GE(e.phi, 0.0);
    ASSERT_LE(e.phi, M_PI);
    const Mat2C d = Mat2C::diag(std::polar(1.0, e.phi), std::polar(1.0, -e.phi));
    EXPECT_LT(distance((e.S * UnitaryGate::unchecked(d) * e.S.dagger()).matrix(), u.matrix()), 1e-12);
    EXPECT_LT(std::abs(e.S.matrix().det() - 1.0), 1e-12);
  }
}

TEST(Su2Eigen, DegenerateGates) {
  for (double s : {1.0, -1.0}) {
    const EigenDecomp2 e = eig_su2(UnitaryGate::unchecked(Mat2C::identity() * Complex(s)));
    EXPECT_TRUE(e.degenerate);
    EXPECT_EQ(e.S.matrix(), Mat2C::identity());
    EXPECT_NEAR(e.phi, s > 0 ? 0.0 : M_PI, 1e-15);
  }
}

TEST(Su2Gate, FromMatrixRejectsNonSpecialUnitary) {
  EXPECT_THROW(UnitaryGate::from_matrix(Mat2C::diag(2.0, 0.5)), Error);
  EXPECT_THROW(UnitaryGate::from_matrix(Mat2C::pauli_x()), Error);  // det -1
  EXPECT_NO_THROW(UnitaryGate::from_matrix(Mat2C::pauli_x() * Complex(0.0, 1.0)));
}

TEST(Su2Gate, ProjectRestoresUnitarity) {
  std::mt19937_64 rng(15);
  const UnitaryGate u = oracle::random_su2(rng);
  const Mat2C noisy = u.matrix() + Mat2C{1e-6, -2e-6, 3e-7, 1e-6};
  const UnitaryGate p = UnitaryGate::project(noisy);
  EXPECT_LT(p.unitarity_defect(), 1e-14);
  EXPECT_LT(p.det_defect(), 1e-14);
  EXPECT_LT(distance(p.matrix(), u.matrix()), 1e-5);
}

TEST(Su2Rotation, AxisAngleRoundTrip) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> ut(0.01, 2.0 * M_PI - 0.01);
  for (int i = 0; i < 200; ++i) {
    const AlgebraElement a = oracle::random_algebra(rng, 1.0);
    const double n = a.norm();
    const Vec3 axis{a.cx / n, a.cy / n, a.cz / n};
    const double theta = ut(rng);
    const AxisAngle aa = axis_angle(rotation(axis, theta));
    EXPECT_NEAR(aa.theta, theta, 1e-10);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(aa.axis[k], axis[k], 1e-9);
  }
}

TEST(Su2Rotation, PiAboutYIsMinusISigmaY) {
  const Mat2C want = Mat2C::pauli_y() * Complex(0.0, -1.0);
  EXPECT_LT(distance(rotation({0, 1, 0}, M_PI).matrix(), want), 1e-15);
}

TEST(Su2Algebra, ConjugationMatchesMatrixProduct) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const UnitaryGate y = oracle::random_su2(rng);
    const AlgebraElement x = oracle::random_algebra(rng, 2.0);
    const Mat2C want = y.matrix() * x.matrix() * y.matrix().dagger();
    EXPECT_LT(distance(conjugate(y, x).matrix(), want), 1e-13);
    EXPECT_NEAR(conjugate(y, x).norm(), x.norm(), 1e-13);
  }
}

TEST(Su2Algebra, NormIsScaledFrobenius) {
  const AlgebraElement x{0.3, -1.2, 2.0};
  EXPECT_NEAR(x.norm(), x.matrix().frobenius() / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(AlgebraElement::from_matrix(x.matrix()), x);
}
