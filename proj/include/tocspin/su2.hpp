#pragma once

// Exact 2x2 complex linear algebra for SU(2) and su(2).
//
// Conventions: an AlgebraElement (cx, cy, cz) stands for the traceless
// anti-Hermitian matrix -i(cx sx + cy sy + cz sz). Its norm is
// sqrt(cx^2 + cy^2 + cz^2), which equals (1/sqrt 2) ||X||_F.

#include <array>
#include <complex>
#include <string>

namespace tocspin {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

struct Mat2C {
  // Row-major: a00 a01 / a10 a11.
  Complex a00{1.0}, a01{0.0}, a10{0.0}, a11{1.0};

  static Mat2C identity() { return {}; }
  static Mat2C zero() { return {0.0, 0.0, 0.0, 0.0}; }
  static Mat2C diag(Complex d0, Complex d1) { return {d0, 0.0, 0.0, d1}; }
  static Mat2C pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static Mat2C pauli_y() { return {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}; }
  static Mat2C pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  Complex trace() const { return a00 + a11; }
  Complex det() const { return a00 * a11 - a01 * a10; }
  Mat2C dagger() const { return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)}; }
  double frobenius() const;
  bool finite() const;

  Mat2C operator*(const Mat2C& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
            a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
  }
  Mat2C operator+(const Mat2C& o) const { return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11}; }
  Mat2C operator-(const Mat2C& o) const { return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11}; }
  Mat2C operator-() const { return {-a00, -a01, -a10, -a11}; }
  Mat2C operator*(Complex s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
  bool operator==(const Mat2C&) const = default;
};

inline Mat2C operator*(Complex s, const Mat2C& m) { return m * s; }

// Frobenius distance.
double distance(const Mat2C& a, const Mat2C& b);

// Element of SU(2). Construction through from_matrix validates
// unitarity and unit determinant.
class UnitaryGate {
 public:
  UnitaryGate() = default;

  static UnitaryGate from_matrix(const Mat2C& m);   // throws if not special unitary
  static UnitaryGate unchecked(const Mat2C& m) { return UnitaryGate(m); }
  // Nearest special unitary by re-orthonormalization of the quaternion part.
  static UnitaryGate project(const Mat2C& m);

  const Mat2C& matrix() const { return m_; }
  UnitaryGate dagger() const { return UnitaryGate(m_.dagger()); }
  UnitaryGate operator*(const UnitaryGate& o) const { return UnitaryGate(m_ * o.m_); }
  UnitaryGate operator-() const { return UnitaryGate(-m_); }

  // ||U^dag U - 1||_F and |det U - 1|.
  double unitarity_defect() const;
  double det_defect() const;

 private:
  explicit UnitaryGate(const Mat2C& m) : m_(m) {}
  Mat2C m_;
};

struct AlgebraElement {
  double cx = 0.0, cy = 0.0, cz = 0.0;

  Mat2C matrix() const;
  double norm() const;
  // Projects the traceless anti-Hermitian part of m.
  static AlgebraElement from_matrix(const Mat2C& m);

  AlgebraElement operator+(const AlgebraElement& o) const { return {cx + o.cx, cy + o.cy, cz + o.cz}; }
  AlgebraElement operator-(const AlgebraElement& o) const { return {cx - o.cx, cy - o.cy, cz - o.cz}; }
  AlgebraElement operator*(double s) const { return {cx * s, cy * s, cz * s}; }
  AlgebraElement operator-() const { return {-cx, -cy, -cz}; }
  bool operator==(const AlgebraElement&) const = default;
};

inline AlgebraElement operator*(double s, const AlgebraElement& x) { return x * s; }

struct EigenDecomp2 {
  UnitaryGate S;          // columns: eigenvectors for e^{+i phi}, e^{-i phi}
  double phi = 0.0;       // in [0, pi]
  bool degenerate = false;  // U = +-1; S is the identity
};

// e^{F t} with F = i c sz - i d sy, evaluated with the closed form.
UnitaryGate expm_closed(double c, double d, double t);

// e^{X t} by the axis-angle (Rodrigues) formula.
UnitaryGate expm_algebra(const AlgebraElement& x, double t);

// Eigen-decomposition U = S diag(e^{i phi}, e^{-i phi}) S^dag with S in SU(2).
// The first nonzero component of the first eigenvector is real positive.
EigenDecomp2 eig_su2(const UnitaryGate& u);

// Y X Y^dag for X in su(2).
AlgebraElement conjugate(const UnitaryGate& y, const AlgebraElement& x);

// Control vector u <-> X1 = -i sigma.u (internal units, gamma1 = 1).
inline AlgebraElement field_to_algebra(const Vec3& u) { return {u[0], u[1], u[2]}; }
inline Vec3 algebra_to_field(const AlgebraElement& x) { return {x.cx, x.cy, x.cz}; }

// e^{-i n.sigma theta/2} for a unit axis n.
UnitaryGate rotation(const Vec3& axis, double theta);

// Axis-angle of U = e^{-i n.sigma theta/2} with theta in [0, 2 pi].
struct AxisAngle {
  Vec3 axis{0.0, 0.0, 1.0};
  double theta = 0.0;
};
AxisAngle axis_angle(const UnitaryGate& u);

std::string to_string(const Mat2C& m);

}  // namespace tocspin
