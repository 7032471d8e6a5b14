#include "tocspin/su2.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "tocspin/error.hpp"
#include "tocspin/tolerances.hpp"

namespace tocspin {

namespace {

constexpr Complex kI{0.0, 1.0};

// Quaternion coordinates of U = y0 + i (y . sigma).
struct Quaternion {
  double y0, yx, yy, yz;
};

Quaternion quaternion_of(const Mat2C& m) {
  // For SU(2): a00 = y0 + i yz, a01 = yy + i yx. Averaging with the other
  // entries keeps the result symmetric when m is slightly off the group.
  const Complex alpha = 0.5 * (m.a00 + std::conj(m.a11));
  const Complex beta = 0.5 * (m.a01 - std::conj(m.a10));
  return {alpha.real(), beta.imag(), beta.real(), alpha.imag()};
}

Mat2C from_quaternion(const Quaternion& q) {
  const Complex alpha{q.y0, q.yz};
  const Complex beta{q.yy, q.yx};
  return {alpha, beta, -std::conj(beta), std::conj(alpha)};
}

}  // namespace

double Mat2C::frobenius() const {
  return std::sqrt(std::norm(a00) + std::norm(a01) + std::norm(a10) + std::norm(a11));
}

bool Mat2C::finite() const {
  auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return ok(a00) && ok(a01) && ok(a10) && ok(a11);
}

double distance(const Mat2C& a, const Mat2C& b) { return (a - b).frobenius(); }

UnitaryGate UnitaryGate::from_matrix(const Mat2C& m) {
  if (!m.finite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  UnitaryGate u(m);
  const double tol = tolerances().algebraic;
  if (u.unitarity_defect() >= tol || u.det_defect() >= tol) {
    throw Error(ErrorCode::InvalidArgument, "matrix is not special unitary: " + to_string(m));
  }
  return u;
}

UnitaryGate UnitaryGate::project(const Mat2C& m) {
  Quaternion q = quaternion_of(m);
  const double n = std::sqrt(q.y0 * q.y0 + q.yx * q.yx + q.yy * q.yy + q.yz * q.yz);
  if (n == 0.0 || !std::isfinite(n)) throw Error(ErrorCode::InvalidArgument, "cannot project matrix onto SU(2)");
  q = {q.y0 / n, q.yx / n, q.yy / n, q.yz / n};
  return UnitaryGate(from_quaternion(q));
}

double UnitaryGate::unitarity_defect() const { return distance(m_.dagger() * m_, Mat2C::identity()); }

double UnitaryGate::det_defect() const { return std::abs(m_.det() - 1.0); }

Mat2C AlgebraElement::matrix() const {
  // -i (cx sx + cy sy + cz sz)
  return {Complex{0.0, -cz}, Complex{-cy, -cx}, Complex{cy, -cx}, Complex{0.0, cz}};
}

double AlgebraElement::norm() const { return std::sqrt(cx * cx + cy * cy + cz * cz); }

AlgebraElement AlgebraElement::from_matrix(const Mat2C& m) {
  // c_j = (i/2) Tr(m sigma_j) for m = -i c.sigma; take the real part.
  const Complex tx = m.a01 + m.a10;
  const Complex ty = kI * (m.a01 - m.a10);
  const Complex tz = m.a00 - m.a11;
  return {(0.5 * kI * tx).real(), (0.5 * kI * ty).real(), (0.5 * kI * tz).real()};
}

UnitaryGate expm_closed(double c, double d, double t) {
  const double r = std::sqrt(c * c + d * d);
  const double x = r * t;
  const double cs = std::cos(x);
  // sin(r t)/r, with the r -> 0 limit t.
  const double sinc_t = r == 0.0 ? t : std::sin(x) / r;
  return UnitaryGate::unchecked({Complex{cs, c * sinc_t}, Complex{-d * sinc_t, 0.0},
                                 Complex{d * sinc_t, 0.0}, Complex{cs, -c * sinc_t}});
}

UnitaryGate expm_algebra(const AlgebraElement& x, double t) {
  const double r = x.norm();
  const double angle = r * t;
  const double cs = std::cos(angle);
  const double sinc_t = r == 0.0 ? t : std::sin(angle) / r;
  // cos(r t) 1 + sin(r t)/r X
  return UnitaryGate::unchecked({Complex{cs, -x.cz * sinc_t}, Complex{-x.cy * sinc_t, -x.cx * sinc_t},
                                 Complex{x.cy * sinc_t, -x.cx * sinc_t}, Complex{cs, x.cz * sinc_t}});
}

EigenDecomp2 eig_su2(const UnitaryGate& u) {
  const Quaternion q = quaternion_of(u.matrix());
  const double s = std::sqrt(q.yx * q.yx + q.yy * q.yy + q.yz * q.yz);
  EigenDecomp2 out;
  if (s <= tolerances().degenerate) {
    out.S = UnitaryGate{};
    out.phi = q.y0 >= 0.0 ? 0.0 : M_PI;
    out.degenerate = true;
    return out;
  }
  out.phi = std::atan2(s, q.y0);
  // U = cos(phi) + i sin(phi) n.sigma; e^{+i phi} belongs to n.sigma = +1.
  const double nx = q.yx / s, ny = q.yy / s, nz = q.yz / s;
  Complex v0, v1;
  if (nz >= 0.0) {
    const double norm = std::sqrt(2.0 * (1.0 + nz));
    v0 = (1.0 + nz) / norm;
    v1 = Complex{nx, ny} / norm;
  } else {
    const double norm = std::sqrt(2.0 * (1.0 - nz));
    v0 = Complex{nx, -ny} / norm;
    v1 = (1.0 - nz) / norm;
    const double mag = std::abs(v0);
    if (mag > 0.0) {
      const Complex phase = std::conj(v0) / mag;
      v0 *= phase;
      v1 *= phase;
      v0 = v0.real();
    }
  }
  out.S = UnitaryGate::unchecked({v0, -std::conj(v1), v1, std::conj(v0)});
  return out;
}

AlgebraElement conjugate(const UnitaryGate& y, const AlgebraElement& x) {
  return AlgebraElement::from_matrix(y.matrix() * x.matrix() * y.matrix().dagger());
}

UnitaryGate rotation(const Vec3& axis, double theta) {
  return expm_algebra(field_to_algebra(axis), 0.5 * theta);
}

AxisAngle axis_angle(const UnitaryGate& u) {
  const Quaternion q = quaternion_of(u.matrix());
  const double s = std::sqrt(q.yx * q.yx + q.yy * q.yy + q.yz * q.yz);
  AxisAngle out;
  out.theta = 2.0 * std::atan2(s, q.y0);
  if (s > 0.0) out.axis = {-q.yx / s, -q.yy / s, -q.yz / s};
  return out;
}

std::string to_string(const Mat2C& m) {
  std::ostringstream os;
  os.precision(6);
  os << "[[" << m.a00 << ", " << m.a01 << "], [" << m.a10 << ", " << m.a11 << "]]";
  return os.str();
}

}  // namespace tocspin
