#include "tocspin/pmp.hpp"

#include <cmath>

#include "tocspin/error.hpp"
#include "tocspin/tolerances.hpp"

namespace tocspin {

namespace {

// sin(eta t)/eta with the small-eta limit.
double sinc_t(double eta, double t) {
  if (eta < tolerances().eta_series) {
    const double x = eta * t;
    return t * (1.0 - x * x / 6.0);
  }
  return std::sin(eta * t) / eta;
}

// e^{i w sz t} e^{(i c sz - i d sy) t} written out entrywise.
UnitaryGate rotated_entries(double w, double c, double d, double t) {
  const double eta = std::sqrt(c * c + d * d);
  const double cs = std::cos(eta * t);
  const double sn = sinc_t(eta, t);
  const Complex ph = std::polar(1.0, w * t);
  return UnitaryGate::unchecked({ph * Complex{cs, c * sn}, -ph * d * sn, std::conj(ph) * d * sn,
                                 std::conj(ph) * Complex{cs, -c * sn}});
}

}  // namespace

void CanonicalParams::validate() const {
  if (!(gamma > 0.0) || gamma == 1.0 || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive and different from 1");
  }
  if (std::abs(a * a + b * b - 1.0) > tolerances().algebraic * 10.0) {
    throw Error(ErrorCode::InvalidArgument, "canonical parameters must satisfy a^2 + b^2 = 1");
  }
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
}

GatePair trajectory_general(const PmpPair& p, double gamma, double t) {
  const UnitaryGate ea = expm_algebra(p.A, t);
  return {ea * expm_algebra(p.P - p.A, t), ea * expm_algebra(gamma * p.P - p.A, t)};
}

AlgebraElement control_general(const PmpPair& p, double t) { return conjugate(expm_algebra(p.A, t), p.P); }

GatePair trajectory_canonical(const CanonicalParams& c, double t) {
  const UnitaryGate ez = expm_closed(c.omega, 0.0, t);
  return {ez * expm_closed(c.a - c.omega, c.b, t), ez * expm_closed(c.gamma * c.a - c.omega, c.gamma * c.b, t)};
}

GatePair trajectory_canonical_entries(const CanonicalParams& c, double t) {
  return {rotated_entries(c.omega, c.a - c.omega, c.b, t),
          rotated_entries(c.omega, c.gamma * c.a - c.omega, c.gamma * c.b, t)};
}

AlgebraElement control_canonical(const CanonicalParams& c, const UnitaryGate& y, double t) {
  // e^{i w sz t} . (cy = b, cz = -a): the rotation about z turns (0, b) in the xy plane.
  const double ang = 2.0 * c.omega * t;
  const AlgebraElement rotated{c.b * std::sin(ang), c.b * std::cos(ang), -c.a};
  return conjugate(y.dagger(), rotated);
}

PmpPair canonical_to_pmp(const CanonicalParams& c, const UnitaryGate& y) {
  const UnitaryGate yd = y.dagger();
  return {conjugate(yd, AlgebraElement{0.0, 0.0, -c.omega}), conjugate(yd, AlgebraElement{0.0, c.b, -c.a})};
}

}  // namespace tocspin
