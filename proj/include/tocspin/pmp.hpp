#pragma once

// Optimal trajectories of the two-spin system in PMP form
//   X1 = e^{At} P e^{-At},  U1 = e^{At} e^{(P-A)t},  U2 = e^{At} e^{(gamma P - A)t}
// and in the reduced canonical form with A = i omega sz, P = i a sz - i b sy.

#include "tocspin/orbit.hpp"
#include "tocspin/su2.hpp"

namespace tocspin {

struct PmpPair {
  AlgebraElement A;
  AlgebraElement P;
};

struct CanonicalParams {
  double omega = 0.0;
  double a = 1.0;
  double b = 0.0;
  double gamma = 0.5;
  int sign = 1;  // the canonical pair reaches sign * (target)

  // Throws InvalidArgument unless a^2 + b^2 = 1 and gamma > 0, gamma != 1.
  void validate() const;
};

GatePair trajectory_general(const PmpPair& p, double gamma, double t);

AlgebraElement control_general(const PmpPair& p, double t);

// (U1~, U2~) = (e^{i w sz t} e^{(i(a-w) sz - i b sy)t}, e^{i w sz t} e^{(i(g a-w) sz - i g b sy)t})
// as a product of two closed-form exponentials.
GatePair trajectory_canonical(const CanonicalParams& c, double t);

// Same pair from the explicit entry formulas in terms of
// eta_1 = sqrt(w^2 + 1 - 2 a w) and eta_g = sqrt(w^2 + g^2 - 2 a w g).
GatePair trajectory_canonical_entries(const CanonicalParams& c, double t);

// Y^dag e^{i w sz t} (i a sz - i b sy) e^{-i w sz t} Y.
AlgebraElement control_canonical(const CanonicalParams& c, const UnitaryGate& y, double t);

// Lab-frame (A, P) = (Y^dag (i w sz) Y, Y^dag (i a sz - i b sy) Y), so that
// trajectory_general reproduces Y^dag (canonical pair) Y.
PmpPair canonical_to_pmp(const CanonicalParams& c, const UnitaryGate& y);

}  // namespace tocspin
