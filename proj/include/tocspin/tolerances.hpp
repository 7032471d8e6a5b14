#pragma once

#include <string_view>

namespace tocspin {

// Numerical thresholds shared by every module. The active profile can be
// switched with the TOCSPIN_TOLERANCE_PROFILE environment variable
// ("default", "strict" or "loose").
struct Tolerances {
  double algebraic = 1e-12;   // identities that hold exactly in exact arithmetic
  double residual = 1e-9;     // solver residuals
  double degenerate = 1e-12;  // sin(phi) below this counts as +-1
  double strata = 1e-12;      // phi within this of 0 or pi routes to an edge
  double eta_series = 1e-8;   // below this sin(eta t)/eta is replaced by t
  double bzero = 1e-9;        // transcendental b = 0 resonance test
  double borderline = 1e-12;  // float-gamma certificate decisions closer than this are flagged
  double verify = 1e-8;       // final gate check of synthesized pulses
};

const Tolerances& tolerances();

// Profile lookup by name; unknown names return the default profile.
Tolerances tolerance_profile(std::string_view name);
bool is_tolerance_profile(std::string_view name);

// Replaces the active profile. Not synchronized with running solves.
void set_tolerance_profile(std::string_view name);

}  // namespace tocspin
