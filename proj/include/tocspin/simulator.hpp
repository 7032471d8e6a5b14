#pragma once

// Independent propagation of U' = X(t) U for the two spins, fidelities,
// distortion and robustness sweeps, and the composite-pulse baseline.

#include <string>
#include <vector>

#include "tocspin/control_field.hpp"
#include "tocspin/orbit.hpp"
#include "tocspin/toc.hpp"

namespace tocspin {

// Midpoint exponential integrator with generators -i g1 s.u(t) and
// -i g g1 s.u(t) on the two spins.
GatePair propagate(const ControlField& field, double gamma, double t_final, int n_steps);

// Segments applied in time order, each with about steps_per_unit steps per
// unit of normalized time |g1| D t.
GatePair propagate_sequence(const std::vector<ControlField>& segments, double gamma, double steps_per_unit);

// |Tr(U^dag V)| / 2.
double gate_fidelity(const UnitaryGate& u, const UnitaryGate& v);
double pair_fidelity(const GatePair& p, const GatePair& target);

struct DistortionModel {
  double rise_time = 0.0;  // seconds
  Vec3 eta{1.0, 1.0, 1.0};
  double gamma_shift = 0.0;  // relative error of gamma used by the simulation
};

// First-order low-pass per axis (state starts at zero), then per-axis scaling.
// Analytic fields are sampled with n_samples cells (default_sample_count when 0).
ControlField apply_distortion(const ControlField& field, const DistortionModel& model, int n_samples = 0);

struct SensitivityResult {
  double finite_diff_norm = 0.0;  // (1/sqrt 2) ||dU2/dg||_F by central differences
  double bound = 0.0;             // L t_min
};

// Derivative of the spin-2 final gate with respect to gamma with the field held fixed.
SensitivityResult sensitivity_check(const TocSolution& sol, double dgamma_rel = 1e-6);

// Fidelity drop 1 - F of the spin-2 gate when gamma is off by a relative amount.
double gamma_fidelity_drop(const TocSolution& sol, double relative_error, int n_steps = 20000);

struct EtaGrid {
  double lo = 0.9;
  double hi = 1.1;
  int n = 11;

  double value(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

struct RobustnessPoint {
  Vec3 eta;
  double fidelity = 0.0;
};

std::vector<RobustnessPoint> robustness_map(const std::vector<ControlField>& segments, const GatePair& target,
                                            double gamma, const EtaGrid& grid, double steps_per_unit = 400.0);
std::vector<RobustnessPoint> robustness_map(const TocSolution& sol, const EtaGrid& grid,
                                            double steps_per_unit = 400.0);

// Fraction of grid points with fidelity at least the threshold.
double region_fraction(const std::vector<RobustnessPoint>& map, double threshold);

void write_robustness_csv(const std::string& path, const std::vector<RobustnessPoint>& map);

struct CompositeResult {
  double duration = 0.0;             // physical
  double duration_normalized = 0.0;  // |g1| D duration
  double free_time = 0.0;            // each free segment, physical
  double pi_pulse_time = 0.0;        // each selective pi pulse on spin 2, physical
  std::vector<ControlField> segments;
  GatePair pair;
  double fidelity = 0.0;  // propagated pair against (U_f, 1) up to a common sign
};

// R2_{n_perp}(pi) F(tau) R2_{n_perp}(-pi) F(tau), with F a constant field D n and
// tau = theta / (4 |g1| D). The pi pulses on spin 2 are time-optimal pulses for
// the swapped pair with ratio 1/g.
CompositeResult composite_baseline(const RotationTarget& target, double D, double gamma1,
                                   double steps_per_unit = 4000.0);

Vec3 perpendicular_axis(const Vec3& n);

}  // namespace tocspin
