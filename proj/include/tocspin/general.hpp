#pragma once

// Numerical minimum-time search for an arbitrary target U_f1 (x) U_f2: the
// smallest t at which the orbit of the canonical pair reaches the orbit of
// +-(U_f1, U_f2).

#include <vector>

#include "tocspin/control_field.hpp"
#include "tocspin/orbit.hpp"
#include "tocspin/pmp.hpp"

namespace tocspin {

struct ReachOptions {
  double t_max = 12.0;
  int t_steps = 2000;       // scan grid t_max / t_steps
  double omega_max = 5.0;   // omega in [-omega_max, omega_max]
  int grid = 64;            // coarse grid per parameter
  int polish_starts = 3;    // best coarse points refined by simplex search
  double coarse_accept = 2e-3;  // orbit distance that triggers refinement
  double accept = 1e-8;         // final orbit distance
};

struct ReachResult {
  double t = 0.0;
  double omega = 0.0;
  double a = 1.0;
  double b = 0.0;
  int sign = 1;
  double distance = 0.0;  // orbit distance at the returned parameters
  UnitaryGate Y;          // conjugator found during refinement
};

// Minimum over (omega, a) of the orbit distance at a fixed t, with the
// minimizing parameters and target sign.
ReachResult orbit_gap(const GatePair& target, double gamma, double t, const ReachOptions& opts = {});

ReachResult reach_orbit(const GatePair& target, double gamma, const ReachOptions& opts = {});

struct GeneralSolution {
  double t_min = 0.0;
  CanonicalParams params;
  UnitaryGate Y;
  double residual_first = 0.0;   // ||Y^dag U1~ Y - sign U_f1||_F
  double residual_second = 0.0;  // ||Y^dag U2~ Y - sign U_f2||_F

  ControlField normalized_field() const;
};

// Recovers Y from the orbit witness and verifies both components to 1e-7.
GeneralSolution reconstruct_full_solution(const ReachResult& r, double gamma, const GatePair& target);

// Orbit coordinates of the canonical pair at time t over a grid x grid
// lattice of (omega, alpha), a = cos(alpha).
std::vector<MeshRow> reachable_surface(double gamma, double t, int grid, double omega_max = 5.0);

}  // namespace tocspin
