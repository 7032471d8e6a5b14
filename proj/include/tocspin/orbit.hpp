#pragma once

// Orbit space of SU(2) x SU(2) under simultaneous conjugation
// (U, Z) -> (Y U Y^dag, Y Z Y^dag). Orbits are classified by a point of the
// solid cylinder (0, pi) x D whose end discs collapse to segments.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tocspin/su2.hpp"

namespace tocspin {

struct GatePair {
  UnitaryGate first;
  UnitaryGate second;

  GatePair operator-() const { return {-first, -second}; }
};

// Y p Y^dag componentwise.
GatePair conjugate(const UnitaryGate& y, const GatePair& p);

struct InteriorPoint {
  double phi = 0.0;  // eigenphase of the first gate, in (0, pi)
  Complex x{1.0};    // (S^dag Z S)_{11}, |x| <= 1
};

struct LeftEdgePoint {
  double psi = 0.0;  // first gate is +1; eigenphase of the second in [0, pi]
};

struct RightEdgePoint {
  double psi = 0.0;  // first gate is -1
};

using OrbitPoint = std::variant<InteriorPoint, LeftEdgePoint, RightEdgePoint>;

std::string to_string(const OrbitPoint& o);

// Orbit-space coordinates. Eigenphases within tol of 0 or pi route to the
// edge strata.
OrbitPoint psi_map(const GatePair& p, double tol);
OrbitPoint psi_map(const GatePair& p);

// Pairwise conjugation equivalence.
bool same_orbit_times(const GatePair& p1, const GatePair& p2, double tol);

// Equivalence of the tensor products p.first (x) p.second under Y (x) Y,
// which also identifies (U, Z) with (-U, -Z).
bool same_orbit_tensor(const GatePair& p1, const GatePair& p2, double tol);

// Continuous merit on the orbit space. Interior points compare with
// |d phi| + |d x|; an interior point compares with an edge point through
// the collapse x -> arccos(Re x).
double orbit_distance(const OrbitPoint& a, const OrbitPoint& b);

// Y with p2 = Y p1 Y^dag when both pairs have the same orbit coordinates.
// Returns nullopt when the coordinates differ by more than tol.
std::optional<UnitaryGate> conjugation_witness(const GatePair& p1, const GatePair& p2, double tol);

// Residual ||p2.first - Y p1.first Y^dag||_F + ||p2.second - Y p1.second Y^dag||_F.
double conjugation_residual(const UnitaryGate& y, const GatePair& p1, const GatePair& p2);

// One row of a mesh sample of the orbit space. Edge points are drawn on the
// end faces with x = cos(psi).
struct MeshRow {
  double t = 0.0;
  double phi = 0.0;
  double re_x = 0.0;
  double im_x = 0.0;
};

MeshRow mesh_row(double t, const OrbitPoint& o);

// Boundary surface of the cylinder, sampled on a grid x grid lattice.
std::vector<MeshRow> cylinder_mesh(int grid);

void write_mesh_csv(const std::string& path, const std::vector<MeshRow>& rows);

}  // namespace tocspin
