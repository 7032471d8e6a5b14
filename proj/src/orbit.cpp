#include "tocspin/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tocspin/error.hpp"
#include "tocspin/tolerances.hpp"

namespace tocspin {

namespace {

// Eigenphase in [0, pi] of a special unitary.
double eigenphase(const UnitaryGate& u) {
  const Mat2C& m = u.matrix();
  const Complex alpha = 0.5 * (m.a00 + std::conj(m.a11));
  const Complex beta = 0.5 * (m.a01 - std::conj(m.a10));
  return std::atan2(std::sqrt(alpha.imag() * alpha.imag() + std::norm(beta)), alpha.real());
}

double collapse(Complex x) { return std::acos(std::clamp(x.real(), -1.0, 1.0)); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

GatePair conjugate(const UnitaryGate& y, const GatePair& p) {
  const UnitaryGate yd = y.dagger();
  return {y * p.first * yd, y * p.second * yd};
}

std::string to_string(const OrbitPoint& o) {
  std::ostringstream os;
  os << std::setprecision(12);
  std::visit(Overloaded{[&](const InteriorPoint& p) { os << "Interior(" << p.phi << ", " << p.x << ")"; },
                        [&](const LeftEdgePoint& p) { os << "LeftEdge(" << p.psi << ")"; },
                        [&](const RightEdgePoint& p) { os << "RightEdge(" << p.psi << ")"; }},
             o);
  return os.str();
}

OrbitPoint psi_map(const GatePair& p, double tol) {
  const EigenDecomp2 e = eig_su2(p.first);
  if (e.phi < tol) return LeftEdgePoint{eigenphase(p.second)};
  if (e.phi > M_PI - tol) return RightEdgePoint{eigenphase(p.second)};
  const Mat2C z = e.S.matrix().dagger() * p.second.matrix() * e.S.matrix();
  return InteriorPoint{e.phi, z.a00};
}

OrbitPoint psi_map(const GatePair& p) { return psi_map(p, tolerances().strata); }

bool same_orbit_times(const GatePair& p1, const GatePair& p2, double tol) {
  const OrbitPoint a = psi_map(p1);
  const OrbitPoint b = psi_map(p2);
  if (a.index() != b.index()) return false;
  if (const auto* ia = std::get_if<InteriorPoint>(&a)) {
    const auto& ib = std::get<InteriorPoint>(b);
    return std::abs(ia->phi - ib.phi) < tol && std::abs(ia->x - ib.x) < tol;
  }
  if (const auto* la = std::get_if<LeftEdgePoint>(&a)) {
    return std::abs(la->psi - std::get<LeftEdgePoint>(b).psi) < tol;
  }
  return std::abs(std::get<RightEdgePoint>(a).psi - std::get<RightEdgePoint>(b).psi) < tol;
}

bool same_orbit_tensor(const GatePair& p1, const GatePair& p2, double tol) {
  return same_orbit_times(p1, p2, tol) || same_orbit_times(p1, -p2, tol);
}

double orbit_distance(const OrbitPoint& a, const OrbitPoint& b) {
  return std::visit(
      Overloaded{
          [](const InteriorPoint& p, const InteriorPoint& q) { return std::abs(p.phi - q.phi) + std::abs(p.x - q.x); },
          [](const InteriorPoint& p, const LeftEdgePoint& q) { return p.phi + std::abs(collapse(p.x) - q.psi); },
          [](const LeftEdgePoint& q, const InteriorPoint& p) { return p.phi + std::abs(collapse(p.x) - q.psi); },
          [](const InteriorPoint& p, const RightEdgePoint& q) {
            return (M_PI - p.phi) + std::abs(collapse(p.x) - q.psi);
          },
          [](const RightEdgePoint& q, const InteriorPoint& p) {
            return (M_PI - p.phi) + std::abs(collapse(p.x) - q.psi);
          },
          [](const LeftEdgePoint& p, const LeftEdgePoint& q) { return std::abs(p.psi - q.psi); },
          [](const RightEdgePoint& p, const RightEdgePoint& q) { return std::abs(p.psi - q.psi); },
          [](const LeftEdgePoint& p, const RightEdgePoint& q) { return M_PI + std::abs(p.psi - q.psi); },
          [](const RightEdgePoint& p, const LeftEdgePoint& q) { return M_PI + std::abs(p.psi - q.psi); }},
      a, b);
}

std::optional<UnitaryGate> conjugation_witness(const GatePair& p1, const GatePair& p2, double tol) {
  const EigenDecomp2 e1 = eig_su2(p1.first);
  const EigenDecomp2 e2 = eig_su2(p2.first);
  if (std::abs(e1.phi - e2.phi) >= tol) return std::nullopt;

  const bool edge = e1.degenerate || e2.degenerate || e1.phi < tol || e1.phi > M_PI - tol;
  if (edge) {
    // Both first gates are the same +-1; only the spectra of the second gates matter.
    if (distance(p1.first.matrix(), p2.first.matrix()) >= std::sqrt(tol)) return std::nullopt;
    const EigenDecomp2 z1 = eig_su2(p1.second);
    const EigenDecomp2 z2 = eig_su2(p2.second);
    if (std::abs(z1.phi - z2.phi) >= tol) return std::nullopt;
    if (z1.degenerate || z2.degenerate) return UnitaryGate{};
    return z2.S * z1.S.dagger();
  }

  const Mat2C z1 = e1.S.matrix().dagger() * p1.second.matrix() * e1.S.matrix();
  const Mat2C z2 = e2.S.matrix().dagger() * p2.second.matrix() * e2.S.matrix();
  if (std::abs(z1.a00 - z2.a00) >= tol) return std::nullopt;

  // H = diag(e^{i beta}, e^{-i beta}) rotates the off-diagonal entry by e^{2 i beta}.
  double beta = 0.0;
  if (std::abs(z1.a01) > tol && std::abs(z2.a01) > tol) {
    beta = 0.5 * (std::arg(z2.a01) - std::arg(z1.a01));
    beta = std::fmod(beta, M_PI);
    if (beta < 0.0) beta += M_PI;
  }
  const UnitaryGate h = UnitaryGate::unchecked(Mat2C::diag(std::polar(1.0, beta), std::polar(1.0, -beta)));
  return e2.S * h * e1.S.dagger();
}

double conjugation_residual(const UnitaryGate& y, const GatePair& p1, const GatePair& p2) {
  const GatePair c = conjugate(y, p1);
  return distance(c.first.matrix(), p2.first.matrix()) + distance(c.second.matrix(), p2.second.matrix());
}

MeshRow mesh_row(double t, const OrbitPoint& o) {
  return std::visit(Overloaded{[&](const InteriorPoint& p) { return MeshRow{t, p.phi, p.x.real(), p.x.imag()}; },
                               [&](const LeftEdgePoint& p) { return MeshRow{t, 0.0, std::cos(p.psi), 0.0}; },
                               [&](const RightEdgePoint& p) { return MeshRow{t, M_PI, std::cos(p.psi), 0.0}; }},
                    o);
}

std::vector<MeshRow> cylinder_mesh(int grid) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "mesh grid must be at least 2");
  std::vector<MeshRow> rows;
  rows.reserve(static_cast<size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    const double phi = M_PI * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double alpha = 2.0 * M_PI * j / (grid - 1);
      // The end discs collapse to the real segment.
      const double radius = (i == 0 || i == grid - 1) ? 0.0 : 1.0;
      rows.push_back({0.0, phi, (i == 0 || i == grid - 1) ? std::cos(alpha / 2.0) : std::cos(alpha),
                      radius * std::sin(alpha)});
    }
  }
  return rows;
}

void write_mesh_csv(const std::string& path, const std::vector<MeshRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out << std::setprecision(17) << "t,phi,re_x,im_x\n";
  for (const auto& r : rows) out << r.t << ',' << r.phi << ',' << r.re_x << ',' << r.im_x << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace tocspin
