#include "tocspin/simulator.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "tocspin/error.hpp"

namespace tocspin {

namespace {

double steps_for(const ControlField& f, double steps_per_unit) {
  return std::max(1.0, std::ceil(steps_per_unit * f.duration * std::abs(f.gamma1) * f.D));
}

Vec3 scaled(const Vec3& u, const Vec3& eta) { return {u[0] * eta[0], u[1] * eta[1], u[2] * eta[2]}; }

// A field sampled at the integrator midpoints, so that zero-order hold
// reproduces the midpoint rule exactly.
ControlField scaled_copy(const ControlField& f, const Vec3& eta, double steps_per_unit) {
  const int n = static_cast<int>(steps_for(f, steps_per_unit));
  SampledField s = f.is_sampled() ? std::get<SampledField>(f.shape) : f.sample(n);
  for (auto& u : s.samples) u = scaled(u, eta);
  ControlField out = ControlField::sampled(s.dt, std::move(s.samples), f.D, f.gamma1);
  out.duration = f.duration;
  return out;
}

}  // namespace

GatePair propagate(const ControlField& field, double gamma, double t_final, int n_steps) {
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be at least 1");
  const double dt = t_final / n_steps;
  const double g1 = field.gamma1;
  UnitaryGate u1, u2;
  for (int i = 0; i < n_steps; ++i) {
    const Vec3 u = field.at((i + 0.5) * dt);
    const AlgebraElement x = field_to_algebra(u) * g1;
    u1 = expm_algebra(x, dt) * u1;
    u2 = expm_algebra(x * gamma, dt) * u2;
  }
  return {u1, u2};
}

GatePair propagate_sequence(const std::vector<ControlField>& segments, double gamma, double steps_per_unit) {
  GatePair acc{UnitaryGate{}, UnitaryGate{}};
  for (const auto& seg : segments) {
    int n = static_cast<int>(steps_for(seg, steps_per_unit));
    if (const auto* s = std::get_if<SampledField>(&seg.shape)) {
      // Align with the hold cells.
      const int cells = static_cast<int>(s->samples.size());
      n = cells * std::max(1, n / std::max(1, cells));
    }
    const GatePair p = propagate(seg, gamma, seg.duration, n);
    acc = {p.first * acc.first, p.second * acc.second};
  }
  return acc;
}

double gate_fidelity(const UnitaryGate& u, const UnitaryGate& v) {
  return std::min(1.0, std::abs((u.matrix().dagger() * v.matrix()).trace()) / 2.0);
}

double pair_fidelity(const GatePair& p, const GatePair& target) {
  return gate_fidelity(p.first, target.first) * gate_fidelity(p.second, target.second);
}

ControlField apply_distortion(const ControlField& field, const DistortionModel& model, int n_samples) {
  if (model.rise_time < 0.0) throw Error(ErrorCode::InvalidArgument, "rise time must be nonnegative");
  for (double e : model.eta) {
    if (!(e > 0.0)) throw Error(ErrorCode::InvalidArgument, "amplitude ratios must be positive");
  }
  SampledField s;
  if (field.is_sampled()) {
    s = std::get<SampledField>(field.shape);
  } else {
    s = field.sample(n_samples > 0 ? n_samples : default_sample_count(field));
  }
  if (model.rise_time > 0.0) {
    const double alpha = 1.0 - std::exp(-s.dt / model.rise_time);
    Vec3 y{0.0, 0.0, 0.0};
    for (auto& u : s.samples) {
      for (int k = 0; k < 3; ++k) y[k] += (u[k] - y[k]) * alpha;
      u = y;
    }
  }
  for (auto& u : s.samples) u = scaled(u, model.eta);
  const double peak = max_norm(s);
  ControlField out = ControlField::sampled(s.dt, std::move(s.samples), std::max(field.D, peak), field.gamma1);
  out.duration = field.duration;
  return out;
}

SensitivityResult sensitivity_check(const TocSolution& sol, double dgamma_rel) {
  const double g = sol.params.gamma;
  const double h = std::abs(g) * dgamma_rel;
  const PmpPair pmp = canonical_to_pmp(sol.params, sol.Y);
  const Mat2C up = trajectory_general(pmp, g + h, sol.t_min).second.matrix();
  const Mat2C um = trajectory_general(pmp, g - h, sol.t_min).second.matrix();
  const Mat2C d = (up - um) * Complex(1.0 / (2.0 * h));
  return {d.frobenius() / std::sqrt(2.0), pmp.P.norm() * sol.t_min};
}

double gamma_fidelity_drop(const TocSolution& sol, double relative_error, int n_steps) {
  const ControlField f = sol.normalized_field();
  const double g = sol.params.gamma * (1.0 + relative_error);
  const GatePair p = propagate(f, g, f.duration, n_steps);
  const UnitaryGate ideal = UnitaryGate::unchecked(Mat2C::identity() * Complex(sol.sign()));
  return 1.0 - gate_fidelity(p.second, ideal);
}

std::vector<RobustnessPoint> robustness_map(const std::vector<ControlField>& segments, const GatePair& target,
                                            double gamma, const EtaGrid& grid, double steps_per_unit) {
  if (grid.n < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<RobustnessPoint> out;
  out.reserve(static_cast<size_t>(grid.n) * grid.n * grid.n);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < grid.n; ++j) {
      for (int k = 0; k < grid.n; ++k) {
        const Vec3 eta{grid.value(i), grid.value(j), grid.value(k)};
        std::vector<ControlField> distorted;
        distorted.reserve(segments.size());
        for (const auto& s : segments) distorted.push_back(scaled_copy(s, eta, steps_per_unit));
        const GatePair p = propagate_sequence(distorted, gamma, steps_per_unit);
        out.push_back({eta, pair_fidelity(p, target)});
      }
    }
  }
  return out;
}

std::vector<RobustnessPoint> robustness_map(const TocSolution& sol, const EtaGrid& grid, double steps_per_unit) {
  const GatePair target{sol.target.gate(), UnitaryGate{}};
  return robustness_map({sol.field}, target, sol.params.gamma, grid, steps_per_unit);
}

double region_fraction(const std::vector<RobustnessPoint>& map, double threshold) {
  if (map.empty()) return 0.0;
  size_t n = 0;
  for (const auto& p : map) n += p.fidelity >= threshold;
  return static_cast<double>(n) / static_cast<double>(map.size());
}

void write_robustness_csv(const std::string& path, const std::vector<RobustnessPoint>& map) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out << std::setprecision(17) << "eta_x,eta_y,eta_z,fidelity\n";
  for (const auto& p : map) out << p.eta[0] << ',' << p.eta[1] << ',' << p.eta[2] << ',' << p.fidelity << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

Vec3 perpendicular_axis(const Vec3& n) {
  const Vec3 ref = std::abs(n[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  Vec3 c{n[1] * ref[2] - n[2] * ref[1], n[2] * ref[0] - n[0] * ref[2], n[0] * ref[1] - n[1] * ref[0]};
  const double len = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  return {c[0] / len, c[1] / len, c[2] / len};
}

CompositeResult composite_baseline(const RotationTarget& target, double D, double gamma1, double steps_per_unit) {
  target.validate();
  if (!(D > 0.0)) throw Error(ErrorCode::InvalidBound, "bound D must be positive");
  const double g = target.gamma.value;
  const double L = std::abs(gamma1) * D;
  const Vec3 n = target.axis;
  const Vec3 perp = perpendicular_axis(n);

  // Selective pi pulses on spin 2: spin 2 plays the first role with coupling g g1.
  auto pi_pulse = [&](const Vec3& axis) {
    RotationTarget swapped{ExactReal::from_ratio(1, 1), axis, ExactReal::from_rational(1 / target.gamma.exact)};
    const TocSolution s = solve_rotation(swapped, D, g * gamma1);
    ControlField f = s.field;
    f.gamma1 = gamma1;
    return f;
  };
  const ControlField r_plus = pi_pulse(perp);
  const ControlField r_minus = pi_pulse({-perp[0], -perp[1], -perp[2]});

  CompositeResult out;
  out.free_time = target.theta() / (4.0 * L);
  const double amp = gamma1 > 0.0 ? D : -D;
  const ControlField free = ControlField::sampled(out.free_time, {{amp * n[0], amp * n[1], amp * n[2]}}, D, gamma1);
  out.pi_pulse_time = r_plus.duration;
  // Time order: F, R(-pi), F, R(pi).
  out.segments = {free, r_minus, free, r_plus};
  out.duration = 2.0 * out.free_time + r_plus.duration + r_minus.duration;
  out.duration_normalized = out.duration * L;
  out.pair = propagate_sequence(out.segments, g, steps_per_unit);
  out.fidelity = pair_fidelity(out.pair, {target.gate(), UnitaryGate{}});
  if (1.0 - out.fidelity > 1e-6) {
    throw Error(ErrorCode::Verification, "composite sequence misses the target: 1 - F = " +
                                             std::to_string(1.0 - out.fidelity));
  }
  return out;
}

}  // namespace tocspin
