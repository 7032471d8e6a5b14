#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tocspin/error.hpp"
#include "tocspin/io.hpp"
#include "tocspin/simulator.hpp"
#include "tocspin/toc.hpp"

using namespace tocspin;

namespace {

RotationTarget target(const std::string& gamma, const std::string& theta, const Vec3& axis = {0, 1, 0}) {
  return {parse_theta(theta), axis, parse_gamma(gamma)};
}

double pair_distance(const GatePair& p, const GatePair& q) {
  return distance(p.first.matrix(), q.first.matrix()) + distance(p.second.matrix(), q.second.matrix());
}

}  // namespace

TEST(SimulatorPropagate, MagnusMatchesRk4) {
  const TocSolution s = solve_rotation(target("2514/10000", "pi"), 1.0, 1.0);
  const ControlField f = s.normalized_field();
  const GatePair r = oracle::rk4_propagate([&](double t) { return f.at(t); }, 0.2514, 1.0, f.duration, 40000);
  const double e1 = pair_distance(propagate(f, 0.2514, f.duration, 10000), r);
  const double e2 = pair_distance(propagate(f, 0.2514, f.duration, 20000), r);
  EXPECT_LT(e2, 1e-7);
  // second order
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(SimulatorPropagate, PhysicalUnitsMatchNormalized) {
  const TocSolution s = solve_rotation(target("2514/10000", "pi/2", {1, 0, 0}), 1.5e-4, 2.675e8);
  const GatePair phys = propagate(s.field, 0.2514, s.field.duration, 4000);
  const ControlField n = s.normalized_field();
  const GatePair norm = propagate(n, 0.2514, n.duration, 4000);
  EXPECT_LT(pair_distance(phys, norm), 1e-10);
}

TEST(SimulatorPropagate, SynthesizedPulsesReachTarget) {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 12; ++i) {
    const AlgebraElement a = oracle::random_algebra(rng, 1.0);
    const Vec3 n{a.cx / a.norm(), a.cy / a.norm(), a.cz / a.norm()};
    const TocSolution s = solve_rotation(target("2514/10000", std::to_string(i + 1) + "/13pi", n), 1.0, 1.0);
    const Verification v = verify_solution(s);
    EXPECT_GT(v.fidelity_spin1, 1.0 - 1e-8) << i;
    EXPECT_GT(v.fidelity_spin2, 1.0 - 1e-8) << i;
  }
}

TEST(SimulatorPropagate, SequenceOfSegmentsComposes) {
  const TocSolution s = solve_rotation(target("2514/10000", "pi/2", {1, 0, 0}), 1.0, 1.0);
  const GatePair once = propagate_sequence({s.field}, 0.2514, 4000);
  const GatePair twice = propagate_sequence({s.field, s.field}, 0.2514, 4000);
  EXPECT_LT(pair_distance(twice, {once.first * once.first, once.second * once.second}), 1e-10);
}

TEST(SimulatorFidelity, GlobalPhaseInsensitive) {
  std::mt19937_64 rng(52);
  const UnitaryGate u = oracle::random_su2(rng);
  EXPECT_NEAR(gate_fidelity(u, u), 1.0, 1e-15);
  EXPECT_NEAR(gate_fidelity(u, -u), 1.0, 1e-15);
  EXPECT_LT(gate_fidelity(u, u * rotation({0, 0, 1}, 0.5)), 1.0 - 1e-3);
}

TEST(SimulatorSensitivity, FiniteDifferenceMatchesIndependentPropagation) {
  const TocSolution s = solve_rotation(target("2514/10000", "2/3pi", {1, 0, 0}), 1.0, 1.0);
  const SensitivityResult r = sensitivity_check(s);
  const ControlField f = s.normalized_field();
  const double h = 0.2514 * 1e-4;
  auto u = [&](double t) { return f.at(t); };
  const Mat2C up = oracle::rk4_propagate(u, 0.2514 + h, 1.0, f.duration, 20000).second.matrix();
  const Mat2C um = oracle::rk4_propagate(u, 0.2514 - h, 1.0, f.duration, 20000).second.matrix();
  const double want = ((up - um) * Complex(1.0 / (2 * h))).frobenius() / std::sqrt(2.0);
  EXPECT_NEAR(r.finite_diff_norm, want, 1e-4 * want);
  EXPECT_LE(r.finite_diff_norm, r.bound);
  EXPECT_NEAR(r.bound, s.t_min, 1e-12);
}

TEST(SimulatorSensitivity, BoundHoldsOnRandomSolutions) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> uq(1, 23), ug(1, 9);
  for (int i = 0; i < 20; ++i) {
    const std::string g = std::to_string(ug(rng)) + "/10";
    const TocSolution s = solve_rotation(target(g, std::to_string(uq(rng)) + "/12pi"), 1.0, 1.0);
    const SensitivityResult r = sensitivity_check(s);
    EXPECT_LE(r.finite_diff_norm, r.bound) << g;
  }
}

TEST(SimulatorSensitivity, OnePercentGammaDrop) {
  const TocSolution s = solve_rotation(target("2514/10000", "pi"), 1.0, 1.0);
  const double drop = gamma_fidelity_drop(s, 0.01);
  EXPECT_GT(drop, 0.0);
  EXPECT_LT(drop, 1e-4);
}

TEST(SimulatorDistortion, IdentityModelKeepsSamples) {
  const TocSolution s = solve_rotation(target("2514/10000", "pi"), 1.0, 1.0);
  const ControlField d = apply_distortion(s.field, DistortionModel{}, 1000);
  const SampledField ref = s.field.sample(1000);
  const auto& got = std::get<SampledField>(d.shape);
  ASSERT_EQ(got.samples.size(), ref.samples.size());
  EXPECT_EQ(got.dt, ref.dt);
  for (size_t i = 0; i < ref.samples.size(); ++i) EXPECT_EQ(got.samples[i], ref.samples[i]);
}

TEST(SimulatorDistortion, LowPassStepResponse) {
  const ControlField step = ControlField::sampled(1e-3, std::vector<Vec3>(2000, Vec3{0, 0, 1}));
  DistortionModel m;
  m.rise_time = 0.1;
  m.eta = {1, 1, 2};
  const auto& out = std::get<SampledField>(apply_distortion(step, m).shape).samples;
  EXPECT_NEAR(out[99][2], 2.0 * (1.0 - std::exp(-0.1 / 0.1)), 1e-12);
  EXPECT_NEAR(out.back()[2], 2.0, 1e-6);
  EXPECT_EQ(out[500][0], 0.0);
  for (size_t i = 1; i < out.size(); ++i) ASSERT_GE(out[i][2], out[i - 1][2]);
}

TEST(SimulatorDistortion, RejectsInvalidModel) {
  const ControlField step = ControlField::sampled(1e-3, std::vector<Vec3>(10, Vec3{0, 0, 1}));
  DistortionModel m;
  m.rise_time = -1.0;
  EXPECT_THROW(apply_distortion(step, m), Error);
  m.rise_time = 0.0;
  m.eta = {1, 0, 1};
  EXPECT_THROW(apply_distortion(step, m), Error);
}

TEST(SimulatorRobustness, MapPeaksAtNominalAmplitude) {
  const TocSolution s = solve_rotation(target("2514/10000", "pi"), 1.0, 1.0);
  EtaGrid g;
  g.n = 3;
  const auto map = robustness_map(s, g);
  ASSERT_EQ(map.size(), 27u);
  double nominal = 0.0, worst = 1.0;
  for (const auto& p : map) {
    if (p.eta == Vec3{1, 1, 1}) nominal = p.fidelity;
    worst = std::min(worst, p.fidelity);
  }
  EXPECT_GT(nominal, 1.0 - 1e-6);
  EXPECT_LT(worst, nominal);
  EXPECT_NEAR(region_fraction(map, 0.0), 1.0, 0.0);
}

TEST(SimulatorComposite, BaselineRealizesTarget) {
  for (const char* theta : {"pi/4", "pi/2", "pi"}) {
    const RotationTarget t = target("2514/10000", theta);
    const CompositeResult c = composite_baseline(t, 1.0, 1.0);
    EXPECT_GT(c.fidelity, 1.0 - 1e-6) << theta;
    EXPECT_NEAR(c.free_time, t.theta() / 4.0, 1e-12) << theta;
    EXPECT_GT(c.duration, solve_rotation(t, 1.0, 1.0).t_min) << theta;
  }
}

TEST(SimulatorComposite, PerpendicularAxis) {
  for (const Vec3& n : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{0.6, 0, 0.8}}) {
    const Vec3 p = perpendicular_axis(n);
    EXPECT_NEAR(p[0] * n[0] + p[1] * n[1] + p[2] * n[2], 0.0, 1e-15);
    EXPECT_NEAR(std::hypot(p[0], p[1], p[2]), 1.0, 1e-15);
  }
}
