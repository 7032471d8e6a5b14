#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "tocspin/orbit.hpp"

using namespace tocspin;

namespace {

GatePair random_pair(std::mt19937_64& rng) { return {oracle::random_su2(rng), oracle::random_su2(rng)}; }

// Same spectra as p, but the two gates are conjugated independently.
GatePair spectral_twin(const GatePair& p, std::mt19937_64& rng) {
  const UnitaryGate a = oracle::random_su2(rng), b = oracle::random_su2(rng);
  return {a * p.first * a.dagger(), b * p.second * b.dagger()};
}

}  // namespace

TEST(OrbitPsi, ConjugationInvariance) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const GatePair p = random_pair(rng);
    const UnitaryGate y = oracle::random_su2(rng);
    const OrbitPoint a = psi_map(p), b = psi_map(conjugate(y, p));
    ASSERT_LT(orbit_distance(a, b), 1e-10) << to_string(a) << " vs " << to_string(b);
  }
}

TEST(OrbitPsi, InteriorCoordinatesInRange) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const OrbitPoint o = psi_map(random_pair(rng));
    const auto* in = std::get_if<InteriorPoint>(&o);
    ASSERT_NE(in, nullptr);
    EXPECT_GT(in->phi, 0.0);
    EXPECT_LT(in->phi, M_PI);
    EXPECT_LE(std::abs(in->x), 1.0 + 1e-12);
  }
}

TEST(OrbitPsi, EdgeStrata) {
  const UnitaryGate z = rotation({1, 0, 0}, 1.0);
  const OrbitPoint left = psi_map({UnitaryGate{}, z});
  const OrbitPoint right = psi_map({-UnitaryGate{}, z});
  ASSERT_TRUE(std::holds_alternative<LeftEdgePoint>(left));
  ASSERT_TRUE(std::holds_alternative<RightEdgePoint>(right));
  EXPECT_NEAR(std::get<LeftEdgePoint>(left).psi, 0.5, 1e-12);
  EXPECT_NEAR(std::get<RightEdgePoint>(right).psi, 0.5, 1e-12);
}

TEST(OrbitEquivalence, AgreesWithBruteForceOracle) {
  std::mt19937_64 rng(23);
  int disagreements = 0;
  for (int i = 0; i < 500; ++i) {
    const GatePair p = random_pair(rng);
    const GatePair pos = conjugate(oracle::random_su2(rng), p);
    const GatePair neg = spectral_twin(p, rng);
    const bool oracle_pos = oracle::conjugation_gap(p, pos, 1000 + i) < 1e-6;
    const bool oracle_neg = oracle::conjugation_gap(p, neg, 5000 + i) < 1e-6;
    ASSERT_TRUE(oracle_pos);
    disagreements += same_orbit_times(p, pos, 1e-9) != oracle_pos;
    disagreements += same_orbit_times(p, neg, 1e-9) != oracle_neg;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(OrbitEquivalence, WitnessResidual) {
  std::mt19937_64 rng(24);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const GatePair p = random_pair(rng);
    const GatePair q = conjugate(oracle::random_su2(rng), p);
    const auto y = conjugation_witness(p, q, 1e-9);
    ASSERT_TRUE(y.has_value());
    worst = std::max(worst, conjugation_residual(*y, p, q));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(OrbitEquivalence, WitnessOnEdgesAndCommutingPairs) {
  std::mt19937_64 rng(25);
  const UnitaryGate z = oracle::random_su2(rng);
  const UnitaryGate y = oracle::random_su2(rng);
  for (const GatePair& p : {GatePair{UnitaryGate{}, z}, GatePair{-UnitaryGate{}, z},
                            GatePair{rotation({0, 0, 1}, 1.1), rotation({0, 0, 1}, 2.3)}}) {
    const GatePair q = conjugate(y, p);
    EXPECT_TRUE(same_orbit_times(p, q, 1e-9));
    const auto w = conjugation_witness(p, q, 1e-9);
    ASSERT_TRUE(w.has_value());
    EXPECT_LT(conjugation_residual(*w, p, q), 1e-9);
  }
}

TEST(OrbitEquivalence, WitnessAbsentForDifferentOrbits) {
  std::mt19937_64 rng(26);
  const GatePair p = random_pair(rng);
  EXPECT_FALSE(conjugation_witness(p, spectral_twin(p, rng), 1e-9).has_value());
}

TEST(OrbitTensor, SignFlipIsIdentified) {
  std::mt19937_64 rng(27);
  const GatePair p = random_pair(rng);
  const GatePair q = conjugate(oracle::random_su2(rng), -p);
  EXPECT_FALSE(same_orbit_times(p, q, 1e-9));
  EXPECT_TRUE(same_orbit_tensor(p, q, 1e-9));
}

TEST(OrbitDistance, ZeroOnSamePointAndSymmetric) {
  std::mt19937_64 rng(28);
  const OrbitPoint a = psi_map(random_pair(rng)), b = psi_map(random_pair(rng));
  EXPECT_EQ(orbit_distance(a, a), 0.0);
  EXPECT_NEAR(orbit_distance(a, b), orbit_distance(b, a), 1e-15);
  EXPECT_GT(orbit_distance(a, b), 0.0);
}

TEST(OrbitMesh, CylinderMeshCsv) {
  const auto rows = cylinder_mesh(8);
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) {
    EXPECT_GE(r.phi, 0.0);
    EXPECT_LE(r.phi, M_PI);
    EXPECT_LE(std::hypot(r.re_x, r.im_x), 1.0 + 1e-12);
  }
  const std::string path = testing::TempDir() + "mesh.csv";
  write_mesh_csv(path, rows);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,phi,re_x,im_x");
  std::remove(path.c_str());
}
