#pragma once

// Simulated randomized benchmarking of single-spin Clifford gates on the
// first spin with the readout of the s_z (x) 1 coefficient.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tocspin/orbit.hpp"
#include "tocspin/simulator.hpp"

namespace tocspin {

// 24 single-qubit Clifford classes, canonical SU(2) representatives, identity first.
const std::vector<UnitaryGate>& clifford_table();

// Index of the table entry equal to u up to sign, or -1.
int clifford_index(const UnitaryGate& u);

// Number of distinct classes among the direct products P C.
int direct_product_classes();

struct WeightedPair {
  double weight = 1.0;
  GatePair pair;
};

// Maps a Clifford index to the channel that realizes it, as a weighted list of
// unitary pairs (U1, U2).
using GateRealizer = std::function<const std::vector<WeightedPair>&(int)>;

GateRealizer ideal_realizer();
// Ideal gate followed by a Pauli channel with px = py = pz = p/2 on the first spin.
GateRealizer depolarizing_realizer(double p);

struct TocRealizerOptions {
  double gamma = 0.2514;
  double D = 1.0;
  double gamma1 = 1.0;
  DistortionModel distortion;
  double steps_per_unit = 2000.0;
};

// Time-optimal pulse for every Clifford (rotation angle in (0, pi]), distorted
// and propagated once; the identity class applies no pulse.
GateRealizer toc_realizer(const TocRealizerOptions& opts);

struct RbConfig {
  std::vector<int> lengths;
  int sequences_per_length = 32;
  std::uint64_t seed = 0;
  double eps_h = 1e-4;  // initial polarizations
  double eps_c = 2.5e-5;

  void validate() const;
};

struct RbFit {
  double d_if = 0.0;
  double eps_g = 0.0;
  double residual = 0.0;  // RMS residual of the log-domain fit
  bool degenerate = false;
};

struct RbResult {
  std::vector<int> lengths;
  std::vector<double> mean;
  std::vector<double> stderr_;
  RbFit fit;
};

RbResult run_rb(const RbConfig& config, const GateRealizer& realizer);

// Least squares of log F = log(1 - d) + r log(1 - 2 eps).
RbFit fit_rb(const std::vector<int>& lengths, const std::vector<double>& mean);

// Model data (1 - d)(1 - 2 eps)^r averaged over sequences with Gaussian noise.
RbResult synthetic_rb(double d_if, double eps_g, const std::vector<int>& lengths, int sequences, double noise,
                      std::uint64_t seed);

void write_rb_csv(const std::string& path, const RbResult& result);

// Deterministic child seed for a named stream and index.
std::uint64_t stream_seed(std::uint64_t seed, const std::string& stream, std::uint64_t index);

}  // namespace tocspin
