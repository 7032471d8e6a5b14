#pragma once

// Control fields u(t) acting on both spins through X = -i (g1 s.u (x) 1 + g2 1 (x) s.u).
// Times are in seconds and fields in the units of D once a field has been
// rescaled; the normalized problem uses D = 1, gamma1 = 1.

#include <string>
#include <variant>
#include <vector>

#include "tocspin/pmp.hpp"
#include "tocspin/su2.hpp"

namespace tocspin {

// u(t) = amplitude * u_N(rate * t), where u_N is the unit-norm canonical
// control rotated by Y.
struct AnalyticField {
  UnitaryGate Y;
  double omega = 0.0;
  double a = 1.0;
  double b = 0.0;
  double rate = 1.0;
  double amplitude = 1.0;
};

// Zero-order hold: samples[i] is applied on [i dt, (i+1) dt).
struct SampledField {
  double dt = 0.0;
  std::vector<Vec3> samples;
};

struct ControlField {
  std::variant<AnalyticField, SampledField> shape;
  double duration = 0.0;
  double D = 1.0;
  double gamma1 = 1.0;

  static ControlField analytic(const AnalyticField& f, double duration, double D = 1.0, double gamma1 = 1.0);
  static ControlField sampled(double dt, std::vector<Vec3> samples, double D = 1.0, double gamma1 = 1.0);

  bool is_sampled() const { return std::holds_alternative<SampledField>(shape); }
  Vec3 at(double t) const;
  // Samples at the cell midpoints of n equal cells covering [0, duration].
  SampledField sample(int n) const;
  // Throws unless |u| <= D (1 + 1e-9) on every sample (or the analytic norm).
  void validate() const;
};

ControlField canonical_field(const CanonicalParams& c, const UnitaryGate& y, double duration_normalized);

// u(t) -> sign(g1) D u_N(|g1| D t); the duration becomes t_N / (|g1| D).
ControlField rescale_control(const ControlField& normalized, double D, double gamma1);

double max_norm(const SampledField& f);

// CSV with header t_seconds,Bx,By,Bz where B = -2 u, one row per cell midpoint.
void write_waveform_csv(const std::string& path, const ControlField& field, int n_samples);

// Default sample count: 2000 samples per normalized time unit.
int default_sample_count(const ControlField& field);

}  // namespace tocspin
