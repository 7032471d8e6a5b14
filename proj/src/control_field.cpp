#include "tocspin/control_field.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "tocspin/error.hpp"

namespace tocspin {

namespace {

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

ControlField ControlField::analytic(const AnalyticField& f, double duration, double D, double gamma1) {
  return ControlField{f, duration, D, gamma1};
}

ControlField ControlField::sampled(double dt, std::vector<Vec3> samples, double D, double gamma1) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample spacing must be positive");
  const double duration = dt * static_cast<double>(samples.size());
  return ControlField{SampledField{dt, std::move(samples)}, duration, D, gamma1};
}

Vec3 ControlField::at(double t) const {
  if (const auto* f = std::get_if<AnalyticField>(&shape)) {
    const CanonicalParams c{f->omega, f->a, f->b, 0.5, 1};
    const Vec3 u = algebra_to_field(control_canonical(c, f->Y, f->rate * t));
    return {f->amplitude * u[0], f->amplitude * u[1], f->amplitude * u[2]};
  }
  const auto& s = std::get<SampledField>(shape);
  if (s.samples.empty()) return {0.0, 0.0, 0.0};
  auto i = static_cast<long>(std::floor(t / s.dt));
  if (i < 0) i = 0;
  if (i >= static_cast<long>(s.samples.size())) i = static_cast<long>(s.samples.size()) - 1;
  return s.samples[static_cast<size_t>(i)];
}

SampledField ControlField::sample(int n) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be at least 1");
  SampledField out;
  out.dt = duration / n;
  out.samples.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.samples.push_back(at((i + 0.5) * out.dt));
  return out;
}

void ControlField::validate() const {
  if (!(D > 0.0)) throw Error(ErrorCode::InvalidBound, "bound D must be positive");
  const double limit = D * (1.0 + 1e-9);
  if (const auto* s = std::get_if<SampledField>(&shape)) {
    if (max_norm(*s) > limit) throw Error(ErrorCode::InvalidBound, "sampled field exceeds the bound D");
    return;
  }
  const auto& f = std::get<AnalyticField>(shape);
  if (std::abs(f.a * f.a + f.b * f.b - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "analytic field needs a^2 + b^2 = 1");
  }
  if (std::abs(f.amplitude) > limit) throw Error(ErrorCode::InvalidBound, "analytic field exceeds the bound D");
}

ControlField canonical_field(const CanonicalParams& c, const UnitaryGate& y, double duration_normalized) {
  return ControlField::analytic(AnalyticField{y, c.omega, c.a, c.b, 1.0, 1.0}, duration_normalized);
}

ControlField rescale_control(const ControlField& normalized, double D, double gamma1) {
  if (!(D > 0.0) || !std::isfinite(D)) throw Error(ErrorCode::InvalidBound, "bound D must be positive");
  if (gamma1 == 0.0 || !std::isfinite(gamma1)) throw Error(ErrorCode::InvalidArgument, "gamma1 must be nonzero");
  const double L = std::abs(gamma1) * D;
  const double amp = gamma1 > 0.0 ? D : -D;
  ControlField out = normalized;
  out.D = D;
  out.gamma1 = gamma1;
  out.duration = normalized.duration / L;
  if (auto* f = std::get_if<AnalyticField>(&out.shape)) {
    f->rate *= L;
    f->amplitude *= amp;
  } else {
    auto& s = std::get<SampledField>(out.shape);
    s.dt /= L;
    for (auto& u : s.samples) u = {amp * u[0], amp * u[1], amp * u[2]};
  }
  return out;
}

double max_norm(const SampledField& f) {
  double m = 0.0;
  for (const auto& u : f.samples) m = std::max(m, norm3(u));
  return m;
}

void write_waveform_csv(const std::string& path, const ControlField& field, int n_samples) {
  const SampledField s = field.sample(n_samples);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out << std::setprecision(17) << "t_seconds,Bx,By,Bz\n";
  for (size_t i = 0; i < s.samples.size(); ++i) {
    const Vec3& u = s.samples[i];
    out << (static_cast<double>(i) + 0.5) * s.dt << ',' << -2.0 * u[0] << ',' << -2.0 * u[1] << ',' << -2.0 * u[2]
        << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

int default_sample_count(const ControlField& field) {
  const double L = std::abs(field.gamma1) * field.D;
  const double normalized = field.duration * L;
  return std::max(1, static_cast<int>(std::ceil(2000.0 * normalized)));
}

}  // namespace tocspin
