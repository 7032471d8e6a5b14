#include "tocspin/rb.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include "tocspin/error.hpp"
#include "tocspin/toc.hpp"

namespace tocspin {

namespace {

constexpr double kSameClass = 1.0 - 1e-9;

bool same_class(const UnitaryGate& u, const UnitaryGate& v) {
  return std::abs((u.matrix().dagger() * v.matrix()).trace()) / 2.0 > kSameClass;
}

int find_class(const std::vector<UnitaryGate>& set, const UnitaryGate& u) {
  for (size_t i = 0; i < set.size(); ++i) {
    if (same_class(set[i], u)) return static_cast<int>(i);
  }
  return -1;
}

// SU(2) representatives of P = e^{+-i pi/2 V} and C = e^{+-i pi/4 Q}.
std::vector<UnitaryGate> generators_p() {
  std::vector<UnitaryGate> out;
  const Mat2C vs[4] = {Mat2C::identity(), Mat2C::pauli_x(), Mat2C::pauli_y(), Mat2C::pauli_z()};
  for (const auto& v : vs) {
    for (double s : {1.0, -1.0}) {
      Mat2C m = v * Complex(0.0, s);
      // e^{i pi/2} 1 is not special unitary; drop the phase.
      if (v == Mat2C::identity()) m = Mat2C::identity();
      out.push_back(UnitaryGate::unchecked(m));
    }
  }
  return out;
}

std::vector<UnitaryGate> generators_c() {
  std::vector<UnitaryGate> out;
  const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (const auto& n : axes) {
    // e^{+-i pi/4 Q} = rotation(n, -+pi/2).
    out.push_back(rotation(n, -M_PI / 2.0));
    out.push_back(rotation(n, M_PI / 2.0));
  }
  return out;
}

std::vector<UnitaryGate> build_table() {
  std::vector<UnitaryGate> gens;
  for (const auto& p : generators_p()) {
    for (const auto& c : generators_c()) {
      if (find_class(gens, p * c) < 0) gens.push_back(p * c);
    }
  }
  std::vector<UnitaryGate> table{UnitaryGate{}};
  for (size_t i = 0; i < table.size(); ++i) {
    for (const auto& g : gens) {
      const UnitaryGate u = g * table[i];
      if (find_class(table, u) < 0) table.push_back(u);
    }
  }
  if (table.size() != 24) throw Error(ErrorCode::Inconsistent, "Clifford closure has " + std::to_string(table.size()));
  for (const auto& a : table) {
    for (const auto& b : table) {
      if (find_class(table, a * b) < 0) throw Error(ErrorCode::Inconsistent, "Clifford table not closed");
    }
  }
  return table;
}

using Mat4 = Eigen::Matrix4cd;

Mat4 kron(const Mat2C& a, const Mat2C& b) {
  const Complex ea[2][2] = {{a.a00, a.a01}, {a.a10, a.a11}};
  const Complex eb[2][2] = {{b.a00, b.a01}, {b.a10, b.a11}};
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = ea[i][j] * eb[k][l];
  return out;
}

Mat4 sz_one() { return kron(Mat2C::pauli_z(), Mat2C::identity()); }

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sequence signal: coefficient of s_z (x) 1 divided by eps_h / 2.
double run_sequence(const RbConfig& cfg, const GateRealizer& realizer, int r, std::uint64_t seed) {
  const auto& table = clifford_table();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 23);
  std::vector<int> seq(static_cast<size_t>(r));
  UnitaryGate total;
  for (auto& g : seq) {
    g = pick(rng);
    total = table[g] * total;
  }
  const int recovery = clifford_index(total.dagger());
  if (recovery < 0) throw Error(ErrorCode::Inconsistent, "recovery gate not in the Clifford table");
  seq.push_back(recovery);

  const Mat4 zz = sz_one();
  const Mat4 cz = kron(Mat2C::identity(), Mat2C::pauli_z());
  Mat4 rho = Mat4::Identity() / 4.0 + zz * (cfg.eps_h / 2.0) + cz * (cfg.eps_c / 2.0);
  for (int g : seq) {
    const auto& channel = realizer(g);
    Mat4 next = Mat4::Zero();
    for (const auto& w : channel) {
      const Mat4 u = kron(w.pair.first.matrix(), w.pair.second.matrix());
      next += w.weight * (u * rho * u.adjoint());
    }
    rho = next;
  }
  const double coeff = (rho * zz).trace().real() / 4.0;
  return coeff / (cfg.eps_h / 2.0);
}

struct Stats {
  double mean = 0.0, stderr_ = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Kahan s;
  for (double x : v) s.add(x);
  const double n = static_cast<double>(v.size());
  const double mean = s.sum / n;
  if (v.size() < 2) return {mean, 0.0};
  Kahan q;
  for (double x : v) q.add((x - mean) * (x - mean));
  return {mean, std::sqrt(q.sum / (n - 1.0) / n)};
}

std::vector<WeightedPair> ideal_channel(int index) {
  return {{1.0, {clifford_table()[index], UnitaryGate{}}}};
}

}  // namespace

const std::vector<UnitaryGate>& clifford_table() {
  static const std::vector<UnitaryGate> table = build_table();
  return table;
}

int clifford_index(const UnitaryGate& u) { return find_class(clifford_table(), u); }

int direct_product_classes() {
  std::vector<UnitaryGate> classes;
  for (const auto& p : generators_p()) {
    for (const auto& c : generators_c()) {
      if (find_class(classes, p * c) < 0) classes.push_back(p * c);
    }
  }
  return static_cast<int>(classes.size());
}

GateRealizer ideal_realizer() {
  auto cache = std::make_shared<std::vector<std::vector<WeightedPair>>>();
  for (int i = 0; i < 24; ++i) cache->push_back(ideal_channel(i));
  return [cache](int i) -> const std::vector<WeightedPair>& { return cache->at(static_cast<size_t>(i)); };
}

GateRealizer depolarizing_realizer(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "error probability must lie in [0, 1]");
  auto cache = std::make_shared<std::vector<std::vector<WeightedPair>>>();
  const Mat2C paulis[3] = {Mat2C::pauli_x(), Mat2C::pauli_y(), Mat2C::pauli_z()};
  for (int i = 0; i < 24; ++i) {
    const UnitaryGate c = clifford_table()[i];
    std::vector<WeightedPair> ch{{1.0 - 1.5 * p, {c, UnitaryGate{}}}};
    for (const auto& s : paulis) {
      // i sigma is special unitary; phases drop out of the channel.
      const UnitaryGate e = UnitaryGate::unchecked(s * Complex(0.0, 1.0));
      ch.push_back({p / 2.0, {e * c, UnitaryGate{}}});
    }
    cache->push_back(std::move(ch));
  }
  return [cache](int i) -> const std::vector<WeightedPair>& { return cache->at(static_cast<size_t>(i)); };
}

GateRealizer toc_realizer(const TocRealizerOptions& opts) {
  auto cache = std::make_shared<std::vector<std::vector<WeightedPair>>>();
  const double g = opts.gamma * (1.0 + opts.distortion.gamma_shift);
  for (int i = 0; i < 24; ++i) {
    const UnitaryGate c = clifford_table()[i];
    AxisAngle aa = axis_angle(c);
    if (aa.theta < 1e-9 || aa.theta > 2.0 * M_PI - 1e-9) {
      cache->push_back({{1.0, {UnitaryGate{}, UnitaryGate{}}}});
      continue;
    }
    if (aa.theta > M_PI + 1e-9) {
      aa.theta = 2.0 * M_PI - aa.theta;
      for (auto& x : aa.axis) x = -x;
    }
    // Clifford angles are multiples of pi/6.
    const long long twelfths = std::llround(aa.theta / M_PI * 12.0);
    const RotationTarget target{ExactReal::from_ratio(twelfths, 12), aa.axis, ExactReal::from_double(opts.gamma)};
    SolveOptions so;
    so.certify = false;
    const TocSolution sol = solve_rotation(target, opts.D, opts.gamma1, so);
    const ControlField f = apply_distortion(sol.field, opts.distortion);
    const GatePair p = propagate_sequence({f}, g, opts.steps_per_unit);
    cache->push_back({{1.0, p}});
  }
  return [cache](int i) -> const std::vector<WeightedPair>& { return cache->at(static_cast<size_t>(i)); };
}

void RbConfig::validate() const {
  if (lengths.empty()) throw Error(ErrorCode::InvalidArgument, "lengths must be nonempty");
  for (int r : lengths) {
    if (r < 0) throw Error(ErrorCode::InvalidArgument, "sequence lengths must be nonnegative");
  }
  if (sequences_per_length < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sequence per length");
  if (!(eps_h > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_h must be positive");
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& stream, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : stream) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h ^ splitmix64(index)));
}

RbResult run_rb(const RbConfig& config, const GateRealizer& realizer) {
  config.validate();
  const int n = config.sequences_per_length;
  auto mean_signal = [&](int r, std::vector<double>& values) {
    values.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      const std::uint64_t idx = (static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint32_t>(j);
      values[j] = run_sequence(config, realizer, r, stream_seed(config.seed, "rb.sequence", idx));
    }
    return stats(values);
  };
  std::vector<double> values;
  const double ref = mean_signal(0, values).mean;
  if (!(std::abs(ref) > 0.0)) throw Error(ErrorCode::Inconsistent, "zero reference signal");

  RbResult out;
  out.lengths = config.lengths;
  for (int r : config.lengths) {
    mean_signal(r, values);
    for (auto& v : values) v /= ref;
    const Stats s = stats(values);
    out.mean.push_back(s.mean);
    out.stderr_.push_back(s.stderr_);
  }
  out.fit = fit_rb(out.lengths, out.mean);
  return out;
}

RbFit fit_rb(const std::vector<int>& lengths, const std::vector<double>& mean) {
  if (lengths.size() != mean.size()) throw Error(ErrorCode::InvalidArgument, "lengths and means differ in size");
  RbFit fit;
  std::vector<double> x, y;
  for (size_t i = 0; i < lengths.size(); ++i) {
    x.push_back(lengths[i]);
    y.push_back(std::log(std::max(mean[i], 1e-300)));
  }
  Kahan sx, sy;
  for (size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx.sum / n, my = sy.sum / n;
  Kahan sxx, sxy;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (x.size() < 2 || !(sxx.sum > 0.0)) {
    fit.degenerate = true;
    fit.d_if = 1.0 - std::exp(my);
    return fit;
  }
  double slope = sxy.sum / sxx.sum;
  double intercept = my - slope * mx;
  if (!(slope < 0.0)) {
    // Non-decaying data.
    fit.degenerate = true;
    slope = 0.0;
    intercept = my;
  }
  fit.eps_g = std::min(0.5, (1.0 - std::exp(slope)) / 2.0);
  fit.d_if = 1.0 - std::exp(intercept);
  Kahan rss;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    rss.add(e * e);
  }
  fit.residual = std::sqrt(rss.sum / n);
  return fit;
}

RbResult synthetic_rb(double d_if, double eps_g, const std::vector<int>& lengths, int sequences, double noise,
                      std::uint64_t seed) {
  if (sequences < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sequence per length");
  RbResult out;
  out.lengths = lengths;
  std::vector<double> values(static_cast<size_t>(sequences));
  for (int r : lengths) {
    std::mt19937_64 rng(stream_seed(seed, "rb.synthetic", static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> gauss(0.0, noise);
    const double model = (1.0 - d_if) * std::pow(1.0 - 2.0 * eps_g, r);
    for (auto& v : values) v = model + gauss(rng);
    const Stats s = stats(values);
    out.mean.push_back(s.mean);
    out.stderr_.push_back(s.stderr_);
  }
  out.fit = fit_rb(out.lengths, out.mean);
  return out;
}

void write_rb_csv(const std::string& path, const RbResult& result) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out << std::setprecision(17) << "r,F_mean,stderr\n";
  for (size_t i = 0; i < result.lengths.size(); ++i) {
    out << result.lengths[i] << ',' << result.mean[i] << ',' << result.stderr_[i] << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace tocspin
