#include "tocspin/toc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "tocspin/error.hpp"
#include "tocspin/tolerances.hpp"

namespace tocspin {

namespace {

using boost::multiprecision::cpp_int;

cpp_int floor_r(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (num >= 0) return num / den;
  return -((-num + den - 1) / den);
}

cpp_int ceil_r(const Rational& r) { return -floor_r(-r); }

Rational sq(const Rational& r) { return r * r; }

bool is_half_turn(const ExactReal& q) { return q.exact == 1; }

// Largest integer range [lo, hi] with (x - center)^2 < bound, by scanning around
// a floating estimate and deciding each integer exactly.
IntRange strict_ball(const Rational& center, const Rational& bound) {
  const double c = to_double(center);
  const double r = std::sqrt(std::max(0.0, to_double(bound)));
  IntRange out;
  bool any = false;
  const int lo = static_cast<int>(std::floor(c - r)) - 2;
  const int hi = static_cast<int>(std::ceil(c + r)) + 2;
  for (int x = lo; x <= hi; ++x) {
    if (sq(Rational(x) - center) < bound) {
      if (!any) out.lo = x;
      out.hi = x;
      any = true;
    }
  }
  if (!any) out = IntRange{0, -1};
  return out;
}

bool bzero_hit(int k, double theta, double gamma, double tol) {
  const double t = k * M_PI / std::abs(gamma);
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  return std::abs(std::cos(t) - parity * std::cos(0.5 * theta)) < tol;
}

bool near_integer(const Rational& r) {
  const double x = to_double(r);
  return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, std::abs(x));
}

struct CaseContext {
  Rational qhalf_s;  // s q / 2
  Rational gamma;
  Rational big_gamma;  // g (1 - g)
  Rational bound;      // T_inc
  bool half_turn = false;
  bool exact = false;
  double gamma_d = 0.0, big_gamma_d = 0.0, bound_d = 0.0, qtheta_d = 0.0;

  void cache(const Rational& qtheta) {
    gamma_d = to_double(gamma);
    big_gamma_d = to_double(big_gamma);
    bound_d = to_double(bound);
    qtheta_d = to_double(qtheta);
  }
};

// The m-interval where A < (2 m c1 + c0)/G < T_inc, as the two preimages.
std::pair<Rational, Rational> preimages(const CertificateCase& c, const Rational& lower, const CaseContext& ctx) {
  const Rational ma = (lower * ctx.big_gamma - c.c0) / (2 * c.c1);
  const Rational mb = (ctx.bound * ctx.big_gamma - c.c0) / (2 * c.c1);
  return {ma, mb};
}

long long min_admissible_m(int s, int delta, int epsilon) {
  return std::max<long long>({1, epsilon + 1LL, delta + (s == 1 ? 0LL : 1LL)});
}

std::optional<Rational> better_ratio(const Quadruple& q, const CaseContext& ctx, const Rational& qtheta) {
  if (!admissible(q, ctx.half_turn)) return std::nullopt;
  {
    // Conservative floating-point rejection; anything near a boundary is decided exactly.
    const double h = q.s * ctx.qtheta_d / 2.0 + q.l;
    const double r = (double(q.m) * q.m * (1.0 - ctx.gamma_d) + h * h * ctx.gamma_d - double(q.k) * q.k) /
                     ctx.big_gamma_d;
    const double lo = (q.m - h) * (q.m - h), hi = (q.m + h) * (q.m + h);
    const double margin = 1e-9 * (1.0 + hi + std::abs(r) + ctx.bound_d);
    if (r < -margin || r < lo - margin || r > hi + margin || r > ctx.bound_d + margin) return std::nullopt;
  }
  auto r = candidate_ratio(q, qtheta, ctx.gamma);
  if (r && *r < ctx.bound) return r;
  return std::nullopt;
}

constexpr long long kMaxScan = 2000000;

}  // namespace

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

ExactReal ExactReal::from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "value must be finite");
  return {v, Rational(v), false};
}

ExactReal ExactReal::from_ratio(long long num, long long den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(num);
  r /= den;
  return {to_double(r), r, true};
}

ExactReal ExactReal::from_rational(const Rational& r) { return {to_double(r), r, true}; }

std::string to_string(const Quadruple& q) {
  std::ostringstream os;
  os << '(' << q.s << ", " << q.m << ", " << q.l << ", " << q.k << ')';
  return os.str();
}

double RotationTarget::theta() const { return q.value * M_PI; }

UnitaryGate RotationTarget::gate() const { return rotation(axis, theta()); }

void RotationTarget::validate() const {
  if (!(q.exact > 0 && q.exact < 2)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 2 pi)");
  if (!(gamma.exact > 0) || gamma.exact == 1) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive and different from 1");
  }
  const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(n - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "axis must be a unit vector");
}

bool admissible(const Quadruple& q, bool half_turn) {
  if (q.s != 1 && q.s != -1) return false;
  if (q.m < 1 || q.k < 1) return false;
  if (q.s == 1 ? q.l < 0 : q.l < 1) return false;
  if (!half_turn && ((q.l - q.k) % 2 != 0)) return false;
  return true;
}

Rational m_gamma_exact(const Quadruple& q, const Rational& qtheta, const Rational& gamma) {
  const Rational h = Rational(q.s) * qtheta / 2 + q.l;
  return Rational(q.m) * q.m * (1 - gamma) + h * h * gamma - Rational(q.k) * q.k;
}

double m_gamma(const Quadruple& q, double theta, double gamma) {
  const double h = q.s * theta / (2.0 * M_PI) + q.l;
  return q.m * q.m * (1.0 - gamma) + h * h * gamma - static_cast<double>(q.k) * q.k;
}

double m_gamma_half_turn(int m, int l_odd, int k, double gamma) {
  return m * m * (1.0 - gamma) + l_odd * l_odd * gamma / 4.0 - static_cast<double>(k) * k;
}

std::optional<Rational> candidate_ratio(const Quadruple& q, const Rational& qtheta, const Rational& gamma) {
  const Rational g = gamma * (1 - gamma);
  if (g == 0) return std::nullopt;
  const Rational ratio = m_gamma_exact(q, qtheta, gamma) / g;
  if (ratio <= 0) return std::nullopt;
  const Rational h = Rational(q.s) * qtheta / 2 + q.l;
  if (!(sq(q.m - h) < ratio && ratio < sq(q.m + h))) return std::nullopt;
  return ratio;
}

std::optional<double> candidate_time(const Quadruple& q, double theta, double gamma) {
  auto r = candidate_ratio(q, Rational(theta / M_PI), Rational(gamma));
  if (!r) return std::nullopt;
  return M_PI * std::sqrt(to_double(*r));
}

std::optional<BZeroHit> bzero_candidate(double theta, double gamma, int k_max, double tol) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be at least 1");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  for (int k = 1; k <= k_max; ++k) {
    if (bzero_hit(k, theta, gamma, tol)) return BZeroHit{k, k * M_PI / gamma};
  }
  return std::nullopt;
}

std::optional<BZeroHit> bzero_candidate(double theta, double gamma, int k_max) {
  return bzero_candidate(theta, gamma, k_max, tolerances().bzero);
}

RecoveredParams recover_parameters(const Quadruple& q, double theta, double gamma, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "time must be positive");
  RecoveredParams out;
  out.omega = q.m * M_PI / t;
  out.a = out.omega / (2.0 * gamma) + gamma / (2.0 * out.omega) -
          static_cast<double>(q.k) * q.k * M_PI / (2.0 * t * q.m * gamma);
  if (!(std::abs(out.a) < 1.0)) {
    throw Error(ErrorCode::Inconsistent, "recovered |a| >= 1 for quadruple " + to_string(q));
  }
  out.b = std::sqrt(1.0 - out.a * out.a);
  const double w = out.omega;
  const double eta1 = std::sqrt(w * w + 1.0 - 2.0 * out.a * w);
  const double etag = std::sqrt(w * w + gamma * gamma - 2.0 * out.a * w * gamma);
  out.residual_m = std::abs(w * t - q.m * M_PI);
  out.residual_k = std::abs(etag * t - q.k * M_PI);
  out.residual_l = std::abs(eta1 * t - (q.s * theta / 2.0 + q.l * M_PI));
  return out;
}

std::vector<Candidate> enumerate_candidates(const ExactReal& q, const ExactReal& gamma, int bound) {
  if (bound < 1) throw Error(ErrorCode::InvalidArgument, "enumeration bound must be at least 1");
  const bool half = is_half_turn(q);
  std::vector<Candidate> out;
  for (int s : {1, -1}) {
    for (int m = 1; m <= bound; ++m) {
      for (int l = 0; l <= bound; ++l) {
        // The window fixes an interval for k^2; scan it with a margin and decide exactly.
        const double h = s * q.value / 2.0 + l;
        const double g = gamma.value;
        const double k0 = m * m * (1.0 - g) + h * h * g;
        const double w1 = k0 - g * (1.0 - g) * (m + h) * (m + h);
        const double w2 = k0 - g * (1.0 - g) * (m - h) * (m - h);
        const double k2lo = std::max(0.0, std::min(w1, w2));
        const double k2hi = std::max(w1, w2);
        if (k2hi < 0.0) continue;
        const int klo = std::max(1, static_cast<int>(std::floor(std::sqrt(k2lo))) - 2);
        const int khi = std::min(bound, static_cast<int>(std::ceil(std::sqrt(k2hi))) + 2);
        for (int k = klo; k <= khi; ++k) {
          const Quadruple quad{s, m, l, k};
          if (!admissible(quad, half)) continue;
          // Clear rejections are settled in floating point.
          const double rd = (k0 - double(k) * k) / (g * (1.0 - g));
          const double lo = (m - h) * (m - h), hi = (m + h) * (m + h);
          const double margin = 1e-9 * (1.0 + hi + std::abs(rd));
          if (rd < -margin || rd < lo - margin || rd > hi + margin) continue;
          auto r = candidate_ratio(quad, q.exact, gamma.exact);
          if (!r) continue;
          out.push_back({quad, M_PI * std::sqrt(to_double(*r)), *r});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    if (x.ratio != y.ratio) return x.ratio < y.ratio;
    const auto key = [](const Quadruple& v) { return std::make_tuple(v.l == 0, v.s == -1, v.m, v.l, v.k); };
    return key(x.quad) < key(y.quad);
  });
  return out;
}

std::vector<Candidate> enumerate_candidates(double theta, double gamma, int bound) {
  ExactReal q = ExactReal::from_double(theta / M_PI);
  if (std::abs(q.value - 1.0) < 4e-16) q = ExactReal::from_ratio(1, 1);
  return enumerate_candidates(q, ExactReal::from_double(gamma), bound);
}

std::string to_string(CaseVerdict v) {
  switch (v) {
    case CaseVerdict::Empty:
      return "empty";
    case CaseVerdict::Excluded:
      return "excluded";
    case CaseVerdict::Counterexample:
      return "counterexample";
  }
  return "unknown";
}

OptimalityCertificate certify_optimality(const ExactReal& q, const ExactReal& gamma, const Rational& bound_ratio,
                                         double incumbent_m) {
  if (!(bound_ratio > 0)) throw Error(ErrorCode::InvalidArgument, "incumbent ratio must be positive");
  OptimalityCertificate cert;
  cert.bound_ratio = bound_ratio;
  cert.incumbent_m = incumbent_m;
  cert.exact_input = q.is_exact && gamma.is_exact;

  CaseContext ctx;
  ctx.gamma = gamma.exact;
  ctx.big_gamma = gamma.exact * (1 - gamma.exact);
  ctx.bound = bound_ratio;
  ctx.half_turn = is_half_turn(q);
  ctx.cache(q.exact);
  ctx.exact = cert.exact_input;
  if (ctx.big_gamma == 0) throw Error(ErrorCode::InvalidArgument, "gamma must differ from 1");

  cert.epsilon_range = strict_ball(Rational(0), gamma.exact * gamma.exact * bound_ratio);
  std::optional<Rational> best_counter;
  const Rational bound_g = ctx.bound * ctx.big_gamma;

  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    ctx.qhalf_s = Rational(s) * q.exact / 2;
    cert.delta_range[si] = strict_ball(ctx.qhalf_s, bound_ratio);
    for (int delta = cert.delta_range[si].lo; delta <= cert.delta_range[si].hi; ++delta) {
      const Rational u = ctx.qhalf_s - delta;
      const Rational lower = u * u;
      const Rational gu = ctx.gamma * u, gu2 = lower * ctx.gamma, lower_g = lower * ctx.big_gamma;
      for (int eps = cert.epsilon_range.lo; eps <= cert.epsilon_range.hi; ++eps) {
        CertificateCase c;
        c.s = s;
        c.delta = delta;
        c.epsilon = eps;
        c.c1 = gu + eps;
        c.c0 = gu2 - eps * eps;
        const long long m_min = min_admissible_m(s, delta, eps);

        if (!ctx.half_turn && ((delta - eps) % 2 != 0)) {
          c.verdict = CaseVerdict::Empty;
          cert.cases.push_back(c);
          continue;
        }

        if (c.c1 == 0) {
          const Rational val = c.c0 / ctx.big_gamma;
          if (lower < val && val < ctx.bound) {
            for (long long m = m_min; m < m_min + kMaxScan; ++m) {
              const Quadruple quad{s, static_cast<int>(m), static_cast<int>(m - delta), static_cast<int>(m - eps)};
              if (better_ratio(quad, ctx, q.exact)) {
                c.counterexample = quad;
                break;
              }
            }
            c.verdict = c.counterexample ? CaseVerdict::Counterexample : CaseVerdict::Excluded;
          }
          if (!ctx.exact && std::abs(to_double(c.c1)) < tolerances().borderline) c.borderline = true;
        } else {
          const Rational two_c1 = 2 * c.c1;
          Rational ma = (lower_g - c.c0) / two_c1, mb = (bound_g - c.c0) / two_c1;
          if (ma > mb) std::swap(ma, mb);
          const cpp_int lo = std::max<cpp_int>(floor_r(ma) + 1, cpp_int(m_min));
          const cpp_int hi = ceil_r(mb) - 1;
          c.m_lo = lo.convert_to<long long>();
          c.m_hi = hi > lo + kMaxScan ? c.m_lo + kMaxScan : hi.convert_to<long long>();
          for (long long m = c.m_lo; m <= c.m_hi; ++m) {
            const Quadruple quad{s, static_cast<int>(m), static_cast<int>(m - delta), static_cast<int>(m - eps)};
            if (better_ratio(quad, ctx, q.exact)) {
              c.counterexample = quad;
              break;
            }
          }
          c.verdict = c.counterexample ? CaseVerdict::Counterexample
                                       : (c.m_lo > c.m_hi ? CaseVerdict::Empty : CaseVerdict::Excluded);
          if (!ctx.exact) {
            if (std::abs(to_double(c.c1)) < tolerances().borderline || near_integer(ma) || near_integer(mb)) {
              c.borderline = true;
            }
          }
        }
        if (c.counterexample) {
          const Rational r = *candidate_ratio(*c.counterexample, q.exact, ctx.gamma);
          if (!best_counter || r < *best_counter) {
            best_counter = r;
            cert.counterexample = c.counterexample;
          }
        }
        if (c.borderline) ++cert.borderline_cases;
        cert.cases.push_back(c);
      }
    }
  }

  // b = 0 candidates with k pi / g < t_inc.
  const Rational g2t = gamma.exact * gamma.exact * bound_ratio;
  for (int k = 1; Rational(k) * k < g2t; ++k) {
    if (bzero_hit(k, q.value * M_PI, gamma.value, tolerances().bzero)) {
      cert.bzero = BZeroHit{k, k * M_PI / gamma.value};
      break;
    }
  }
  return cert;
}

std::string replay_certificate(const OptimalityCertificate& cert, const ExactReal& q, const ExactReal& gamma) {
  std::ostringstream fail;
  CaseContext ctx;
  ctx.gamma = gamma.exact;
  ctx.big_gamma = gamma.exact * (1 - gamma.exact);
  ctx.bound = cert.bound_ratio;
  ctx.half_turn = is_half_turn(q);
  ctx.cache(q.exact);

  auto in_ball = [](int x, const Rational& center, const Rational& b) { return sq(Rational(x) - center) < b; };
  const Rational g2t = gamma.exact * gamma.exact * cert.bound_ratio;
  const IntRange& er = cert.epsilon_range;
  for (int e = er.lo; e <= er.hi; ++e) {
    if (!in_ball(e, 0, g2t)) return "epsilon " + std::to_string(e) + " outside its bound";
  }
  if (in_ball(er.lo - 1, 0, g2t) || in_ball(er.hi + 1, 0, g2t)) return "epsilon range is not maximal";

  std::set<std::tuple<int, int, int>> seen;
  for (const auto& c : cert.cases) seen.insert({c.s, c.delta, c.epsilon});
  for (int si = 0; si < 2; ++si) {
    const int s = si == 0 ? 1 : -1;
    const Rational center = Rational(s) * q.exact / 2;
    const IntRange& dr = cert.delta_range[si];
    for (int d = dr.lo; d <= dr.hi; ++d) {
      if (!in_ball(d, center, cert.bound_ratio)) return "delta " + std::to_string(d) + " outside its bound";
      for (int e = er.lo; e <= er.hi; ++e) {
        if (!seen.count({s, d, e})) {
          fail << "missing case s=" << s << " delta=" << d << " epsilon=" << e;
          return fail.str();
        }
      }
    }
    if (in_ball(dr.lo - 1, center, cert.bound_ratio) || in_ball(dr.hi + 1, center, cert.bound_ratio)) {
      return "delta range is not maximal";
    }
  }

  for (const auto& c : cert.cases) {
    ctx.qhalf_s = Rational(c.s) * q.exact / 2;
    const Rational u = ctx.qhalf_s - c.delta;
    if (c.c1 != ctx.gamma * u + c.epsilon || c.c0 != u * u * ctx.gamma - Rational(c.epsilon) * c.epsilon) {
      fail << "coefficients differ for s=" << c.s << " delta=" << c.delta << " epsilon=" << c.epsilon;
      return fail.str();
    }
    if (c.counterexample) {
      if (!better_ratio(*c.counterexample, ctx, q.exact)) return "recorded counterexample does not improve";
      continue;
    }
    if (!ctx.half_turn && ((c.delta - c.epsilon) % 2 != 0)) continue;
    const Rational lower = u * u;
    if (c.c1 == 0) {
      const Rational val = c.c0 / ctx.big_gamma;
      if (lower < val && val < ctx.bound) return "constant case lies inside the window";
      continue;
    }
    // The recorded preimages bound the window; every integer inside it was checked.
    auto [ma, mb] = preimages(c, lower, ctx);
    if ((2 * ma * c.c1 + c.c0) / ctx.big_gamma != lower || (2 * mb * c.c1 + c.c0) / ctx.big_gamma != ctx.bound) {
      return "window preimages inconsistent";
    }
    if (ma > mb) std::swap(ma, mb);
    const long long m_min = min_admissible_m(c.s, c.delta, c.epsilon);
    const cpp_int first = std::max<cpp_int>(floor_r(ma) + 1, cpp_int(m_min));
    const cpp_int last = ceil_r(mb) - 1;
    if (first.convert_to<long long>() != c.m_lo || (last >= first && last.convert_to<long long>() != c.m_hi)) {
      fail << "checked m range differs for s=" << c.s << " delta=" << c.delta << " epsilon=" << c.epsilon;
      return fail.str();
    }
    for (long long m = c.m_lo; m <= c.m_hi; ++m) {
      const Quadruple quad{c.s, static_cast<int>(m), static_cast<int>(m - c.delta), static_cast<int>(m - c.epsilon)};
      if (better_ratio(quad, ctx, q.exact)) {
        fail << "quadruple " << to_string(quad) << " improves on the incumbent";
        return fail.str();
      }
    }
  }

  if (!cert.bzero) {
    for (int k = 1; Rational(k) * k < g2t; ++k) {
      if (bzero_hit(k, q.value * M_PI, gamma.value, tolerances().bzero)) return "unrecorded b = 0 candidate";
    }
  }
  return "";
}

UnitaryGate matching_conjugator(const UnitaryGate& u_tilde, const UnitaryGate& u_target) {
  const EigenDecomp2 et = eig_su2(u_tilde);
  const EigenDecomp2 ef = eig_su2(u_target);
  if (std::abs(et.phi - ef.phi) > 1e-7) {
    throw Error(ErrorCode::Inconsistent, "spectra of the canonical and target gates differ");
  }
  if (et.degenerate || ef.degenerate) return UnitaryGate{};
  const Mat2C w = ef.S.matrix().dagger() * et.S.matrix();
  double beta = 0.0;
  if (std::abs(w.a00) > tolerances().degenerate) {
    beta = std::fmod(0.5 * M_PI - std::arg(w.a00), M_PI);
    if (beta < 0.0) beta += M_PI;
  }
  const UnitaryGate h = UnitaryGate::unchecked(Mat2C::diag(std::polar(1.0, beta), std::polar(1.0, -beta)));
  return et.S * h * ef.S.dagger();
}

ControlField TocSolution::normalized_field() const { return canonical_field(params, Y, t_min); }

GatePair TocSolution::final_pair() const {
  const GatePair p = trajectory_canonical(params, t_min);
  return {Y.dagger() * p.first * Y, p.second};
}

TocSolution assemble_solution(const RotationTarget& target, const Branch& branch, double t, double D, double gamma1,
                              int b_sign) {
  if (!(D > 0.0) || !std::isfinite(D)) throw Error(ErrorCode::InvalidBound, "bound D must be positive");
  if (gamma1 == 0.0 || !std::isfinite(gamma1)) throw Error(ErrorCode::InvalidArgument, "gamma1 must be nonzero");
  TocSolution sol;
  sol.target = target;
  sol.branch = branch;
  sol.t_min = t;
  sol.D = D;
  sol.gamma1 = gamma1;
  const double g = target.gamma.value;
  if (const auto* quad = std::get_if<Quadruple>(&branch)) {
    const RecoveredParams rp = recover_parameters(*quad, target.theta(), g, t);
    sol.params = {rp.omega, rp.a, b_sign >= 0 ? rp.b : -rp.b, g, ((quad->m + quad->k) % 2 == 0) ? 1 : -1};
  } else {
    const int k = std::get<BZeroBranch>(branch).k;
    sol.params = {0.0, 1.0, 0.0, g, (k % 2 == 0) ? 1 : -1};
  }
  const GatePair p = trajectory_canonical(sol.params, t);
  const Mat2C want = target.gate().matrix() * Complex(sol.params.sign);
  sol.Y = matching_conjugator(p.first, UnitaryGate::unchecked(want));
  sol.residual_spin1 = distance((sol.Y.dagger() * p.first * sol.Y).matrix(), want);
  sol.residual_spin2 = distance(p.second.matrix(), Mat2C::identity() * Complex(sol.params.sign));
  const double tol = tolerances().verify;
  if (sol.residual_spin1 > tol || sol.residual_spin2 > tol) {
    std::ostringstream os;
    os << "verification failed: residuals " << sol.residual_spin1 << ", " << sol.residual_spin2;
    throw Error(ErrorCode::Verification, os.str());
  }
  sol.field = rescale_control(canonical_field(sol.params, sol.Y, t), D, gamma1);
  sol.t_physical = sol.field.duration;
  return sol;
}

TocSolution solve_rotation(const RotationTarget& target, double D, double gamma1, const SolveOptions& opts) {
  target.validate();
  if (!(D > 0.0) || !std::isfinite(D)) throw Error(ErrorCode::InvalidBound, "bound D must be positive");
  int bound = opts.enumeration_bound;
  auto cands = enumerate_candidates(target.q, target.gamma, bound);
  while (cands.empty() && bound < opts.max_enumeration_bound) {
    bound = std::min(2 * bound, opts.max_enumeration_bound);
    cands = enumerate_candidates(target.q, target.gamma, bound);
  }
  const auto bz = bzero_candidate(target.theta(), target.gamma.value, opts.bzero_k_max);

  Branch branch;
  Rational ratio;
  double incumbent_m = 0.0;
  auto take_quadruple = [&](const Quadruple& quad, const Rational& r) {
    branch = quad;
    ratio = r;
    incumbent_m = to_double(m_gamma_exact(quad, target.q.exact, target.gamma.exact));
  };
  auto take_bzero = [&](int k) {
    branch = BZeroBranch{k};
    ratio = Rational(k) * k / (target.gamma.exact * target.gamma.exact);
    incumbent_m = 0.0;
  };

  if (!cands.empty()) take_quadruple(cands.front().quad, cands.front().ratio);
  if (bz && (cands.empty() || Rational(bz->k) * bz->k / (target.gamma.exact * target.gamma.exact) < ratio)) {
    take_bzero(bz->k);
  }
  if (cands.empty() && !bz) {
    throw Error(ErrorCode::NotFound,
                "no admissible candidate within enumeration bound " + std::to_string(bound));
  }

  std::optional<OptimalityCertificate> cert;
  if (opts.certify) {
    for (int round = 0; round < 64; ++round) {
      cert = certify_optimality(target.q, target.gamma, ratio, incumbent_m);
      if (cert->counterexample) {
        const Quadruple c = *cert->counterexample;
        take_quadruple(c, *candidate_ratio(c, target.q.exact, target.gamma.exact));
        continue;
      }
      if (cert->bzero) {
        take_bzero(cert->bzero->k);
        continue;
      }
      break;
    }
    if (!cert->certified()) throw Error(ErrorCode::Inconsistent, "certificate did not converge");
  }

  TocSolution sol = assemble_solution(target, branch, M_PI * std::sqrt(to_double(ratio)), D, gamma1, opts.b_sign);
  sol.certificate = std::move(cert);
  return sol;
}

}  // namespace tocspin
