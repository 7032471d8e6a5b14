#include "tocspin/general.hpp"

#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "tocspin/error.hpp"

namespace tocspin {

namespace {

struct GapContext {
  const GatePair* target;
  OrbitPoint orbit[2];  // +target, -target
  double gamma;
  double t;
};

struct Eval {
  double d;
  int sign;
};

Eval evaluate(const GapContext& ctx, double omega, double alpha) {
  const CanonicalParams c{omega, std::cos(alpha), std::sin(alpha), ctx.gamma, 1};
  const OrbitPoint o = psi_map(trajectory_canonical(c, ctx.t));
  const double dp = orbit_distance(o, ctx.orbit[0]);
  const double dm = orbit_distance(o, ctx.orbit[1]);
  return dp <= dm ? Eval{dp, 1} : Eval{dm, -1};
}

double simplex_objective(const gsl_vector* v, void* params) {
  const auto* ctx = static_cast<const GapContext*>(params);
  return evaluate(*ctx, gsl_vector_get(v, 0), gsl_vector_get(v, 1)).d;
}

struct SimplexResult {
  double omega, alpha, d;
};

SimplexResult polish(const GapContext& ctx, double omega, double alpha, double step_w, double step_a) {
  gsl_multimin_function fn{&simplex_objective, 2, const_cast<GapContext*>(&ctx)};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* ss = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, omega);
  gsl_vector_set(x, 1, alpha);
  gsl_vector_set(ss, 0, step_w);
  gsl_vector_set(ss, 1, step_a);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < 400; ++it) {
    if (gsl_multimin_fminimizer_iterate(s)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-10) == GSL_SUCCESS) break;
  }
  SimplexResult out{gsl_vector_get(s->x, 0), gsl_vector_get(s->x, 1), s->fval};
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return out;
}

// Gate residuals Y^dag U~ Y - sign target for z = (t, omega, alpha, y), Y = Y0 e^{y}.
struct GateResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const GatePair* target;
  UnitaryGate y0;
  double gamma;
  int sign;

  GateResidual(const GatePair* tg, const UnitaryGate& y, double g, int s)
      : target(tg), y0(y), gamma(g), sign(s) {}

  int inputs() const { return 6; }
  int values() const { return 16; }

  UnitaryGate conjugator(const Eigen::VectorXd& z) const {
    return y0 * expm_algebra(AlgebraElement{z[3], z[4], z[5]}, 1.0);
  }

  int operator()(const Eigen::VectorXd& z, Eigen::VectorXd& f) const {
    const CanonicalParams c{z[1], std::cos(z[2]), std::sin(z[2]), gamma, 1};
    const GatePair p = trajectory_canonical(c, z[0]);
    const UnitaryGate y = conjugator(z);
    const Mat2C r1 = (y.dagger() * p.first * y).matrix() - target->first.matrix() * Complex(sign);
    const Mat2C r2 = (y.dagger() * p.second * y).matrix() - target->second.matrix() * Complex(sign);
    const Complex e[8] = {r1.a00, r1.a01, r1.a10, r1.a11, r2.a00, r2.a01, r2.a10, r2.a11};
    for (int i = 0; i < 8; ++i) {
      f[2 * i] = e[i].real();
      f[2 * i + 1] = e[i].imag();
    }
    return 0;
  }
};

struct Refined {
  bool ok = false;
  double t, omega, alpha, residual;
  UnitaryGate y;
};

Refined refine(const GatePair& target, double gamma, const ReachResult& start, double alpha) {
  const CanonicalParams c{start.omega, std::cos(alpha), std::sin(alpha), gamma, 1};
  const GatePair p = trajectory_canonical(c, start.t);
  const GatePair signed_target = start.sign == 1 ? target : -target;
  const auto y0 = conjugation_witness(signed_target, p, 10.0);
  Refined out;
  if (!y0) return out;

  GateResidual fn(&target, *y0, gamma, start.sign);
  Eigen::NumericalDiff<GateResidual> numdiff(fn);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<GateResidual>> lm(numdiff);
  lm.parameters.maxfev = 4000;
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  Eigen::VectorXd z(6);
  z << start.t, start.omega, alpha, 0.0, 0.0, 0.0;
  lm.minimize(z);
  Eigen::VectorXd f(16);
  fn(z, f);
  out.ok = std::isfinite(f.norm()) && z[0] > 0.0;
  out.t = z[0];
  out.omega = z[1];
  out.alpha = z[2];
  out.residual = f.norm();
  out.y = UnitaryGate::project(fn.conjugator(z).matrix());
  return out;
}

bool is_identity_pair(const GatePair& p) {
  const Mat2C id = Mat2C::identity();
  const double dp = distance(p.first.matrix(), id) + distance(p.second.matrix(), id);
  const double dm = distance(p.first.matrix(), -id) + distance(p.second.matrix(), -id);
  return std::min(dp, dm) < 1e-12;
}

}  // namespace

ControlField GeneralSolution::normalized_field() const { return canonical_field(params, Y, t_min); }

ReachResult orbit_gap(const GatePair& target, double gamma, double t, const ReachOptions& opts) {
  if (opts.grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be at least 2");
  GapContext ctx{&target, {psi_map(target), psi_map(-target)}, gamma, t};
  struct Start {
    double d, w, a;
  };
  std::vector<Start> starts;
  starts.reserve(static_cast<size_t>(opts.grid) * opts.grid);
  const double dw = 2.0 * opts.omega_max / (opts.grid - 1);
  const double da = M_PI / (opts.grid - 1);
  for (int i = 0; i < opts.grid; ++i) {
    const double w = -opts.omega_max + dw * i;
    for (int j = 0; j < opts.grid; ++j) {
      const double a = da * j;
      starts.push_back({evaluate(ctx, w, a).d, w, a});
    }
  }
  const int n = std::min<int>(opts.polish_starts, static_cast<int>(starts.size()));
  std::partial_sort(starts.begin(), starts.begin() + n, starts.end(),
                    [](const Start& x, const Start& y) { return x.d < y.d; });
  ReachResult best;
  best.t = t;
  best.distance = INFINITY;
  for (int i = 0; i < n; ++i) {
    const SimplexResult r = polish(ctx, starts[i].w, starts[i].a, 0.5 * dw, 0.5 * da);
    if (r.d < best.distance) {
      best.distance = r.d;
      best.omega = r.omega;
      best.a = std::cos(r.alpha);
      best.b = std::sin(r.alpha);
      best.sign = evaluate(ctx, r.omega, r.alpha).sign;
    }
  }
  return best;
}

ReachResult reach_orbit(const GatePair& target, double gamma, const ReachOptions& opts) {
  if (!(gamma > 0.0) || gamma == 1.0) throw Error(ErrorCode::InvalidArgument, "gamma must be positive and not 1");
  if (opts.t_steps < 1 || !(opts.t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "invalid time grid");
  if (is_identity_pair(target)) {
    ReachResult r;
    r.sign = distance(target.first.matrix(), Mat2C::identity()) < 1e-12 ? 1 : -1;
    return r;
  }
  const double dt = opts.t_max / opts.t_steps;
  for (int i = 1; i <= opts.t_steps; ++i) {
    const double t = dt * i;
    const ReachResult gap = orbit_gap(target, gamma, t, opts);
    if (gap.distance >= opts.coarse_accept) continue;
    const Refined r = refine(target, gamma, gap, std::atan2(gap.b, gap.a));
    if (!r.ok || r.residual > 1e-10 || r.t > t + dt) continue;
    GapContext ctx{&target, {psi_map(target), psi_map(-target)}, gamma, r.t};
    const Eval e = evaluate(ctx, r.omega, r.alpha);
    if (e.d >= opts.accept) continue;
    ReachResult out;
    out.t = r.t;
    out.omega = r.omega;
    out.a = std::cos(r.alpha);
    out.b = std::sin(r.alpha);
    out.sign = gap.sign;
    out.distance = e.d;
    out.Y = r.y;
    return out;
  }
  throw Error(ErrorCode::NotReached, "target orbit not reached up to t_max = " + std::to_string(opts.t_max));
}

GeneralSolution reconstruct_full_solution(const ReachResult& r, double gamma, const GatePair& target) {
  GeneralSolution sol;
  sol.t_min = r.t;
  sol.params = {r.omega, r.a, r.b, gamma, r.sign};
  const GatePair p = trajectory_canonical(sol.params, r.t);
  const GatePair signed_target = r.sign == 1 ? target : -target;
  auto residuals = [&](const UnitaryGate& y) {
    sol.residual_first = distance((y.dagger() * p.first * y).matrix(), signed_target.first.matrix());
    sol.residual_second = distance((y.dagger() * p.second * y).matrix(), signed_target.second.matrix());
    return std::max(sol.residual_first, sol.residual_second);
  };
  constexpr double kTol = 1e-7;
  auto w = conjugation_witness(signed_target, p, kTol);
  if (w && residuals(*w) < kTol) {
    sol.Y = *w;
    return sol;
  }
  // One retry with a looser coordinate match, then the refinement's own conjugator.
  w = conjugation_witness(signed_target, p, 1e-5);
  if (w && residuals(*w) < kTol) {
    sol.Y = *w;
    return sol;
  }
  if (residuals(r.Y) < kTol) {
    sol.Y = r.Y;
    return sol;
  }
  throw Error(ErrorCode::Verification, "conjugation witness residual above tolerance");
}

std::vector<MeshRow> reachable_surface(double gamma, double t, int grid, double omega_max) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be at least 2");
  std::vector<MeshRow> rows;
  rows.reserve(static_cast<size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    const double w = -omega_max + 2.0 * omega_max * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double alpha = M_PI * j / (grid - 1);
      const CanonicalParams c{w, std::cos(alpha), std::sin(alpha), gamma, 1};
      rows.push_back(mesh_row(t, psi_map(trajectory_canonical(c, t))));
    }
  }
  return rows;
}

}  // namespace tocspin
