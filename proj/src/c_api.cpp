#include "tocspin/tocspin.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "tocspin/error.hpp"
#include "tocspin/general.hpp"
#include "tocspin/io.hpp"
#include "tocspin/rb.hpp"
#include "tocspin/simulator.hpp"
#include "tocspin/tolerances.hpp"

struct tocspin_solution {
  tocspin::TocSolution sol;
  tocspin::CertificateSummary summary;  // used when sol carries no certificate
};

struct tocspin_rb_result {
  tocspin::RbResult res;
};

namespace {

using namespace tocspin;

thread_local std::string g_last_error;

tocspin_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return TOCSPIN_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidBound: return TOCSPIN_ERR_INVALID_BOUND;
    case ErrorCode::NotFound: return TOCSPIN_ERR_NOT_FOUND;
    case ErrorCode::NotReached: return TOCSPIN_ERR_NOT_REACHED;
    case ErrorCode::Verification: return TOCSPIN_ERR_VERIFICATION;
    case ErrorCode::Inconsistent: return TOCSPIN_ERR_INCONSISTENT;
    case ErrorCode::Io: return TOCSPIN_ERR_IO;
  }
  return TOCSPIN_ERR_INTERNAL;
}

template <class F>
tocspin_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return TOCSPIN_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TOCSPIN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TOCSPIN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TOCSPIN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

RotationTarget parse_target(const char* gamma, const char* theta, const char* axis) {
  require(gamma && theta && axis, "gamma, theta and axis are required");
  RotationTarget t{parse_theta(theta), parse_axis(axis), parse_gamma(gamma)};
  t.validate();
  return t;
}

DistortionModel to_model(const tocspin_distortion* d) {
  DistortionModel m;
  if (!d) return m;
  m.rise_time = d->rise_time;
  m.eta = {d->eta[0], d->eta[1], d->eta[2]};
  m.gamma_shift = d->gamma_shift;
  return m;
}

EtaGrid to_grid(const tocspin_eta_grid* g) {
  require(g != nullptr, "grid is required");
  require(g->n >= 1 && g->lo > 0.0 && g->hi >= g->lo, "invalid eta grid");
  require(g->steps_per_unit > 0.0, "steps_per_unit must be positive");
  return {g->lo, g->hi, g->n};
}

void copy_gate(const UnitaryGate& u, double re[4], double im[4]) {
  const Mat2C& m = u.matrix();
  const Complex e[4] = {m.a00, m.a01, m.a10, m.a11};
  for (int i = 0; i < 4; ++i) {
    re[i] = e[i].real();
    im[i] = e[i].imag();
  }
}

UnitaryGate read_gate(const double re[4], const double im[4]) {
  require(re && im, "gate entries are required");
  return UnitaryGate::from_matrix({{re[0], im[0]}, {re[1], im[1]}, {re[2], im[2]}, {re[3], im[3]}});
}

SolutionDocument document_of(const tocspin_solution* h, int verify_steps) {
  require(verify_steps >= 1, "verify_steps must be at least 1");
  SolutionDocument doc = make_document(h->sol, verify_steps);
  if (!h->sol.certificate) doc.certificate = h->summary;
  return doc;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* tocspin_version(void) { return "1.0.0"; }

const char* tocspin_status_name(tocspin_status status) {
  switch (status) {
    case TOCSPIN_OK: return "ok";
    case TOCSPIN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TOCSPIN_ERR_INVALID_BOUND: return "invalid bound";
    case TOCSPIN_ERR_NOT_FOUND: return "not found";
    case TOCSPIN_ERR_NOT_REACHED: return "not reached";
    case TOCSPIN_ERR_VERIFICATION: return "verification failed";
    case TOCSPIN_ERR_INCONSISTENT: return "inconsistent";
    case TOCSPIN_ERR_IO: return "i/o error";
    case TOCSPIN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tocspin_last_error(void) { return g_last_error.c_str(); }

tocspin_status tocspin_set_tolerance_profile(const char* name) {
  return guard([&] {
    require(name && is_tolerance_profile(name), "unknown tolerance profile");
    set_tolerance_profile(name);
  });
}

void tocspin_string_free(char* text) { delete[] text; }

void tocspin_solve_options_init(tocspin_solve_options* opts) {
  if (!opts) return;
  opts->bound_D = 1.0;
  opts->gamma1 = 1.0;
  opts->certify = 1;
  opts->b_sign = 1;
  opts->enumeration_bound = SolveOptions{}.enumeration_bound;
  opts->max_enumeration_bound = SolveOptions{}.max_enumeration_bound;
  opts->bzero_k_max = SolveOptions{}.bzero_k_max;
}

tocspin_status tocspin_solve(const char* gamma, const char* theta, const char* axis,
                             const tocspin_solve_options* opts, tocspin_solution** out) {
  return guard([&] {
    require(out != nullptr, "output handle is required");
    tocspin_solve_options o;
    tocspin_solve_options_init(&o);
    if (opts) o = *opts;
    require(o.b_sign == 1 || o.b_sign == -1, "b_sign must be +1 or -1");
    require(o.enumeration_bound >= 1, "enumeration_bound must be positive");
    require(o.max_enumeration_bound >= o.enumeration_bound, "max_enumeration_bound is below enumeration_bound");
    require(o.bzero_k_max >= 0, "bzero_k_max must be nonnegative");
    const RotationTarget target = parse_target(gamma, theta, axis);
    SolveOptions so;
    so.certify = o.certify != 0;
    so.b_sign = o.b_sign;
    so.enumeration_bound = o.enumeration_bound;
    so.max_enumeration_bound = o.max_enumeration_bound;
    so.bzero_k_max = o.bzero_k_max;
    auto* h = new tocspin_solution{solve_rotation(target, o.bound_D, o.gamma1, so), {}};
    *out = h;
  });
}

void tocspin_solution_free(tocspin_solution* sol) { delete sol; }

tocspin_status tocspin_solution_render(const tocspin_solution* sol, int json, int verify_steps, char** text) {
  return guard([&] {
    require(sol && text, "solution and output are required");
    const SolutionDocument doc = document_of(sol, verify_steps);
    *text = dup_string(json ? to_json(doc) : to_yaml(doc));
  });
}

tocspin_status tocspin_solution_save(const tocspin_solution* sol, const char* path, int json, int verify_steps) {
  return guard([&] {
    require(sol && path, "solution and path are required");
    save_document(path, document_of(sol, verify_steps), json != 0);
  });
}

tocspin_status tocspin_solution_load(const char* path, tocspin_solution** out) {
  return guard([&] {
    require(path && out, "path and output handle are required");
    SolutionDocument doc = load_document(path);
    *out = new tocspin_solution{std::move(doc.solution), doc.certificate};
  });
}

tocspin_status tocspin_solution_get_info(const tocspin_solution* sol, tocspin_solution_info* info) {
  return guard([&] {
    require(sol && info, "solution and output are required");
    const TocSolution& s = sol->sol;
    tocspin_solution_info r{};
    r.gamma = s.target.gamma.value;
    r.theta = s.target.theta();
    for (int i = 0; i < 3; ++i) r.axis[i] = s.target.axis[i];
    r.bound_D = s.D;
    r.gamma1 = s.gamma1;
    if (const auto* q = std::get_if<Quadruple>(&s.branch)) {
      r.s = q->s;
      r.m = q->m;
      r.l = q->l;
      r.k = q->k;
    } else {
      r.is_bzero = 1;
      r.k = std::get<BZeroBranch>(s.branch).k;
    }
    r.t_min = s.t_min;
    r.t_physical = s.t_physical;
    r.omega = s.params.omega;
    r.a = s.params.a;
    r.b = s.params.b;
    r.sign = s.params.sign;
    copy_gate(s.Y, r.y_re, r.y_im);
    if (s.certificate) {
      r.has_certificate = 1;
      r.certified = s.certificate->certified();
      r.certificate_cases = static_cast<int>(s.certificate->cases.size());
    } else {
      r.has_certificate = sol->summary.present;
      r.certified = sol->summary.certified;
      r.certificate_cases = sol->summary.cases;
    }
    r.residual_spin1 = s.residual_spin1;
    r.residual_spin2 = s.residual_spin2;
    *info = r;
  });
}

void tocspin_distortion_init(tocspin_distortion* d) {
  if (!d) return;
  d->rise_time = 0.0;
  d->eta[0] = d->eta[1] = d->eta[2] = 1.0;
  d->gamma_shift = 0.0;
}

tocspin_status tocspin_solution_simulate(const tocspin_solution* sol, const tocspin_distortion* d, int steps,
                                         double* fidelity_spin1, double* fidelity_spin2) {
  return guard([&] {
    require(sol && fidelity_spin1 && fidelity_spin2, "solution and outputs are required");
    require(steps >= 1, "steps must be at least 1");
    const TocSolution& s = sol->sol;
    GatePair p;
    if (!d) {
      p = propagate(s.field, s.params.gamma, s.field.duration, steps);
    } else {
      const DistortionModel m = to_model(d);
      const ControlField f = apply_distortion(s.field, m);
      // Align the integrator with the hold cells.
      const int cells = static_cast<int>(std::get<SampledField>(f.shape).samples.size());
      const int n = cells * std::max(1, steps / cells);
      p = propagate(f, s.params.gamma * (1.0 + m.gamma_shift), f.duration, n);
    }
    *fidelity_spin1 = gate_fidelity(p.first, s.target.gate());
    *fidelity_spin2 = gate_fidelity(p.second, UnitaryGate{});
  });
}

tocspin_status tocspin_solution_write_waveform(const tocspin_solution* sol, const char* path, double sample_rate,
                                               int* nyquist_ok) {
  return guard([&] {
    require(sol && path, "solution and path are required");
    const ControlField& f = sol->sol.field;
    int n = default_sample_count(f);
    if (sample_rate > 0.0) {
      const double cells = std::ceil(sample_rate * f.duration);
      require(cells < 1e8, "sample rate too high for this pulse");
      n = std::max(1, static_cast<int>(cells));
    }
    const double rate = n / f.duration;
    double f_max = 0.0;
    if (const auto* a = std::get_if<AnalyticField>(&f.shape)) f_max = std::abs(2.0 * a->omega * a->rate) / (2.0 * M_PI);
    write_waveform_csv(path, f, n);
    if (nyquist_ok) *nyquist_ok = rate > 2.0 * f_max;
  });
}

tocspin_status tocspin_solution_sensitivity(const tocspin_solution* sol, double* finite_diff_norm, double* bound) {
  return guard([&] {
    require(sol && finite_diff_norm && bound, "solution and outputs are required");
    const SensitivityResult r = sensitivity_check(sol->sol);
    *finite_diff_norm = r.finite_diff_norm;
    *bound = r.bound;
  });
}

tocspin_status tocspin_solution_gamma_drop(const tocspin_solution* sol, double relative_error, int steps,
                                           double* drop) {
  return guard([&] {
    require(sol && drop, "solution and output are required");
    require(steps >= 1, "steps must be at least 1");
    *drop = gamma_fidelity_drop(sol->sol, relative_error, steps);
  });
}

void tocspin_eta_grid_init(tocspin_eta_grid* g) {
  if (!g) return;
  g->lo = 0.9;
  g->hi = 1.1;
  g->n = 11;
  g->steps_per_unit = 400.0;
  g->threshold = 0.99;
}

tocspin_status tocspin_solution_robustness(const tocspin_solution* sol, const tocspin_eta_grid* grid,
                                           const char* csv_path, double* fraction) {
  return guard([&] {
    require(sol && fraction, "solution and output are required");
    const auto map = robustness_map(sol->sol, to_grid(grid), grid->steps_per_unit);
    if (csv_path) write_robustness_csv(csv_path, map);
    *fraction = region_fraction(map, grid->threshold);
  });
}

tocspin_status tocspin_compare_composite(const char* gamma, const char* theta, const char* axis, double bound_D,
                                         double gamma1, tocspin_composite_result* out) {
  return guard([&] {
    require(out != nullptr, "output is required");
    const RotationTarget target = parse_target(gamma, theta, axis);
    SolveOptions so;
    so.certify = false;
    const TocSolution toc = solve_rotation(target, bound_D, gamma1, so);
    const CompositeResult comp = composite_baseline(target, bound_D, gamma1);
    out->theta = target.theta();
    out->t_toc = toc.t_physical;
    out->t_composite = comp.duration;
    out->saving = 1.0 - toc.t_physical / comp.duration;
    out->fidelity = comp.fidelity;
  });
}

tocspin_status tocspin_composite_robustness(const tocspin_solution* sol, const tocspin_eta_grid* grid,
                                            const char* csv_path, double* fraction) {
  return guard([&] {
    require(sol && fraction, "solution and output are required");
    const RotationTarget& target = sol->sol.target;
    const EtaGrid g = to_grid(grid);
    const CompositeResult comp = composite_baseline(target, sol->sol.D, sol->sol.gamma1);
    const auto map =
        robustness_map(comp.segments, {target.gate(), UnitaryGate{}}, target.gamma.value, g, grid->steps_per_unit);
    if (csv_path) write_robustness_csv(csv_path, map);
    *fraction = region_fraction(map, grid->threshold);
  });
}

void tocspin_rb_config_init(tocspin_rb_config* cfg) {
  if (!cfg) return;
  const TocRealizerOptions t;
  cfg->lengths = nullptr;
  cfg->n_lengths = 0;
  cfg->sequences = 32;
  cfg->seed = 0;
  cfg->realizer = TOCSPIN_RB_TOC;
  cfg->gamma = t.gamma;
  cfg->bound_D = t.D;
  cfg->gamma1 = t.gamma1;
  cfg->steps_per_unit = t.steps_per_unit;
  tocspin_distortion_init(&cfg->distortion);
  cfg->depolarizing_p = 0.0;
}

tocspin_status tocspin_parse_lengths(const char* text, int* lengths, size_t capacity, size_t* count) {
  return guard([&] {
    require(text && count, "text and count are required");
    const auto v = parse_lengths(text);
    require(lengths != nullptr || capacity == 0, "buffer is required");
    for (size_t i = 0; i < v.size() && i < capacity; ++i) lengths[i] = v[i];
    *count = v.size();
  });
}

tocspin_status tocspin_rb_run(const tocspin_rb_config* cfg, tocspin_rb_result** out) {
  return guard([&] {
    require(cfg && out, "config and output handle are required");
    require(cfg->lengths && cfg->n_lengths > 0, "lengths are required");
    RbConfig c;
    c.lengths.assign(cfg->lengths, cfg->lengths + cfg->n_lengths);
    c.sequences_per_length = cfg->sequences;
    c.seed = cfg->seed;
    c.validate();
    GateRealizer realizer;
    switch (cfg->realizer) {
      case TOCSPIN_RB_IDEAL: realizer = ideal_realizer(); break;
      case TOCSPIN_RB_DEPOLARIZING: realizer = depolarizing_realizer(cfg->depolarizing_p); break;
      case TOCSPIN_RB_TOC: {
        TocRealizerOptions o;
        o.gamma = cfg->gamma;
        o.D = cfg->bound_D;
        o.gamma1 = cfg->gamma1;
        o.steps_per_unit = cfg->steps_per_unit;
        o.distortion = to_model(&cfg->distortion);
        realizer = toc_realizer(o);
        break;
      }
      default: throw Error(ErrorCode::InvalidArgument, "unknown gate realizer");
    }
    *out = new tocspin_rb_result{run_rb(c, realizer)};
  });
}

size_t tocspin_rb_result_size(const tocspin_rb_result* res) { return res ? res->res.lengths.size() : 0; }

tocspin_status tocspin_rb_result_point(const tocspin_rb_result* res, size_t i, int* length, double* mean,
                                       double* std_error) {
  return guard([&] {
    require(res != nullptr, "result is required");
    require(i < res->res.lengths.size(), "index out of range");
    if (length) *length = res->res.lengths[i];
    if (mean) *mean = res->res.mean[i];
    if (std_error) *std_error = res->res.stderr_[i];
  });
}

tocspin_status tocspin_rb_result_fit(const tocspin_rb_result* res, double* d_if, double* eps_g, double* residual,
                                     int* degenerate) {
  return guard([&] {
    require(res != nullptr, "result is required");
    const RbFit& f = res->res.fit;
    if (d_if) *d_if = f.d_if;
    if (eps_g) *eps_g = f.eps_g;
    if (residual) *residual = f.residual;
    if (degenerate) *degenerate = f.degenerate;
  });
}

tocspin_status tocspin_rb_result_write_csv(const tocspin_rb_result* res, const char* path) {
  return guard([&] {
    require(res && path, "result and path are required");
    write_rb_csv(path, res->res);
  });
}

void tocspin_rb_result_free(tocspin_rb_result* res) { delete res; }

int tocspin_clifford_count(void) {
  try {
    return static_cast<int>(clifford_table().size());
  } catch (...) {
    return -1;
  }
}

tocspin_status tocspin_general_solve(double gamma, const double u1_re[4], const double u1_im[4],
                                     const double u2_re[4], const double u2_im[4], double t_max,
                                     tocspin_general_result* out) {
  return guard([&] {
    require(out != nullptr, "output is required");
    const GatePair target{read_gate(u1_re, u1_im), read_gate(u2_re, u2_im)};
    ReachOptions opts;
    if (t_max > 0.0) opts.t_max = t_max;
    const ReachResult r = reach_orbit(target, gamma, opts);
    const GeneralSolution s = reconstruct_full_solution(r, gamma, target);
    tocspin_general_result g{};
    g.t_min = s.t_min;
    g.omega = s.params.omega;
    g.a = s.params.a;
    g.b = s.params.b;
    g.sign = s.params.sign;
    copy_gate(s.Y, g.y_re, g.y_im);
    g.residual_first = s.residual_first;
    g.residual_second = s.residual_second;
    *out = g;
  });
}

tocspin_status tocspin_reachset(double gamma, double t, int grid, double omega_max, const char* csv_path) {
  return guard([&] {
    require(csv_path != nullptr, "path is required");
    require(gamma > 0.0 && gamma != 1.0, "gamma must be positive and not 1");
    require(t > 0.0 && omega_max > 0.0, "t and omega_max must be positive");
    write_mesh_csv(csv_path, reachable_surface(gamma, t, grid, omega_max));
  });
}

}  // extern "C"
