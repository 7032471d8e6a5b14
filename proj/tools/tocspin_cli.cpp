// tocspin: command-line front end over the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "tocspin/tocspin.h"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitVerification = 4;
constexpr int kExitIo = 5;

struct Failure {
  int code;
};

int exit_code(tocspin_status s) {
  switch (s) {
    case TOCSPIN_OK: return 0;
    case TOCSPIN_ERR_INVALID_ARGUMENT:
    case TOCSPIN_ERR_INVALID_BOUND: return kExitInvalid;
    case TOCSPIN_ERR_NOT_FOUND:
    case TOCSPIN_ERR_NOT_REACHED: return kExitNotFound;
    case TOCSPIN_ERR_VERIFICATION: return kExitVerification;
    case TOCSPIN_ERR_IO: return kExitIo;
    default: return 1;
  }
}

void check(tocspin_status s) {
  if (s == TOCSPIN_OK) return;
  std::cerr << "error: " << tocspin_status_name(s) << ": " << tocspin_last_error() << '\n';
  throw Failure{exit_code(s)};
}

[[noreturn]] void invalid(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  throw Failure{kExitInvalid};
}

std::string path_or_stdout(const std::string& p) { return p == "-" ? "/dev/stdout" : p; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct TargetArgs {
  std::string gamma, theta, axis = "z";
  double bound = 1.0;
  double gamma1 = 1.0;

  void add(CLI::App* app, bool theta_required = true) {
    app->add_option("--gamma", gamma, "gyromagnetic ratio g2/g1, float or p/q")->required();
    auto* t = app->add_option("--theta", theta, "rotation angle, radians or fractions of pi (pi/2, 3pi/4)");
    if (theta_required) t->required();
    app->add_option("--axis", axis, "rotation axis x|y|z|nx,ny,nz")->capture_default_str();
    app->add_option("--bound", bound, "field bound D")->capture_default_str();
    app->add_option("--gamma1", gamma1, "gyromagnetic ratio of the first spin")->capture_default_str();
  }
};

// A solution from --solution FILE, or solved inline from the target flags.
struct SolutionSource {
  std::string file;
  TargetArgs target;

  void add(CLI::App* app) {
    app->add_option("--solution", file, "result document written by solve");
    app->add_option("--gamma", target.gamma, "gyromagnetic ratio g2/g1, float or p/q");
    app->add_option("--theta", target.theta, "rotation angle");
    app->add_option("--axis", target.axis, "rotation axis")->capture_default_str();
    app->add_option("--bound", target.bound, "field bound D")->capture_default_str();
    app->add_option("--gamma1", target.gamma1, "gyromagnetic ratio of the first spin")->capture_default_str();
  }

  tocspin_solution* load() const {
    tocspin_solution* sol = nullptr;
    if (!file.empty()) {
      check(tocspin_solution_load(file.c_str(), &sol));
      return sol;
    }
    if (target.gamma.empty() || target.theta.empty()) invalid("either --solution or --gamma and --theta are required");
    tocspin_solve_options o;
    tocspin_solve_options_init(&o);
    o.bound_D = target.bound;
    o.gamma1 = target.gamma1;
    o.certify = 0;
    check(tocspin_solve(target.gamma.c_str(), target.theta.c_str(), target.axis.c_str(), &o, &sol));
    return sol;
  }
};

struct SolutionHandle {
  tocspin_solution* p;
  ~SolutionHandle() { tocspin_solution_free(p); }
};

struct DistortionArgs {
  double rise_time = 0.0;
  std::vector<double> eta{1.0, 1.0, 1.0};
  double gamma_shift = 0.0;

  void add(CLI::App* app) {
    app->add_option("--rise-time", rise_time, "low-pass rise time in seconds")->capture_default_str();
    app->add_option("--eta", eta, "per-axis amplitude ratios")->expected(3)->delimiter(',');
    app->add_option("--gamma-shift", gamma_shift, "relative error of gamma in the simulation");
  }

  tocspin_distortion model() const {
    tocspin_distortion d;
    tocspin_distortion_init(&d);
    d.rise_time = rise_time;
    for (int i = 0; i < 3; ++i) d.eta[i] = eta[i];
    d.gamma_shift = gamma_shift;
    return d;
  }
};

struct GridArgs {
  tocspin_eta_grid g;
  GridArgs() { tocspin_eta_grid_init(&g); }

  void add(CLI::App* app) {
    app->add_option("--eta-lo", g.lo, "lower amplitude ratio")->capture_default_str();
    app->add_option("--eta-hi", g.hi, "upper amplitude ratio")->capture_default_str();
    app->add_option("--eta-n", g.n, "points per axis")->capture_default_str();
    app->add_option("--threshold", g.threshold, "fidelity threshold of the robust region")->capture_default_str();
    app->add_option("--steps-per-unit", g.steps_per_unit, "integrator steps per normalized time unit")
        ->capture_default_str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal selective control of two spins"};
  app.require_subcommand(1);
  std::string profile;
  app.add_option("--tolerance-profile", profile, "default | strict | loose")->envname("TOCSPIN_TOLERANCE_PROFILE");

  // solve
  auto* solve = app.add_subcommand("solve", "time-optimal selective rotation");
  TargetArgs st;
  bool certify = false, json = false;
  int b_sign = 1, verify_steps = 20000, bound_lo = 12, bound_hi = 192, bzero_k_max = 50;
  std::string out, waveform;
  double sample_rate = 0.0;
  st.add(solve);
  solve->add_flag("--certify", certify, "attach an optimality certificate");
  solve->add_option("--b-sign", b_sign, "sign of b (+1 or -1)")->check(CLI::IsMember({1, -1}));
  solve->add_option("--search-bound", bound_lo, "initial bound on m, l, k")->capture_default_str()->check(
      CLI::PositiveNumber);
  solve->add_option("--max-bound", bound_hi, "largest bound on m, l, k")->capture_default_str()->check(
      CLI::PositiveNumber);
  solve->add_option("--bzero-k-max", bzero_k_max, "largest k on the b = 0 branch")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  solve->add_option("--out", out, "result document path (stdout when omitted)");
  solve->add_flag("--json", json, "canonical JSON instead of YAML");
  solve->add_option("--waveform", waveform, "waveform CSV path");
  solve->add_option("--sample-rate", sample_rate, "waveform sample rate in Hz");
  solve->add_option("--verify-steps", verify_steps, "propagation steps of the verification")->check(
      CLI::PositiveNumber);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "propagate a pulse and report fidelities");
  SolutionSource sim_src;
  DistortionArgs sim_dist;
  int sim_steps = 20000;
  bool sim_json = false;
  sim_src.add(simulate);
  sim_dist.add(simulate);
  simulate->add_option("--steps", sim_steps, "propagation steps")->check(CLI::PositiveNumber);
  simulate->add_flag("--json", sim_json, "JSON output");
  double min_fidelity = 0.0;
  simulate->add_option("--min-fidelity", min_fidelity, "exit with status 4 when either fidelity is lower")
      ->check(CLI::Range(0.0, 1.0));

  // robustness
  auto* robust = app.add_subcommand("robustness", "fidelity over a grid of amplitude ratios");
  SolutionSource rob_src;
  GridArgs rob_grid;
  std::string rob_out = "-", rob_composite_out;
  bool rob_composite = false;
  rob_src.add(robust);
  rob_grid.add(robust);
  robust->add_option("--out", rob_out, "CSV path, - for stdout")->capture_default_str();
  robust->add_flag("--composite", rob_composite, "also evaluate the composite baseline");
  robust->add_option("--composite-out", rob_composite_out, "CSV path of the composite map");

  // rb
  auto* rb = app.add_subcommand("rb", "simulated randomized benchmarking");
  std::string lengths = "1:50", realizer = "toc", rb_out = "-";
  int sequences = 32;
  std::uint64_t seed = 0;
  double p = 0.0, rb_gamma = 0.2514, rb_bound = 1.0, rb_gamma1 = 1.0, rb_steps = 2000.0;
  DistortionArgs rb_dist;
  rb->add_option("--lengths", lengths, "sequence lengths, 1:50 or 1,2,4")->capture_default_str();
  rb->add_option("--sequences", sequences, "random sequences per length")->capture_default_str();
  rb->add_option("--seed", seed, "master seed")->capture_default_str();
  rb->add_option("--realizer", realizer, "toc | ideal | depolarizing")
      ->check(CLI::IsMember({"toc", "ideal", "depolarizing"}))
      ->capture_default_str();
  rb->add_option("--p", p, "error probability of the depolarizing realizer");
  rb->add_option("--gamma", rb_gamma, "gyromagnetic ratio g2/g1")->capture_default_str();
  rb->add_option("--bound", rb_bound, "field bound D")->capture_default_str();
  rb->add_option("--gamma1", rb_gamma1, "gyromagnetic ratio of the first spin")->capture_default_str();
  rb->add_option("--steps-per-unit", rb_steps, "integrator steps per normalized time unit")->capture_default_str();
  rb->add_option("--out", rb_out, "CSV path, - for stdout")->capture_default_str();
  rb_dist.add(rb);

  // compare-composite
  auto* comp = app.add_subcommand("compare-composite", "time saving against the composite-pulse baseline");
  TargetArgs ct;
  int theta_grid = 0;
  std::string comp_out = "-";
  ct.add(comp, false);
  comp->add_option("--theta-grid", theta_grid, "evaluate theta = k pi / N for k = 1..N");
  comp->add_option("--out", comp_out, "CSV path, - for stdout")->capture_default_str();

  // reachset
  auto* reach = app.add_subcommand("reachset", "orbit coordinates reachable at time t");
  double reach_gamma = 0.0, reach_t = 0.0, omega_max = 5.0;
  int reach_grid = 64;
  std::string reach_out = "-";
  reach->add_option("--gamma", reach_gamma, "gyromagnetic ratio g2/g1")->required();
  reach->add_option("--t", reach_t, "normalized time")->required();
  reach->add_option("--grid", reach_grid, "lattice points per parameter")->capture_default_str();
  reach->add_option("--omega-max", omega_max, "omega range")->capture_default_str();
  reach->add_option("--out", reach_out, "CSV path, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (!profile.empty()) check(tocspin_set_tolerance_profile(profile.c_str()));

    if (*solve) {
      tocspin_solve_options o;
      tocspin_solve_options_init(&o);
      o.bound_D = st.bound;
      o.gamma1 = st.gamma1;
      o.certify = certify;
      o.b_sign = b_sign;
      o.enumeration_bound = std::min(bound_lo, bound_hi);
      o.max_enumeration_bound = bound_hi;
      o.bzero_k_max = bzero_k_max;
      tocspin_solution* raw = nullptr;
      check(tocspin_solve(st.gamma.c_str(), st.theta.c_str(), st.axis.c_str(), &o, &raw));
      SolutionHandle sol{raw};
      if (out.empty()) {
        char* text = nullptr;
        check(tocspin_solution_render(sol.p, json, verify_steps, &text));
        std::cout << text;
        tocspin_string_free(text);
      } else {
        check(tocspin_solution_save(sol.p, out.c_str(), json, verify_steps));
      }
      if (!waveform.empty()) {
        int ok = 1;
        check(tocspin_solution_write_waveform(sol.p, waveform.c_str(), sample_rate, &ok));
        if (!ok) std::cerr << "warning: sample rate below the Nyquist rate of the 2 omega modulation\n";
      }
      return 0;
    }

    if (*simulate) {
      SolutionHandle sol{sim_src.load()};
      const bool distorted = sim_dist.rise_time > 0.0 || sim_dist.gamma_shift != 0.0 || sim_dist.eta[0] != 1.0 ||
                             sim_dist.eta[1] != 1.0 || sim_dist.eta[2] != 1.0;
      const tocspin_distortion d = sim_dist.model();
      double f1 = 0.0, f2 = 0.0;
      check(tocspin_solution_simulate(sol.p, distorted ? &d : nullptr, sim_steps, &f1, &f2));
      if (sim_json) {
        std::cout << "{\"steps\": " << sim_steps << ", \"fidelity_spin1\": " << fmt(f1)
                  << ", \"fidelity_spin2\": " << fmt(f2) << ", \"fidelity\": " << fmt(f1 * f2) << "}\n";
      } else {
        std::cout << "steps: " << sim_steps << "\nfidelity_spin1: " << fmt(f1) << "\nfidelity_spin2: " << fmt(f2)
                  << "\nfidelity: " << fmt(f1 * f2) << '\n';
      }
      if (f1 < min_fidelity || f2 < min_fidelity) {
        std::cerr << "error: fidelity below " << fmt(min_fidelity) << '\n';
        return kExitVerification;
      }
      return 0;
    }

    if (*robust) {
      SolutionHandle sol{rob_src.load()};
      double frac = 0.0;
      check(tocspin_solution_robustness(sol.p, &rob_grid.g, path_or_stdout(rob_out).c_str(), &frac));
      std::cerr << "robust_fraction_toc: " << fmt(frac) << '\n';
      if (rob_composite) {
        double cfrac = 0.0;
        check(tocspin_composite_robustness(sol.p, &rob_grid.g,
                                           rob_composite_out.empty() ? nullptr : rob_composite_out.c_str(), &cfrac));
        std::cerr << "robust_fraction_composite: " << fmt(cfrac) << '\n';
      }
      return 0;
    }

    if (*rb) {
      size_t n = 0;
      check(tocspin_parse_lengths(lengths.c_str(), nullptr, 0, &n));
      std::vector<int> buf(n);
      check(tocspin_parse_lengths(lengths.c_str(), buf.data(), buf.size(), &n));
      tocspin_rb_config cfg;
      tocspin_rb_config_init(&cfg);
      cfg.lengths = buf.data();
      cfg.n_lengths = buf.size();
      cfg.sequences = sequences;
      cfg.seed = seed;
      cfg.realizer = realizer == "ideal" ? TOCSPIN_RB_IDEAL
                     : realizer == "depolarizing" ? TOCSPIN_RB_DEPOLARIZING
                                                  : TOCSPIN_RB_TOC;
      cfg.depolarizing_p = p;
      cfg.gamma = rb_gamma;
      cfg.bound_D = rb_bound;
      cfg.gamma1 = rb_gamma1;
      cfg.steps_per_unit = rb_steps;
      cfg.distortion = rb_dist.model();
      tocspin_rb_result* res = nullptr;
      check(tocspin_rb_run(&cfg, &res));
      const tocspin_status s = tocspin_rb_result_write_csv(res, path_or_stdout(rb_out).c_str());
      double d_if = 0.0, eps_g = 0.0, resid = 0.0;
      int degenerate = 0;
      tocspin_rb_result_fit(res, &d_if, &eps_g, &resid, &degenerate);
      tocspin_rb_result_free(res);
      check(s);
      std::cerr << "d_if: " << fmt(d_if) << "\neps_g: " << fmt(eps_g) << "\nfit_residual: " << fmt(resid)
                << "\ndegenerate_fit: " << (degenerate ? "true" : "false") << '\n';
      return 0;
    }

    if (*comp) {
      std::vector<std::string> thetas;
      if (theta_grid > 0) {
        for (int k = 1; k <= theta_grid; ++k) thetas.push_back(std::to_string(k) + "/" + std::to_string(theta_grid) + "pi");
      } else if (!ct.theta.empty()) {
        thetas.push_back(ct.theta);
      } else {
        invalid("either --theta or --theta-grid is required");
      }
      std::FILE* f = std::fopen(path_or_stdout(comp_out).c_str(), "w");
      if (!f) {
        std::cerr << "error: cannot open " << comp_out << '\n';
        return kExitIo;
      }
      std::fprintf(f, "theta,t_toc,t_composite,saving_fraction,composite_fidelity\n");
      for (const auto& th : thetas) {
        tocspin_composite_result r;
        const tocspin_status s =
            tocspin_compare_composite(ct.gamma.c_str(), th.c_str(), ct.axis.c_str(), ct.bound, ct.gamma1, &r);
        if (s != TOCSPIN_OK) std::fclose(f);
        check(s);
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.theta, r.t_toc, r.t_composite, r.saving, r.fidelity);
      }
      std::fclose(f);
      return 0;
    }

    if (*reach) {
      check(tocspin_reachset(reach_gamma, reach_t, reach_grid, omega_max, path_or_stdout(reach_out).c_str()));
      return 0;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
