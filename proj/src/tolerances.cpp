#include "tocspin/tolerances.hpp"

#include <cstdlib>

namespace tocspin {

Tolerances tolerance_profile(std::string_view name) {
  Tolerances t;
  if (name == "strict") {
    t.residual = 1e-11;
    t.verify = 1e-10;
  } else if (name == "loose") {
    t.algebraic = 1e-10;
    t.residual = 1e-7;
    t.verify = 1e-6;
  }
  return t;
}

bool is_tolerance_profile(std::string_view name) {
  return name == "default" || name == "strict" || name == "loose";
}

namespace {

Tolerances& active() {
  static Tolerances t = [] {
    const char* env = std::getenv("TOCSPIN_TOLERANCE_PROFILE");
    return tolerance_profile(env ? env : "default");
  }();
  return t;
}

}  // namespace

const Tolerances& tolerances() { return active(); }

void set_tolerance_profile(std::string_view name) { active() = tolerance_profile(name); }

}  // namespace tocspin
