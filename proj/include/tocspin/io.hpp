#pragma once

// Argument parsing and the versioned result document (YAML or JSON).

#include <optional>
#include <string>
#include <vector>

#include "tocspin/toc.hpp"

namespace tocspin {

// "p/q", "0.2514" (read as an exact decimal) or "1e-1".
ExactReal parse_gamma(const std::string& text);
// theta / pi from "pi", "pi/2", "3pi/4", "3*pi/4", "2/3pi" or plain radians.
ExactReal parse_theta(const std::string& text);
// x | y | z | -x | ... | "nx,ny,nz" (normalized).
Vec3 parse_axis(const std::string& text);
// "1:50", "0:50:5" or "1,2,4,8".
std::vector<int> parse_lengths(const std::string& text);

constexpr int kSchemaVersion = 1;

struct Verification {
  int steps = 0;
  double fidelity_spin1 = 0.0;
  double fidelity_spin2 = 0.0;
};

// Propagates the physical field with the given number of steps.
Verification verify_solution(const TocSolution& sol, int steps = 20000);

struct CertificateSummary {
  bool present = false;
  bool certified = false;
  int cases = 0;
  int borderline_cases = 0;
  std::string bound_ratio;  // (t_min / pi)^2 as an exact fraction
  bool replay_ok = false;
};

// The loaded solution carries no certificate object; the summary stands in.
struct SolutionDocument {
  int schema_version = kSchemaVersion;
  TocSolution solution;
  CertificateSummary certificate;
  Verification verification;
};

SolutionDocument make_document(const TocSolution& sol, int verify_steps = 20000);

std::string to_yaml(const SolutionDocument& doc);
std::string to_json(const SolutionDocument& doc);
// Accepts either rendering; JSON is detected by a leading '{'.
SolutionDocument parse_document(const std::string& text);

void save_document(const std::string& path, const SolutionDocument& doc, bool json);
SolutionDocument load_document(const std::string& path);

}  // namespace tocspin
