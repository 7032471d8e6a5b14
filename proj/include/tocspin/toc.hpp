#pragma once

// Time-optimal selective rotation U_f = e^{-i n.s theta/2} (x) 1 on the first spin.
//
// For b != 0 the optimum is the best admissible quadruple (s, m, l, k) of
//   M(s,m,l,k) = m^2 (1-g) + (s q/2 + l)^2 g - k^2,   q = theta/pi,
//   t = pi sqrt(M / (g(1-g))),  (m - s q/2 - l)^2 < M/(g(1-g)) < (m + s q/2 + l)^2.
// For b = 0 the candidates are t = k pi / g with cos(k pi/g) = (-1)^k cos(theta/2).

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tocspin/control_field.hpp"
#include "tocspin/pmp.hpp"
#include "tocspin/su2.hpp"

namespace tocspin {

using Rational = boost::multiprecision::cpp_rational;

// A real number together with an exact rational value. Values parsed from a
// ratio are exact; values built from a double carry its dyadic expansion and
// is_exact = false.
struct ExactReal {
  double value = 0.0;
  Rational exact{0};
  bool is_exact = false;

  static ExactReal from_double(double v);
  static ExactReal from_ratio(long long num, long long den);
  static ExactReal from_rational(const Rational& r);
};

double to_double(const Rational& r);
std::string to_string(const Rational& r);

struct Quadruple {
  int s = 1;
  int m = 1;
  int l = 1;
  int k = 1;

  bool operator==(const Quadruple&) const = default;
};

std::string to_string(const Quadruple& q);

// For theta = pi the pairs (s, l) collapse to the odd index 2l + s.
inline int half_turn_index(const Quadruple& q) { return 2 * q.l + q.s; }

struct RotationTarget {
  ExactReal q;  // theta / pi
  Vec3 axis{0.0, 1.0, 0.0};
  ExactReal gamma;

  double theta() const;
  UnitaryGate gate() const;  // e^{-i n.s theta/2}
  void validate() const;
};

// Structural admissibility: m, k >= 1; l >= 0 for s = 1 and l >= 1 for s = -1;
// l = k mod 2 unless theta = pi.
bool admissible(const Quadruple& q, bool half_turn);

double m_gamma(const Quadruple& q, double theta, double gamma);
Rational m_gamma_exact(const Quadruple& q, const Rational& qtheta, const Rational& gamma);
// m^2 (1-g) + l^2 g/4 - k^2 with a single odd index l (theta = pi).
double m_gamma_half_turn(int m, int l_odd, int k, double gamma);

// M/(g(1-g)) when the strict window holds.
std::optional<Rational> candidate_ratio(const Quadruple& q, const Rational& qtheta, const Rational& gamma);
std::optional<double> candidate_time(const Quadruple& q, double theta, double gamma);

struct BZeroHit {
  int k = 0;
  double t = 0.0;
};

std::optional<BZeroHit> bzero_candidate(double theta, double gamma, int k_max, double tol);
std::optional<BZeroHit> bzero_candidate(double theta, double gamma, int k_max);

struct RecoveredParams {
  double omega = 0.0;
  double a = 0.0;
  double b = 0.0;  // nonnegative root
  double residual_m = 0.0;    // |w t - m pi|
  double residual_k = 0.0;    // |eta_g t - k pi|
  double residual_l = 0.0;    // |eta_1 t - (s theta/2 + l pi)|
};

RecoveredParams recover_parameters(const Quadruple& q, double theta, double gamma, double t);

struct Candidate {
  Quadruple quad;
  double t = 0.0;
  Rational ratio{0};  // t^2 / pi^2
};

// Candidates with m, l, k <= bound, ascending in t. Exact ties are ordered
// with l >= 1 first, then s = +1 first, then by (m, l, k).
std::vector<Candidate> enumerate_candidates(const ExactReal& q, const ExactReal& gamma, int bound);
std::vector<Candidate> enumerate_candidates(double theta, double gamma, int bound);

enum class CaseVerdict { Empty, Excluded, Counterexample };

std::string to_string(CaseVerdict v);

struct CertificateCase {
  int s = 1;
  int delta = 0;    // m - l
  int epsilon = 0;  // m - k
  Rational c1{0};   // g (s q/2 - delta) + epsilon
  Rational c0{0};   // (s q/2 - delta)^2 g - epsilon^2
  long long m_lo = 1;  // integers checked, inclusive; empty when m_lo > m_hi
  long long m_hi = 0;
  CaseVerdict verdict = CaseVerdict::Empty;
  std::optional<Quadruple> counterexample;
  bool borderline = false;
};

struct IntRange {
  int lo = 0;
  int hi = -1;
};

struct OptimalityCertificate {
  Rational bound_ratio{0};  // (t_inc/pi)^2
  double incumbent_m = 0.0;
  IntRange delta_range[2];  // [0]: s = +1, [1]: s = -1
  IntRange epsilon_range;
  std::vector<CertificateCase> cases;
  std::optional<BZeroHit> bzero;  // b = 0 candidate strictly below t_inc, if any
  std::optional<Quadruple> counterexample;
  int borderline_cases = 0;
  bool exact_input = false;

  bool certified() const { return !counterexample && !bzero; }
};

// Proves that no admissible quadruple (and no b = 0 candidate) has time
// strictly below t_inc = pi sqrt(bound_ratio).
OptimalityCertificate certify_optimality(const ExactReal& q, const ExactReal& gamma, const Rational& bound_ratio,
                                         double incumbent_m);

// Independent re-check of every recorded case. Returns an empty string on
// success, otherwise a description of the first failure.
std::string replay_certificate(const OptimalityCertificate& cert, const ExactReal& q, const ExactReal& gamma);

struct BZeroBranch {
  int k = 0;
};

using Branch = std::variant<Quadruple, BZeroBranch>;

struct SolveOptions {
  int enumeration_bound = 12;
  // The bound doubles while no candidate is found, up to this value.
  int max_enumeration_bound = 192;
  int bzero_k_max = 50;
  bool certify = true;
  int b_sign = 1;
};

struct TocSolution {
  RotationTarget target;
  double t_min = 0.0;       // normalized, L = 1
  double t_physical = 0.0;  // t_min / (|gamma1| D)
  double D = 1.0;
  double gamma1 = 1.0;
  CanonicalParams params;
  Branch branch;
  UnitaryGate Y;
  std::optional<OptimalityCertificate> certificate;
  double residual_spin1 = 0.0;  // ||Y^dag U1~ Y - sign U_f||_F
  double residual_spin2 = 0.0;  // ||U2~ - sign 1||_F
  ControlField field;           // physical units

  int sign() const { return params.sign; }
  ControlField normalized_field() const;
  // Final pair in the lab frame, (Y^dag U1~ Y, U2~).
  GatePair final_pair() const;
};

// Y with Y^dag u_tilde Y = u_target, gauge-fixed so that Tr Y = 0 whenever possible.
UnitaryGate matching_conjugator(const UnitaryGate& u_tilde, const UnitaryGate& u_target);

TocSolution solve_rotation(const RotationTarget& target, double D, double gamma1, const SolveOptions& opts = {});

// Builds the solution object for a fixed branch and time without searching.
TocSolution assemble_solution(const RotationTarget& target, const Branch& branch, double t, double D,
                              double gamma1, int b_sign);

}  // namespace tocspin
