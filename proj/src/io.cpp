#include "tocspin/io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "tocspin/error.hpp"
#include "tocspin/simulator.hpp"

namespace tocspin {

using json = nlohmann::ordered_json;
using boost::multiprecision::cpp_int;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& what, const std::string& text) {
  throw Error(ErrorCode::InvalidArgument, "malformed " + what + ": '" + text + "'");
}

// Exact value of "p", "p/q" or a decimal with optional exponent.
// Base-10 digits; cpp_int would read a leading zero as octal.
cpp_int decimal_int(std::string digits) {
  bool neg = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    neg = digits[0] == '-';
    digits.erase(0, 1);
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  const cpp_int v = digits.empty() ? cpp_int(0) : cpp_int(digits);
  return neg ? cpp_int(-v) : v;
}

std::optional<Rational> exact_number(const std::string& s) {
  static const std::regex frac(R"(^([+-]?\d+)\s*/\s*(\d+)$)");
  static const std::regex dec(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, frac)) {
    const cpp_int den = decimal_int(m[2].str());
    if (den == 0) return std::nullopt;
    return Rational(decimal_int(m[1].str()), den);
  }
  if (std::regex_match(s, m, dec)) {
    const std::string ip = m[2].str(), fp = m[3].str();
    if (ip.empty() && fp.empty()) return std::nullopt;
    Rational r{decimal_int(ip + fp)};
    int exp10 = -static_cast<int>(fp.size());
    if (m[4].matched) {
      const long long e = std::stoll(m[4].str());
      if (std::abs(e) > 4000) return std::nullopt;
      exp10 += static_cast<int>(e);
    }
    const Rational p = Rational(boost::multiprecision::pow(cpp_int(10), std::abs(exp10)));
    if (exp10 >= 0) r *= p; else r /= p;
    if (m[1].str() == "-") r = -r;
    return r;
  }
  return std::nullopt;
}

Rational parse_rational_field(const std::string& s) {
  const auto r = exact_number(s);
  if (!r) throw Error(ErrorCode::InvalidArgument, "malformed rational '" + s + "'");
  return *r;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json exact_json(const ExactReal& x) {
  return json{{"value", x.value}, {"exact", to_string(x.exact)}, {"is_exact", x.is_exact}};
}

ExactReal exact_from_json(const json& j) {
  return {j.at("value").get<double>(), parse_rational_field(j.at("exact").get<std::string>()),
          j.at("is_exact").get<bool>()};
}

json to_tree(const SolutionDocument& doc) {
  const TocSolution& s = doc.solution;
  json branch;
  if (const auto* q = std::get_if<Quadruple>(&s.branch)) {
    branch = {{"kind", "quadruple"}, {"s", q->s}, {"m", q->m}, {"l", q->l}, {"k", q->k}};
    if (s.target.q.exact == 1) branch["half_turn_index"] = half_turn_index(*q);
  } else {
    branch = {{"kind", "bzero"}, {"k", std::get<BZeroBranch>(s.branch).k}};
  }
  const Mat2C& y = s.Y.matrix();
  const Complex ys[4] = {y.a00, y.a01, y.a10, y.a11};
  json re = json::array(), im = json::array();
  for (const auto& c : ys) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  const CertificateSummary& c = doc.certificate;
  const Verification& v = doc.verification;
  return json{
      {"schema_version", doc.schema_version},
      {"inputs",
       {{"gamma", exact_json(s.target.gamma)},
        {"theta_over_pi", exact_json(s.target.q)},
        {"theta", s.target.theta()},
        {"axis", {s.target.axis[0], s.target.axis[1], s.target.axis[2]}},
        {"bound_D", s.D},
        {"gamma1", s.gamma1}}},
      {"branch", branch},
      {"t_min", {{"normalized", s.t_min}, {"physical", s.t_physical}}},
      {"params", {{"omega", s.params.omega}, {"a", s.params.a}, {"b", s.params.b}, {"sign", s.params.sign}}},
      {"Y", {{"re", re}, {"im", im}}},
      {"certificate",
       {{"present", c.present},
        {"certified", c.certified},
        {"cases", c.cases},
        {"borderline_cases", c.borderline_cases},
        {"bound_ratio", c.bound_ratio},
        {"replay_ok", c.replay_ok}}},
      {"verification",
       {{"steps", v.steps},
        {"residual_spin1", s.residual_spin1},
        {"residual_spin2", s.residual_spin2},
        {"fidelity_spin1", v.fidelity_spin1},
        {"fidelity_spin2", v.fidelity_spin2}}},
  };
}

SolutionDocument from_tree(const json& j) {
  SolutionDocument doc;
  doc.schema_version = j.at("schema_version").get<int>();
  if (doc.schema_version != kSchemaVersion) {
    throw Error(ErrorCode::InvalidArgument, "unsupported schema_version " + std::to_string(doc.schema_version));
  }
  TocSolution& s = doc.solution;
  const json& in = j.at("inputs");
  s.target.gamma = exact_from_json(in.at("gamma"));
  s.target.q = exact_from_json(in.at("theta_over_pi"));
  for (int i = 0; i < 3; ++i) s.target.axis[i] = in.at("axis").at(i).get<double>();
  s.target.validate();
  s.D = in.at("bound_D").get<double>();
  s.gamma1 = in.at("gamma1").get<double>();

  const json& b = j.at("branch");
  const std::string kind = b.at("kind").get<std::string>();
  if (kind == "quadruple") {
    s.branch = Quadruple{b.at("s").get<int>(), b.at("m").get<int>(), b.at("l").get<int>(), b.at("k").get<int>()};
  } else if (kind == "bzero") {
    s.branch = BZeroBranch{b.at("k").get<int>()};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown branch kind '" + kind + "'");
  }
  s.t_min = j.at("t_min").at("normalized").get<double>();
  s.t_physical = j.at("t_min").at("physical").get<double>();
  const json& p = j.at("params");
  s.params = {p.at("omega").get<double>(), p.at("a").get<double>(), p.at("b").get<double>(), s.target.gamma.value,
              p.at("sign").get<int>()};
  s.params.validate();
  const json& y = j.at("Y");
  Complex ys[4];
  for (int i = 0; i < 4; ++i) ys[i] = {y.at("re").at(i).get<double>(), y.at("im").at(i).get<double>()};
  s.Y = UnitaryGate::from_matrix({ys[0], ys[1], ys[2], ys[3]});

  const json& c = j.at("certificate");
  doc.certificate = {c.at("present").get<bool>(),       c.at("certified").get<bool>(),
                     c.at("cases").get<int>(),          c.at("borderline_cases").get<int>(),
                     c.at("bound_ratio").get<std::string>(), c.at("replay_ok").get<bool>()};
  const json& v = j.at("verification");
  s.residual_spin1 = v.at("residual_spin1").get<double>();
  s.residual_spin2 = v.at("residual_spin2").get<double>();
  doc.verification = {v.at("steps").get<int>(), v.at("fidelity_spin1").get<double>(),
                      v.at("fidelity_spin2").get<double>()};

  s.field = rescale_control(canonical_field(s.params, s.Y, s.t_min), s.D, s.gamma1);
  return doc;
}

void emit_yaml(YAML::Emitter& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object:
      out << YAML::BeginMap;
      for (const auto& [k, v] : j.items()) {
        out << YAML::Key << k << YAML::Value;
        emit_yaml(out, v);
      }
      out << YAML::EndMap;
      break;
    case json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) out << YAML::Flow;
      out << YAML::BeginSeq;
      for (const auto& e : j) emit_yaml(out, e);
      out << YAML::EndSeq;
      break;
    }
    case json::value_t::string:
      out << YAML::DoubleQuoted << j.get<std::string>();
      break;
    case json::value_t::boolean:
      out << (j.get<bool>() ? "true" : "false");
      break;
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      out << j.dump();
      break;
    case json::value_t::number_float: {
      // Keep floats recognizable as such after a round trip.
      std::string s = format_double(j.get<double>());
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out << s;
      break;
    }
    default:
      out << YAML::Null;
  }
}

json from_yaml_node(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Map: {
      json j = json::object();
      for (const auto& kv : n) j[kv.first.as<std::string>()] = from_yaml_node(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      json j = json::array();
      for (const auto& e : n) j.push_back(from_yaml_node(e));
      return j;
    }
    case YAML::NodeType::Scalar: {
      const std::string s = n.Scalar();
      if (n.Tag() == "!") return s;  // quoted
      if (s == "true") return true;
      if (s == "false") return false;
      long long iv = 0;
      auto r = std::from_chars(s.data(), s.data() + s.size(), iv);
      if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return iv;
      double dv = 0.0;
      auto rd = std::from_chars(s.data(), s.data() + s.size(), dv);
      if (rd.ec == std::errc() && rd.ptr == s.data() + s.size()) return dv;
      return s;
    }
    default:
      return nullptr;
  }
}

}  // namespace

ExactReal parse_gamma(const std::string& text) {
  const std::string s = trim(text);
  const auto r = exact_number(s);
  if (!r) bad("gamma", text);
  return ExactReal::from_rational(*r);
}

ExactReal parse_theta(const std::string& text) {
  std::string s = trim(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  static const std::regex pi_form(R"(^([+-]?\d+(?:/\d+)?)?\*?pi(?:/(\d+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    Rational q(1);
    if (m[1].matched) {
      const auto c = exact_number(m[1].str());
      if (!c) bad("theta", text);
      q = *c;
    }
    if (m[2].matched) {
      const cpp_int den = decimal_int(m[2].str());
      if (den == 0) bad("theta", text);
      q /= Rational(den);
    }
    return ExactReal::from_rational(q);
  }
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) bad("theta", text);
  const double q = v / M_PI;
  if (std::abs(q - 1.0) < 4e-16) return ExactReal::from_ratio(1, 1);
  return ExactReal::from_double(q);
}

Vec3 parse_axis(const std::string& text) {
  const std::string s = trim(text);
  static const std::regex named(R"(^([+-]?)([xyz])$)");
  std::smatch m;
  if (std::regex_match(s, m, named)) {
    Vec3 n{0.0, 0.0, 0.0};
    n[m[2].str()[0] - 'x'] = m[1].str() == "-" ? -1.0 : 1.0;
    return n;
  }
  Vec3 n{};
  std::stringstream ss(s);
  std::string part;
  int i = 0;
  while (std::getline(ss, part, ',')) {
    if (i == 3) bad("axis", text);
    part = trim(part);
    const auto r = std::from_chars(part.data(), part.data() + part.size(), n[i]);
    if (part.empty() || r.ec != std::errc() || r.ptr != part.data() + part.size()) bad("axis", text);
    ++i;
  }
  if (i != 3) bad("axis", text);
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(len > 0.0) || !std::isfinite(len)) bad("axis", text);
  return {n[0] / len, n[1] / len, n[2] / len};
}

std::vector<int> parse_lengths(const std::string& text) {
  const std::string s = trim(text);
  static const std::regex range(R"(^(\d+):(\d+)(?::(\d+))?$)");
  static const std::regex list(R"(^\d+(?:,\d+)*$)");
  std::smatch m;
  std::vector<int> out;
  if (std::regex_match(s, m, range)) {
    const int lo = std::stoi(m[1].str()), hi = std::stoi(m[2].str());
    const int step = m[3].matched ? std::stoi(m[3].str()) : 1;
    if (step < 1 || hi < lo) bad("lengths", text);
    for (int r = lo; r <= hi; r += step) out.push_back(r);
    return out;
  }
  if (std::regex_match(s, list)) {
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
    return out;
  }
  bad("lengths", text);
}

Verification verify_solution(const TocSolution& sol, int steps) {
  const GatePair p = propagate(sol.field, sol.params.gamma, sol.field.duration, steps);
  return {steps, gate_fidelity(p.first, sol.target.gate()), gate_fidelity(p.second, UnitaryGate{})};
}

SolutionDocument make_document(const TocSolution& sol, int verify_steps) {
  SolutionDocument doc;
  doc.solution = sol;
  if (sol.certificate) {
    const OptimalityCertificate& c = *sol.certificate;
    doc.certificate = {true,
                       c.certified(),
                       static_cast<int>(c.cases.size()),
                       c.borderline_cases,
                       to_string(c.bound_ratio),
                       replay_certificate(c, sol.target.q, sol.target.gamma).empty()};
  }
  doc.verification = verify_solution(sol, verify_steps);
  return doc;
}

std::string to_json(const SolutionDocument& doc) { return to_tree(doc).dump(2) + "\n"; }

std::string to_yaml(const SolutionDocument& doc) {
  YAML::Emitter out;
  emit_yaml(out, to_tree(doc));
  return std::string(out.c_str()) + "\n";
}

SolutionDocument parse_document(const std::string& text) {
  const std::string s = trim(text);
  try {
    if (!s.empty() && s.front() == '{') return from_tree(json::parse(s));
    return from_tree(from_yaml_node(YAML::Load(s)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed result document: ") + e.what());
  }
}

void save_document(const std::string& path, const SolutionDocument& doc, bool json_format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  out << (json_format ? to_json(doc) : to_yaml(doc));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

SolutionDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

}  // namespace tocspin
