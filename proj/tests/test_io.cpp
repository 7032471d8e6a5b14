#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "tocspin/error.hpp"
#include "tocspin/io.hpp"

using namespace tocspin;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Inconsistent;
}

TocSolution reference_solution() {
  return solve_rotation({parse_theta("pi"), {0, 1, 0}, parse_gamma("2514/10000")}, 1.5e-4, 2.675e8);
}

}  // namespace

TEST(IoParse, Gamma) {
  const ExactReal a = parse_gamma("2514/10000");
  EXPECT_TRUE(a.is_exact);
  EXPECT_EQ(a.exact, Rational(1257, 5000));
  EXPECT_EQ(a.value, 0.2514);
  const ExactReal b = parse_gamma("0.2514");
  EXPECT_TRUE(b.is_exact);
  EXPECT_EQ(b.exact, a.exact);
  EXPECT_EQ(parse_gamma("1e-1").exact, Rational(1, 10));
  EXPECT_EQ(parse_gamma("3.9777").exact, Rational(39777, 10000));
  EXPECT_EQ(parse_gamma("010/0100").exact, Rational(1, 10));
  EXPECT_EQ(parse_gamma("0.0800").exact, Rational(2, 25));
  for (const char* bad : {"", "abc", "1/0", "1/", "0.3.4", "2/3/4"}) {
    EXPECT_EQ(code_of([&] { parse_gamma(bad); }), ErrorCode::InvalidArgument) << bad;
  }
}

TEST(IoParse, Theta) {
  EXPECT_EQ(parse_theta("pi").exact, Rational(1));
  EXPECT_EQ(parse_theta("pi/2").exact, Rational(1, 2));
  EXPECT_EQ(parse_theta("3pi/4").exact, Rational(3, 4));
  EXPECT_EQ(parse_theta("3*pi/4").exact, Rational(3, 4));
  EXPECT_EQ(parse_theta("2/3pi").exact, Rational(2, 3));
  EXPECT_EQ(parse_theta(" PI / 3 ").exact, Rational(1, 3));
  const ExactReal r = parse_theta("1.5707963267948966");
  EXPECT_FALSE(r.is_exact);
  EXPECT_NEAR(r.value, 0.5, 1e-16);
  EXPECT_EQ(parse_theta("3.141592653589793").value, 1.0);
  for (const char* bad : {"", "p", "pi/", "pi/x", "3pix", "half"}) {
    EXPECT_EQ(code_of([&] { parse_theta(bad); }), ErrorCode::InvalidArgument) << bad;
  }
}

TEST(IoParse, Axis) {
  EXPECT_EQ(parse_axis("x"), (Vec3{1, 0, 0}));
  EXPECT_EQ(parse_axis("-y"), (Vec3{0, -1, 0}));
  EXPECT_EQ(parse_axis("+z"), (Vec3{0, 0, 1}));
  const Vec3 n = parse_axis("3,0,4");
  EXPECT_NEAR(n[0], 0.6, 1e-15);
  EXPECT_NEAR(n[2], 0.8, 1e-15);
  for (const char* bad : {"", "w", "1,2", "0,0,0", "a,b,c"}) {
    EXPECT_EQ(code_of([&] { parse_axis(bad); }), ErrorCode::InvalidArgument) << bad;
  }
}

TEST(IoParse, Lengths) {
  EXPECT_EQ(parse_lengths("1:5"), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(parse_lengths("0:20:5"), (std::vector<int>{0, 5, 10, 15, 20}));
  EXPECT_EQ(parse_lengths("1,2,4,8"), (std::vector<int>{1, 2, 4, 8}));
  EXPECT_EQ(parse_lengths("1:50").size(), 50u);
  for (const char* bad : {"", "5:1", "1:5:0", "1,,2", "x"}) {
    EXPECT_EQ(code_of([&] { parse_lengths(bad); }), ErrorCode::InvalidArgument) << bad;
  }
}

TEST(IoDocument, YamlRoundTripIsStable) {
  const SolutionDocument doc = make_document(reference_solution(), 2000);
  const std::string y = to_yaml(doc);
  const SolutionDocument back = parse_document(y);
  EXPECT_EQ(to_yaml(back), y);
  EXPECT_EQ(back.solution.t_min, doc.solution.t_min);
  EXPECT_EQ(back.solution.params.omega, doc.solution.params.omega);
  EXPECT_EQ(back.solution.target.gamma.exact, doc.solution.target.gamma.exact);
  EXPECT_TRUE(back.certificate.certified);
  EXPECT_TRUE(back.certificate.replay_ok);
  EXPECT_EQ(back.verification.fidelity_spin1, doc.verification.fidelity_spin1);
}

TEST(IoDocument, JsonRoundTripAndCrossFormat) {
  const SolutionDocument doc = make_document(reference_solution(), 2000);
  const std::string j = to_json(doc);
  ASSERT_EQ(j.front(), '{');
  const SolutionDocument back = parse_document(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(to_yaml(back), to_yaml(doc));
}

TEST(IoDocument, LoadedFieldMatchesOriginal) {
  const TocSolution s = reference_solution();
  const std::string path = testing::TempDir() + "sol.yaml";
  save_document(path, make_document(s, 2000), false);
  const SolutionDocument back = load_document(path);
  for (int i = 0; i <= 20; ++i) {
    const double t = s.t_physical * i / 20.0;
    EXPECT_EQ(back.solution.field.at(t), s.field.at(t));
  }
  EXPECT_EQ(back.solution.field.duration, s.field.duration);
  std::remove(path.c_str());
}

TEST(IoDocument, BZeroBranchRoundTrip) {
  const TocSolution s = solve_rotation({parse_theta("pi"), {1, 0, 0}, parse_gamma("2")}, 1.0, 1.0);
  const std::string y = to_yaml(make_document(s, 2000));
  EXPECT_NE(y.find("bzero"), std::string::npos);
  const SolutionDocument back = parse_document(y);
  EXPECT_TRUE(std::holds_alternative<BZeroBranch>(back.solution.branch));
  EXPECT_EQ(to_yaml(back), y);
}

TEST(IoDocument, SchemaMismatchIsRejected) {
  std::string y = to_yaml(make_document(reference_solution(), 2000));
  const auto pos = y.find("schema_version: 1");
  ASSERT_NE(pos, std::string::npos);
  y.replace(pos, 17, "schema_version: 9");
  EXPECT_EQ(code_of([&] { parse_document(y); }), ErrorCode::InvalidArgument);
}

TEST(IoDocument, MalformedInputIsRejected) {
  EXPECT_THROW(parse_document("{not json"), Error);
  EXPECT_THROW(parse_document("schema_version: 1\n"), Error);
  EXPECT_THROW(parse_document(": : :\n  - ["), Error);
  EXPECT_EQ(code_of([&] { load_document("/nonexistent/dir/sol.yaml"); }), ErrorCode::Io);
}

TEST(IoVerify, ReferencePulse) {
  const Verification v = verify_solution(reference_solution());
  EXPECT_EQ(v.steps, 20000);
  EXPECT_GT(v.fidelity_spin1, 1.0 - 1e-8);
  EXPECT_GT(v.fidelity_spin2, 1.0 - 1e-8);
}
