#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifndef TOCSPIN_CLI_PATH
#error "TOCSPIN_CLI_PATH must name the tocspin executable"
#endif

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_with_env(const std::string& env, const std::string& args) {
  const std::string cmd = env + " " + std::string(TOCSPIN_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

CliRun run(const std::string& args) { return run_with_env("", args); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

std::string temp(const char* name) { return testing::TempDir() + name; }

}  // namespace

TEST(Cli, HelpExitsZero) {
  const CliRun r = run("--help");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

TEST(Cli, SolvePrintsDocument) {
  const CliRun r = run("solve --gamma 2514/10000 --theta pi --certify");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("schema_version: 1"), std::string::npos);
  EXPECT_NE(r.out.find("normalized: 4.05956"), std::string::npos);
  EXPECT_NE(r.out.find("certified: true"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("solve --gamma 1/2 --theta banana").status, 2);
  EXPECT_EQ(run("solve --gamma 1/2").status, 2);
  EXPECT_EQ(run("solve --gamma 1 --theta pi").status, 2);
  EXPECT_EQ(run("solve --gamma 1/2 --theta pi --bound -1").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("solve --gamma 1/2 --theta pi --out /nonexistent/dir/x.yaml").status, 5);
  EXPECT_EQ(run("simulate --solution /nonexistent/x.yaml").status, 5);
}

TEST(Cli, SimulateFromFileAndVerificationFailure) {
  const std::string path = temp("cli_sol.yaml");
  ASSERT_EQ(run("solve --gamma 2514/10000 --theta pi/2 --axis x --out " + path).status, 0);
  const CliRun ok = run("simulate --solution " + path + " --json --min-fidelity 0.99999999");
  EXPECT_EQ(ok.status, 0);
  EXPECT_NE(ok.out.find("fidelity_spin1"), std::string::npos);
  EXPECT_EQ(run("simulate --solution " + path + " --eta 1.05,1,1 --min-fidelity 0.9999").status, 4);
  std::remove(path.c_str());
}

TEST(Cli, WaveformExport) {
  const std::string wave = temp("cli_wave.csv");
  ASSERT_EQ(run("solve --gamma 2514/10000 --theta pi --axis y --bound 1.5e-4 --gamma1 2.675e8 --out " +
                temp("cli_w.yaml") + " --waveform " + wave)
                .status,
            0);
  std::remove(temp("cli_w.yaml").c_str());
  const std::string csv = read_file(wave);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_seconds,Bx,By,Bz");
  EXPECT_GT(count_lines(csv), 1000);
  std::remove(wave.c_str());
}

TEST(Cli, RbIsReproducible) {
  const std::string args = "rb --realizer depolarizing --p 0.01 --lengths 0:20:5 --sequences 8 --seed 3 --out -";
  const CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "r,F_mean,stderr");
  EXPECT_EQ(count_lines(a.out), 6);
  EXPECT_NE(run("rb --realizer depolarizing --p 0.01 --lengths 0:20:5 --sequences 8 --seed 4 --out -").out, a.out);
}

TEST(Cli, ReachsetRows) {
  const CliRun r = run("reachset --gamma 0.2514 --t 2 --grid 64 --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(count_lines(r.out), 64 * 64 + 1);
}

TEST(Cli, CompareCompositeRows) {
  const CliRun r = run("compare-composite --gamma 2514/10000 --theta-grid 4 --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "theta,t_toc,t_composite,saving_fraction,composite_fidelity");
  EXPECT_EQ(count_lines(r.out), 5);
}

TEST(Cli, RobustnessCsv) {
  const std::string path = temp("cli_rob.yaml");
  ASSERT_EQ(run("solve --gamma 2514/10000 --theta pi --out " + path).status, 0);
  const CliRun r = run("robustness --solution " + path + " --eta-n 3 --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(count_lines(r.out), 28);
  std::remove(path.c_str());
}

TEST(Cli, ToleranceProfile) {
  EXPECT_EQ(run("--tolerance-profile strict solve --gamma 1/2 --theta pi").status, 0);
  EXPECT_EQ(run("--tolerance-profile bogus solve --gamma 1/2 --theta pi").status, 2);
  EXPECT_EQ(run_with_env("TOCSPIN_TOLERANCE_PROFILE=bogus", "solve --gamma 1/2 --theta pi").status, 2);
  EXPECT_EQ(run_with_env("TOCSPIN_TOLERANCE_PROFILE=strict", "solve --gamma 1/2 --theta pi").status, 0);
}

TEST(Cli, NotFoundExitCode) {
  EXPECT_EQ(run("solve --gamma 99/100 --theta pi --max-bound 1 --bzero-k-max 1").status, 3);
}
