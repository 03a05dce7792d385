#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "weylstar/acceptance.hpp"

using namespace weylstar;
using namespace weylstar::acceptance;

namespace {

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the installed executable, so the goldens exercise argument handling end to end.
int run_executable(const std::vector<std::string>& args, std::ostream& out) {
  std::string cmd = shell_quote(WEYLSTAR_EXE);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.write(buf.data(), static_cast<std::streamsize>(n));
  const int status = ::pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Options options() {
  Options opt;
  opt.witness_path = WEYLSTAR_WITNESS_PATH;
  opt.cli = run_executable;
  return opt;
}

void check(CriterionResult (*fn)(const Options&)) {
  const CriterionResult r = fn(options());
  std::cout << "criterion " << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << "\n";
  EXPECT_TRUE(r.pass) << r.details.dump(2);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Acceptance, C01_Commutation) { check(criterion_commutation); }
TEST(Acceptance, C02_Associativity) { check(criterion_associativity); }
TEST(Acceptance, C03_IntertwinerHomomorphism) { check(criterion_intertwiner); }
TEST(Acceptance, C04_ClosedFormVersusOde) { check(criterion_closed_form_vs_ode); }
TEST(Acceptance, C05_WeylTwoUV) { check(criterion_weyl_two_uv); }
TEST(Acceptance, C06_RankOneStandardOrdering) { check(criterion_rank_one_FN); }
TEST(Acceptance, C07_PolarIndependence) { check(criterion_polar_independence); }
TEST(Acceptance, C08_PolarIdentities) { check(criterion_polar_identities); }
TEST(Acceptance, C09_SheetFlip) { check(criterion_sheet_flip); }
TEST(Acceptance, C10_Reflections) { check(criterion_reflections); }
TEST(Acceptance, C11_GaussianAssociativity) { check(criterion_gaussian_associativity); }
TEST(Acceptance, C12_CliGoldens) { check(criterion_cli_goldens); }

TEST(Acceptance, EmbeddedExamplesMatchGoldenFiles) {
  const std::string dir = WEYLSTAR_GOLDEN_DIR;
  for (const auto& ex : cli_examples()) {
    std::istringstream lines(slurp(dir + "/" + ex.name + ".args"));
    std::vector<std::string> args;
    for (std::string line; std::getline(lines, line);) args.push_back(line);
    EXPECT_EQ(args, ex.args) << ex.name;
    EXPECT_EQ(slurp(dir + "/" + ex.name + ".json"), ex.stdout_text) << ex.name;
    EXPECT_EQ(std::stoi(slurp(dir + "/" + ex.name + ".exit")), ex.exit_status) << ex.name;
  }
}
