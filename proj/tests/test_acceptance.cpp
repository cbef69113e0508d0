// Acceptance criteria 1-10. Each case prints one PASS/FAIL line with its
// runtime and fails if a check fails or the time budget is exceeded.
// KATOSYM_CLI, when set, names the command-line driver used for the
// byte-identical report check.

#define DOCTEST_CONFIG_IMPLEMENT
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>

#include "doctest.h"
#include "kato/suites.hpp"

using namespace kato;

namespace {

constexpr std::uint64_t kSeed = 7;

bool report(int id, const std::string& what, bool ok, double seconds, double budget, const std::string& note = "") {
  const bool in_time = seconds < budget;
  const bool pass = ok && in_time;
  std::printf("%s  criterion %2d  %-44s %8.2fs / %.0fs%s%s\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds, budget,
              in_time ? "" : "  over budget", note.empty() ? "" : ("  " + note).c_str());
  std::fflush(stdout);
  return pass;
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string summary(const SuiteResult& r) {
  return std::to_string(r.checks) + " checks, " + std::to_string(r.failures) + " failures";
}

bool run_criterion(int id, const std::string& suite, const std::string& what, double budget) {
  SuiteResult r;
  const double s = timed([&] { r = run_suite(suite, kSeed); });
  if (!r.pass) std::cout << r.to_json().dump(2) << "\n";
  return report(id, what, r.pass, s, budget, summary(r));
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  status = pclose(pipe.release());
  return out;
}

}  // namespace

TEST_CASE("criterion 1: Witt ring soundness") {
  CHECK(run_criterion(1, "witt_ring", "Witt ring axioms and ghost maps", 30));
}

TEST_CASE("criterion 2: cokernel of wp") {
  CHECK(run_criterion(2, "coker_wp", "|W_r(F_q)/wp| = p^r", 10));
}

TEST_CASE("criterion 3: Weil reciprocity") {
  CHECK(run_criterion(3, "weil", "Weil reciprocity over F_2(t), F_3(t)", 60));
}

TEST_CASE("criterion 4: Cartier calculus") {
  CHECK(run_criterion(4, "cartier", "Cartier operator and wp on B_infinity", 60));
}

TEST_CASE("criterion 5: presentation well-definedness") {
  CHECK(run_criterion(5, "presentation", "relations and PF instances vanish", 120));
}

TEST_CASE("criterion 6: finite-field theorem at truncation") {
  CHECK(run_criterion(6, "finite_theorem", "kh0 = Z/p^r at four truncations", 4 * 300));
}

TEST_CASE("criterion 7: sum of local invariants") {
  CHECK(run_criterion(7, "hbn", "invariant sums and injectivity probe", 120));
}

TEST_CASE("criterion 8: Mackey vanishing") {
  CHECK(run_criterion(8, "mackey", "(W_r (x) G_m)(F_q) trivial at bound 4", 300));
}

TEST_CASE("criterion 9: dlog square") {
  CHECK(run_criterion(9, "dsm", "dlog kernel and route equality", 60));
}

TEST_CASE("criterion 10: determinism") {
  bool ok = true;
  std::string note;
  const double s = timed([&] {
    const auto dump = [](const std::vector<SuiteResult>& rs) {
      std::string out;
      for (const auto& r : rs) out += r.to_json().dump() + "\n";
      return out;
    };
    const auto a = run_suites(suite_names(), kSeed, 4);
    const auto b = run_suites(suite_names(), kSeed, 1);
    const auto c = run_suites(suite_names(), kSeed + 1, 4);
    const bool same = dump(a) == dump(b);
    bool verdicts = true;
    for (std::size_t i = 0; i < a.size(); ++i) verdicts = verdicts && a[i].pass == c[i].pass;
    ok = same && verdicts;
    note = std::string(same ? "identical reports" : "reports differ") + ", " + (verdicts ? "verdicts agree" : "verdicts differ");
    if (const char* cli = std::getenv("KATOSYM_CLI")) {
      int s1 = 0, s2 = 0, s3 = 0;
      const std::string base = std::string(cli) + " verify all --jobs 4 --seed ";
      const std::string r1 = capture(base + "7", s1), r2 = capture(base + "7", s2), r3 = capture(base + "8", s3);
      const bool cli_same = s1 == 0 && r1 == r2 && !r1.empty();
      const bool cli_verdicts = (s1 == 0) == (s3 == 0);
      ok = ok && cli_same && cli_verdicts;
      note += std::string(", cli ") + (cli_same ? "byte-identical" : "differs") + (cli_verdicts ? "" : ", cli verdicts differ");
    }
  });
  CHECK(report(10, "identical reports for a fixed seed", ok, s, 600, note));
}

int main(int argc, char** argv) {
  doctest::Context ctx;
  ctx.setOption("order-by", "file");
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
