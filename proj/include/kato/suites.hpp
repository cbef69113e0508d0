#pragma once

// Verification suites shared by the command-line driver and the acceptance
// tests. Each suite is deterministic in its seed and reports only exact data,
// so serialized reports are byte-identical across runs.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace kato {

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  void record(bool ok, std::uint64_t weight = 1);
  nlohmann::ordered_json to_json() const;
};

/// Ring axioms on W_r(F_q) for q^r <= 256, ghost components for r <= 3.
SuiteResult suite_witt_ring();
/// |W_r(F_q)/wp| = p^r for p in {2, 3}, r <= 3, q in {p, p^2, p^3}.
SuiteResult suite_coker_wp();
/// Weil reciprocity on random weight-2 symbols and all monic linear pairs.
SuiteResult suite_weil(std::uint64_t seed);
/// C . C^{-1} = id, ker C = exact forms, wp onto B_infinity / B_1.
SuiteResult suite_cartier(std::uint64_t seed);
/// Defining relations and projection-formula instances have zero invariants.
SuiteResult suite_presentation();
/// The finite-field theorem at four truncations.
SuiteResult suite_finite_theorem();
/// Sum of local invariants and the injectivity probe.
SuiteResult suite_hbn(std::uint64_t seed);
/// Mackey product (W_r (x) G_m)(F_q) vanishes at lattice bound 4.
SuiteResult suite_mackey();
/// dlog kernel and the dlog / <1 | -> square.
SuiteResult suite_dsm(std::uint64_t seed);

const std::vector<std::string>& suite_names();
/// Throws ConfigError on an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);
/// Runs the named suites on at most `jobs` threads; results keep input order.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, std::uint64_t seed, unsigned jobs);

}  // namespace kato
