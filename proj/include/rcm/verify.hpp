#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rcm::verify {

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::vector<std::string> messages;  // one per failure
  bool passed() const { return failures == 0; }
};

SuiteResult verify_linalg(std::uint64_t seed);
SuiteResult verify_uncertainty(std::uint64_t seed);
SuiteResult verify_solver_convex(std::uint64_t seed);
SuiteResult verify_solver_nonconvex(std::uint64_t seed);
SuiteResult verify_model(std::uint64_t seed);
SuiteResult verify_statcheck(std::uint64_t seed);
SuiteResult verify_oracle(std::uint64_t seed);

/// All suites in fixed name order.
std::vector<SuiteResult> run_all_suites(std::uint64_t seed);

}  // namespace rcm::verify
