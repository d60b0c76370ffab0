#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spinmoment::cli {

struct ValidateOptions {
  int two_j_max = 30;
  double tol = 1e-10;  // residual threshold for the algebra and round-trip checks
  std::uint64_t seed = 1;
  int samples = 50;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_validation(const ValidateOptions& options, std::ostream* progress = nullptr);

}  // namespace spinmoment::cli
