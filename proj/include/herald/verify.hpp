#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace herald::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Worst observed deviation (or the measured value, see detail).
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Reference-value table: one entry per reference quantity the simulator is
/// expected to reproduce, with fixed tolerances.
std::vector<CheckResult> run_reference_values();
/// Runs a single entry of the reference table (1-based id).
CheckResult run_reference_value(int id);
inline constexpr int kReferenceCount = 12;

/// Randomised property suite over `draws` configurations.
std::vector<CheckResult> run_invariants(int draws = 100, std::uint64_t seed = 20251015);

/// "PASS  3  name  (measured ..., tol ...)  detail"
std::string format_line(const CheckResult& r);

}  // namespace herald::verify
