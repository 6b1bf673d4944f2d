#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gp {

struct CheckResult {
  std::string check_id;
  std::string status;  // pass | fail | skip
  double measured = 0.0;
  double expected_lo = 0.0;
  double expected_hi = 0.0;
  double tolerance = 0.0;
  std::string note;
};

/// Operator, symbol-derivative, phase and transform identities, each as one
/// CheckResult. The perturb_dispersion hook multiplies the dispersion inside
/// the finite-difference oracles by 1.01, which must make the derivative
/// checks fail (sensitivity control).
std::vector<CheckResult> run_identity_suite(bool perturb_dispersion = false);

enum class Budget { quick, full };

/// Decay-rate regressions (quick: 2D 128^2 / 3D 48^3; full: 2D 256^2 /
/// 3D 64^3 plus the critical-exponent divergence-detection stress run).
/// Checks run concurrently up to thread_cap().
std::vector<CheckResult> run_rate_suite(Budget budget);

void write_report(const std::filesystem::path& path,
                  const std::vector<CheckResult>& results);

}  // namespace gp
