#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pjacobi::harness {

inline constexpr const char* kToolVersion = "0.1.0";

/// measured must lie in [lo, hi]; one-sided checks use +-infinity.
struct Assertion {
  std::string name;
  std::string subject;  // model or case the row refers to
  double measured = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool pass() const { return measured >= lo && measured <= hi; }
  std::string threshold() const;
};

inline Assertion at_most(std::string name, std::string subject, double measured, double bound) {
  return {std::move(name), std::move(subject), measured, -std::numeric_limits<double>::infinity(), bound};
}
inline Assertion at_least(std::string name, std::string subject, double measured, double bound) {
  return {std::move(name), std::move(subject), measured, bound, std::numeric_limits<double>::infinity()};
}

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitConfig = 2, kExitResource = 3 };

struct RunReport {
  std::string task;
  std::string config_echo;  // emit_config of the effective config
  std::vector<Assertion> assertions;
  std::vector<std::string> files;  // written, relative to the output dir
  double wall_seconds = 0.0;       // printed, never written to files
  std::string version = kToolVersion;
  std::string resource_guard;      // non-empty when a guard tripped after outputs were written

  bool passed() const;
  int exit_code() const {
    if (!resource_guard.empty()) return kExitResource;
    return passed() ? kExitOk : kExitAssertion;
  }
};

/// Shortest round-trip decimal form, so tables are reproducible byte for byte.
std::string format_double(double v);

}  // namespace pjacobi::harness
