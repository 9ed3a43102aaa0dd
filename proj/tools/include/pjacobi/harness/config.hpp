#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pjacobi/jacobi_operator.hpp"
#include "pjacobi/lattice.hpp"

namespace pjacobi::harness {

struct FieldIssue {
  std::string field;  // e.g. "hoppings[2].site"
  std::string reason;
};

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<FieldIssue> issues);
  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

/// Operator as given in the config: a builtin name, or explicit records
/// resolved into OperatorData with a=1, b=0 defaults.
struct OperatorSpec {
  std::optional<std::string> model;
  OperatorData data;

  bool operator==(const OperatorSpec&) const = default;
};

struct StateSpec {
  enum class Kind { kDelta, kRandom, kExplicit };
  Kind kind = Kind::kDelta;
  Site site;                                      // delta
  std::int64_t radius = 0;                        // random: l1 support radius
  std::vector<std::pair<Site, Complex>> entries;  // explicit, normalised on use

  bool operator==(const StateSpec&) const = default;
};

struct BandsTask {
  std::vector<std::int64_t> resolution;

  bool operator==(const BandsTask&) const = default;
};

struct EvolveTask {
  bool torus = false;
  std::vector<std::int64_t> extent;  // box radius L or torus cell counts N
  StateSpec state;
  std::vector<double> times;
  double h = 0.05;

  bool operator==(const EvolveTask&) const = default;
};

struct VelocityTask {
  std::vector<std::int64_t> resolution;
  std::optional<std::vector<std::int64_t>> box;  // default: propagation bound
  StateSpec state;
  std::vector<double> times;
  int axis = 1;

  bool operator==(const VelocityTask&) const = default;
};

struct VerifyTask {
  std::vector<std::string> suites;             // empty: all
  std::vector<std::string> models;             // empty: builtin list (or the config operator)
  std::vector<std::uint64_t> seeds;            // empty: {config seed}
  std::map<std::string, double> tolerances;    // overrides by assertion name

  bool operator==(const VerifyTask&) const = default;
};

using Task = std::variant<BandsTask, EvolveTask, VelocityTask, VerifyTask>;

std::string_view task_name(const Task& task);

struct ExperimentConfig {
  std::optional<OperatorSpec> op;  // required unless the task is verify
  Task task;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ParseResult {
  ExperimentConfig config;
  std::vector<std::string> warnings;  // unknown fields
};

/// JSON dialect. Collects every problem it can before throwing SchemaError.
ParseResult parse_config(std::string_view text);
std::string emit_config(const ExperimentConfig& config);

}  // namespace pjacobi::harness
