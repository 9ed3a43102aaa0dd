#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pjacobi/harness/config.hpp"
#include "pjacobi/harness/report.hpp"

namespace pjacobi::harness {

/// floquet, gauge, bands, dynamics, velocity, kernel.
const std::vector<std::string>& verify_suite_names();
/// free1d, free2d, ssh(1,2), random_periodic(1,[3]), random_periodic(2,[2,2]).
const std::vector<std::string>& default_verify_models();

/// Default threshold of a named assertion; task tolerances override it.
double default_tolerance(const std::string& name);

/// Runs the selected suites on the selected models. The config operator, when
/// present and no models are listed, is the only model checked.
std::vector<Assertion> run_verify(const VerifyTask& task, const std::optional<OperatorSpec>& op, std::uint64_t seed,
                                  int threads);

}  // namespace pjacobi::harness
