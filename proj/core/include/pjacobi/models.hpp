#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pjacobi/jacobi_operator.hpp"

namespace pjacobi::models {

/// Free Laplacian on Z^d: q = (1, ..., 1), a = 1, b = 0.
OperatorData free_laplacian(int dim);

/// Dimerised chain: q = (2), a_{0,1} = t1, a_{1,2} = t2, b = 0.
OperatorData ssh(double t1, double t2);

/// Seeded random q-periodic operator: |a| uniform in [0.5, 1.5] with uniform phase,
/// b uniform in [-1, 1]. Draws follow cell index order, axes inside each site.
OperatorData random_periodic(int dim, const std::vector<std::int64_t>& period, std::uint64_t seed = 1);

/// Resolves a builtin name: "free1d", "free2d", "ssh(t1,t2)",
/// "random_periodic(d,[q1,...,qd])" or "random_periodic(d,[q...],seed)".
/// Throws Error(kInvalidArgument) on unknown or malformed names.
OperatorData builtin(std::string_view name);

}  // namespace pjacobi::models
