#include "pjacobi/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pjacobi/error.hpp"
#include "pjacobi/parallel.hpp"

namespace pjacobi {

std::vector<std::pair<Eigen::Index, Eigen::Index>> degeneracy_clusters(const Eigen::VectorXd& energies,
                                                                       double tolerance) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
  const Eigen::Index n = energies.size();
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || energies[i] - energies[i - 1] >= tolerance) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return clusters;
}

BandVelocity band_velocity(const Eigendecomposition& fiber, const ComplexMatrix& velocity_fiber, double tolerance) {
  const Eigen::Index n = fiber.values.size();
  BandVelocity out{Eigen::VectorXd::Zero(n), fiber.vectors};
  for (const auto& [begin, end] : degeneracy_clusters(fiber.values, tolerance)) {
    const Eigen::Index width = end - begin;
    const auto frame = fiber.vectors.middleCols(begin, width);
    if (width == 1) {
      out.values[begin] = (frame.adjoint() * velocity_fiber * frame)(0, 0).real();
      continue;
    }
    ComplexMatrix compressed = frame.adjoint() * velocity_fiber * frame;
    compressed = 0.5 * (compressed + compressed.adjoint()).eval();
    const auto inner = hermitian_eigendecomposition(compressed);
    out.values.segment(begin, width) = inner.values;
    out.frame.middleCols(begin, width) = frame * inner.vectors;
  }
  return out;
}

std::size_t BandStructure::axis_slot(int axis) const {
  for (std::size_t s = 0; s < axes.size(); ++s)
    if (axes[s] == axis) return s;
  throw Error(ErrorKind::kInvalidAxis, "velocities for axis " + std::to_string(axis) + " were not computed");
}

BandStructure compute_bands(const PeriodicJacobiOperator& op, const std::vector<std::int64_t>& resolution,
                            const BandOptions& options) {
  if (static_cast<int>(resolution.size()) != op.dim())
    throw Error(ErrorKind::kInvalidArgument, "grid resolution needs one entry per axis");
  BandStructure bands{BrillouinGrid(resolution), op.period(), options.axes, 0.0, {}, {}};
  if (bands.axes.empty())
    for (int k = 1; k <= op.dim(); ++k) bands.axes.push_back(k);
  for (int k : bands.axes) check_axis(op, k);

  const std::size_t points = bands.grid.size();
  bands.fibers.resize(points);
  parallel_for(points, options.threads, [&](std::size_t n) {
    bands.fibers[n] = hermitian_eigendecomposition(fiber_hamiltonian(op, bands.grid.theta(n)).matrix);
  });

  if (options.degeneracy_tolerance) {
    bands.degeneracy_tolerance = *options.degeneracy_tolerance;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& f : bands.fibers) {
      lo = std::min(lo, f.values.minCoeff());
      hi = std::max(hi, f.values.maxCoeff());
    }
    const double diameter = hi - lo;
    bands.degeneracy_tolerance = diameter > 0.0 ? 1e-8 * diameter : 1e-8;
  }

  bands.velocities.assign(bands.axes.size(), std::vector<BandVelocity>(points));
  parallel_for(points, options.threads, [&](std::size_t n) {
    const auto theta = bands.grid.theta(n);
    for (std::size_t s = 0; s < bands.axes.size(); ++s)
      bands.velocities[s][n] =
          band_velocity(bands.fibers[n], fiber_velocity(op, theta, bands.axes[s]).matrix, bands.degeneracy_tolerance);
  });
  return bands;
}

SpectrumIntervals spectrum_intervals(const BandStructure& bands) {
  SpectrumIntervals out;
  const std::size_t count = bands.band_count();
  for (std::size_t j = 0; j < count; ++j) {
    Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& f : bands.fibers) {
      const double e = f.values[static_cast<Eigen::Index>(j)];
      iv.lo = std::min(iv.lo, e);
      iv.hi = std::max(iv.hi, e);
    }
    out.bands.push_back(iv);
  }
  std::vector<Interval> sorted = out.bands;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : sorted) {
    if (!out.union_.empty() && iv.lo <= out.union_.back().hi)
      out.union_.back().hi = std::max(out.union_.back().hi, iv.hi);
    else
      out.union_.push_back(iv);
  }
  return out;
}

double kernel_mass_estimate(const BandStructure& bands, int axis, double eps) {
  const auto& per_point = bands.velocities.at(bands.axis_slot(axis));
  std::size_t total = 0, small = 0;
  for (const auto& bv : per_point) {
    for (Eigen::Index j = 0; j < bv.values.size(); ++j) {
      ++total;
      if (std::abs(bv.values[j]) < eps) ++small;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(small) / static_cast<double>(total);
}

}  // namespace pjacobi
