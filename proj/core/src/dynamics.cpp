#include "pjacobi/dynamics.hpp"

#include <cmath>
#include <cstdio>

#include "pjacobi/error.hpp"
#include "pjacobi/floquet.hpp"
#include "pjacobi/parallel.hpp"

namespace pjacobi {

namespace {

ComplexVector spectral_propagate(const Eigendecomposition& e, const ComplexVector& v, double t) {
  ComplexVector coeffs = e.vectors.adjoint() * v;
  for (Eigen::Index j = 0; j < coeffs.size(); ++j) coeffs[j] *= std::polar(1.0, -t * e.values[j]);
  return e.vectors * coeffs;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void check_state_axis(const LatticeState& psi, int axis) {
  if (axis < 1 || axis > psi.geometry.dim())
    throw Error(ErrorKind::kInvalidAxis, "axis " + std::to_string(axis) + " outside 1.." +
                                             std::to_string(psi.geometry.dim()));
}

}  // namespace

EvolutionPlan EvolutionPlan::torus(const PeriodicJacobiOperator& op, std::vector<std::int64_t> cells, int threads) {
  if (static_cast<int>(cells.size()) != op.dim())
    throw Error(ErrorKind::kIncommensurateTorus, "cell count vector must have one entry per axis");
  EvolutionPlan plan(EvolutionMode::kTorusFiber, Geometry::torus(cells, op.period()));
  const BrillouinGrid grid(cells);
  plan.fibers_.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t n) {
    plan.fibers_[n] = hermitian_eigendecomposition(fiber_hamiltonian(op, grid.theta(n)).matrix);
  });
  return plan;
}

EvolutionPlan EvolutionPlan::box(const PeriodicJacobiOperator& op, std::vector<std::int64_t> radius) {
  if (static_cast<int>(radius.size()) != op.dim())
    throw Error(ErrorKind::kGeometryMismatch, "box radius needs one entry per axis");
  EvolutionPlan plan(EvolutionMode::kBoxDense, Geometry::box(std::move(radius)));
  plan.dense_ = hermitian_eigendecomposition(dense_matrix(op, plan.geometry_));
  return plan;
}

LatticeState EvolutionPlan::evolve(const LatticeState& psi, double t) const {
  if (!(psi.geometry == geometry_)) throw Error(ErrorKind::kGeometryMismatch, "state geometry differs from the plan");
  if (!std::isfinite(t)) throw Error(ErrorKind::kInvalidArgument, "time must be finite");
  if (mode_ == EvolutionMode::kBoxDense) return LatticeState(geometry_, spectral_propagate(dense_, psi.amplitudes, t));
  FiberField field = floquet_transform(psi);
  for (std::size_t n = 0; n < field.values.size(); ++n)
    field.values[n] = spectral_propagate(fibers_[n], field.values[n], t);
  return inverse_floquet_transform(field);
}

PositionMoments position_moments(const LatticeState& psi, int axis) {
  if (psi.geometry.is_torus())
    throw Error(ErrorKind::kTorusWithoutUnwrapConvention,
                "absolute positions are undefined on a torus; use unwrapped_position_trace");
  check_state_axis(psi, axis);
  PositionMoments m;
  const auto& g = psi.geometry;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = static_cast<double>(g.coordinate(i, axis - 1));
    const double w = std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]);
    m.mean += x * w;
    m.second += x * x * w;
  }
  return m;
}

double velocity_expectation(const PeriodicJacobiOperator& op, const LatticeState& psi, int axis) {
  return inner(psi, apply_P(op, psi, axis)).real();
}

std::vector<double> integrated_position_trace(const PeriodicJacobiOperator& op, const EvolutionPlan& plan,
                                              const LatticeState& psi, int axis, const std::vector<double>& times,
                                              double h) {
  check_axis(op, axis);
  if (!(h > 0.0)) throw Error(ErrorKind::kInvalidArgument, "quadrature step must be positive");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!std::isfinite(times[i]) || times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw Error(ErrorKind::kInvalidArgument, "times must be finite, non-negative and ascending");

  const auto& g = psi.geometry;
  double position = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    position += static_cast<double>(g.centered_coordinate(i, axis - 1)) *
                std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]);

  auto integrand = [&](double s) { return velocity_expectation(op, plan.evolve(psi, s), axis); };
  std::vector<double> out;
  out.reserve(times.size());
  double previous = 0.0;
  for (double t : times) {
    position += simpson(integrand, previous, t, h);
    previous = t;
    out.push_back(position);
  }
  return out;
}

std::vector<double> unwrapped_position_trace(const PeriodicJacobiOperator& op, const EvolutionPlan& plan,
                                             const LatticeState& psi, int axis, const std::vector<double>& times,
                                             double h) {
  if (plan.mode() != EvolutionMode::kTorusFiber)
    throw Error(ErrorKind::kIncommensurateTorus, "unwrapped trace needs a commensurate torus plan");
  return integrated_position_trace(op, plan, psi, axis, times, h);
}

double boundary_fraction(const LatticeState& box_state, const BoundaryMonitor& monitor) {
  const double total = box_state.squared_norm();
  if (total == 0.0) return 0.0;
  return boundary_mass(box_state, monitor.layer) / total;
}

std::int64_t recommended_box_radius(const PeriodicJacobiOperator& op, std::int64_t support_radius, double t,
                                    std::int64_t margin) {
  const double spread = 2.0 * (2.0 * op.max_hopping()) * op.dim() * std::abs(t);
  return support_radius + static_cast<std::int64_t>(std::ceil(spread)) + margin;
}

HeisenbergResult heisenberg_position_apply(const EvolutionPlan& plan, const LatticeState& psi, int axis, double t,
                                           const BoundaryMonitor& monitor) {
  if (plan.mode() != EvolutionMode::kBoxDense)
    throw Error(ErrorKind::kGeometryMismatch, "Heisenberg position needs a box plan");
  if (t == 0.0 || !std::isfinite(t)) throw Error(ErrorKind::kInvalidArgument, "t must be finite and nonzero");
  check_state_axis(psi, axis);

  LatticeState forward = plan.evolve(psi, t);
  double worst = boundary_fraction(forward, monitor);
  const auto& g = forward.geometry;
  for (std::size_t i = 0; i < g.size(); ++i)
    forward.amplitudes[static_cast<Eigen::Index>(i)] *= static_cast<double>(g.coordinate(i, axis - 1));
  LatticeState back = plan.evolve(forward, -t);
  back.amplitudes /= t;
  worst = std::max(worst, boundary_fraction(back, monitor));
  if (worst > monitor.threshold)
    throw Error(ErrorKind::kBoundaryContamination,
                "boundary mass fraction " + short_number(worst) + " exceeds " + short_number(monitor.threshold) +
                    "; enlarge the box (see recommended_box_radius)");
  return {std::move(back), worst};
}

}  // namespace pjacobi
