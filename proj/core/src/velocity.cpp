#include "pjacobi/velocity.hpp"

#include <cmath>

#include "pjacobi/error.hpp"
#include "pjacobi/floquet.hpp"

namespace pjacobi {

namespace {

void check_torus(const AsymptoticVelocity& av, const LatticeState& psi) {
  const Geometry& g = psi.geometry;
  if (!g.is_torus() || g.cells() != av.bands().grid.resolution() || g.period() != av.bands().period)
    throw Error(ErrorKind::kGridMismatch, "state must live on the torus matching the velocity grid");
}

}  // namespace

AsymptoticVelocity AsymptoticVelocity::build(const PeriodicJacobiOperator& op, const std::vector<std::int64_t>& cells,
                                             const BandOptions& options) {
  return AsymptoticVelocity(compute_bands(op, cells, options));
}

ComplexMatrix AsymptoticVelocity::fiber(std::size_t point, int axis) const {
  const auto& bv = bands_.velocities.at(bands_.axis_slot(axis)).at(point);
  return bv.frame * bv.values.cast<Complex>().asDiagonal() * bv.frame.adjoint();
}

LatticeState apply_Q(const AsymptoticVelocity& av, const LatticeState& psi, int axis) {
  check_torus(av, psi);
  const auto& per_point = av.bands().velocities.at(av.bands().axis_slot(axis));
  FiberField field = floquet_transform(psi);
  for (std::size_t n = 0; n < field.values.size(); ++n) {
    const auto& bv = per_point[n];
    ComplexVector coeffs = bv.frame.adjoint() * field.values[n];
    coeffs.array() *= bv.values.cast<Complex>().array();
    field.values[n] = bv.frame * coeffs;
  }
  return inverse_floquet_transform(field);
}

QMoments q_moments(const AsymptoticVelocity& av, const LatticeState& psi, int axis) {
  const LatticeState q_psi = apply_Q(av, psi, axis);
  return {inner(psi, q_psi).real(), q_psi.squared_norm()};
}

std::vector<VelocityAtom> velocity_distribution(const AsymptoticVelocity& av, const LatticeState& psi, int axis) {
  check_torus(av, psi);
  const auto& per_point = av.bands().velocities.at(av.bands().axis_slot(axis));
  const FiberField field = floquet_transform(psi);
  std::vector<VelocityAtom> atoms;
  for (std::size_t n = 0; n < field.values.size(); ++n) {
    const auto& bv = per_point[n];
    const ComplexVector coeffs = bv.frame.adjoint() * field.values[n];
    for (Eigen::Index j = 0; j < coeffs.size(); ++j)
      atoms.push_back({bv.values[j], std::norm(coeffs[j]), n, static_cast<std::size_t>(j)});
  }
  return atoms;
}

BallisticReport ballistic_report(const PeriodicJacobiOperator& op, const LatticeState& psi, int axis,
                                 const std::vector<double>& times, const std::vector<std::int64_t>& cells,
                                 const EvolutionPlan& box_plan, const BallisticOptions& options) {
  check_axis(op, axis);
  if (box_plan.mode() != EvolutionMode::kBoxDense)
    throw Error(ErrorKind::kGeometryMismatch, "ballistic report needs a box plan");
  if (!(psi.geometry == box_plan.geometry()))
    throw Error(ErrorKind::kGeometryMismatch, "state must live on the plan's box");

  BandOptions band_options;
  band_options.axes = {axis};
  band_options.threads = options.threads;
  const AsymptoticVelocity av = AsymptoticVelocity::build(op, cells, band_options);

  const LatticeState on_torus = fold_to_torus(psi, av.torus());
  const LatticeState q_torus = apply_Q(av, on_torus, axis);
  BallisticReport report;
  report.axis = axis;
  const LatticeState q_box = unfold_to_box(q_torus, psi.geometry, &report.q_tail_mass);
  const QMoments moments{inner(on_torus, q_torus).real(), q_torus.squared_norm()};

  for (double t : times) {
    const HeisenbergResult h = heisenberg_position_apply(box_plan, psi, axis, t, options.monitor);
    const LatticeState evolved = box_plan.evolve(psi, t);
    BallisticRow row;
    row.t = t;
    row.strong_error = (h.state.amplitudes - q_box.amplitudes).norm();
    row.mean_error = std::abs(position_moments(evolved, axis).mean / t - moments.mean);
    row.q_mean = moments.mean;
    row.q_second_moment = moments.second;
    row.boundary_mass = h.boundary_mass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace pjacobi
