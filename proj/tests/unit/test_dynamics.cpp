#include <gtest/gtest.h>

#include <cmath>

#include "pjacobi/dynamics.hpp"
#include "pjacobi/error.hpp"
#include "pjacobi/models.hpp"
#include "pjacobi/random.hpp"
#include "support/oracles.hpp"

namespace {

using namespace pjacobi;
using oracle::kPi;

PeriodicJacobiOperator make(const OperatorData& d) { return PeriodicJacobiOperator::create(d); }

double energy(const PeriodicJacobiOperator& op, const LatticeState& psi) { return inner(psi, apply_J(op, psi)).real(); }

TEST(Evolve, ZeroTimeIsIdentity) {
  const auto op = make(models::random_periodic(1, {3}, 2));
  const auto plan = EvolutionPlan::torus(op, {4});
  const auto psi = oracle::random_full_state(plan.geometry(), 3);
  EXPECT_LT((plan.evolve(psi, 0.0).amplitudes - psi.amplitudes).norm(), 1e-14);
}

TEST(Evolve, TwoSiteTorus) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::torus(op, {2});
  const auto out = plan.evolve(LatticeState::delta(plan.geometry(), Site{0}), kPi / 4.0);
  EXPECT_LT(std::abs(out.at(Site{0})), 1e-14);
  EXPECT_LT(std::abs(out.at(Site{1}) - Complex(0.0, -1.0)), 1e-14);
}

TEST(Evolve, TorusMatchesTaylorOracle) {
  const auto op = make(models::random_periodic(1, {3}, 8));
  const auto plan = EvolutionPlan::torus(op, {5});
  const auto psi = oracle::random_full_state(plan.geometry(), 9);
  const auto u = oracle::propagator_taylor(torus_matrix(op, {5}), 2.5);
  EXPECT_LT((plan.evolve(psi, 2.5).amplitudes - u * psi.amplitudes).norm(), 1e-10);
}

TEST(Evolve, BoxMatchesTaylorOracle) {
  const auto data = models::random_periodic(2, {2, 2}, 8);
  const auto op = make(data);
  const auto plan = EvolutionPlan::box(op, {3, 2});
  const auto psi = oracle::random_full_state(plan.geometry(), 10);
  const auto u = oracle::propagator_taylor(oracle::box_matrix_bruteforce(data, plan.geometry()), 1.7);
  EXPECT_LT((plan.evolve(psi, 1.7).amplitudes - u * psi.amplitudes).norm(), 1e-10);
}

TEST(Evolve, BoxAndTorusAgreeBeforeTheFrontArrives) {
  const auto op = make(models::ssh(1.0, 2.0));
  const auto box = EvolutionPlan::box(op, {60});
  const auto torus = EvolutionPlan::torus(op, {61});
  auto psi_box = LatticeState::delta(box.geometry(), Site{0});
  psi_box.at(Site{1}) = Complex(0.0, 1.0);
  psi_box.amplitudes /= psi_box.norm();
  const auto psi_torus = fold_to_torus(psi_box, torus.geometry());
  const auto folded = fold_to_torus(box.evolve(psi_box, 3.0), torus.geometry());
  EXPECT_LT((folded.amplitudes - torus.evolve(psi_torus, 3.0).amplitudes).norm(), 1e-10);
}

TEST(Evolve, UnitarityGroupPropertyAndEnergy) {
  const auto op = make(models::random_periodic(2, {2, 3}, 11));
  for (const auto& plan : {EvolutionPlan::torus(op, {3, 2}), EvolutionPlan::box(op, {3, 3})}) {
    const auto psi = oracle::random_full_state(plan.geometry(), 12);
    const auto a = plan.evolve(psi, 1.3);
    EXPECT_NEAR(a.norm(), 1.0, 1e-12);
    EXPECT_NEAR(energy(op, a), energy(op, psi), 1e-11);
    const auto b = plan.evolve(a, 0.9);
    EXPECT_LT((b.amplitudes - plan.evolve(psi, 2.2).amplitudes).norm(), 1e-11);
    EXPECT_LT((plan.evolve(a, -1.3).amplitudes - psi.amplitudes).norm(), 1e-11);
  }
}

TEST(Evolve, GeometryMismatch) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::torus(op, {4});
  try {
    plan.evolve(LatticeState(Geometry::torus({5}, {1})), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeometryMismatch);
  }
}

TEST(PositionMoments, SmallExample) {
  auto psi = LatticeState(Geometry::box({3}));
  psi.at(Site{1}) = 1.0 / std::sqrt(2.0);
  psi.at(Site{2}) = Complex(0.0, 1.0 / std::sqrt(2.0));
  const auto m = position_moments(psi, 1);
  EXPECT_NEAR(m.mean, 1.5, 1e-15);
  EXPECT_NEAR(m.second, 2.5, 1e-15);
}

TEST(PositionMoments, TorusNeedsUnwrapping) {
  try {
    position_moments(LatticeState(Geometry::torus({4}, {1})), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTorusWithoutUnwrapConvention);
  }
}

TEST(PositionMoments, FreeSpreadingIsQuadratic) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::box(op, {80});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  for (double t : {1.0, 5.0, 12.0}) {
    const auto m = position_moments(plan.evolve(psi, t), 1);
    EXPECT_NEAR(m.mean, 0.0, 1e-10);
    EXPECT_NEAR(m.second, 2.0 * t * t, 1e-8);
  }
}

TEST(PositionTrace, FreeUnwrappedTraceStaysAtOrigin) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::torus(op, {32});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  for (double x : unwrapped_position_trace(op, plan, psi, 1, {0.0, 1.0, 4.0}, 0.05)) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(PositionTrace, UnwrappedRejectsBoxPlans) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::box(op, {4});
  EXPECT_THROW(unwrapped_position_trace(op, plan, LatticeState::delta(plan.geometry(), Site{0}), 1, {1.0}, 0.1),
               Error);
}

TEST(PositionTrace, IntegralIdentityOnBox) {
  const auto op = make(models::random_periodic(1, {3}, 1));
  const auto plan = EvolutionPlan::box(op, {recommended_box_radius(op, 0, 10.0)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  const std::vector<double> times{0.0, 2.5, 5.0, 10.0};
  const auto trace = integrated_position_trace(op, plan, psi, 1, times, 0.0125);
  for (std::size_t i = 0; i < times.size(); ++i)
    EXPECT_NEAR(trace[i], position_moments(plan.evolve(psi, times[i]), 1).mean, 1e-8);
}

TEST(PositionTrace, SimpsonOrderUnderHalving) {
  const auto op = make(models::random_periodic(1, {3}, 1));
  const auto plan = EvolutionPlan::box(op, {recommended_box_radius(op, 0, 4.0)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  const double exact = position_moments(plan.evolve(psi, 4.0), 1).mean;
  const double coarse = std::abs(integrated_position_trace(op, plan, psi, 1, {4.0}, 0.2)[0] - exact);
  const double fine = std::abs(integrated_position_trace(op, plan, psi, 1, {4.0}, 0.1)[0] - exact);
  EXPECT_GE(std::log2(coarse / fine), 3.7);
}

TEST(PositionTrace, BoxAndTorusTracesAgree) {
  const auto op = make(models::random_periodic(1, {2}, 6));
  const auto box = EvolutionPlan::box(op, {50});
  const auto torus = EvolutionPlan::torus(op, {51});
  const auto psi = LatticeState::delta(box.geometry(), Site{0});
  const std::vector<double> times{0.0, 1.0, 3.0};
  const auto a = integrated_position_trace(op, box, psi, 1, times, 0.05);
  const auto b = unwrapped_position_trace(op, torus, fold_to_torus(psi, torus.geometry()), 1, times, 0.05);
  for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
}

TEST(Simpson, ExactForCubics) {
  EXPECT_NEAR(simpson([](double x) { return x * x * x - x; }, 0.0, 2.0, 0.7), 2.0, 1e-14);
  EXPECT_EQ(simpson([](double) { return 1.0; }, 1.0, 1.0, 0.1), 0.0);
}

TEST(Heisenberg, FreeChainIsExactAtFiniteTime) {
  const auto op = make(models::free_laplacian(1));
  const double t = 6.0;
  const auto plan = EvolutionPlan::box(op, {recommended_box_radius(op, 0, t)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  const auto r = heisenberg_position_apply(plan, psi, 1, t);
  EXPECT_LT((r.state.amplitudes - apply_P(op, psi, 1).amplitudes).norm(), 1e-10);
  EXPECT_LE(r.boundary_mass, 1e-10);
}

TEST(Heisenberg, RejectsZeroTime) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::box(op, {8});
  EXPECT_THROW(heisenberg_position_apply(plan, LatticeState::delta(plan.geometry(), Site{0}), 1, 0.0), Error);
}

TEST(Heisenberg, DetectsContamination) {
  const auto op = make(models::free_laplacian(1));
  const auto plan = EvolutionPlan::box(op, {10});
  try {
    heisenberg_position_apply(plan, LatticeState::delta(plan.geometry(), Site{0}), 1, 20.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBoundaryContamination);
    EXPECT_TRUE(e.is_resource_guard());
  }
}

TEST(Heisenberg, NormBoundedByRadiusOverTime) {
  const auto op = make(models::ssh(1.0, 2.0));
  const double t = 8.0;
  const auto plan = EvolutionPlan::box(op, {recommended_box_radius(op, 0, t)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  const auto r = heisenberg_position_apply(plan, psi, 1, t);
  // ||X(t) psi|| <= ||X psi|| + t ||P||.
  EXPECT_LE(r.state.norm(), 2.0 * op.max_hopping() + 1e-12);
}

}  // namespace
