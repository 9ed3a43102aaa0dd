#include <gtest/gtest.h>

#include <cmath>

#include "pjacobi/error.hpp"
#include "pjacobi/floquet.hpp"
#include "pjacobi/linalg.hpp"
#include "pjacobi/models.hpp"
#include "support/oracles.hpp"

namespace {

using namespace pjacobi;
using oracle::kTwoPi;

PeriodicJacobiOperator make(const OperatorData& d) { return PeriodicJacobiOperator::create(d); }

TEST(FiberHamiltonian, FreeChainIsTwoCos) {
  const auto op = make(models::free_laplacian(1));
  EXPECT_NEAR(std::abs(fiber_hamiltonian(op, {0.0}).matrix(0, 0) - Complex(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fiber_hamiltonian(op, {0.25}).matrix(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fiber_hamiltonian(op, {0.5}).matrix(0, 0) - Complex(-2.0)), 0.0, 1e-15);
  for (int i = 0; i < 17; ++i) {
    const double t = i / 17.0;
    EXPECT_NEAR(std::abs(fiber_hamiltonian(op, {t}).matrix(0, 0) - 2.0 * std::cos(kTwoPi * t)), 0.0, 1e-14);
  }
}

TEST(FiberHamiltonian, SshEigenvaluesMatchClosedForm) {
  const auto op = make(models::ssh(1.0, 2.0));
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    const auto fiber = fiber_hamiltonian(op, {t}).matrix;
    const double e = oracle::ssh_upper_band(1.0, 2.0, t);
    const auto values = hermitian_eigendecomposition(fiber).values;
    EXPECT_NEAR(values[0], -e, 1e-12);
    EXPECT_NEAR(values[1], e, 1e-12);
    const auto cross = oracle::eigenvalues_by_real_embedding(fiber);
    EXPECT_NEAR(cross[0], -e, 1e-10);
    EXPECT_NEAR(cross[1], e, 1e-10);
  }
  const auto at0 = hermitian_eigendecomposition(fiber_hamiltonian(op, {0.0}).matrix).values;
  const auto at_half = hermitian_eigendecomposition(fiber_hamiltonian(op, {0.5}).matrix).values;
  EXPECT_NEAR(at0[0], -3.0, 1e-12);
  EXPECT_NEAR(at0[1], 3.0, 1e-12);
  EXPECT_NEAR(at_half[0], -1.0, 1e-12);
  EXPECT_NEAR(at_half[1], 1.0, 1e-12);
}

TEST(FiberHamiltonian, HermitianAndPeriodicInTheta) {
  for (const auto& data : {models::random_periodic(1, {3}, 4), models::random_periodic(2, {2, 2}, 6),
                           models::random_periodic(2, {1, 3}, 8), models::free_laplacian(2)}) {
    const auto op = make(data);
    for (int i = 0; i < 9; ++i) {
      Quasimomentum theta(op.dim());
      for (int j = 0; j < op.dim(); ++j) theta[j] = std::fmod(0.137 * (i + 1) * (j + 2), 1.0);
      const auto m = fiber_hamiltonian(op, theta).matrix;
      EXPECT_LT(hermiticity_defect(m), 1e-14);
      for (int j = 0; j < op.dim(); ++j) {
        auto shifted = theta;
        shifted[j] += 1.0;
        EXPECT_LT((fiber_hamiltonian(op, shifted).matrix - m).cwiseAbs().maxCoeff(), 1e-13);
      }
      for (int k = 1; k <= op.dim(); ++k) EXPECT_LT(hermiticity_defect(fiber_velocity(op, theta, k).matrix), 1e-14);
    }
  }
}

TEST(FiberHamiltonian, ThetaZeroIsPeriodicCellOperator) {
  for (const auto& data : {models::ssh(1.0, 2.0), models::random_periodic(2, {2, 3}, 2)}) {
    const auto op = make(data);
    const auto cell = dense_matrix(op, Geometry::torus(std::vector<std::int64_t>(op.dim(), 1), op.period()));
    const auto fiber = fiber_hamiltonian(op, Quasimomentum(op.dim(), 0.0)).matrix;
    EXPECT_LT((fiber - cell).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(FiberVelocity, FreeChainIsMinusTwoSin) {
  const auto op = make(models::free_laplacian(1));
  EXPECT_NEAR(std::abs(fiber_velocity(op, {0.25}, 1).matrix(0, 0) - Complex(-2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fiber_velocity(op, {0.0}, 1).matrix(0, 0)), 0.0, 1e-15);
  for (int i = 0; i < 13; ++i) {
    const double t = i / 13.0;
    // (1 / 2 pi) d/dtheta of 2 cos(2 pi theta).
    EXPECT_NEAR(std::abs(fiber_velocity(op, {t}, 1).matrix(0, 0) + 2.0 * std::sin(kTwoPi * t)), 0.0, 1e-14);
  }
}

TEST(FiberVelocity, NormBoundOnSweep) {
  for (const auto& data : {models::free_laplacian(1), models::ssh(1.0, 2.0), models::random_periodic(1, {3}, 1),
                           models::random_periodic(2, {2, 2}, 1)}) {
    const auto op = make(data);
    for (int i = 0; i <= 100; ++i) {
      Quasimomentum theta(op.dim(), i / 100.0);
      if (op.dim() == 2) theta[1] = std::fmod(0.37 + i / 100.0, 1.0);
      for (int k = 1; k <= op.dim(); ++k)
        EXPECT_LE(hermitian_norm(fiber_velocity(op, theta, k).matrix), 2.0 * op.max_hopping() * (1 + 1e-12));
    }
  }
}

TEST(FiberVelocity, InvalidAxis) {
  const auto op = make(models::free_laplacian(1));
  try {
    fiber_velocity(op, {0.1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidAxis);
  }
}

TEST(GaugeMatrix, Examples) {
  const auto op = make(models::ssh(1.0, 2.0));
  const auto m = gauge_matrix(op, {0.5});
  EXPECT_NEAR(std::abs(m(0, 0) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 1) - Complex(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_EQ(std::abs(m(0, 1)), 0.0);
  EXPECT_LT((gauge_matrix(op, {0.0}) - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);

  const auto op2 = make(models::random_periodic(2, {3, 2}, 1));
  const auto u = gauge_matrix(op2, {0.31, 0.77});
  EXPECT_LT((u * u.adjoint() - ComplexMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-14);
}

double gauge_fd_defect(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis, double h) {
  // theta +- h are evaluated unwrapped: the gauged fiber is not 1-periodic.
  auto plus = theta, minus = theta;
  plus[axis - 1] += h;
  minus[axis - 1] -= h;
  const double q = static_cast<double>(op.period()[axis - 1]);
  const ComplexMatrix fd = (gauged_fiber(op, plus, axis).hamiltonian - gauged_fiber(op, minus, axis).hamiltonian) *
                           (q / (kTwoPi * 2.0 * h));
  return (gauged_fiber(op, theta, axis).velocity - fd).cwiseAbs().maxCoeff();
}

TEST(GaugedFiber, FreeChainIdentity) {
  const auto op = make(models::free_laplacian(1));
  const auto g = gauged_fiber(op, {0.2}, 1);
  EXPECT_NEAR(std::abs(g.hamiltonian(0, 0) - 2.0 * std::cos(kTwoPi * 0.2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g.velocity(0, 0) + 2.0 * std::sin(kTwoPi * 0.2)), 0.0, 1e-14);
}

TEST(GaugedFiber, SecondOrderFiniteDifferenceConvergence) {
  for (const auto& data : {models::ssh(1.0, 2.0), models::random_periodic(1, {3}, 1),
                           models::random_periodic(2, {2, 3}, 3)}) {
    const auto op = make(data);
    for (int i = 0; i < 8; ++i) {
      Quasimomentum theta(op.dim(), (i + 0.5) / 8.0);
      for (int k = 1; k <= op.dim(); ++k) {
        const double coarse = gauge_fd_defect(op, theta, k, 1e-3);
        const double fine = gauge_fd_defect(op, theta, k, 5e-4);
        EXPECT_LT(fine, 1e-5);
        EXPECT_GT(coarse / fine, 3.5);
        EXPECT_LT(coarse / fine, 4.5);
      }
    }
  }
}

TEST(GaugedFiber, IdentityAtThetaZeroAcrossSeam) {
  const auto op = make(models::ssh(1.0, 2.0));
  EXPECT_LT(gauge_fd_defect(op, {0.0}, 1, 1e-4), 1e-6);
}

TEST(FloquetTransform, DeltaIsFlat) {
  const auto torus = Geometry::torus({4}, {1});
  const auto field = floquet_transform(LatticeState::delta(torus, Site{0}));
  ASSERT_EQ(field.values.size(), 4u);
  for (const auto& v : field.values) EXPECT_NEAR(std::abs(v[0] - Complex(0.5)), 0.0, 1e-15);
}

TEST(FloquetTransform, MatchesDirectDefinition) {
  const auto torus = Geometry::torus({3, 4}, {2, 3});
  const auto psi = oracle::random_full_state(torus, 17);
  const auto field = floquet_transform(psi);
  const double norm = 1.0 / std::sqrt(12.0);
  for (std::int64_t n0 = 0; n0 < 3; ++n0) {
    for (std::int64_t n1 = 0; n1 < 4; ++n1) {
      const std::size_t point = field.grid.index({n0, n1});
      for (std::int64_t x0 = 0; x0 < 2; ++x0) {
        for (std::int64_t x1 = 0; x1 < 3; ++x1) {
          Complex sum{};
          for (std::int64_t m0 = 0; m0 < 3; ++m0)
            for (std::int64_t m1 = 0; m1 < 4; ++m1)
              sum += psi.at(Site{x0 + 2 * m0, x1 + 3 * m1}) *
                     std::polar(1.0, -kTwoPi * (n0 * m0 / 3.0 + n1 * m1 / 4.0));
          EXPECT_NEAR(std::abs(field.values[point][x0 * 3 + x1] - norm * sum), 0.0, 1e-13);
        }
      }
    }
  }
}

TEST(FloquetTransform, UnitaryRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto torus = seed % 2 ? Geometry::torus({8}, {2}) : Geometry::torus({4, 3}, {2, 1});
    const auto psi = oracle::random_full_state(torus, seed);
    const auto field = floquet_transform(psi);
    EXPECT_NEAR(field.norm(), psi.norm(), 1e-13);
    EXPECT_LT((inverse_floquet_transform(field).amplitudes - psi.amplitudes).norm(), 1e-13);
  }
}

TEST(FloquetTransform, RejectsBox) {
  try {
    floquet_transform(LatticeState(Geometry::box({3})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIncommensurateTorus);
  }
}

TEST(BlockDiagonalization, ExactOnCommensurateTori) {
  struct Case {
    OperatorData data;
    std::vector<std::int64_t> cells;
  };
  const std::vector<Case> cases = {{models::free_laplacian(1), {4}},
                                   {models::ssh(1.0, 2.0), {8}},
                                   {models::random_periodic(1, {3}, 1), {5}},
                                   {models::random_periodic(2, {2, 2}, 1), {4, 4}},
                                   {models::free_laplacian(2), {1, 3}},
                                   {models::random_periodic(2, {1, 2}, 3), {2, 1}}};
  for (const auto& c : cases) {
    const auto defect = verify_block_diagonalization(make(c.data), c.cells, 3, 5);
    EXPECT_LE(defect.hamiltonian, 1e-12);
    for (double v : defect.velocity) EXPECT_LE(v, 1e-12);
  }
}

TEST(BlockDiagonalization, TooLarge) {
  try {
    verify_block_diagonalization(make(models::free_laplacian(1)), {5000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
}

}  // namespace
