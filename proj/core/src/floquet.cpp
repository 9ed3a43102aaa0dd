#include "pjacobi/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pjacobi/error.hpp"
#include "pjacobi/random.hpp"

namespace pjacobi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_theta(const PeriodicJacobiOperator& op, const Quasimomentum& theta) {
  if (static_cast<int>(theta.size()) != op.dim())
    throw Error(ErrorKind::kInvalidArgument, "quasimomentum dimension differs from operator");
}

// Shared assembly: stencil(dir, a) gives the coefficient an edge x -> x + dir e_j
// carries; only axes accepted by `use_axis` contribute.
template <typename Coefficient, typename AxisFilter>
ComplexMatrix assemble_fiber(const PeriodicJacobiOperator& op, const Quasimomentum& theta, bool with_potential,
                             Coefficient coefficient, AxisFilter use_axis) {
  const Geometry& cell = op.cell();
  const auto n = static_cast<Eigen::Index>(op.cell_size());
  const int d = op.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Site x(d), y(d);
  for (std::size_t xi = 0; xi < cell.size(); ++xi) {
    x = cell.site(xi);
    if (with_potential) m(static_cast<Eigen::Index>(xi), static_cast<Eigen::Index>(xi)) += op.potential(xi);
    for (int j = 0; j < d; ++j) {
      if (!use_axis(j)) continue;
      const std::int64_t qj = op.period()[j];
      for (int dir : {+1, -1}) {
        y = x;
        y[j] += dir;
        // y = y' + n e_j q_j with y' in the cell.
        std::int64_t shift = 0;
        if (y[j] >= qj) shift = 1;
        if (y[j] < 0) shift = -1;
        const Complex a = dir > 0 ? op.hopping(xi, j + 1) : std::conj(op.hopping(cell.index(y), j + 1));
        const Complex phase = shift == 0 ? Complex{1.0} : unit_phase(-kTwoPi * theta[j] * static_cast<double>(shift));
        m(static_cast<Eigen::Index>(cell.index(y)), static_cast<Eigen::Index>(xi)) += coefficient(dir, a) * phase;
      }
    }
  }
  return m;
}

// In-place unitary DFT along every cell-offset axis of data laid out as
// [m (row-major over N)][x (cell index)].
void transform_cells(std::vector<Complex>& data, const std::vector<std::int64_t>& cells, std::size_t cell_size,
                     double sign) {
  const int d = static_cast<int>(cells.size());
  std::vector<std::size_t> stride(d, 1);
  for (int j = d - 2; j >= 0; --j) stride[j] = stride[j + 1] * static_cast<std::size_t>(cells[j + 1]);
  const std::size_t total = stride[0] * static_cast<std::size_t>(cells[0]);

  std::vector<Complex> buffer;
  for (int j = 0; j < d; ++j) {
    const auto nj = static_cast<std::size_t>(cells[j]);
    std::vector<Complex> table(nj);
    for (std::size_t k = 0; k < nj; ++k) table[k] = unit_phase(sign * kTwoPi * static_cast<double>(k) / static_cast<double>(nj));
    const double scale = 1.0 / std::sqrt(static_cast<double>(nj));
    buffer.assign(nj, Complex{});
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride[j]) % nj != 0) continue;
      for (std::size_t x = 0; x < cell_size; ++x) {
        for (std::size_t out = 0; out < nj; ++out) {
          Complex acc{};
          for (std::size_t in = 0; in < nj; ++in)
            acc += table[(out * in) % nj] * data[(base + in * stride[j]) * cell_size + x];
          buffer[out] = acc * scale;
        }
        for (std::size_t out = 0; out < nj; ++out) data[(base + out * stride[j]) * cell_size + x] = buffer[out];
      }
    }
  }
}

}  // namespace

BrillouinGrid::BrillouinGrid(std::vector<std::int64_t> resolution) : resolution_(std::move(resolution)) {
  if (resolution_.empty()) throw Error(ErrorKind::kInvalidArgument, "grid needs at least one axis");
  for (auto n : resolution_) {
    if (n < 1) throw Error(ErrorKind::kInvalidArgument, "grid resolution must be positive");
    size_ *= static_cast<std::size_t>(n);
  }
}

std::vector<std::int64_t> BrillouinGrid::multi_index(std::size_t index) const {
  std::vector<std::int64_t> n(resolution_.size());
  for (int j = dim() - 1; j >= 0; --j) {
    n[j] = static_cast<std::int64_t>(index % static_cast<std::size_t>(resolution_[j]));
    index /= static_cast<std::size_t>(resolution_[j]);
  }
  return n;
}

std::size_t BrillouinGrid::index(const std::vector<std::int64_t>& n) const {
  std::size_t idx = 0;
  for (int j = 0; j < dim(); ++j) {
    std::int64_t r = n[j] % resolution_[j];
    if (r < 0) r += resolution_[j];
    idx = idx * static_cast<std::size_t>(resolution_[j]) + static_cast<std::size_t>(r);
  }
  return idx;
}

Quasimomentum BrillouinGrid::theta(std::size_t index) const {
  const auto n = multi_index(index);
  Quasimomentum t(n.size());
  for (std::size_t j = 0; j < n.size(); ++j) t[j] = static_cast<double>(n[j]) / static_cast<double>(resolution_[j]);
  return t;
}

FiberOperator fiber_hamiltonian(const PeriodicJacobiOperator& op, const Quasimomentum& theta) {
  check_theta(op, theta);
  return {theta, assemble_fiber(
                     op, theta, true, [](int, Complex a) { return a; }, [](int) { return true; })};
}

FiberOperator fiber_velocity(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis) {
  check_axis(op, axis);
  check_theta(op, theta);
  return {theta, assemble_fiber(
                     op, theta, false, [](int dir, Complex a) { return (dir > 0 ? -kI : kI) * a; },
                     [axis](int j) { return j == axis - 1; })};
}

ComplexMatrix gauge_matrix(const PeriodicJacobiOperator& op, const Quasimomentum& theta) {
  check_theta(op, theta);
  const auto n = static_cast<Eigen::Index>(op.cell_size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t xi = 0; xi < op.cell_size(); ++xi) {
    const Site x = op.cell().site(xi);
    double angle = 0.0;
    for (int j = 0; j < op.dim(); ++j)
      angle += theta[j] * static_cast<double>(x[j]) / static_cast<double>(op.period()[j]);
    m(static_cast<Eigen::Index>(xi), static_cast<Eigen::Index>(xi)) = unit_phase(kTwoPi * angle);
  }
  return m;
}

GaugedFiber gauged_fiber(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis) {
  const ComplexMatrix m = gauge_matrix(op, theta);
  const ComplexMatrix m_inv = m.adjoint();
  return {m_inv * fiber_hamiltonian(op, theta).matrix * m, m_inv * fiber_velocity(op, theta, axis).matrix * m};
}

double FiberField::squared_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += v.squaredNorm();
  return s;
}

FiberField floquet_transform(const LatticeState& psi) {
  const Geometry& g = psi.geometry;
  if (!g.is_torus()) throw Error(ErrorKind::kIncommensurateTorus, "Floquet transform needs a commensurate torus");
  const int d = g.dim();
  const auto cell = Geometry::torus(std::vector<std::int64_t>(d, 1), g.period());
  const std::size_t q_bar = cell.size();
  const BrillouinGrid grid(g.cells());

  std::vector<Complex> data(g.size());
  std::vector<std::int64_t> m(d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Site s = g.site(i);
    for (int j = 0; j < d; ++j) m[j] = s[j] / g.period()[j];
    data[grid.index(m) * q_bar + cell.index(s)] = psi.amplitudes[static_cast<Eigen::Index>(i)];
  }
  transform_cells(data, g.cells(), q_bar, -1.0);

  FiberField field{grid, g.period(), {}};
  field.values.resize(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n)
    field.values[n] = Eigen::Map<const ComplexVector>(data.data() + n * q_bar, static_cast<Eigen::Index>(q_bar));
  return field;
}

LatticeState inverse_floquet_transform(const FiberField& field) {
  const Geometry g = Geometry::torus(field.grid.resolution(), field.period);
  const int d = g.dim();
  const auto cell = Geometry::torus(std::vector<std::int64_t>(d, 1), g.period());
  const std::size_t q_bar = cell.size();
  if (field.values.size() != field.grid.size())
    throw Error(ErrorKind::kGridMismatch, "fiber field has the wrong number of grid samples");

  std::vector<Complex> data(g.size());
  for (std::size_t n = 0; n < field.grid.size(); ++n) {
    if (static_cast<std::size_t>(field.values[n].size()) != q_bar)
      throw Error(ErrorKind::kGridMismatch, "fiber vector length differs from the cell size");
    std::copy(field.values[n].data(), field.values[n].data() + q_bar, data.begin() + static_cast<std::ptrdiff_t>(n * q_bar));
  }
  transform_cells(data, g.cells(), q_bar, +1.0);

  LatticeState psi(g);
  std::vector<std::int64_t> m(d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Site s = g.site(i);
    for (int j = 0; j < d; ++j) m[j] = s[j] / g.period()[j];
    psi.amplitudes[static_cast<Eigen::Index>(i)] = data[field.grid.index(m) * q_bar + cell.index(s)];
  }
  return psi;
}

double BlockDiagonalizationDefect::max() const {
  double m = hamiltonian;
  for (double v : velocity) m = std::max(m, v);
  return m;
}

BlockDiagonalizationDefect verify_block_diagonalization(const PeriodicJacobiOperator& op,
                                                        const std::vector<std::int64_t>& cells, int samples,
                                                        std::uint64_t seed) {
  if (static_cast<int>(cells.size()) != op.dim())
    throw Error(ErrorKind::kIncommensurateTorus, "cell count vector must have one entry per axis");
  const Geometry torus = Geometry::torus(cells, op.period());
  const ComplexMatrix j_dense = dense_matrix(op, torus);
  std::vector<ComplexMatrix> p_dense;
  for (int k = 1; k <= op.dim(); ++k) p_dense.push_back(dense_velocity_matrix(op, torus, k));

  const BrillouinGrid grid(cells);
  std::vector<ComplexMatrix> j_fiber(grid.size());
  std::vector<std::vector<ComplexMatrix>> p_fiber(op.dim(), std::vector<ComplexMatrix>(grid.size()));
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto theta = grid.theta(n);
    j_fiber[n] = fiber_hamiltonian(op, theta).matrix;
    for (int k = 1; k <= op.dim(); ++k) p_fiber[k - 1][n] = fiber_velocity(op, theta, k).matrix;
  }

  auto defect = [&](const ComplexMatrix& dense, const std::vector<ComplexMatrix>& fibers, const LatticeState& psi) {
    const FiberField lhs = floquet_transform(LatticeState(torus, dense * psi.amplitudes));
    const FiberField f_psi = floquet_transform(psi);
    double sq = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) sq += (lhs.values[n] - fibers[n] * f_psi.values[n]).squaredNorm();
    return std::sqrt(sq);
  };

  BlockDiagonalizationDefect out;
  out.velocity.assign(op.dim(), 0.0);
  PortableRng rng(seed);
  for (int s = 0; s < samples; ++s) {
    LatticeState psi(torus);
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) psi.amplitudes[i] = rng.complex_normal();
    psi.amplitudes /= psi.amplitudes.norm();
    out.hamiltonian = std::max(out.hamiltonian, defect(j_dense, j_fiber, psi));
    for (int k = 0; k < op.dim(); ++k) out.velocity[k] = std::max(out.velocity[k], defect(p_dense[k], p_fiber[k], psi));
  }
  return out;
}

}  // namespace pjacobi
