#include "pjacobi/jacobi_operator.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "pjacobi/error.hpp"

namespace pjacobi {

namespace {

std::string format_site(const Site& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

bool in_cell(const Site& s, const std::vector<std::int64_t>& q) {
  if (s.size() != q.size()) return false;
  for (std::size_t j = 0; j < q.size(); ++j)
    if (s[j] < 0 || s[j] >= q[j]) return false;
  return true;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Visits every directed nearest-neighbour edge x -> y of `g` once: for each site
// index x, each 0-based axis j and each direction, calls
// fn(x_index, y_index, j, dir, a_{x,y}). Edges leaving a box are skipped.
template <typename Fn>
void for_each_edge(const PeriodicJacobiOperator& op, const Geometry& g, Fn&& fn) {
  const int d = g.dim();
  const Geometry& cell = op.cell();
  Site x(d), y(d);
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    for (int j = 0; j < d; ++j) x[j] = g.coordinate(xi, j);
    const std::size_t cx = cell.index(x);
    for (int j = 0; j < d; ++j) {
      for (int dir : {+1, -1}) {
        y = x;
        y[j] += dir;
        if (!g.contains(y)) continue;
        Complex a;
        if (dir > 0) {
          a = op.hopping(cx, j + 1);
        } else {
          a = std::conj(op.hopping(cell.index(y), j + 1));
        }
        fn(xi, g.index(y), j, dir, a);
      }
    }
  }
}

void check_geometry(const PeriodicJacobiOperator& op, const Geometry& g) {
  if (g.dim() != op.dim()) throw Error(ErrorKind::kGeometryMismatch, "geometry dimension differs from operator");
  if (g.is_torus() && g.period() != op.period())
    throw Error(ErrorKind::kIncommensurateTorus, "torus period must equal the operator period");
}

void check_dense(const Geometry& g) {
  if (g.size() > kMaxDenseSites)
    throw Error(ErrorKind::kTooLarge, "dense route limited to " + std::to_string(kMaxDenseSites) + " sites, got " +
                                          std::to_string(g.size()));
}

}  // namespace

bool ValidationReport::has(ViolationKind kind) const {
  for (const auto& v : violations)
    if (v.kind == kind) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i].message;
  return os.str();
}

ValidationReport validate(const OperatorData& data) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, Site site, int axis, std::string msg) {
    report.violations.push_back({kind, std::move(site), axis, std::move(msg)});
  };

  if (data.dim < 1 || static_cast<int>(data.period.size()) != data.dim) {
    add(ViolationKind::kShapeMismatch, {}, 0, "ShapeMismatch: period length must equal the dimension");
    return report;
  }
  for (auto qj : data.period) {
    if (qj < 1) {
      add(ViolationKind::kShapeMismatch, {}, 0, "ShapeMismatch: periods must be positive");
      return report;
    }
  }

  const auto cell = Geometry::torus(std::vector<std::int64_t>(data.dim, 1), data.period);

  for (const auto& [key, a] : data.hoppings) {
    const auto& [site, axis] = key;
    if (!in_cell(site, data.period) || axis < 1 || axis > data.dim) {
      add(ViolationKind::kShapeMismatch, site, axis,
          "ShapeMismatch: hopping key " + format_site(site) + " axis " + std::to_string(axis) + " is outside the cell");
      continue;
    }
    if (!finite(a)) {
      add(ViolationKind::kNonFinite, site, axis, "NonFinite: hopping at " + format_site(site));
    } else if (std::abs(a) == 0.0) {
      add(ViolationKind::kZeroHopping, site, axis,
          "ZeroHopping(" + format_site(site) + ", " + std::to_string(axis) + ")");
    }
  }
  for (const auto& [site, b] : data.potential) {
    if (!in_cell(site, data.period)) {
      add(ViolationKind::kShapeMismatch, site, 0, "ShapeMismatch: potential key " + format_site(site) + " is outside the cell");
      continue;
    }
    if (!finite(b)) {
      add(ViolationKind::kNonFinite, site, 0, "NonFinite: potential at " + format_site(site));
    } else if (b.imag() != 0.0) {
      add(ViolationKind::kNonRealPotential, site, 0, "NonRealPotential(" + format_site(site) + ")");
    }
  }
  for (std::size_t i = 0; i < cell.size(); ++i) {
    Site x = cell.site(i);
    for (int j = 1; j <= data.dim; ++j)
      if (!data.hoppings.contains({x, j}))
        add(ViolationKind::kShapeMismatch, x, j,
            "ShapeMismatch: missing hopping " + format_site(x) + " axis " + std::to_string(j));
    if (!data.potential.contains(x))
      add(ViolationKind::kShapeMismatch, x, 0, "ShapeMismatch: missing potential " + format_site(x));
  }
  return report;
}

PeriodicJacobiOperator::PeriodicJacobiOperator(std::vector<std::int64_t> period)
    : period_(std::move(period)), cell_(Geometry::torus(std::vector<std::int64_t>(period_.size(), 1), period_)) {}

PeriodicJacobiOperator PeriodicJacobiOperator::create(const OperatorData& data) {
  const auto report = validate(data);
  if (!report.ok()) throw Error(ErrorKind::kInvalidOperator, report.summary());

  PeriodicJacobiOperator op(data.period);
  const int d = op.dim();
  op.hoppings_.resize(op.cell_size() * d);
  op.potential_.resize(op.cell_size());
  for (std::size_t i = 0; i < op.cell_size(); ++i) {
    const Site x = op.cell_.site(i);
    for (int j = 1; j <= d; ++j) {
      const Complex a = data.hoppings.at({x, j});
      op.hoppings_[i * d + (j - 1)] = a;
      op.max_hopping_ = std::max(op.max_hopping_, std::abs(a));
      if (a.imag() != 0.0) op.real_ = false;
    }
    op.potential_[i] = data.potential.at(x).real();
  }
  return op;
}

Complex PeriodicJacobiOperator::hopping(std::size_t cell_index, int axis) const {
  return hoppings_.at(cell_index * period_.size() + static_cast<std::size_t>(axis - 1));
}

OperatorData PeriodicJacobiOperator::data() const {
  OperatorData out;
  out.dim = dim();
  out.period = period_;
  for (std::size_t i = 0; i < cell_size(); ++i) {
    const Site x = cell_.site(i);
    for (int j = 1; j <= dim(); ++j) out.hoppings[{x, j}] = hopping(i, j);
    out.potential[x] = potential_[i];
  }
  return out;
}

void check_axis(const PeriodicJacobiOperator& op, int axis) {
  if (axis < 1 || axis > op.dim())
    throw Error(ErrorKind::kInvalidAxis, "axis " + std::to_string(axis) + " not in 1.." + std::to_string(op.dim()));
}

Complex hopping_at(const PeriodicJacobiOperator& op, std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
  if (static_cast<int>(x.size()) != op.dim() || static_cast<int>(y.size()) != op.dim())
    throw Error(ErrorKind::kNotNeighbors, "site dimension differs from operator");
  int axis = -1;
  std::int64_t l1 = 0;
  for (int j = 0; j < op.dim(); ++j) {
    const std::int64_t diff = y[j] - x[j];
    l1 += diff < 0 ? -diff : diff;
    if (diff != 0) axis = j;
  }
  if (l1 != 1) throw Error(ErrorKind::kNotNeighbors, "||x - y||_1 != 1");
  if (y[axis] > x[axis]) return op.hopping(op.cell().index(x), axis + 1);
  return std::conj(op.hopping(op.cell().index(y), axis + 1));
}

LatticeState apply_J(const PeriodicJacobiOperator& op, const LatticeState& psi) {
  const auto& g = psi.geometry;
  check_geometry(op, g);
  LatticeState out(g);
  auto& o = out.amplitudes;
  const auto& v = psi.amplitudes;
  for (std::size_t i = 0; i < g.size(); ++i)
    o[static_cast<Eigen::Index>(i)] = op.potential(op.cell().index(g.site(i))) * v[static_cast<Eigen::Index>(i)];
  for_each_edge(op, g, [&](std::size_t x, std::size_t y, int, int, Complex a) {
    o[static_cast<Eigen::Index>(y)] += a * v[static_cast<Eigen::Index>(x)];
  });
  return out;
}

LatticeState apply_P(const PeriodicJacobiOperator& op, const LatticeState& psi, int axis) {
  check_axis(op, axis);
  const auto& g = psi.geometry;
  check_geometry(op, g);
  LatticeState out(g);
  auto& o = out.amplitudes;
  const auto& v = psi.amplitudes;
  const Complex i_unit{0.0, 1.0};
  for_each_edge(op, g, [&](std::size_t x, std::size_t y, int j, int dir, Complex a) {
    if (j != axis - 1) return;
    o[static_cast<Eigen::Index>(y)] += (dir > 0 ? -i_unit : i_unit) * a * v[static_cast<Eigen::Index>(x)];
  });
  return out;
}

ComplexMatrix dense_matrix(const PeriodicJacobiOperator& op, const Geometry& geometry) {
  check_geometry(op, geometry);
  check_dense(geometry);
  const auto n = static_cast<Eigen::Index>(geometry.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = op.potential(op.cell().index(geometry.site(static_cast<std::size_t>(i))));
  for_each_edge(op, geometry, [&](std::size_t x, std::size_t y, int, int, Complex a) {
    m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += a;
  });
  return m;
}

ComplexMatrix dense_velocity_matrix(const PeriodicJacobiOperator& op, const Geometry& geometry, int axis) {
  check_axis(op, axis);
  check_geometry(op, geometry);
  check_dense(geometry);
  const auto n = static_cast<Eigen::Index>(geometry.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const Complex i_unit{0.0, 1.0};
  for_each_edge(op, geometry, [&](std::size_t x, std::size_t y, int j, int dir, Complex a) {
    if (j != axis - 1) return;
    m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += (dir > 0 ? -i_unit : i_unit) * a;
  });
  return m;
}

ComplexMatrix torus_matrix(const PeriodicJacobiOperator& op, const std::vector<std::int64_t>& cells) {
  if (static_cast<int>(cells.size()) != op.dim())
    throw Error(ErrorKind::kIncommensurateTorus, "cell count vector must have one entry per axis");
  return dense_matrix(op, Geometry::torus(cells, op.period()));
}

}  // namespace pjacobi
