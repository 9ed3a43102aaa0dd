#include "pjacobi/lattice.hpp"

#include <string>

#include "pjacobi/error.hpp"

namespace pjacobi {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidOperator: return "InvalidOperator";
    case ErrorKind::kNotNeighbors: return "NotNeighbors";
    case ErrorKind::kInvalidAxis: return "InvalidAxis";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kIncommensurateTorus: return "IncommensurateTorus";
    case ErrorKind::kGeometryMismatch: return "GeometryMismatch";
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kTorusWithoutUnwrapConvention: return "TorusWithoutUnwrapConvention";
    case ErrorKind::kBoundaryContamination: return "BoundaryContamination";
    case ErrorKind::kGridMismatch: return "GridMismatch";
    case ErrorKind::kRadiusTooLarge: return "RadiusTooLarge";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::int64_t wrap(std::int64_t c, std::int64_t n) {
  std::int64_t r = c % n;
  return r < 0 ? r + n : r;
}

}  // namespace

Geometry Geometry::box(std::vector<std::int64_t> radius) {
  if (radius.empty()) throw Error(ErrorKind::kInvalidArgument, "box needs at least one axis");
  for (auto r : radius)
    if (r < 1) throw Error(ErrorKind::kInvalidArgument, "box radius must be positive");
  Geometry g;
  g.torus_ = false;
  g.radius_ = std::move(radius);
  for (auto r : g.radius_) {
    g.extent_.push_back(2 * r + 1);
    g.lower_.push_back(-r);
  }
  g.finish();
  return g;
}

Geometry Geometry::torus(std::vector<std::int64_t> cells, std::vector<std::int64_t> period) {
  if (cells.empty() || cells.size() != period.size())
    throw Error(ErrorKind::kInvalidArgument, "torus cells and period must have the same positive length");
  for (std::size_t j = 0; j < cells.size(); ++j)
    if (cells[j] < 1 || period[j] < 1)
      throw Error(ErrorKind::kInvalidArgument, "torus cells and period must be positive");
  Geometry g;
  g.torus_ = true;
  g.cells_ = std::move(cells);
  g.period_ = std::move(period);
  for (std::size_t j = 0; j < g.cells_.size(); ++j) {
    g.extent_.push_back(g.cells_[j] * g.period_[j]);
    g.lower_.push_back(0);
  }
  g.finish();
  return g;
}

void Geometry::finish() {
  const int d = dim();
  stride_.assign(d, 1);
  for (int j = d - 2; j >= 0; --j) stride_[j] = stride_[j + 1] * static_cast<std::size_t>(extent_[j + 1]);
  size_ = stride_[0] * static_cast<std::size_t>(extent_[0]);
}

bool Geometry::contains(std::span<const std::int64_t> site) const {
  if (static_cast<int>(site.size()) != dim()) return false;
  if (torus_) return true;
  for (int j = 0; j < dim(); ++j)
    if (site[j] < -radius_[j] || site[j] > radius_[j]) return false;
  return true;
}

std::size_t Geometry::index(std::span<const std::int64_t> site) const {
  if (static_cast<int>(site.size()) != dim())
    throw Error(ErrorKind::kGeometryMismatch, "site dimension does not match geometry");
  std::size_t idx = 0;
  for (int j = 0; j < dim(); ++j) {
    std::int64_t c = site[j] - lower_[j];
    if (torus_) {
      c = wrap(c, extent_[j]);
    } else if (c < 0 || c >= extent_[j]) {
      throw Error(ErrorKind::kGeometryMismatch, "site outside box");
    }
    idx += static_cast<std::size_t>(c) * stride_[j];
  }
  return idx;
}

Site Geometry::site(std::size_t index) const {
  Site s(dim());
  for (int j = 0; j < dim(); ++j) s[j] = coordinate(index, j);
  return s;
}

std::int64_t Geometry::coordinate(std::size_t index, int axis) const {
  return static_cast<std::int64_t>((index / stride_[axis]) % static_cast<std::size_t>(extent_[axis])) + lower_[axis];
}

std::int64_t Geometry::centered_coordinate(std::size_t index, int axis) const {
  const std::int64_t c = coordinate(index, axis);
  if (!torus_) return c;
  const std::int64_t e = extent_[axis];
  return c <= e / 2 ? c : c - e;
}

LatticeState::LatticeState(Geometry g, ComplexVector a) : geometry(std::move(g)), amplitudes(std::move(a)) {
  if (static_cast<std::size_t>(amplitudes.size()) != geometry.size())
    throw Error(ErrorKind::kGeometryMismatch, "amplitude count does not match geometry size");
}

LatticeState LatticeState::delta(const Geometry& g, std::span<const std::int64_t> site) {
  LatticeState s(g);
  s.at(site) = 1.0;
  return s;
}

Complex inner(const LatticeState& phi, const LatticeState& psi) {
  if (!(phi.geometry == psi.geometry)) throw Error(ErrorKind::kGeometryMismatch, "inner product across geometries");
  return phi.amplitudes.dot(psi.amplitudes);
}

LatticeState fold_to_torus(const LatticeState& box_state, const Geometry& torus) {
  if (!box_state.geometry.is_box() || !torus.is_torus() || box_state.geometry.dim() != torus.dim())
    throw Error(ErrorKind::kGeometryMismatch, "fold_to_torus expects a box state and a torus of equal dimension");
  LatticeState out(torus);
  std::vector<bool> occupied(torus.size(), false);
  const auto& g = box_state.geometry;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex v = box_state.amplitudes[static_cast<Eigen::Index>(i)];
    if (v == Complex{}) continue;
    const std::size_t t = torus.index(g.site(i));
    if (occupied[t]) throw Error(ErrorKind::kGeometryMismatch, "state support does not fit inside one torus window");
    occupied[t] = true;
    out.amplitudes[static_cast<Eigen::Index>(t)] = v;
  }
  return out;
}

LatticeState unfold_to_box(const LatticeState& torus_state, const Geometry& box, double* dropped_mass) {
  const auto& g = torus_state.geometry;
  if (!g.is_torus() || !box.is_box() || g.dim() != box.dim())
    throw Error(ErrorKind::kGeometryMismatch, "unfold_to_box expects a torus state and a box of equal dimension");
  LatticeState out(box);
  double dropped = 0.0;
  Site s(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.dim(); ++j) s[j] = g.centered_coordinate(i, j);
    const Complex v = torus_state.amplitudes[static_cast<Eigen::Index>(i)];
    if (box.contains(s))
      out.at(s) = v;
    else
      dropped += std::norm(v);
  }
  if (dropped_mass) *dropped_mass = dropped;
  return out;
}

double boundary_mass(const LatticeState& box_state, std::int64_t layer) {
  const auto& g = box_state.geometry;
  if (!g.is_box()) throw Error(ErrorKind::kGeometryMismatch, "boundary mass is defined on boxes");
  double mass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool near = false;
    for (int j = 0; j < g.dim() && !near; ++j) {
      const std::int64_t c = g.coordinate(i, j);
      near = (g.radius()[j] - (c < 0 ? -c : c)) < layer;
    }
    if (near) mass += std::norm(box_state.amplitudes[static_cast<Eigen::Index>(i)]);
  }
  return mass;
}

}  // namespace pjacobi
