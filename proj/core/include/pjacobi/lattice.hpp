#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pjacobi {

using Complex = std::complex<double>;
using Site = std::vector<std::int64_t>;
using ComplexVector = Eigen::VectorXcd;

/// Finite restriction of Z^d. A box holds the sites with |x_j| <= radius_j and
/// truncates with zero boundary conditions; a torus holds Z^d mod (cells_j * period_j).
///
/// Sites are linearised row-major (last axis fastest). Torus coordinates are
/// stored in [0, extent_j).
class Geometry {
 public:
  static Geometry box(std::vector<std::int64_t> radius);
  static Geometry torus(std::vector<std::int64_t> cells, std::vector<std::int64_t> period);

  bool is_torus() const noexcept { return torus_; }
  bool is_box() const noexcept { return !torus_; }
  int dim() const noexcept { return static_cast<int>(extent_.size()); }
  std::size_t size() const noexcept { return size_; }

  /// Number of sites along `axis` (0-based).
  std::int64_t extent(int axis) const { return extent_.at(axis); }
  /// Lowest coordinate along `axis`: -radius for a box, 0 for a torus.
  std::int64_t lower(int axis) const { return lower_.at(axis); }
  const std::vector<std::int64_t>& radius() const { return radius_; }
  const std::vector<std::int64_t>& cells() const { return cells_; }
  const std::vector<std::int64_t>& period() const { return period_; }

  /// Box: true iff inside. Torus: always true (coordinates wrap).
  bool contains(std::span<const std::int64_t> site) const;
  /// Linear index of `site`. Throws if outside a box.
  std::size_t index(std::span<const std::int64_t> site) const;
  Site site(std::size_t index) const;
  /// Coordinate along `axis` of the site with linear index `index`.
  std::int64_t coordinate(std::size_t index, int axis) const;
  /// Row-major stride of `axis`.
  std::size_t stride(int axis) const { return stride_.at(axis); }

  /// Torus coordinate lifted to the centred window [-(E-1)/2, E/2] (E = extent);
  /// box coordinates are returned unchanged.
  std::int64_t centered_coordinate(std::size_t index, int axis) const;

  friend bool operator==(const Geometry&, const Geometry&) = default;

 private:
  Geometry() = default;
  void finish();

  bool torus_ = false;
  std::vector<std::int64_t> radius_;
  std::vector<std::int64_t> cells_;
  std::vector<std::int64_t> period_;
  std::vector<std::int64_t> extent_;
  std::vector<std::int64_t> lower_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

/// Complex amplitude field on a finite geometry.
struct LatticeState {
  Geometry geometry;
  ComplexVector amplitudes;

  explicit LatticeState(Geometry g)
      : geometry(std::move(g)), amplitudes(ComplexVector::Zero(static_cast<Eigen::Index>(geometry.size()))) {}
  LatticeState(Geometry g, ComplexVector a);

  static LatticeState delta(const Geometry& g, std::span<const std::int64_t> site);

  Complex& at(std::span<const std::int64_t> site) { return amplitudes[static_cast<Eigen::Index>(geometry.index(site))]; }
  Complex at(std::span<const std::int64_t> site) const {
    return amplitudes[static_cast<Eigen::Index>(geometry.index(site))];
  }

  double norm() const { return amplitudes.norm(); }
  double squared_norm() const { return amplitudes.squaredNorm(); }
};

/// <phi, psi>, antilinear in the first argument.
Complex inner(const LatticeState& phi, const LatticeState& psi);

/// Copies a box state onto a torus by reducing coordinates mod the torus extent.
/// Throws kGeometryMismatch if two occupied box sites land on the same torus site.
LatticeState fold_to_torus(const LatticeState& box_state, const Geometry& torus);

/// Places one copy of a torus state into a box, lifting each torus site to its
/// centred representative. Sites whose representative falls outside the box are
/// dropped; their squared mass is returned through `dropped_mass` when given.
LatticeState unfold_to_box(const LatticeState& torus_state, const Geometry& box, double* dropped_mass = nullptr);

/// Squared mass on box sites within `layer` sites of any face.
double boundary_mass(const LatticeState& box_state, std::int64_t layer);

}  // namespace pjacobi
