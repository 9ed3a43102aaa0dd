#include "pjacobi/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "pjacobi/bands.hpp"
#include "pjacobi/dynamics.hpp"
#include "pjacobi/error.hpp"
#include "pjacobi/floquet.hpp"
#include "pjacobi/models.hpp"
#include "pjacobi/random.hpp"
#include "pjacobi/velocity.hpp"

namespace pjacobi::harness {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Model {
  std::string name;
  PeriodicJacobiOperator op;
  bool free = false;
};

struct Context {
  const VerifyTask& task;
  std::vector<std::uint64_t> seeds;
  int threads;
  std::vector<Assertion>* out;

  double tol(const std::string& name) const {
    auto it = task.tolerances.find(name);
    return it != task.tolerances.end() ? it->second : default_tolerance(name);
  }
  void le(const std::string& name, const std::string& subject, double measured) const {
    out->push_back(at_most(name, subject, measured, tol(name)));
  }
  void ge(const std::string& name, const std::string& subject, double measured) const {
    out->push_back(at_least(name, subject, measured, tol(name)));
  }
};

std::vector<std::int64_t> per_axis(const PeriodicJacobiOperator& op, std::int64_t one_d, std::int64_t multi_d) {
  return std::vector<std::int64_t>(static_cast<std::size_t>(op.dim()), op.dim() == 1 ? one_d : multi_d);
}

std::string axis_subject(const Model& m, int k) {
  return m.op.dim() == 1 ? m.name : m.name + " axis " + std::to_string(k);
}

/// Largest l1 ball that fits a torus with the given extents.
std::int64_t torus_ball(const Geometry& g) {
  std::int64_t r = std::numeric_limits<std::int64_t>::max();
  for (int j = 0; j < g.dim(); ++j) r = std::min(r, (g.extent(j) - 1) / 2);
  return r;
}

// Seed for the i-th random state drawn under a suite seed.
std::uint64_t state_seed(std::uint64_t seed, std::uint64_t i) { return seed * 1000003ULL + i; }

void suite_floquet(const Context& c, const Model& m) {
  const auto cells = per_axis(m.op, 8, 4);
  const auto torus = Geometry::torus(cells, m.op.period());
  double unitarity = 0.0, block = 0.0;
  for (auto s : c.seeds) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      const auto psi = random_state(state_seed(s, i), torus, torus_ball(torus));
      const auto f = floquet_transform(psi);
      const auto back = inverse_floquet_transform(f);
      unitarity = std::max({unitarity, std::abs(f.norm() - psi.norm()), (back.amplitudes - psi.amplitudes).norm()});
    }
    block = std::max(block, verify_block_diagonalization(m.op, cells, 4, s).max());
  }
  c.le("floquet.unitarity", m.name, unitarity);
  c.le("floquet.block_diagonalization", m.name, block);
}

double gauge_defect(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis, double h) {
  auto plus = theta, minus = theta;
  plus[axis - 1] += h;
  minus[axis - 1] -= h;
  const double q = static_cast<double>(op.period()[axis - 1]);
  const ComplexMatrix fd =
      (gauged_fiber(op, plus, axis).hamiltonian - gauged_fiber(op, minus, axis).hamiltonian) * (q / (kTwoPi * 2.0 * h));
  return (gauged_fiber(op, theta, axis).velocity - fd).cwiseAbs().maxCoeff();
}

void suite_gauge(const Context& c, const Model& m) {
  for (int k = 1; k <= m.op.dim(); ++k) {
    double coarse = 0.0, fine = 0.0;
    for (auto s : c.seeds) {
      PortableRng rng(s);
      for (int i = 0; i < 32; ++i) {
        Quasimomentum theta(static_cast<std::size_t>(m.op.dim()));
        for (auto& t : theta) t = rng.uniform();
        coarse = std::max(coarse, gauge_defect(m.op, theta, k, 1e-3));
        fine = std::max(fine, gauge_defect(m.op, theta, k, 5e-4));
      }
    }
    const auto subject = axis_subject(m, k);
    Assertion ratio{"gauge.convergence_ratio", subject, coarse / fine, c.tol("gauge.convergence_ratio_min"),
                    c.tol("gauge.convergence_ratio_max")};
    c.out->push_back(ratio);
    c.le("gauge.defect", subject, fine);
  }
}

double ordered_fd(const PeriodicJacobiOperator& op, Quasimomentum theta, int axis, Eigen::Index band, double h) {
  auto plus = theta, minus = theta;
  plus[axis - 1] += h;
  minus[axis - 1] -= h;
  const double ep = hermitian_eigendecomposition(fiber_hamiltonian(op, plus).matrix).values[band];
  const double em = hermitian_eigendecomposition(fiber_hamiltonian(op, minus).matrix).values[band];
  return static_cast<double>(op.period()[axis - 1]) / kTwoPi * (ep - em) / (2.0 * h);
}

void suite_bands(const Context& c, const Model& m) {
  BandOptions opts;
  opts.threads = c.threads;
  const auto bands = compute_bands(m.op, per_axis(m.op, 16, 8), opts);
  for (int k = 1; k <= m.op.dim(); ++k) {
    double worst = 0.0;
    const auto slot = bands.axis_slot(k);
    for (std::size_t n = 0; n < bands.grid.size(); ++n) {
      const auto& e = bands.fibers[n].values;
      for (Eigen::Index j = 0; j < e.size(); ++j) {
        const double below = j > 0 ? e[j] - e[j - 1] : INFINITY;
        const double above = j + 1 < e.size() ? e[j + 1] - e[j] : INFINITY;
        if (std::min(below, above) <= 1e-4) continue;
        worst = std::max(worst,
                         std::abs(bands.velocities[slot][n].values[j] - ordered_fd(m.op, bands.grid.theta(n), k, j, 1e-4)));
      }
    }
    c.le("bands.hellmann_feynman", axis_subject(m, k), worst);
  }

  const auto cells = per_axis(m.op, 8, 4);
  const auto torus = hermitian_eigendecomposition(torus_matrix(m.op, cells)).values;
  const auto small = compute_bands(m.op, cells, opts);
  std::vector<double> fibers;
  for (const auto& f : small.fibers) fibers.insert(fibers.end(), f.values.data(), f.values.data() + f.values.size());
  std::sort(fibers.begin(), fibers.end());
  double multiset = 0.0;
  for (std::size_t i = 0; i < fibers.size(); ++i)
    multiset = std::max(multiset, std::abs(fibers[i] - torus[static_cast<Eigen::Index>(i)]));
  c.le("bands.spectrum_multiset", m.name, multiset);

  for (int k = 1; k <= m.op.dim(); ++k) {
    double ratio = 0.0;
    for (auto s : c.seeds) {
      PortableRng rng(s);
      for (int i = 0; i < 101; ++i) {
        Quasimomentum theta(static_cast<std::size_t>(m.op.dim()));
        for (auto& t : theta) t = rng.uniform();
        ratio = std::max(ratio, hermitian_norm(fiber_velocity(m.op, theta, k).matrix) / (2.0 * m.op.max_hopping()));
      }
    }
    c.le("bands.norm_bound", axis_subject(m, k), ratio);
  }
}

void suite_dynamics(const Context& c, const Model& m) {
  const auto torus = EvolutionPlan::torus(m.op, per_axis(m.op, 8, 4), c.threads);
  double drift = 0.0;
  for (auto s : c.seeds)
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto psi = random_state(state_seed(s, i), torus.geometry(), torus_ball(torus.geometry()));
      for (double t : {0.7, 3.1}) drift = std::max(drift, std::abs(torus.evolve(psi, t).norm() - 1.0));
    }
  c.le("dynamics.unitarity", m.name, drift);

  const double t = m.op.dim() == 1 ? 5.0 : 1.0;
  const std::int64_t support = 2;
  const auto radius = recommended_box_radius(m.op, support, t, m.op.dim() == 1 ? 16 : 4);
  const auto box = EvolutionPlan::box(m.op, std::vector<std::int64_t>(static_cast<std::size_t>(m.op.dim()), radius));
  for (int k = 1; k <= m.op.dim(); ++k) {
    const auto psi = random_state(state_seed(c.seeds.front(), 99), box.geometry(), support);
    const double exact = position_moments(box.evolve(psi, t), k).mean;
    auto defect = [&](double h) { return std::abs(integrated_position_trace(m.op, box, psi, k, {t}, h)[0] - exact); };
    const double coarse = defect(0.1), mid = defect(0.05), fine = defect(0.0125);
    const auto subject = axis_subject(m, k);
    c.le("dynamics.integral_identity", subject, fine);
    // A constant integrand makes Simpson exact and the order undefined.
    if (coarse > 1e-11) c.ge("dynamics.simpson_order", subject, std::log2(coarse / mid));
  }
}

void suite_velocity(const Context& c, const Model& m) {
  BandOptions opts;
  opts.threads = c.threads;
  const auto av = AsymptoticVelocity::build(m.op, per_axis(m.op, 16, 6), opts);
  const auto torus = av.torus();
  const auto j = [&](const LatticeState& psi) { return apply_J(m.op, psi); };
  for (int k = 1; k <= m.op.dim(); ++k) {
    double commutator = 0.0, bound = 0.0, mass = 0.0;
    for (auto s : c.seeds)
      for (std::uint64_t i = 0; i < 3; ++i) {
        const auto psi = random_state(state_seed(s, i), torus, torus_ball(torus));
        const auto qj = apply_Q(av, j(psi), k);
        const auto jq = j(apply_Q(av, psi, k));
        commutator = std::max(commutator, (qj.amplitudes - jq.amplitudes).norm());
        const double cap = 2.0 * m.op.max_hopping();
        bound = std::max(bound, q_moments(av, psi, k).second / (cap * cap));
        double w = 0.0;
        for (const auto& atom : velocity_distribution(av, psi, k)) w += atom.weight;
        mass = std::max(mass, std::abs(w - 1.0));
      }
    const auto subject = axis_subject(m, k);
    c.le("velocity.commutator", subject, commutator);
    c.le("velocity.norm_bound", subject, bound);
    c.le("velocity.distribution_mass", subject, mass);
    if (m.free) {
      const auto delta = LatticeState::delta(torus, Site(static_cast<std::size_t>(m.op.dim()), 0));
      const auto qm = q_moments(av, delta, k);
      c.le("velocity.free_q_mean", subject, std::abs(qm.mean));
      c.le("velocity.free_q_second_moment", subject, std::abs(qm.second - 2.0));
    }
  }
  if (m.free && m.op.dim() == 1) {
    const double t = 20.0;
    const auto box = EvolutionPlan::box(m.op, {128});
    const auto psi = LatticeState::delta(box.geometry(), Site{0});
    const auto report = ballistic_report(m.op, psi, 1, {t}, {257}, box, {{}, c.threads});
    c.le("velocity.free_strong_error", m.name, report.rows.front().strong_error);
    c.le("velocity.free_second_moment", m.name,
         std::abs(position_moments(box.evolve(psi, t), 1).second - 2.0 * t * t));
  }
}

void suite_kernel(const Context& c, const Model& m) {
  BandOptions opts;
  opts.threads = c.threads;
  for (int k = 1; k <= m.op.dim(); ++k) {
    // Pinned zeros of v_k sit on whole theta_k-planes, so only the resolution along k matters.
    auto resolution = per_axis(m.op, 4096, 8);
    resolution[static_cast<std::size_t>(k - 1)] = 4096;
    opts.axes = {k};
    const auto bands = compute_bands(m.op, resolution, opts);
    const double f3 = kernel_mass_estimate(bands, k, 1e-3);
    const double f6 = kernel_mass_estimate(bands, k, 1e-6);
    const double f1 = kernel_mass_estimate(bands, k, 1e-1);
    const auto subject = axis_subject(m, k);
    c.le("kernel.fraction_eps_1e-3", subject, f3);
    c.le("kernel.fraction_eps_1e-6", subject, f6);
    c.le("kernel.monotone", subject, std::max(f6 - f3, f3 - f1));
  }
}

using SuiteFn = void (*)(const Context&, const Model&);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table{
      {"floquet", suite_floquet}, {"gauge", suite_gauge},       {"bands", suite_bands},
      {"dynamics", suite_dynamics}, {"velocity", suite_velocity}, {"kernel", suite_kernel}};
  return table;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"floquet", "gauge", "bands", "dynamics", "velocity", "kernel"};
  return names;
}

const std::vector<std::string>& default_verify_models() {
  static const std::vector<std::string> names{"free1d", "free2d", "ssh(1,2)", "random_periodic(1,[3])",
                                              "random_periodic(2,[2,2])"};
  return names;
}

double default_tolerance(const std::string& name) {
  static const std::map<std::string, double> table{
      {"floquet.unitarity", 1e-12},
      {"floquet.block_diagonalization", 1e-10},
      {"gauge.convergence_ratio_min", 3.5},
      {"gauge.convergence_ratio_max", 4.5},
      {"gauge.defect", 1e-5},
      {"bands.hellmann_feynman", 1e-6},
      {"bands.spectrum_multiset", 1e-10},
      {"bands.norm_bound", 1.0 + 1e-12},
      {"dynamics.unitarity", 1e-12},
      {"dynamics.integral_identity", 1e-8},
      {"dynamics.simpson_order", 3.7},
      {"velocity.commutator", 1e-10},
      {"velocity.norm_bound", 1.0 + 1e-12},
      {"velocity.distribution_mass", 1e-12},
      {"velocity.free_q_mean", 1e-10},
      {"velocity.free_q_second_moment", 1e-10},
      {"velocity.free_strong_error", 1e-8},
      {"velocity.free_second_moment", 1e-6},
      {"kernel.fraction_eps_1e-3", 1e-2},
      {"kernel.fraction_eps_1e-6", 1e-3},
      {"kernel.monotone", 0.0},
  };
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::kInvalidArgument, "unknown assertion '" + name + "'");
  return it->second;
}

std::vector<Assertion> run_verify(const VerifyTask& task, const std::optional<OperatorSpec>& op, std::uint64_t seed,
                                  int threads) {
  for (const auto& [name, value] : task.tolerances) default_tolerance(name);
  std::vector<std::string> selected = task.suites.empty() ? verify_suite_names() : task.suites;
  for (const auto& s : selected)
    if (!suites().count(s)) throw Error(ErrorKind::kInvalidArgument, "unknown verify suite '" + s + "'");

  std::vector<Model> checked;
  auto add = [&](const std::string& name, const OperatorData& data) {
    auto p = PeriodicJacobiOperator::create(data);
    const bool free = data == models::free_laplacian(data.dim);
    checked.push_back({name, std::move(p), free});
  };
  if (task.models.empty() && op) {
    add(op->model.value_or("config operator"), op->data);
  } else {
    for (const auto& name : task.models.empty() ? default_verify_models() : task.models) add(name, models::builtin(name));
  }

  std::vector<Assertion> out;
  const Context ctx{task, task.seeds.empty() ? std::vector<std::uint64_t>{seed} : task.seeds, threads, &out};
  for (const auto& s : selected)
    for (const auto& m : checked) suites().at(s)(ctx, m);
  return out;
}

}  // namespace pjacobi::harness
