#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pjacobi/bands.hpp"
#include "pjacobi/dynamics.hpp"
#include "pjacobi/floquet.hpp"
#include "pjacobi/models.hpp"
#include "pjacobi/random.hpp"
#include "pjacobi/velocity.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace pjacobi;

namespace {

PeriodicJacobiOperator make(const std::string& name) { return PeriodicJacobiOperator::create(models::builtin(name)); }

struct Check {
  std::string what;
  bool ok;
};

struct Outcome {
  std::vector<Check> checks;
  void le(const std::string& what, double measured, double limit) {
    checks.push_back({what + " = " + fmt(measured) + " (<= " + fmt(limit) + ")", measured <= limit});
  }
  void ge(const std::string& what, double measured, double limit) {
    checks.push_back({what + " = " + fmt(measured) + " (>= " + fmt(limit) + ")", measured >= limit});
  }
  void within(const std::string& what, double measured, double lo, double hi) {
    checks.push_back(
        {what + " = " + fmt(measured) + " (in [" + fmt(lo) + ", " + fmt(hi) + "])", measured >= lo && measured <= hi});
  }
  void truth(const std::string& what, bool ok) { checks.push_back({what, ok}); }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
};

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Outcome block_diagonalization() {
  Outcome o;
  const std::vector<std::pair<std::string, std::vector<std::int64_t>>> cases{
      {"free1d", {8}}, {"ssh(1,2)", {8}}, {"random_periodic(1,[3])", {8}}, {"random_periodic(2,[2,2])", {4, 4}}};
  for (const auto& [name, cells] : cases) {
    const auto op = make(name);
    const auto d = verify_block_diagonalization(op, cells, 4, 1);
    o.le(name + " J defect", d.hamiltonian, 1e-10);
    for (std::size_t k = 0; k < d.velocity.size(); ++k)
      o.le(name + " P_" + std::to_string(k + 1) + " defect", d.velocity[k], 1e-10);
  }
  return o;
}

Outcome floquet_unitarity() {
  Outcome o;
  double norm = 0.0, round_trip = 0.0;
  for (const auto& [name, cells] : std::vector<std::pair<std::string, std::vector<std::int64_t>>>{
           {"ssh(1,2)", {8}}, {"random_periodic(2,[2,2])", {4, 4}}}) {
    const auto op = make(name);
    const auto g = Geometry::torus(cells, op.period());
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const auto psi = oracle::random_full_state(g, s);
      const auto f = floquet_transform(psi);
      norm = std::max(norm, std::abs(f.norm() - psi.norm()));
      round_trip = std::max(round_trip, (inverse_floquet_transform(f).amplitudes - psi.amplitudes).norm());
    }
  }
  o.le("| |F psi| - |psi| |", norm, 1e-12);
  o.le("|F^-1 F psi - psi|", round_trip, 1e-12);
  return o;
}

double gauge_defect(const PeriodicJacobiOperator& op, const Quasimomentum& theta, int axis, double h) {
  auto plus = theta, minus = theta;
  plus[axis - 1] += h;
  minus[axis - 1] -= h;
  const double q = static_cast<double>(op.period()[axis - 1]);
  const ComplexMatrix fd = (gauged_fiber(op, plus, axis).hamiltonian - gauged_fiber(op, minus, axis).hamiltonian) *
                           (q / (oracle::kTwoPi * 2.0 * h));
  return max_abs(gauged_fiber(op, theta, axis).velocity - fd);
}

Outcome gauge_identity() {
  Outcome o;
  for (const std::string name : {"ssh(1,2)", "random_periodic(1,[3])"}) {
    const auto op = make(name);
    PortableRng rng(11);
    double coarse = 0.0, fine = 0.0;
    for (int i = 0; i < 32; ++i) {
      const Quasimomentum theta{rng.uniform()};
      coarse = std::max(coarse, gauge_defect(op, theta, 1, 1e-3));
      fine = std::max(fine, gauge_defect(op, theta, 1, 5e-4));
    }
    o.within(name + " ratio", coarse / fine, 3.5, 4.5);
    o.le(name + " defect at h=5e-4", fine, 1e-5);
  }
  return o;
}

// Ordered bands from the independent real-embedding eigensolver.
std::vector<double> ordered_bands(const PeriodicJacobiOperator& op, const Quasimomentum& theta) {
  return oracle::eigenvalues_by_real_embedding(fiber_hamiltonian(op, theta).matrix);
}

Outcome hellmann_feynman() {
  Outcome o;
  for (const auto& [name, res] : std::vector<std::pair<std::string, std::vector<std::int64_t>>>{
           {"ssh(1,2)", {64}}, {"random_periodic(2,[2,2])", {12, 12}}}) {
    const auto op = make(name);
    const auto bands = compute_bands(op, res);
    const double h = 1e-4;
    for (int k = 1; k <= op.dim(); ++k) {
      double worst = 0.0;
      std::size_t used = 0;
      for (std::size_t n = 0; n < bands.grid.size(); ++n) {
        const auto theta = bands.grid.theta(n);
        const auto& e = bands.fibers[n].values;
        auto plus = theta, minus = theta;
        plus[k - 1] += h;
        minus[k - 1] -= h;
        const auto ep = ordered_bands(op, plus), em = ordered_bands(op, minus);
        for (Eigen::Index j = 0; j < e.size(); ++j) {
          const double below = j > 0 ? e[j] - e[j - 1] : INFINITY;
          const double above = j + 1 < e.size() ? e[j + 1] - e[j] : INFINITY;
          if (std::min(below, above) <= 1e-4) continue;
          const double fd = static_cast<double>(op.period()[k - 1]) / oracle::kTwoPi *
                            (ep[static_cast<std::size_t>(j)] - em[static_cast<std::size_t>(j)]) / (2.0 * h);
          worst = std::max(worst, std::abs(bands.velocities[bands.axis_slot(k)][n].values[j] - fd));
          ++used;
        }
      }
      o.le(name + " axis " + std::to_string(k) + " (" + std::to_string(used) + " levels)", worst, 1e-6);
    }
  }
  return o;
}

Outcome closed_form_spectrum() {
  Outcome o;
  const auto free = spectrum_intervals(compute_bands(make("free1d"), {256})).union_;
  o.truth("free1d is one interval", free.size() == 1);
  if (free.size() == 1) o.le("free1d endpoint error", std::max(std::abs(free[0].lo + 2), std::abs(free[0].hi - 2)), 1e-8);

  const auto ssh = spectrum_intervals(compute_bands(make("ssh(1,2)"), {256})).union_;
  o.truth("ssh(1,2) has two intervals", ssh.size() == 2);
  if (ssh.size() == 2) {
    const double lo = oracle::ssh_upper_band(1, 2, 0.5), hi = oracle::ssh_upper_band(1, 2, 0.0);
    const double err = std::max({std::abs(ssh[0].lo + hi), std::abs(ssh[0].hi + lo), std::abs(ssh[1].lo - lo),
                                 std::abs(ssh[1].hi - hi), std::abs(lo - 1.0), std::abs(hi - 3.0)});
    o.le("ssh(1,2) endpoint error", err, 1e-8);
  }

  for (const auto& [name, cells] : std::vector<std::pair<std::string, std::vector<std::int64_t>>>{
           {"free1d", {8}}, {"ssh(1,2)", {8}}, {"random_periodic(1,[3])", {8}}, {"random_periodic(2,[2,2])", {4, 4}}}) {
    const auto op = make(name);
    const auto torus = oracle::eigenvalues_by_real_embedding(torus_matrix(op, cells));
    std::vector<double> fibers;
    for (const auto& f : compute_bands(op, cells).fibers) fibers.insert(fibers.end(), f.values.begin(), f.values.end());
    std::sort(fibers.begin(), fibers.end());
    double err = fibers.size() == torus.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(fibers.size(), torus.size()); ++i)
      err = std::max(err, std::abs(fibers[i] - torus[i]));
    o.le(name + " torus vs fiber multiset", err, 1e-10);
  }
  return o;
}

Outcome free_ballistics() {
  Outcome o;
  const auto op = make("free1d");
  const double t = 20.0;
  const auto plan = EvolutionPlan::box(op, {128});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  o.le("|<X^2>(t) - 2t^2|", std::abs(position_moments(plan.evolve(psi, t), 1).second - 2.0 * t * t), 1e-6);

  // For the free chain Q = P, and P delta_0 = i delta_{-1} - i delta_{1}.
  LatticeState q(plan.geometry());
  q.at(Site{-1}) = Complex(0, 1);
  q.at(Site{1}) = Complex(0, -1);
  const auto x = heisenberg_position_apply(plan, psi, 1, t);
  o.le("|(X(t)/t) psi - Q psi| vs hand-built Q psi", (x.state.amplitudes - q.amplitudes).norm(), 1e-8);
  const auto report = ballistic_report(op, psi, 1, {t}, {257}, plan);
  o.le("|(X(t)/t) psi - Q psi| via band Q", report.rows.front().strong_error, 1e-8);
  return o;
}

Outcome q_moments_check() {
  Outcome o;
  const auto av1 = AsymptoticVelocity::build(make("free1d"), {16});
  const auto m1 = q_moments(av1, LatticeState::delta(av1.torus(), Site{0}), 1);
  o.le("free1d |<Q>|", std::abs(m1.mean), 1e-10);
  o.le("free1d |<Q^2> - 2|", std::abs(m1.second - 2.0), 1e-10);
  const auto av2 = AsymptoticVelocity::build(make("free2d"), {8, 8});
  for (int k : {1, 2}) {
    const auto m = q_moments(av2, LatticeState::delta(av2.torus(), Site{0, 0}), k);
    o.le("free2d axis " + std::to_string(k) + " |<Q^2> - 2|", std::abs(m.second - 2.0), 1e-10);
  }
  return o;
}

Outcome ballistic_convergence() {
  Outcome o;
  const auto op = make("ssh(1,2)");
  const std::vector<double> times{25, 50, 100};
  const auto radius = recommended_box_radius(op, 0, times.back());
  const auto plan = EvolutionPlan::box(op, {radius});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  const auto report = ballistic_report(op, psi, 1, times, {512}, plan);
  const auto& r = report.rows;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const auto label = "strong error ratio t=" + Outcome::fmt(r[i].t) + "/" + Outcome::fmt(r[i - 1].t) + " (" +
                       Outcome::fmt(r[i].strong_error) + "/" + Outcome::fmt(r[i - 1].strong_error) + ")";
    o.within(label, r[i].strong_error / r[i - 1].strong_error, 0.3, 0.7);
  }
  o.le("|<X>(100)/100 - <Q>| (box radius " + std::to_string(radius) + ")", r.back().mean_error, 1e-3);
  return o;
}

Outcome integral_identity() {
  Outcome o;
  const auto op = make("random_periodic(1,[3])");
  const double t = 10.0;
  const auto plan = EvolutionPlan::box(op, {recommended_box_radius(op, 0, t)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  const double exact = position_moments(plan.evolve(psi, t), 1).mean;
  auto defect = [&](double h) { return std::abs(integrated_position_trace(op, plan, psi, 1, {t}, h)[0] - exact); };
  const double d1 = defect(0.05), d2 = defect(0.025), d3 = defect(0.0125);
  o.le("defect at h=0.025", d2, 1e-8);
  o.ge("order 0.05 -> 0.025", std::log2(d1 / d2), 3.7);
  o.ge("order 0.025 -> 0.0125", std::log2(d2 / d3), 3.7);
  return o;
}

Outcome norm_bound() {
  Outcome o;
  for (const std::string name :
       {"free1d", "free2d", "ssh(1,2)", "random_periodic(1,[3])", "random_periodic(2,[2,2])"}) {
    const auto op = make(name);
    PortableRng rng(3);
    double worst = 0.0;
    for (int i = 0; i < 101; ++i) {
      Quasimomentum theta(static_cast<std::size_t>(op.dim()));
      for (auto& x : theta) x = rng.uniform();
      for (int k = 1; k <= op.dim(); ++k) {
        const auto ev = oracle::eigenvalues_by_real_embedding(fiber_velocity(op, theta, k).matrix);
        worst = std::max(worst, std::max(std::abs(ev.front()), std::abs(ev.back())) / (2.0 * op.max_hopping()));
      }
    }
    o.le(name + " max |P_k(theta)| / 2max|a|", worst, 1.0 + 1e-12);
  }
  return o;
}

Outcome kernel_witness() {
  Outcome o;
  for (const std::string name : {"free1d", "ssh(1,2)"}) {
    const auto bands = compute_bands(make(name), {4096});
    const double f1 = kernel_mass_estimate(bands, 1, 1e-1);
    const double f3 = kernel_mass_estimate(bands, 1, 1e-3);
    const double f6 = kernel_mass_estimate(bands, 1, 1e-6);
    o.le(name + " fraction(1e-3)", f3, 1e-2);
    o.le(name + " fraction(1e-6)", f6, 1e-3);
    o.truth(name + " fraction decreasing in eps (" + Outcome::fmt(f1) + ", " + Outcome::fmt(f3) + ", " +
                Outcome::fmt(f6) + ")",
            f6 <= f3 && f3 <= f1);
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

Outcome determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / ("pjacobi_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<fs::path> dirs{root / "a", root / "b"};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const std::string cmd = std::string("\"") + PJACOBI_CLI + "\" verify --seed 1 --threads " +
                            std::to_string(i + 1) + " --out \"" + dirs[i].string() + "\" > /dev/null";
    o.truth("verify run " + std::to_string(i + 1) + " exits 0", std::system(cmd.c_str()) == 0);
  }
  std::size_t files = 0;
  bool same = fs::exists(dirs[0]);
  if (same)
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      ++files;
      const auto other = dirs[1] / entry.path().filename();
      same = same && fs::exists(other) && slurp(entry.path()) == slurp(other);
    }
  same = same && fs::exists(dirs[1]) &&
         static_cast<std::size_t>(std::distance(fs::directory_iterator(dirs[1]), fs::directory_iterator{})) == files;
  o.truth(std::to_string(files) + " output files byte-identical", same && files > 0);
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"block diagonalization", block_diagonalization},
      {"Floquet unitarity", floquet_unitarity},
      {"gauge derivative identity", gauge_identity},
      {"Hellmann-Feynman vs finite differences", hellmann_feynman},
      {"closed-form spectrum", closed_form_spectrum},
      {"exact free ballistics", free_ballistics},
      {"Q moments", q_moments_check},
      {"ballistic convergence", ballistic_convergence},
      {"integral identity", integral_identity},
      {"norm bound", norm_bound},
      {"kernel triviality witness", kernel_witness},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  int failed = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << id << "\n";
      return 2;
    }
    const auto& [name, fn] = criteria[static_cast<std::size_t>(id - 1)];
    Outcome out;
    std::string error;
    try {
      out = fn();
    } catch (const std::exception& e) {
      error = e.what();
    }
    bool ok = error.empty() && !out.checks.empty();
    for (const auto& c : out.checks) ok = ok && c.ok;
    std::cout << (ok ? "PASS " : "FAIL ") << id << " " << name << "\n";
    for (const auto& c : out.checks) std::cout << "    " << (c.ok ? "ok   " : "FAIL ") << c.what << "\n";
    if (!error.empty()) std::cout << "    error: " << error << "\n";
    if (!ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
