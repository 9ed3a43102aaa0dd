#include "pjacobi/harness/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pjacobi/bands.hpp"
#include "pjacobi/dynamics.hpp"
#include "pjacobi/error.hpp"
#include "pjacobi/harness/verify.hpp"
#include "pjacobi/random.hpp"
#include "pjacobi/velocity.hpp"

namespace pjacobi::harness {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string Assertion::threshold() const {
  if (std::isinf(lo) && std::isinf(hi)) return "any";
  if (std::isinf(lo)) return "<= " + format_double(hi);
  if (std::isinf(hi)) return ">= " + format_double(lo);
  return "[" + format_double(lo) + ", " + format_double(hi) + "]";
}

bool RunReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass(); });
}

namespace {

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  Csv& cell(double v) { return raw(format_double(v)); }
  Csv& cell(std::int64_t v) { return raw(std::to_string(v)); }
  Csv& blank() { return raw(""); }
  Csv& raw(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

std::vector<std::string> numbered(const std::string& stem, int d) {
  std::vector<std::string> out;
  for (int k = 1; k <= d; ++k) out.push_back(stem + std::to_string(k));
  return out;
}

std::vector<std::string> header(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

LatticeState make_state(const StateSpec& spec, const Geometry& g, std::uint64_t seed) {
  switch (spec.kind) {
    case StateSpec::Kind::kDelta:
      return LatticeState::delta(g, spec.site);
    case StateSpec::Kind::kRandom:
      return random_state(seed, g, spec.radius);
    case StateSpec::Kind::kExplicit: {
      LatticeState psi(g);
      for (const auto& [x, a] : spec.entries) psi.at(x) += a;
      const double n = psi.norm();
      if (n == 0.0) throw Error(ErrorKind::kInvalidArgument, "state has zero norm");
      psi.amplitudes /= n;
      return psi;
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown state kind");
}

std::int64_t support_radius(const StateSpec& spec) {
  if (spec.kind == StateSpec::Kind::kRandom) return spec.radius;
  std::int64_t r = 0;
  auto widen = [&](const Site& x) {
    for (auto c : x) r = std::max<std::int64_t>(r, c < 0 ? -c : c);
  };
  if (spec.kind == StateSpec::Kind::kDelta) widen(spec.site);
  for (const auto& [x, a] : spec.entries) widen(x);
  return r;
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  json results = json::object();
};

void do_bands(const BandsTask& task, const PeriodicJacobiOperator& op, int threads, RunReport& report, Outputs& out) {
  BandOptions opts;
  opts.threads = threads;
  const auto bands = compute_bands(op, task.resolution, opts);
  const int d = op.dim();
  Csv csv(header({numbered("theta_", d), {"j", "E"}, numbered("v_", d)}));
  double residual = 0.0;
  for (std::size_t n = 0; n < bands.grid.size(); ++n) {
    const auto theta = bands.grid.theta(n);
    const auto& f = bands.fibers[n];
    const ComplexMatrix j = fiber_hamiltonian(op, theta).matrix;
    residual = std::max(residual, (j * f.vectors - f.vectors * f.values.asDiagonal()).cwiseAbs().maxCoeff());
    for (Eigen::Index b = 0; b < f.values.size(); ++b) {
      for (double t : theta) csv.cell(t);
      csv.cell(static_cast<std::int64_t>(b + 1)).cell(f.values[b]);
      for (int k = 1; k <= d; ++k) csv.cell(bands.velocities[bands.axis_slot(k)][n].values[b]);
      csv.end();
    }
  }
  out.files.emplace_back("bands.csv", csv.str());

  const auto iv = spectrum_intervals(bands);
  json bands_json = json::array(), union_json = json::array();
  for (const auto& i : iv.bands) bands_json.push_back({i.lo, i.hi});
  for (const auto& i : iv.union_) union_json.push_back({i.lo, i.hi});
  out.results["band_intervals"] = bands_json;
  out.results["spectrum"] = union_json;
  out.results["degeneracy_tolerance"] = bands.degeneracy_tolerance;
  report.assertions.push_back(at_most("bands.eigen_residual", "fibers", residual, 1e-10));
}

void do_evolve(const EvolveTask& task, const PeriodicJacobiOperator& op, std::uint64_t seed, int threads,
               RunReport& report, Outputs& out) {
  const int d = op.dim();
  const auto plan = task.torus ? EvolutionPlan::torus(op, task.extent, threads) : EvolutionPlan::box(op, task.extent);
  const auto psi = make_state(task.state, plan.geometry(), seed);
  const BoundaryMonitor monitor;

  std::vector<std::vector<double>> unwrapped;
  if (task.torus)
    for (int k = 1; k <= d; ++k) unwrapped.push_back(unwrapped_position_trace(op, plan, psi, k, task.times, task.h));

  Csv csv(header({{"t"}, numbered("mean_X_", d), numbered("mean_X_over_t_", d), {"second_moment", "boundary_mass"},
                  numbered("p_expectation_", d)}));
  double drift = 0.0, worst_boundary = 0.0;
  for (std::size_t i = 0; i < task.times.size(); ++i) {
    const double t = task.times[i];
    const auto phi = plan.evolve(psi, t);
    drift = std::max(drift, std::abs(phi.norm() - psi.norm()));
    std::vector<double> mean(static_cast<std::size_t>(d));
    double second = 0.0;
    for (int k = 1; k <= d; ++k) {
      if (task.torus) {
        mean[static_cast<std::size_t>(k - 1)] = unwrapped[static_cast<std::size_t>(k - 1)][i];
      } else {
        const auto m = position_moments(phi, k);
        mean[static_cast<std::size_t>(k - 1)] = m.mean;
        second += m.second;
      }
    }
    csv.cell(t);
    for (double m : mean) csv.cell(m);
    for (double m : mean) t > 0.0 ? csv.cell(m / t) : csv.blank();
    if (task.torus) {
      csv.blank().blank();
    } else {
      const double b = boundary_fraction(phi, monitor);
      worst_boundary = std::max(worst_boundary, b);
      csv.cell(second).cell(b);
    }
    for (int k = 1; k <= d; ++k) csv.cell(velocity_expectation(op, phi, k));
    csv.end();
  }
  out.files.emplace_back("trace.csv", csv.str());
  out.results["geometry"] = task.torus ? "torus" : "box";
  out.results["sites"] = plan.geometry().size();
  report.assertions.push_back(at_most("evolve.norm_drift", "state", drift, 1e-10));
  if (!task.torus) {
    out.results["max_boundary_mass"] = worst_boundary;
    if (worst_boundary > monitor.threshold)
      report.resource_guard = "BoundaryContamination: boundary mass " + format_double(worst_boundary) +
                              " exceeds " + format_double(monitor.threshold) + "; enlarge the box";
  }
}

void do_velocity(const VelocityTask& task, const PeriodicJacobiOperator& op, std::uint64_t seed, int threads,
                 RunReport& report, Outputs& out) {
  std::vector<std::int64_t> box = task.box.value_or(std::vector<std::int64_t>(
      static_cast<std::size_t>(op.dim()), recommended_box_radius(op, support_radius(task.state), task.times.back())));
  const auto plan = EvolutionPlan::box(op, box);
  const auto psi = make_state(task.state, plan.geometry(), seed);
  BallisticOptions opts;
  opts.threads = threads;
  const auto r = ballistic_report(op, psi, task.axis, task.times, task.resolution, plan, opts);

  Csv csv({"t", "strong_error", "mean_error", "q_mean", "q_second_moment", "boundary_mass"});
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    csv.cell(row.t).cell(row.strong_error).cell(row.mean_error).cell(row.q_mean).cell(row.q_second_moment)
        .cell(row.boundary_mass);
    csv.end();
    // Rows already at round-off carry no decay information.
    if (i > 0 && r.rows[i - 1].strong_error > 1e-10)
      worst_ratio = std::max(worst_ratio, row.strong_error / r.rows[i - 1].strong_error);
  }
  out.files.emplace_back("velocity.csv", csv.str());
  out.results["box_radius"] = box;
  out.results["q_tail_mass"] = r.q_tail_mass;
  report.assertions.push_back(at_most("velocity.strong_error_ratio", "consecutive rows", worst_ratio, 1.0));
  report.assertions.push_back(at_most("velocity.q_tail_mass", "torus window", r.q_tail_mass, 1e-10));
}

void do_verify(const VerifyTask& task, const std::optional<OperatorSpec>& op, std::uint64_t seed, int threads,
               RunReport& report, Outputs& out) {
  report.assertions = run_verify(task, op, seed, threads);
  Csv csv({"name", "subject", "measured", "threshold", "verdict"});
  for (const auto& a : report.assertions) {
    csv.raw(a.name).raw("\"" + a.subject + "\"").cell(a.measured).raw(a.threshold()).raw(a.pass() ? "pass" : "fail");
    csv.end();
  }
  out.files.emplace_back("verify.csv", csv.str());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

RunReport run(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.task = std::string(task_name(config.task));
  report.config_echo = emit_config(config);
  const int threads = std::max(1, options.threads);

  Outputs out;
  std::optional<PeriodicJacobiOperator> op;
  if (config.op) op = PeriodicJacobiOperator::create(config.op->data);
  std::visit(
      [&](const auto& task) {
        using T = std::decay_t<decltype(task)>;
        if constexpr (std::is_same_v<T, BandsTask>) do_bands(task, *op, threads, report, out);
        else if constexpr (std::is_same_v<T, EvolveTask>) do_evolve(task, *op, config.seed, threads, report, out);
        else if constexpr (std::is_same_v<T, VelocityTask>) do_velocity(task, *op, config.seed, threads, report, out);
        else do_verify(task, config.op, config.seed, threads, report, out);
      },
      config.task);

  json doc;
  doc["tool"] = "pjacobi";
  doc["version"] = report.version;
  doc["task"] = report.task;
  doc["config"] = json::parse(report.config_echo);
  doc["results"] = out.results;
  json rows = json::array();
  for (const auto& a : report.assertions)
    rows.push_back({{"name", a.name},
                    {"subject", a.subject},
                    {"measured", format_double(a.measured)},
                    {"threshold", a.threshold()},
                    {"verdict", a.pass() ? "pass" : "fail"}});
  doc["assertions"] = rows;
  doc["passed"] = report.passed();
  if (!report.resource_guard.empty()) doc["resource_guard"] = report.resource_guard;
  out.files.emplace_back("report.json", doc.dump(2) + "\n");

  std::filesystem::create_directories(options.out_dir);
  for (const auto& [name, content] : out.files) {
    write_file(options.out_dir / name, content);
    report.files.push_back(name);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const SchemaError&) {
    return kExitConfig;
  } catch (const Error& e) {
    return e.is_resource_guard() ? kExitResource : kExitConfig;
  } catch (...) {
    return kExitConfig;
  }
}

}  // namespace pjacobi::harness
