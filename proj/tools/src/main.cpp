#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pjacobi/harness/config.hpp"
#include "pjacobi/harness/run.hpp"

using namespace pjacobi::harness;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic Jacobi operators: bands, dynamics and asymptotic velocity"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  app.add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides the config and " + std::string(kOutDirEnv) + ")");
  app.add_option("--seed", seed, "seed for random states");
  app.add_option("--threads", threads, "worker threads; never changes results")->check(CLI::PositiveNumber);

  for (const char* name : {"bands", "evolve", "velocity", "verify"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " task");
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig config;
    if (!config_path.empty()) {
      auto parsed = parse_config(slurp(config_path));
      for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
      config = std::move(parsed.config);
    } else if (command == "verify") {
      config.task = VerifyTask{};
    } else {
      std::cerr << "error: " << command << " needs --config\n";
      return kExitConfig;
    }
    if (task_name(config.task) != command) {
      std::cerr << "error: config task is '" << task_name(config.task) << "', not '" << command << "'\n";
      return kExitConfig;
    }
    if (seed) config.seed = *seed;

    RunOptions options;
    options.threads = threads;
    options.out_dir = config.out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) options.out_dir = env;
    if (!out_dir.empty()) options.out_dir = out_dir;

    const auto report = run(config, options);
    std::size_t failed = 0;
    for (const auto& a : report.assertions) {
      if (a.pass()) continue;
      ++failed;
      std::cout << "FAIL " << a.name << " [" << a.subject << "] measured " << format_double(a.measured)
                << " threshold " << a.threshold() << "\n";
    }
    std::cout << command << ": " << report.assertions.size() - failed << "/" << report.assertions.size()
              << " assertions passed; wrote";
    for (const auto& f : report.files) std::cout << " " << (options.out_dir / f).string();
    std::printf("\nwall time %.2f s\n", report.wall_seconds);
    if (!report.resource_guard.empty()) std::cerr << "error: " << report.resource_guard << "\n";
    return report.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for_current_exception();
  }
}
