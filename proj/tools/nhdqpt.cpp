#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nhdqpt/config.hpp"
#include "nhdqpt/errors.hpp"
#include "nhdqpt/io.hpp"
#include "nhdqpt/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDomain = 2;

struct Flags {
  std::string config;
  std::string out;
  std::optional<int> workers;
  std::optional<long long> seed;
};

int execute(nhdqpt::Task task, const Flags& flags) {
  std::string text;
  try {
    text = nhdqpt::read_text(flags.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  auto parsed = nhdqpt::parse_config(text, task);
  if (!parsed.ok()) {
    for (const auto& issue : parsed.issues) std::cerr << flags.config << ": " << issue.str() << '\n';
    return kExitConfig;
  }
  auto cfg = *parsed.config;
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (flags.workers) {
    if (*flags.workers < 1) {
      std::cerr << "error: --workers must be at least 1\n";
      return kExitConfig;
    }
    cfg.workers = *flags.workers;
  }
  if (flags.seed) {
    if (*flags.seed < 0) {
      std::cerr << "error: --seed must be non-negative\n";
      return kExitConfig;
    }
    cfg.seed = static_cast<std::uint64_t>(*flags.seed);
  }

  try {
    const auto man = nhdqpt::run(cfg);
    std::cout << nhdqpt::task_name(task) << ": wrote " << man.outputs.size() << " file(s) to "
              << cfg.output_dir << " in " << man.wall_clock_seconds << " s\n";
    std::cout << man.summary.dump() << '\n';
    return kExitOk;
  } catch (const nhdqpt::DomainError& e) {
    std::cerr << "numerical-domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const nhdqpt::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian topology and dynamical quantum phase transitions"};
  app.set_version_flag("--version", std::string(nhdqpt::kToolVersion));
  bool schema = false;
  app.add_flag("--print-schema", schema, "Print every configuration key with its default");

  Flags flags;
  std::optional<nhdqpt::Task> chosen;
  const std::pair<nhdqpt::Task, const char*> tasks[] = {
      {nhdqpt::Task::spectrum, "Bloch spectrum, gap closings, winding number and symmetries"},
      {nhdqpt::Task::phase_diagram, "Winding number over a two-parameter grid"},
      {nhdqpt::Task::quench, "Rate function g(t), critical times and detected cusps"},
      {nhdqpt::Task::dtop, "Dynamical topological order parameter and its jumps"},
      {nhdqpt::Task::dilation_check, "Hermitian dilation versus direct evolution"},
      {nhdqpt::Task::report, "Winding number and critical set against the phase table"},
  };
  for (const auto& [task, help] : tasks) {
    auto* sub = app.add_subcommand(std::string(nhdqpt::task_name(task)), help);
    sub->add_option("--config", flags.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory (overrides run.output)");
    sub->add_option("--workers", flags.workers, "Worker threads (overrides run.workers)");
    sub->add_option("--seed", flags.seed, "Seed for randomly drawn momenta (overrides run.seed)");
    sub->callback([&chosen, task = task] { chosen = task; });
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (schema) {
    std::cout << nhdqpt::config_schema();
    return kExitOk;
  }
  if (!chosen) {
    std::cerr << app.help();
    return kExitConfig;
  }
  return execute(*chosen, flags);
}
