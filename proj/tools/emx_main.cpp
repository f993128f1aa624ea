#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "emx/errors.hpp"
#include "emx/scenario.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::vector<std::string> scenarios;
  std::string out_dir;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--scenario", opts.scenarios, "Scenario JSON file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  const char* env_dir = std::getenv("EMX_OUT_DIR");
  opts.out_dir = env_dir ? env_dir : ".";
  cmd->add_option("--out", opts.out_dir, "Output directory (default: $EMX_OUT_DIR or .)");
  cmd->add_option("--jobs", opts.jobs, "Run scenarios in parallel with this many workers")
      ->check(CLI::PositiveNumber);
}

// Runs every scenario, in parallel when asked; failures are reported per
// scenario and any failure fails the invocation.
int run_all(const CommonOpts& opts, emx::RunKind kind,
            std::optional<emx::SystemVariant> variant) {
  std::mutex io;
  std::atomic<int> failures{0};
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < opts.scenarios.size();
         i = next.fetch_add(1)) {
      const std::string& file = opts.scenarios[i];
      try {
        const emx::Scenario sc = emx::parse_scenario(file);
        const auto paths = emx::run_scenario(sc, opts.out_dir, kind, variant);
        std::lock_guard<std::mutex> lock(io);
        for (const fs::path& p : paths) std::cout << "wrote " << p.string() << "\n";
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io);
        std::cerr << "error: " << file << ": " << e.what() << "\n";
        ++failures;
      }
    }
  };

  const unsigned n = std::min<std::size_t>(opts.jobs, opts.scenarios.size());
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return failures.load() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electricity market dynamics: simulation, spectra, and dispatch"};
  app.require_subcommand(1);

  CommonOpts sim_opts, stab_opts, eq_opts, disp_opts;
  std::string variant_name;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Integrate a scenario and write its artifacts");
  add_common(simulate, sim_opts);

  CLI::App* stability =
      app.add_subcommand("stability", "Write the spectrum report of a scenario's pencil");
  add_common(stability, stab_opts);
  stability
      ->add_option("--variant", variant_name,
                   "Pencil variant: full_constant, full_sloped, or balanced_dae")
      ->check(CLI::IsMember({"full_constant", "full_sloped", "balanced_dae"}));

  CLI::App* equilibrium =
      app.add_subcommand("equilibrium", "Write the equilibrium report of a scenario");
  add_common(equilibrium, eq_opts);

  CLI::App* dispatch =
      app.add_subcommand("dispatch", "Solve a scenario's dispatch problem");
  add_common(dispatch, disp_opts);

  CLI11_PARSE(app, argc, argv);

  std::optional<emx::SystemVariant> variant;
  if (!variant_name.empty()) {
    if (variant_name == "full_constant")
      variant = emx::SystemVariant::FullConstant;
    else if (variant_name == "full_sloped")
      variant = emx::SystemVariant::FullSlopedJacobian;
    else
      variant = emx::SystemVariant::BalancedDae;
  }

  if (simulate->parsed()) return run_all(sim_opts, emx::RunKind::Simulate, std::nullopt);
  if (stability->parsed()) return run_all(stab_opts, emx::RunKind::Stability, variant);
  if (equilibrium->parsed()) return run_all(eq_opts, emx::RunKind::Equilibrium, std::nullopt);
  return run_all(disp_opts, emx::RunKind::Dispatch, std::nullopt);
}
