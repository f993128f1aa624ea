#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emx/dispatch.hpp"
#include "emx/linear_system.hpp"
#include "emx/params.hpp"
#include "emx/sim_continuous.hpp"
#include "emx/sim_fractional.hpp"

namespace emx {

enum class ModelFamily {
  Continuous,
  ZeroImbalance,
  BalancedDae,
  Discrete,
  DiscreteMemory,
  Delay,
  Fractional,
  Dispatch,
};

enum class OutputKind { Trajectory, Spectrum, Equilibrium, Dispatch };

/// A self-contained run description, loaded from JSON.  Sections mirror the
/// C++ types field-for-field in snake_case; which sections are required
/// depends on the model family (memory for delay and discrete_memory,
/// fractional for fractional, dispatch for dispatch, params and stepper for
/// everything that simulates).
struct Scenario {
  std::string name;
  ModelFamily family = ModelFamily::Continuous;
  std::optional<MarketParams> params;
  std::optional<MemorySpec> memory;
  std::optional<FractionalSpec> fractional;
  std::optional<std::string> omega_coi_path;  // as written in the file, if a path
  std::optional<DispatchProblem> dispatch;
  /// "initial": either an explicit state or the string "equilibrium", which
  /// resolves to the model's unique equilibrium (an error when it is not
  /// unique).
  bool initial_is_equilibrium = false;
  std::optional<MarketState> initial;
  std::optional<StepperConfig> stepper;
  std::vector<OutputKind> outputs;
};

/// Parses and validates a scenario file.  Malformed JSON or missing sections
/// raise ScenarioError naming the problem; relative resource paths (such as
/// an omega_coi CSV) resolve against the scenario file's directory.
Scenario parse_scenario(const std::filesystem::path& path);

/// Same, from an in-memory document; base_dir anchors relative paths.
Scenario parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir);

nlohmann::json scenario_to_json(const Scenario& sc);

enum class RunKind { Simulate, Stability, Equilibrium, Dispatch };

/// Pencil variant used for a family's stability report unless overridden.
SystemVariant default_variant(ModelFamily family);

/// Resolves the scenario's initial state, computing the equilibrium when
/// requested (E is then set to the fixed point of the price equation).
MarketState resolve_initial(const Scenario& sc);

/// Executes one subcommand worth of work and writes the produced artifacts
/// (<name>_trajectory.csv, <name>_spectrum.json, <name>_equilibrium.json,
/// <name>_dispatch.json) into out_dir.  Simulate honors the scenario's
/// outputs list; the other kinds produce their single artifact.  Returns the
/// written paths.  Outputs are deterministic: identical scenarios yield
/// byte-identical files.
std::vector<std::filesystem::path> run_scenario(
    const Scenario& sc, const std::filesystem::path& out_dir, RunKind kind,
    std::optional<SystemVariant> variant_override = std::nullopt);

std::string to_string(ModelFamily family);
std::string to_string(OutputKind kind);

}  // namespace emx
