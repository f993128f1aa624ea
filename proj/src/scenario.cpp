#include "emx/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "emx/equilibrium.hpp"
#include "emx/errors.hpp"
#include "emx/pencil.hpp"
#include "emx/sim_discrete.hpp"
#include "emx/trajectory.hpp"

namespace emx {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key))
    throw ScenarioError(ctx + " is missing field '" + key + "'");
  return j.at(key);
}

double need_num(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number()) throw ScenarioError(ctx + "." + key + " must be a number");
  return v.get<double>();
}

double opt_num(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return j.at(key).get<double>();
}

Index need_int(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number_integer()) throw ScenarioError(ctx + "." + key + " must be an integer");
  return v.get<Index>();
}

std::string need_str(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) throw ScenarioError(ctx + "." + key + " must be a string");
  return v.get<std::string>();
}

Vec to_vec(const json& v, const std::string& ctx) {
  if (!v.is_array()) throw ScenarioError(ctx + " must be an array of numbers");
  Vec out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const json& e : v) {
    if (!e.is_number()) throw ScenarioError(ctx + " must contain only numbers");
    out[i++] = e.get<double>();
  }
  return out;
}

Vec need_vec(const json& j, const char* key, const std::string& ctx) {
  return to_vec(need(j, key, ctx), ctx + "." + key);
}

Mat need_mat(const json& j, const char* key, Index rows, Index cols,
             const std::string& ctx) {
  const json& v = need(j, key, ctx);
  const std::string here = ctx + "." + key;
  if (!v.is_array() || static_cast<Index>(v.size()) != rows)
    throw ScenarioError(here + " must be an array of " + std::to_string(rows) + " rows");
  Mat out(rows, cols);
  Index r = 0;
  for (const json& row : v) {
    Vec rv = to_vec(row, here);
    if (rv.size() != cols)
      throw ScenarioError(here + " rows must have " + std::to_string(cols) + " entries");
    out.row(r++) = rv.transpose();
  }
  return out;
}

json from_vec(const Vec& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json from_mat(const Mat& m) {
  json arr = json::array();
  for (Index r = 0; r < m.rows(); ++r) arr.push_back(from_vec(m.row(r).transpose()));
  return arr;
}

const std::pair<const char*, ModelFamily> kFamilies[] = {
    {"continuous", ModelFamily::Continuous},
    {"zero_imbalance", ModelFamily::ZeroImbalance},
    {"balanced_dae", ModelFamily::BalancedDae},
    {"discrete", ModelFamily::Discrete},
    {"discrete_memory", ModelFamily::DiscreteMemory},
    {"delay", ModelFamily::Delay},
    {"fractional", ModelFamily::Fractional},
    {"dispatch", ModelFamily::Dispatch},
};

const std::pair<const char*, OutputKind> kOutputs[] = {
    {"trajectory", OutputKind::Trajectory},
    {"spectrum", OutputKind::Spectrum},
    {"equilibrium", OutputKind::Equilibrium},
    {"dispatch", OutputKind::Dispatch},
};

ModelFamily family_from_string(const std::string& s, const std::string& ctx) {
  for (const auto& [name, fam] : kFamilies)
    if (s == name) return fam;
  std::ostringstream os;
  os << ctx << ": unknown model '" << s << "'; expected one of";
  for (const auto& [name, fam] : kFamilies) os << " " << name;
  throw ScenarioError(os.str());
}

OutputKind output_from_string(const std::string& s, const std::string& ctx) {
  for (const auto& [name, kind] : kOutputs)
    if (s == name) return kind;
  throw ScenarioError(ctx + ": unknown output kind '" + s + "'");
}

MarketParams parse_params(const json& j, const std::string& ctx) {
  MarketParams mp;
  mp.a = need_vec(j, "a", ctx);
  mp.b = need_vec(j, "b", ctx);
  mp.c = need_vec(j, "c", ctx);
  mp.d = need_vec(j, "d", ctx);
  mp.alpha = need_vec(j, "alpha", ctx);
  mp.beta = need_vec(j, "beta", ctx);
  mp.m = mp.a.size();
  mp.n = mp.c.size();
  mp.k_price = need_num(j, "k_price", ctx);
  mp.h_gain = need_num(j, "h_gain", ctx);
  mp.lambda0 = need_num(j, "lambda0", ctx);
  validate(mp);
  return mp;
}

MemorySpec parse_memory(const json& j, const MarketParams& mp, const std::string& ctx) {
  MemorySpec mem;
  mem.p = need_int(j, "p", ctx);
  if (mem.p < 0) throw ScenarioError(ctx + ".p must be >= 0");
  mem.lag_step = need_num(j, "lag_step", ctx);
  mem.w_alpha = need_mat(j, "w_alpha", mem.p + 1, mp.m, ctx);
  mem.w_beta = need_mat(j, "w_beta", mem.p + 1, mp.n, ctx);
  mem.w_k = need_vec(j, "w_k", ctx);
  mem.w_h = need_vec(j, "w_h", ctx);
  validate(mp, mem);
  return mem;
}

FractionalSpec parse_fractional(const json& j, const MarketParams& mp,
                                const std::filesystem::path& base_dir,
                                const std::string& ctx, Scenario& sc) {
  FractionalSpec fs;
  fs.ord_alpha = need_vec(j, "ord_alpha", ctx);
  fs.ord_beta = need_vec(j, "ord_beta", ctx);
  fs.ord_gamma = need_num(j, "ord_gamma", ctx);
  fs.H_d = need_num(j, "H_d", ctx);
  fs.K_E = need_num(j, "K_E", ctx);
  fs.omega_ref = need_num(j, "omega_ref", ctx);
  const json& omega = need(j, "omega_coi", ctx);
  if (omega.is_number()) {
    fs.omega_coi = PiecewiseConstantSignal(omega.get<double>());
  } else if (omega.is_string()) {
    const std::string rel = omega.get<std::string>();
    sc.omega_coi_path = rel;
    std::filesystem::path p(rel);
    if (p.is_relative()) p = base_dir / p;
    fs.omega_coi = PiecewiseConstantSignal::from_csv(p);
  } else {
    throw ScenarioError(ctx + ".omega_coi must be a number or a CSV path");
  }
  if (j.contains("history_limit")) fs.history_limit = need_int(j, "history_limit", ctx);
  validate(mp, fs);
  return fs;
}

DispatchProblem parse_dispatch(const json& j, const std::string& ctx) {
  DispatchProblem dp;
  const json& prod = need(j, "producers", ctx);
  if (!prod.is_array()) throw ScenarioError(ctx + ".producers must be an array");
  for (const json& o : prod) {
    const std::string here = ctx + ".producers";
    dp.producers.push_back(
        {need_num(o, "cost", here), need_num(o, "lo", here), need_num(o, "hi", here)});
  }
  const json& cons = need(j, "consumers", ctx);
  if (!cons.is_array()) throw ScenarioError(ctx + ".consumers must be an array");
  for (const json& b : cons) {
    const std::string here = ctx + ".consumers";
    dp.consumers.push_back(
        {need_num(b, "benefit", here), need_num(b, "lo", here), need_num(b, "hi", here)});
  }
  if (j.contains("total_demand")) dp.total_demand = j.at("total_demand").get<double>();
  return dp;
}

MarketState parse_initial(const json& j, const MarketParams& mp, const std::string& ctx) {
  MarketState st;
  st.t = opt_num(j, "t", 0.0);
  st.S = need_vec(j, "S", ctx);
  st.D = need_vec(j, "D", ctx);
  st.E = need_num(j, "E", ctx);
  st.lambda = need_num(j, "lambda", ctx);
  validate(mp, st);
  return st;
}

StepperConfig parse_stepper(const json& j, const std::string& ctx) {
  StepperConfig cfg;
  if (j.contains("method")) {
    const std::string m = need_str(j, "method", ctx);
    if (m == "euler")
      cfg.method = StepperMethod::ExplicitEuler;
    else if (m == "rk4")
      cfg.method = StepperMethod::RK4;
    else
      throw ScenarioError(ctx + ".method must be 'euler' or 'rk4'");
  }
  cfg.dt = need_num(j, "dt", ctx);
  cfg.t_end = need_num(j, "t_end", ctx);
  step_count(cfg);  // validates dt, t_end, and divisibility
  return cfg;
}

bool simulating(ModelFamily family) { return family != ModelFamily::Dispatch; }

}  // namespace

Scenario parse_scenario(const json& j, const std::filesystem::path& base_dir) {
  Scenario sc;
  sc.name = need_str(j, "name", "scenario");
  const std::string ctx = "scenario '" + sc.name + "'";
  sc.family = family_from_string(need_str(j, "model", ctx), ctx);

  try {
    if (j.contains("params")) sc.params = parse_params(j.at("params"), ctx + ".params");
    if (simulating(sc.family) && !sc.params)
      throw ScenarioError(ctx + ": model '" + to_string(sc.family) +
                          "' requires a params section");

    if (j.contains("memory")) {
      if (!sc.params) throw ScenarioError(ctx + ": memory section requires params");
      sc.memory = parse_memory(j.at("memory"), *sc.params, ctx + ".memory");
    }
    if ((sc.family == ModelFamily::DiscreteMemory || sc.family == ModelFamily::Delay) &&
        !sc.memory)
      throw ScenarioError(ctx + ": model '" + to_string(sc.family) +
                          "' requires a memory section");

    if (j.contains("fractional")) {
      if (!sc.params) throw ScenarioError(ctx + ": fractional section requires params");
      sc.fractional =
          parse_fractional(j.at("fractional"), *sc.params, base_dir, ctx + ".fractional", sc);
    }
    if (sc.family == ModelFamily::Fractional && !sc.fractional)
      throw ScenarioError(ctx + ": model 'fractional' requires a fractional section");

    if (j.contains("dispatch")) sc.dispatch = parse_dispatch(j.at("dispatch"), ctx + ".dispatch");
    if (sc.family == ModelFamily::Dispatch && !sc.dispatch)
      throw ScenarioError(ctx + ": model 'dispatch' requires a dispatch section");

    if (simulating(sc.family)) {
      const json& init = need(j, "initial", ctx);
      if (init.is_string()) {
        if (init.get<std::string>() != "equilibrium")
          throw ScenarioError(ctx + ".initial must be a state object or 'equilibrium'");
        sc.initial_is_equilibrium = true;
      } else {
        sc.initial = parse_initial(init, *sc.params, ctx + ".initial");
      }

      sc.stepper = parse_stepper(need(j, "stepper", ctx), ctx + ".stepper");
      if (sc.family == ModelFamily::DiscreteMemory &&
          std::abs(sc.stepper->dt - sc.memory->lag_step) > 1e-12 * sc.memory->lag_step)
        throw ScenarioError(ctx + ": discrete_memory requires stepper.dt == memory.lag_step");
    }

    if (j.contains("outputs")) {
      const json& outs = j.at("outputs");
      if (!outs.is_array()) throw ScenarioError(ctx + ".outputs must be an array");
      for (const json& o : outs) {
        if (!o.is_string()) throw ScenarioError(ctx + ".outputs must contain strings");
        sc.outputs.push_back(output_from_string(o.get<std::string>(), ctx + ".outputs"));
      }
    } else {
      sc.outputs.push_back(sc.family == ModelFamily::Dispatch ? OutputKind::Dispatch
                                                              : OutputKind::Trajectory);
    }

    if (sc.initial_is_equilibrium) resolve_initial(sc);  // surfaces a non-unique status now
  } catch (const ValidationError& e) {
    throw ScenarioError(ctx + ": " + e.what());
  }
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario parse error in " + path.string() + ": " + e.what());
  }
  return parse_scenario(j, path.parent_path());
}

nlohmann::json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["model"] = to_string(sc.family);
  if (sc.params) {
    const MarketParams& mp = *sc.params;
    json p;
    p["a"] = from_vec(mp.a);
    p["b"] = from_vec(mp.b);
    p["c"] = from_vec(mp.c);
    p["d"] = from_vec(mp.d);
    p["alpha"] = from_vec(mp.alpha);
    p["beta"] = from_vec(mp.beta);
    p["k_price"] = mp.k_price;
    p["h_gain"] = mp.h_gain;
    p["lambda0"] = mp.lambda0;
    j["params"] = std::move(p);
  }
  if (sc.memory) {
    json m;
    m["p"] = sc.memory->p;
    m["lag_step"] = sc.memory->lag_step;
    m["w_alpha"] = from_mat(sc.memory->w_alpha);
    m["w_beta"] = from_mat(sc.memory->w_beta);
    m["w_k"] = from_vec(sc.memory->w_k);
    m["w_h"] = from_vec(sc.memory->w_h);
    j["memory"] = std::move(m);
  }
  if (sc.fractional) {
    const FractionalSpec& fs = *sc.fractional;
    json f;
    f["ord_alpha"] = from_vec(fs.ord_alpha);
    f["ord_beta"] = from_vec(fs.ord_beta);
    f["ord_gamma"] = fs.ord_gamma;
    f["H_d"] = fs.H_d;
    f["K_E"] = fs.K_E;
    f["omega_ref"] = fs.omega_ref;
    if (sc.omega_coi_path) {
      f["omega_coi"] = *sc.omega_coi_path;
    } else if (fs.omega_coi.is_constant() && !fs.omega_coi.values().empty()) {
      f["omega_coi"] = fs.omega_coi.values().front();
    } else {
      throw ScenarioError("cannot serialize a non-constant omega_coi without its path");
    }
    if (fs.history_limit != 0) f["history_limit"] = fs.history_limit;
    j["fractional"] = std::move(f);
  }
  if (sc.dispatch) {
    json d;
    d["producers"] = json::array();
    for (const Offer& o : sc.dispatch->producers)
      d["producers"].push_back({{"cost", o.cost}, {"lo", o.lo}, {"hi", o.hi}});
    d["consumers"] = json::array();
    for (const Bid& b : sc.dispatch->consumers)
      d["consumers"].push_back({{"benefit", b.benefit}, {"lo", b.lo}, {"hi", b.hi}});
    if (sc.dispatch->total_demand) d["total_demand"] = *sc.dispatch->total_demand;
    j["dispatch"] = std::move(d);
  }
  if (sc.initial_is_equilibrium) {
    j["initial"] = "equilibrium";
  } else if (sc.initial) {
    json s;
    s["t"] = sc.initial->t;
    s["S"] = from_vec(sc.initial->S);
    s["D"] = from_vec(sc.initial->D);
    s["E"] = sc.initial->E;
    s["lambda"] = sc.initial->lambda;
    j["initial"] = std::move(s);
  }
  if (sc.stepper) {
    json s;
    s["method"] = sc.stepper->method == StepperMethod::ExplicitEuler ? "euler" : "rk4";
    s["dt"] = sc.stepper->dt;
    s["t_end"] = sc.stepper->t_end;
    j["stepper"] = std::move(s);
  }
  j["outputs"] = json::array();
  for (OutputKind k : sc.outputs) j["outputs"].push_back(to_string(k));
  return j;
}

SystemVariant default_variant(ModelFamily family) {
  return family == ModelFamily::BalancedDae ? SystemVariant::BalancedDae
                                            : SystemVariant::FullSlopedJacobian;
}

namespace {

// Equilibrium used for both the JSON artifact and initial = "equilibrium":
// closed form when every slope is positive, otherwise the rank-revealing
// solve on the family's default linear system.  E is placed at the fixed
// point of the price equation, which the full-variant solve also yields.
EquilibriumResult scenario_equilibrium(const MarketParams& mp, SystemVariant variant) {
  if (is_constant_cost(mp) || (mp.b.minCoeff() <= 0.0 || mp.d.minCoeff() <= 0.0))
    return equilibrium_solve(assemble_linear_system(mp, variant));
  EquilibriumResult eq = equilibrium_sloped(mp);
  if (mp.k_price > 0.0)
    eq.E = mp.h_gain / mp.k_price * (mp.lambda0 - eq.lambda);
  const LinearSystem sys = assemble_linear_system(mp, variant);
  Vec x(sys.dim());
  if (sys.variant == SystemVariant::BalancedDae) {
    eq.E = 0.0;
    x << eq.S, eq.D, eq.lambda;
  } else {
    x << eq.S, eq.D, eq.E, eq.lambda;
  }
  eq.residual_norm = residual(sys, x);
  return eq;
}

}  // namespace

MarketState resolve_initial(const Scenario& sc) {
  if (!sc.params) throw ScenarioError("scenario '" + sc.name + "' has no params");
  if (!sc.initial_is_equilibrium) {
    if (!sc.initial) throw ScenarioError("scenario '" + sc.name + "' has no initial state");
    return *sc.initial;
  }
  const EquilibriumResult eq = scenario_equilibrium(*sc.params, default_variant(sc.family));
  if (eq.status != EquilibriumStatus::Unique)
    throw ScenarioError("scenario '" + sc.name +
                        "': initial = \"equilibrium\" needs a unique equilibrium, got status " +
                        to_string(eq.status));
  MarketState st;
  st.t = 0.0;
  st.S = eq.S;
  st.D = eq.D;
  st.E = eq.E;
  st.lambda = eq.lambda;
  return st;
}

namespace {

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot open output file: " + path.string());
  out << j.dump(2) << '\n';
}

json equilibrium_to_json(const EquilibriumResult& eq) {
  json j;
  j["status"] = to_string(eq.status);
  j["S"] = from_vec(eq.S);
  j["D"] = from_vec(eq.D);
  j["E"] = eq.E;
  j["lambda"] = eq.lambda;
  j["residual_norm"] = eq.residual_norm;
  return j;
}

Trajectory simulate_family(const Scenario& sc) {
  const MarketParams& mp = *sc.params;
  const MarketState x0 = resolve_initial(sc);
  const StepperConfig& cfg = *sc.stepper;
  switch (sc.family) {
    case ModelFamily::Continuous:
      return simulate_ode(mp, x0, cfg);
    case ModelFamily::ZeroImbalance:
      return simulate_zero_imbalance(mp, x0, cfg).traj;
    case ModelFamily::BalancedDae:
      return simulate_dae_balanced(mp, x0, cfg);
    case ModelFamily::Discrete:
      return simulate_discrete(mp, x0, cfg.dt, step_count(cfg));
    case ModelFamily::DiscreteMemory:
      return simulate_discrete_memory(mp, *sc.memory, x0, step_count(cfg));
    case ModelFamily::Delay: {
      const HistoryBuffer hist =
          HistoryBuffer::constant(x0, sc.memory->lag_step, sc.memory->p + 1);
      return simulate_delay(mp, *sc.memory, hist, cfg);
    }
    case ModelFamily::Fractional:
      return simulate_fractional(mp, *sc.fractional, x0, cfg);
    case ModelFamily::Dispatch:
      break;
  }
  throw ScenarioError("scenario '" + sc.name + "' has nothing to simulate");
}

json dispatch_artifact(const Scenario& sc) {
  if (!sc.dispatch)
    throw ScenarioError("scenario '" + sc.name + "' has no dispatch section");
  const DispatchResult res = sc.dispatch->total_demand
                                 ? min_cost_dispatch(*sc.dispatch, *sc.dispatch->total_demand)
                                 : clear_market(*sc.dispatch);
  return dispatch_to_json(res);
}

}  // namespace

std::vector<std::filesystem::path> run_scenario(const Scenario& sc,
                                                const std::filesystem::path& out_dir,
                                                RunKind kind,
                                                std::optional<SystemVariant> variant_override) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  const SystemVariant variant = variant_override.value_or(default_variant(sc.family));

  auto emit_spectrum = [&]() {
    if (!sc.params) throw ScenarioError("scenario '" + sc.name + "' has no params");
    const LinearSystem sys = assemble_linear_system(*sc.params, variant);
    const SpectrumReport report = generalized_eigenvalues(sys.E, sys.A);
    const auto path = out_dir / (sc.name + "_spectrum.json");
    write_json_file(path, spectrum_to_json(report));
    written.push_back(path);
  };
  auto emit_equilibrium = [&]() {
    if (!sc.params) throw ScenarioError("scenario '" + sc.name + "' has no params");
    const auto path = out_dir / (sc.name + "_equilibrium.json");
    write_json_file(path, equilibrium_to_json(scenario_equilibrium(*sc.params, variant)));
    written.push_back(path);
  };
  auto emit_dispatch = [&]() {
    const auto path = out_dir / (sc.name + "_dispatch.json");
    write_json_file(path, dispatch_artifact(sc));
    written.push_back(path);
  };

  switch (kind) {
    case RunKind::Simulate: {
      std::optional<Trajectory> traj;
      for (OutputKind out : sc.outputs) {
        switch (out) {
          case OutputKind::Trajectory: {
            if (!traj) traj = simulate_family(sc);
            const auto path = out_dir / (sc.name + "_trajectory.csv");
            write_csv(*traj, path);
            written.push_back(path);
            break;
          }
          case OutputKind::Spectrum:
            emit_spectrum();
            break;
          case OutputKind::Equilibrium:
            emit_equilibrium();
            break;
          case OutputKind::Dispatch:
            emit_dispatch();
            break;
        }
      }
      break;
    }
    case RunKind::Stability:
      emit_spectrum();
      break;
    case RunKind::Equilibrium:
      emit_equilibrium();
      break;
    case RunKind::Dispatch:
      emit_dispatch();
      break;
  }
  return written;
}

std::string to_string(ModelFamily family) {
  for (const auto& [name, fam] : kFamilies)
    if (fam == family) return name;
  return "unknown";
}

std::string to_string(OutputKind kind) {
  for (const auto& [name, k] : kOutputs)
    if (k == kind) return name;
  return "unknown";
}

}  // namespace emx
