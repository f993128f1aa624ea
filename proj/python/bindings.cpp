#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "emx/dispatch.hpp"
#include "emx/equilibrium.hpp"
#include "emx/errors.hpp"
#include "emx/linear_system.hpp"
#include "emx/pencil.hpp"
#include "emx/scenario.hpp"
#include "emx/sim_continuous.hpp"
#include "emx/sim_discrete.hpp"
#include "emx/sim_fractional.hpp"

namespace py = pybind11;
using namespace emx;

namespace {

// Trajectory as (times, matrix, column labels); columns follow the state
// order S_1..S_m, D_1..D_n, E, lambda.
py::dict trajectory_dict(const Trajectory& traj) {
  const Index rows = static_cast<Index>(traj.states.size());
  const Index m = rows ? traj.states.front().S.size() : 0;
  const Index n = rows ? traj.states.front().D.size() : 0;
  Vec times(rows);
  Mat data(rows, m + n + 2);
  for (Index r = 0; r < rows; ++r) {
    const MarketState& s = traj.states[static_cast<std::size_t>(r)];
    times[r] = s.t;
    data.row(r).segment(0, m) = s.S.transpose();
    data.row(r).segment(m, n) = s.D.transpose();
    data(r, m + n) = s.E;
    data(r, m + n + 1) = s.lambda;
  }
  std::vector<std::string> columns;
  for (Index i = 0; i < m; ++i) columns.push_back("S_" + std::to_string(i + 1));
  for (Index j = 0; j < n; ++j) columns.push_back("D_" + std::to_string(j + 1));
  columns.push_back("E");
  columns.push_back("lambda");
  py::dict out;
  out["t"] = times;
  out["states"] = data;
  out["columns"] = columns;
  return out;
}

py::dict spectrum_dict(const SpectrumReport& report) {
  std::vector<std::complex<double>> finite;
  for (const EigenMode& mode : report.modes)
    if (mode.kind == ModeKind::Finite) finite.push_back(mode.value);
  py::dict out;
  out["eigenvalues"] = finite;
  out["p"] = report.n_finite;
  out["q"] = report.n_infinite;
  out["char_poly"] = report.char_poly;
  out["verdict"] = to_string(report.verdict);
  out["well_damped"] = report.well_damped;
  return out;
}

SystemVariant variant_from_string(const std::string& name) {
  if (name == "full_constant") return SystemVariant::FullConstant;
  if (name == "full_sloped") return SystemVariant::FullSlopedJacobian;
  if (name == "balanced_dae") return SystemVariant::BalancedDae;
  throw ValidationError("unknown variant '" + name +
                        "'; expected full_constant, full_sloped, or balanced_dae");
}

StepperConfig make_config(double dt, double t_end, const std::string& method) {
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  if (method == "euler")
    cfg.method = StepperMethod::ExplicitEuler;
  else if (method == "rk4")
    cfg.method = StepperMethod::RK4;
  else
    throw ValidationError("method must be 'euler' or 'rk4'");
  return cfg;
}

py::dict equilibrium_dict(const EquilibriumResult& eq) {
  py::dict out;
  out["status"] = to_string(eq.status);
  out["S"] = eq.S;
  out["D"] = eq.D;
  out["E"] = eq.E;
  out["lambda"] = eq.lambda;
  out["residual_norm"] = eq.residual_norm;
  return out;
}

py::dict dispatch_dict(const DispatchResult& res) {
  py::dict out;
  out["S"] = res.S;
  out["D"] = res.D;
  out["objective"] = res.objective;
  out["price_range"] = py::make_tuple(res.price_range[0], res.price_range[1]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Electricity market dynamics: simulation, spectra, and dispatch";

  py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);
  py::register_exception<ScenarioError>(mod, "ScenarioError", PyExc_ValueError);
  py::register_exception<SimulationAbort>(mod, "SimulationAbort", PyExc_RuntimeError);

  py::class_<MarketParams>(mod, "MarketParams")
      .def(py::init([](Vec a, Vec b, Vec c, Vec d, Vec alpha, Vec beta, double k_price,
                       double h_gain, double lambda0) {
             MarketParams mp;
             mp.a = std::move(a);
             mp.b = std::move(b);
             mp.c = std::move(c);
             mp.d = std::move(d);
             mp.alpha = std::move(alpha);
             mp.beta = std::move(beta);
             mp.m = mp.a.size();
             mp.n = mp.c.size();
             mp.k_price = k_price;
             mp.h_gain = h_gain;
             mp.lambda0 = lambda0;
             validate(mp);
             return mp;
           }),
           py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("alpha"),
           py::arg("beta"), py::arg("k_price"), py::arg("h_gain"), py::arg("lambda0"))
      .def_readonly("m", &MarketParams::m)
      .def_readonly("n", &MarketParams::n)
      .def_readonly("a", &MarketParams::a)
      .def_readonly("b", &MarketParams::b)
      .def_readonly("c", &MarketParams::c)
      .def_readonly("d", &MarketParams::d)
      .def_readonly("alpha", &MarketParams::alpha)
      .def_readonly("beta", &MarketParams::beta)
      .def_readonly("k_price", &MarketParams::k_price)
      .def_readonly("h_gain", &MarketParams::h_gain)
      .def_readonly("lambda0", &MarketParams::lambda0);

  py::class_<MarketState>(mod, "MarketState")
      .def(py::init([](double t, Vec S, Vec D, double E, double lam) {
             MarketState st;
             st.t = t;
             st.S = std::move(S);
             st.D = std::move(D);
             st.E = E;
             st.lambda = lam;
             return st;
           }),
           py::arg("t"), py::arg("S"), py::arg("D"), py::arg("E"), py::arg("lambda"))
      .def_readonly("t", &MarketState::t)
      .def_readonly("S", &MarketState::S)
      .def_readonly("D", &MarketState::D)
      .def_readonly("E", &MarketState::E)
      .def_readonly("lambda_", &MarketState::lambda);

  mod.def(
      "equilibrium",
      [](const MarketParams& mp, const std::string& variant) {
        if (variant == "closed_form") return equilibrium_dict(equilibrium_sloped(mp));
        return equilibrium_dict(
            equilibrium_solve(assemble_linear_system(mp, variant_from_string(variant))));
      },
      py::arg("params"), py::arg("variant") = "closed_form",
      "Market equilibrium; variant 'closed_form' uses the sloped-model formula, the "
      "pencil variants solve the assembled linear system.");

  mod.def(
      "simulate",
      [](const MarketParams& mp, const MarketState& x0, double dt, double t_end,
         const std::string& method, const std::string& family) {
        const StepperConfig cfg = make_config(dt, t_end, method);
        if (family == "continuous") return trajectory_dict(simulate_ode(mp, x0, cfg));
        if (family == "zero_imbalance")
          return trajectory_dict(simulate_zero_imbalance(mp, x0, cfg).traj);
        if (family == "balanced_dae")
          return trajectory_dict(simulate_dae_balanced(mp, x0, cfg));
        if (family == "discrete")
          return trajectory_dict(simulate_discrete(mp, x0, dt, step_count(cfg)));
        throw ValidationError("unknown family '" + family + "'");
      },
      py::arg("params"), py::arg("x0"), py::arg("dt"), py::arg("t_end"),
      py::arg("method") = "rk4", py::arg("family") = "continuous");

  mod.def(
      "spectrum",
      [](const MarketParams& mp, const std::string& variant) {
        const LinearSystem sys = assemble_linear_system(mp, variant_from_string(variant));
        return spectrum_dict(generalized_eigenvalues(sys.E, sys.A));
      },
      py::arg("params"), py::arg("variant") = "full_sloped");

  mod.def(
      "min_cost_dispatch",
      [](const std::vector<std::tuple<double, double, double>>& producers,
         double total_demand) {
        DispatchProblem dp;
        for (const auto& [cost, lo, hi] : producers) dp.producers.push_back({cost, lo, hi});
        return dispatch_dict(min_cost_dispatch(dp, total_demand));
      },
      py::arg("producers"), py::arg("total_demand"),
      "Producers are (cost, lo, hi) tuples.");

  mod.def(
      "clear_market",
      [](const std::vector<std::tuple<double, double, double>>& producers,
         const std::vector<std::tuple<double, double, double>>& consumers) {
        DispatchProblem dp;
        for (const auto& [cost, lo, hi] : producers) dp.producers.push_back({cost, lo, hi});
        for (const auto& [benefit, lo, hi] : consumers)
          dp.consumers.push_back({benefit, lo, hi});
        return dispatch_dict(clear_market(dp));
      },
      py::arg("producers"), py::arg("consumers"),
      "Producers are (cost, lo, hi) and consumers (benefit, lo, hi) tuples.");

  mod.def(
      "run_scenario",
      [](const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
         const std::string& kind) {
        RunKind rk = RunKind::Simulate;
        if (kind == "simulate")
          rk = RunKind::Simulate;
        else if (kind == "stability")
          rk = RunKind::Stability;
        else if (kind == "equilibrium")
          rk = RunKind::Equilibrium;
        else if (kind == "dispatch")
          rk = RunKind::Dispatch;
        else
          throw ValidationError("unknown run kind '" + kind + "'");
        std::vector<std::string> written;
        for (const auto& p : run_scenario(parse_scenario(scenario), out_dir, rk))
          written.push_back(p.string());
        return written;
      },
      py::arg("scenario"), py::arg("out_dir"), py::arg("kind") = "simulate");
}
