"""Electricity market dynamics: simulation, spectra, and dispatch."""

from emx._core import (
    MarketParams,
    MarketState,
    ScenarioError,
    SimulationAbort,
    ValidationError,
    clear_market,
    equilibrium,
    min_cost_dispatch,
    run_scenario,
    simulate,
    spectrum,
)

__all__ = [
    "MarketParams",
    "MarketState",
    "ScenarioError",
    "SimulationAbort",
    "ValidationError",
    "clear_market",
    "equilibrium",
    "min_cost_dispatch",
    "run_scenario",
    "simulate",
    "spectrum",
]
