"""
Experiment harness: scenario configuration, seeded Monte-Carlo trials, figure
reproductions and result files.
"""

from pynearfield.harness.config import (
    NoiseMode,
    UserConfig,
    GridConfig,
    ScenarioConfig,
    ResolvedScenario,
    coherence_length,
    resolve,
    preset
)
from pynearfield.harness.trials import TrialRecord, Aggregate, run_trial, run_trials, aggregate
from pynearfield.harness.figures import (
    Table,
    FigureResult,
    run_fig1,
    run_fig2,
    run_fig3,
    run_fig4,
    run_fig5,
    run_scenario,
    spectrum_table,
    gamma_histogram_table,
    FIGURES
)
from pynearfield.harness.export import write_table, write_summary, write_figure

__all__ = [
    "NoiseMode",
    "UserConfig",
    "GridConfig",
    "ScenarioConfig",
    "ResolvedScenario",
    "coherence_length",
    "resolve",
    "preset",
    "TrialRecord",
    "Aggregate",
    "run_trial",
    "run_trials",
    "aggregate",
    "Table",
    "FigureResult",
    "run_fig1",
    "run_fig2",
    "run_fig3",
    "run_fig4",
    "run_fig5",
    "run_scenario",
    "spectrum_table",
    "gamma_histogram_table",
    "FIGURES",
    "write_table",
    "write_summary",
    "write_figure",
]
