"""
Seeded Monte-Carlo execution of the sum-SE experiments.

Trial `t` of a run with master seed `s` draws its channel, pilot noise and
localization noise from `substream(s, t, purpose)`. Frozen clusters come from
`substream(s, CLUSTERS)`. A trial therefore yields the same record whether it
runs alone, inside a larger batch, or on another worker process.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
import logging
import math
import time

import numpy as np

from pynearfield.core import rng as streams
from pynearfield.core.channel import (
    ChannelRealization,
    draw_clusters,
    realize_channel,
    normalize_realization,
    nlos_to_los_ratio
)
from pynearfield.core.geometry import PolarLocation
from pynearfield.beamfocus.metrics import SeReport, sinrs, sum_se
from pynearfield.beamfocus.strategies import TrialContext, make_strategy
from .config import ScenarioConfig, ResolvedScenario, NoiseMode, resolve


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialRecord:
    """
    Outcome of one Monte-Carlo trial.

    Attributes
    ----------
    trial: int
        Trial index (key of the trial's random substreams).
    seed: int
        Master seed of the run.
    reports: dict[str, SeReport]
        Sum-SE report per strategy name.
    estimates: dict[str, tuple[PolarLocation, ...]]
        User location estimates of the localization strategies.
    errors: dict[str, tuple[tuple[float, float], ...]]
        Per-user (distance error in m, angle error in rad) of the estimates.
    nlos_ratio: float
        NLoS-to-LoS power ratio seen by user 0.
    elapsed: float
        Wall-clock duration of the trial in seconds (not part of any output
        file).
    """
    trial: int
    seed: int
    reports: dict[str, SeReport] = field(default_factory=dict)
    estimates: dict[str, tuple[PolarLocation, ...]] = field(default_factory=dict)
    errors: dict[str, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    nlos_ratio: float = 0.0
    elapsed: float = 0.0


@dataclass(frozen=True)
class Aggregate:
    mean: float
    stderr: float
    count: int


def draw_realization(scenario: ResolvedScenario, trial: int, seed: int) -> ChannelRealization:
    """Channel realization of `trial`, normalized to user 0 unless the noise
    mode is physical.
    """
    config = scenario.config
    channel_rng = streams.substream(seed, trial, streams.CHANNEL)
    cluster_rng = streams.substream(seed, streams.CLUSTERS) if config.freeze_clusters else channel_rng
    clusters = draw_clusters(
        config.n_clusters, list(scenario.users), scenario.carrier, cluster_rng, config.perfect_reflection
    )
    realization = realize_channel(
        list(scenario.users), clusters, scenario.carrier, scenario.geometry, channel_rng
    )
    if config.noise_mode is not NoiseMode.PHYSICAL:
        realization = normalize_realization(realization, reference_user=0)
    return realization


def trial_context(scenario: ResolvedScenario, realization: ChannelRealization, trial: int, seed: int) -> TrialContext:
    return TrialContext(
        realization,
        scenario.powers,
        scenario.noise,
        scenario.tau_pil,
        scenario.tau_loc,
        streams.substream(seed, trial, streams.PILOT_NOISE),
        streams.substream(seed, trial, streams.LOCALIZATION_NOISE),
        grids=scenario.grids,
        min_separation=scenario.config.grid.min_peak_separation
    )


def run_trial(
    scenario: ResolvedScenario,
    strategies: tuple[str, ...],
    trial: int,
    seed: int | None = None
) -> TrialRecord:
    """Runs every strategy of `strategies` on trial `trial`."""
    seed = scenario.config.seed if seed is None else seed
    start = time.perf_counter()
    realization = draw_realization(scenario, trial, seed)
    context = trial_context(scenario, realization, trial, seed)

    reports: dict[str, SeReport] = {}
    estimates: dict[str, tuple[PolarLocation, ...]] = {}
    errors: dict[str, tuple[tuple[float, float], ...]] = {}
    for name in strategies:
        choice = make_strategy(name).build(context)
        values = sinrs(choice.combiner, realization, context.powers, scenario.noise.sigma_sq)
        reports[name] = sum_se(values, choice.overhead_len, scenario.coherence)
        if choice.music is not None:
            estimates[name] = choice.estimates
            errors[name] = tuple(choice.music.errors(list(scenario.users)))

    ratio = nlos_to_los_ratio(scenario.users[0], list(realization.clusters), scenario.carrier)
    return TrialRecord(
        trial=trial,
        seed=seed,
        reports=reports,
        estimates=estimates,
        errors=errors,
        nlos_ratio=ratio,
        elapsed=time.perf_counter() - start
    )


def map_trials(function, trials: range, workers: int = 1) -> list:
    """Applies `function` to every trial index and returns the results in
    trial order. With `workers` > 1 the trials run in a process pool;
    `function` must then be picklable.
    """
    if workers <= 1 or len(trials) <= 1:
        return [function(t) for t in trials]
    chunksize = max(1, len(trials) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, trials, chunksize=chunksize))


def run_trials(
    config: ScenarioConfig | ResolvedScenario,
    strategies: tuple[str, ...] | None = None,
    workers: int | None = None,
    first_trial: int = 0
) -> list[TrialRecord]:
    """Runs `config.trials` trials, starting at index `first_trial`, and
    returns their records ordered by trial index.
    """
    scenario = config if isinstance(config, ResolvedScenario) else resolve(config)
    cfg = scenario.config
    strategies = tuple(cfg.strategies if strategies is None else strategies)
    workers = cfg.workers if workers is None else workers
    logger.info(
        f"Running {cfg.trials} trials of {', '.join(strategies)} "
        f"(fc = {scenario.carrier.fc / 1e9:g} GHz, N = {cfg.n_antennas}, seed {cfg.seed}, {workers} workers)"
    )
    records = map_trials(
        partial(run_trial, scenario, strategies, seed=cfg.seed),
        range(first_trial, first_trial + cfg.trials),
        workers
    )
    for record in records:
        logger.debug(
            f"trial {record.trial}: " + ", ".join(
                f"{name} {report.sum_se:.3f}" for name, report in record.reports.items()
            ) + f" ({record.elapsed:.2f} s)"
        )
    return records


def aggregate(records: list[TrialRecord]) -> dict[str, Aggregate]:
    """Mean, standard error and count of the sum-SE per strategy, reduced in
    trial index order.
    """
    ordered = sorted(records, key=lambda r: r.trial)
    names: list[str] = []
    for record in ordered:
        names.extend(name for name in record.reports if name not in names)
    result: dict[str, Aggregate] = {}
    for name in names:
        values = np.array([r.reports[name].sum_se for r in ordered if name in r.reports])
        count = values.size
        mean = math.fsum(values) / count
        stderr = float(np.std(values, ddof=1)) / math.sqrt(count) if count > 1 else 0.0
        result[name] = Aggregate(mean, stderr, count)
    return result
