"""Monte-Carlo replica simulation and the closed adaptation loop.

:func:`empirical_staleness` estimates the staleness probability by actually
drawing read and write quorums — a mechanism-level oracle that shares no
code with the closed-form math in :mod:`quorumtune.quorum`.  Each trial
draws a uniformly random ``w``-subset of the ``n`` replicas (the replicas
that acknowledged the last write) and an independent uniformly random
``r``-subset (the replicas answering the read); the read is stale exactly
when the subsets are disjoint.

:func:`run_adaptation_loop` wires the whole toolkit together: monitor an
application's (chi, phi) samples, learn the mapping with a clusterer, then
for each requested indicator value look up a level, solve it to a quorum
configuration, and report the indicator value actually achieved.

All randomness comes from numpy's PCG64 generator seeded explicitly, so
every run is reproducible bit for bit.  Within a simulation, write-quorum
draws precede read-quorum draws chunk by chunk (fixed chunk size
``_CHUNK``), which pins the random stream layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .clustering import IncrementalClusterer, Sample, SequentialClusterer
from .errors import ConfigError
from .indicator import IndicatorProgram, evaluate
from .quorum import (
    DEFAULT_SOLVE_OPTIONS,
    QuorumConfig,
    SolveOptions,
    consistency_level,
    solve_quorum,
)

__all__ = [
    "PHI_FLOOR",
    "SimConfig",
    "LoopConfig",
    "LoopTraceEntry",
    "empirical_staleness",
    "run_adaptation_loop",
    "trace_to_csv",
]

# Consistency levels are sampled on (PHI_FLOOR, 1] rather than (0, 1] so that
# logarithmic indicator relations stay inside their domain.
PHI_FLOOR = 1e-6

# Trials are simulated in fixed-size batches; the constant is part of the
# reproducibility contract (it determines how the random stream is consumed).
_CHUNK = 1 << 16

_MAX_SEED = 2**64


def _check_seed(seed: int) -> None:
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < _MAX_SEED:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")


@dataclass(frozen=True)
class SimConfig:
    """A Monte-Carlo staleness experiment.

    ``cluster_size`` is the total node pool the replicas live in; it must be
    at least ``config.n``.  It does not influence quorum math (only the
    ``n`` replicas of the item matter) and is validated for bookkeeping.
    """

    cluster_size: int
    config: QuorumConfig
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if isinstance(self.cluster_size, bool) or not isinstance(self.cluster_size, int):
            raise ConfigError(f"cluster_size must be an integer, got {self.cluster_size!r}")
        if self.cluster_size < 1:
            raise ConfigError(f"cluster_size must be >= 1, got {self.cluster_size}")
        if not isinstance(self.config, QuorumConfig):
            raise ConfigError(f"config must be a QuorumConfig, got {self.config!r}")
        if self.config.n > self.cluster_size:
            raise ConfigError(
                f"replica count n={self.config.n} exceeds cluster_size={self.cluster_size}"
            )
        if isinstance(self.trials, bool) or not isinstance(self.trials, int):
            raise ConfigError(f"trials must be an integer, got {self.trials!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        _check_seed(self.seed)


def _random_subset_mask(rng: np.random.Generator, rows: int, n: int, k: int) -> np.ndarray:
    """``rows`` independent uniform random k-subsets of {0..n-1}, as a bool mask.

    The k smallest of n i.i.d. uniform keys form a uniformly random
    k-subset (ties have probability zero).
    """
    keys = rng.random((rows, n))
    chosen = np.argpartition(keys, k - 1, axis=1)[:, :k]
    mask = np.zeros((rows, n), dtype=bool)
    np.put_along_axis(mask, chosen, True, axis=1)
    return mask


def empirical_staleness(sim: SimConfig) -> float:
    """Fraction of trials in which the read quorum misses the write quorum.

    Deterministic given ``sim.seed`` (and ``sim.trials``).
    """
    cfg = sim.config
    rng = np.random.Generator(np.random.PCG64(sim.seed))
    stale = 0
    remaining = sim.trials
    while remaining > 0:
        rows = min(remaining, _CHUNK)
        write_mask = _random_subset_mask(rng, rows, cfg.n, cfg.w)
        read_mask = _random_subset_mask(rng, rows, cfg.n, cfg.r)
        intersects = np.any(write_mask & read_mask, axis=1)
        stale += int(rows - np.count_nonzero(intersects))
        remaining -= rows
    return stale / sim.trials


@dataclass(frozen=True)
class LoopConfig:
    """One closed adaptation-loop experiment.

    ``relation`` (with ``constants``) defines how the application's
    indicator chi is computed from phi.  The clusterer is trained in place
    on ``bootstrap_samples`` monitored pairs, then each target indicator
    value in ``targets`` is driven through lookup -> solve -> achieved-level
    evaluation against ``n`` replicas.
    """

    relation: IndicatorProgram
    clusterer: Union[SequentialClusterer, IncrementalClusterer]
    bootstrap_samples: int
    targets: Sequence[float]
    seed: int
    n: int
    constants: Mapping[str, float] = field(default_factory=dict)
    options: SolveOptions = DEFAULT_SOLVE_OPTIONS

    def __post_init__(self) -> None:
        if not isinstance(self.relation, IndicatorProgram):
            raise ConfigError(f"relation must be an IndicatorProgram, got {self.relation!r}")
        if not isinstance(self.clusterer, (SequentialClusterer, IncrementalClusterer)):
            raise ConfigError(f"unsupported clusterer {self.clusterer!r}")
        if isinstance(self.bootstrap_samples, bool) or not isinstance(self.bootstrap_samples, int):
            raise ConfigError(f"bootstrap_samples must be an integer, got {self.bootstrap_samples!r}")
        if self.bootstrap_samples < 1:
            raise ConfigError(f"bootstrap_samples must be >= 1, got {self.bootstrap_samples}")
        if isinstance(self.clusterer, SequentialClusterer):
            if self.bootstrap_samples < self.clusterer.capacity:
                raise ConfigError(
                    f"bootstrap_samples={self.bootstrap_samples} is below the sequential "
                    f"capacity {self.clusterer.capacity}; the clusterer would never leave "
                    "its seeding phase"
                )
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        _check_seed(self.seed)
        object.__setattr__(self, "targets", tuple(float(t) for t in self.targets))
        object.__setattr__(self, "constants", dict(self.constants))


@dataclass(frozen=True)
class LoopTraceEntry:
    """One loop round trip.

    ``phi_chosen`` is the raw looked-up level; ``r``/``w`` solve it to a
    quorum pair whose exact achievable level (recomputable from the pair)
    is what ``chi_achieved`` is evaluated at.
    """

    chi_target: float
    phi_chosen: float
    r: int
    w: int
    chi_achieved: float


def run_adaptation_loop(loop: LoopConfig) -> list[LoopTraceEntry]:
    """Run monitor -> learn -> request -> tune -> calc; returns the trace.

    The loop's clusterer is trained in place.  Deterministic given
    ``loop.seed``.
    """
    rng = np.random.Generator(np.random.PCG64(loop.seed))
    bindings = dict(loop.constants)

    # Monitoring: observe (chi, phi) at uniformly random levels on
    # (PHI_FLOOR, 1] and feed the clusterer.
    draws = rng.random(loop.bootstrap_samples)
    phis = 1.0 - draws * (1.0 - PHI_FLOOR)
    for phi in phis:
        phi = float(phi)
        bindings["phi"] = phi
        loop.clusterer.learn(Sample(evaluate(loop.relation, bindings), phi))

    entries: list[LoopTraceEntry] = []
    for chi_target in loop.targets:
        level = loop.clusterer.lookup(chi_target)
        cfg = solve_quorum(level.phi, loop.n, loop.options)
        achieved = consistency_level(cfg).phi
        bindings["phi"] = achieved
        entries.append(
            LoopTraceEntry(
                chi_target=chi_target,
                phi_chosen=level.phi,
                r=cfg.r,
                w=cfg.w,
                chi_achieved=evaluate(loop.relation, bindings),
            )
        )
    return entries


def trace_to_csv(entries: Sequence[LoopTraceEntry]) -> str:
    """Serialize a loop trace as CSV."""
    lines = ["chi_target,phi_chosen,r,w,chi_achieved"]
    for e in entries:
        lines.append(f"{e.chi_target!r},{e.phi_chosen!r},{e.r},{e.w},{e.chi_achieved!r}")
    return "\n".join(lines) + "\n"
