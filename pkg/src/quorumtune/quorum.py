"""Exact tunable-quorum consistency math.

A replicated item is held by ``n`` replicas; a write is acknowledged by ``w``
of them and a read collects answers from ``r``.  When ``r + w > n`` every
read quorum intersects every write quorum, so a read always observes the
latest write (strong consistency).  Otherwise the read may miss it entirely;
the probability of that miss — the *staleness probability* — has the closed
form ``C(n-w, r) / C(n, r)`` under uniformly random quorum membership.  The
*consistency level* is the complementary probability that a read returns the
most recent version.

Everything in this module is a pure function.  The inverse solver compares
candidate levels with exact rational arithmetic, so ties, symmetry and
tie-breaking are fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import ConfigError, DomainError, SolveError

__all__ = [
    "QuorumConfig",
    "ConsistencyLevel",
    "SolveMode",
    "ReadWriteBias",
    "SolveOptions",
    "staleness_probability",
    "consistency_level",
    "enumerate_levels",
    "solve_quorum",
]


def _check_positive_int(value: int, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ConfigError(f"{name} must be >= 1, got {value}")


@dataclass(frozen=True)
class QuorumConfig:
    """A read/write quorum configuration over ``n`` replicas.

    Attributes:
        r: number of replicas that must answer a read (1 <= r <= n).
        w: number of replicas that must acknowledge a write (1 <= w <= n).
        n: total number of replicas of the data item.
    """

    r: int
    w: int
    n: int

    def __post_init__(self) -> None:
        _check_positive_int(self.n, "n")
        _check_positive_int(self.r, "r")
        _check_positive_int(self.w, "w")
        if self.r > self.n:
            raise ConfigError(f"r must satisfy 1 <= r <= n, got r={self.r}, n={self.n}")
        if self.w > self.n:
            raise ConfigError(f"w must satisfy 1 <= w <= n, got w={self.w}, n={self.n}")

    @property
    def is_strong(self) -> bool:
        """True when read and write quorums are guaranteed to intersect."""
        return self.r + self.w > self.n


@dataclass(frozen=True)
class ConsistencyLevel:
    """The probability that a read returns the most recent version."""

    phi: float

    def __post_init__(self) -> None:
        try:
            phi = float(self.phi)
        except (TypeError, ValueError):
            raise DomainError(f"consistency level must be a real number, got {self.phi!r}") from None
        if not 0.0 <= phi <= 1.0:
            raise DomainError(f"consistency level must lie in [0, 1], got {phi!r}")
        object.__setattr__(self, "phi", phi)


class SolveMode(Enum):
    """Search space used by :func:`solve_quorum`.

    ``FAITHFUL`` restricts the search to pairs with ``r + w <= n`` (the
    traditional loop ``i in [1, n)``, ``j in [i, n-i]``), which can never
    return a strong-consistency configuration.  ``EXTENDED`` (the default)
    searches every pair ``1 <= r <= w <= n``.
    """

    FAITHFUL = "faithful"
    EXTENDED = "extended"


class ReadWriteBias(Enum):
    """How the solved (small, large) quorum pair is oriented onto (r, w).

    Reads and writes contribute the same consistency level either way; the
    bias only decides which operation gets the smaller (cheaper, lower
    latency) quorum.  ``READS_DOMINATE`` assigns the smaller value to ``r``,
    ``WRITES_DOMINATE`` to ``w``, and ``BALANCED`` keeps the canonical
    ``r <= w`` orientation.
    """

    READS_DOMINATE = "reads_dominate"
    WRITES_DOMINATE = "writes_dominate"
    BALANCED = "balanced"


@dataclass(frozen=True)
class SolveOptions:
    """Options for :func:`solve_quorum`; defaults are extended + balanced."""

    mode: SolveMode = SolveMode.EXTENDED
    read_write_bias: ReadWriteBias = ReadWriteBias.BALANCED


DEFAULT_SOLVE_OPTIONS = SolveOptions()


def _staleness_fraction(r: int, w: int, n: int) -> Fraction:
    """C(n-w, r) / C(n, r) as an exact rational.

    Uses the telescoping product prod_{i=0}^{r-1} (n-w-i)/(n-i); any
    non-positive numerator factor means the read quorum cannot avoid the
    write quorum, i.e. probability 0.  Integer products keep the result
    exact for any n (no factorial overflow).
    """
    num = 1
    den = 1
    for i in range(r):
        top = n - w - i
        if top <= 0:
            return Fraction(0)
        num *= top
        den *= n - i
    return Fraction(num, den)


def _phi_fraction(r: int, w: int, n: int) -> Fraction:
    if r + w > n:
        return Fraction(1)
    return 1 - _staleness_fraction(r, w, n)


def staleness_probability(config: QuorumConfig) -> float:
    """Probability that a read quorum misses the most recent write.

    >>> staleness_probability(QuorumConfig(r=2, w=3, n=5))
    0.1
    """
    num = 1
    den = 1
    for i in range(config.r):
        top = config.n - config.w - i
        if top <= 0:
            return 0.0
        num *= top
        den *= config.n - i
    # Single integer division: one correctly rounded float, so swapping r and
    # w (an identical rational) yields a bit-identical result.
    return num / den

def consistency_level(config: QuorumConfig) -> ConsistencyLevel:
    """Probability that a read returns the most recent version.

    Exactly 1 when ``r + w > n``; otherwise the complement of
    :func:`staleness_probability`.

    >>> consistency_level(QuorumConfig(r=2, w=3, n=5)).phi
    0.9
    """
    if config.is_strong:
        return ConsistencyLevel(1.0)
    return ConsistencyLevel(1.0 - staleness_probability(config))


@lru_cache(maxsize=None)
def _spectrum(n: int) -> tuple[tuple[int, int, Fraction], ...]:
    """All canonical pairs (i, j, phi) with 1 <= i <= j <= n, phi exact."""
    return tuple(
        (i, j, _phi_fraction(i, j, n))
        for i in range(1, n + 1)
        for j in range(i, n + 1)
    )


def enumerate_levels(n: int) -> list[tuple[QuorumConfig, ConsistencyLevel]]:
    """The achievable consistency spectrum at ``n`` replicas.

    Returns every canonical configuration ``1 <= r <= w <= n`` (the mirrored
    orientation yields the same level) paired with its level, sorted
    ascending by level, then by quorum sum ``r + w``, then by ``(r, w)``.
    """
    _check_positive_int(n, "n")
    keyed = [
        (phi, i + j, i, j, QuorumConfig(i, j, n))
        for i, j, phi in _spectrum(n)
    ]
    keyed.sort(key=lambda item: item[:4])
    return [(cfg, consistency_level(cfg)) for *_key, cfg in keyed]


def solve_quorum(
    phi_target: float,
    n: int,
    options: SolveOptions = DEFAULT_SOLVE_OPTIONS,
) -> QuorumConfig:
    """Find the quorum configuration whose level is nearest ``phi_target``.

    The candidate set depends on ``options.mode`` (see :class:`SolveMode`).
    Distances are compared exactly; ties are broken by smaller ``r + w``,
    then by lexicographically smaller (smaller-element, larger-element).
    The winning pair is oriented per ``options.read_write_bias``.

    Raises:
        DomainError: if ``phi_target`` is outside [0, 1].
        SolveError: in faithful mode with ``n < 2`` (empty search space).
    """
    _check_positive_int(n, "n")
    try:
        target_value = float(phi_target)
    except (TypeError, ValueError):
        raise DomainError(f"phi_target must be a real number, got {phi_target!r}") from None
    if math.isnan(target_value) or not 0.0 <= target_value <= 1.0:
        raise DomainError(f"phi_target must lie in [0, 1], got {phi_target!r}")
    if options.mode is SolveMode.FAITHFUL and n < 2:
        raise SolveError(
            f"faithful mode searches r in [1, n) and r + w <= n, which is empty for n={n}"
        )

    target = Fraction(target_value)
    best_key: tuple[Fraction, int, int, int] | None = None
    best_pair: tuple[int, int] | None = None
    for i, j, phi in _spectrum(n):
        if options.mode is SolveMode.FAITHFUL and i + j > n:
            continue
        key = (abs(phi - target), i + j, i, j)
        if best_key is None or key < best_key:
            best_key = key
            best_pair = (i, j)
    assert best_pair is not None  # n >= 1 guarantees at least one candidate
    small, large = best_pair
    if options.read_write_bias is ReadWriteBias.WRITES_DOMINATE:
        return QuorumConfig(r=large, w=small, n=n)
    # BALANCED keeps the canonical r <= w order, which is also what
    # READS_DOMINATE wants: the smaller quorum goes to the read side.
    return QuorumConfig(r=small, w=large, n=n)
