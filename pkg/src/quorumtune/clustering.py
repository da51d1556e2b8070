"""Online clustering of (chi, phi) samples for consistency adaptation.

An application reports pairs of a scalar performance indicator ``chi`` and
the consistency level ``phi`` under which it was measured.  Two streaming
k-means variants learn the mapping:

* :class:`SequentialClusterer` — a fixed budget of ``capacity`` clusters.
  The first ``capacity`` samples each seed a singleton cluster; every later
  sample is absorbed by the cluster with the nearest ``chi`` centroid via an
  exact running-mean update.
* :class:`IncrementalClusterer` — no fixed budget.  A sample joins the
  nearest cluster only if the relative error between the cluster's ``chi``
  centroid and the sample is below ``threshold``; otherwise it seeds a new
  cluster, so the cluster count adapts to the data.

``lookup`` answers the inverse question — given a desired indicator value,
return the ``phi`` centroid of the nearest cluster.  Distance is always
plain ``|delta chi|``; ties break toward the earliest-inserted cluster.

Both clusterers are deterministic (no internal randomness) and keep their
state in preallocated numpy arrays so that million-sample streams stay fast.
Learning mutates state and must be serialized by the caller; lookups are
read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, UnlearnedError
from .quorum import ConsistencyLevel

__all__ = [
    "Sample",
    "Cluster",
    "SequentialClusterer",
    "IncrementalClusterer",
    "REL_ERR_FLOOR",
]

# Floor for the denominator of the incremental relative-error test: a chi
# centroid at exactly 0 would otherwise divide by zero, so zero-centered
# indicators degrade to (near-)absolute distance instead.
REL_ERR_FLOOR = 1e-9


@dataclass(frozen=True)
class Sample:
    """One monitored observation: indicator value ``chi`` at level ``phi``."""

    chi: float
    phi: float

    def __post_init__(self) -> None:
        try:
            chi = float(self.chi)
            phi = float(self.phi)
        except (TypeError, ValueError):
            raise DomainError(f"sample values must be real numbers, got {self!r}") from None
        if not math.isfinite(chi):
            raise DomainError(f"sample chi must be finite, got {chi!r}")
        if not 0.0 <= phi <= 1.0:
            raise DomainError(f"sample phi must lie in [0, 1], got {phi!r}")
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class Cluster:
    """A read-only snapshot of one cluster: centroids plus sample count."""

    chi_centroid: float
    phi_centroid: float
    count: int


class _OnlineClusterer:
    """Shared array-backed state and the nearest/absorb/lookup primitives."""

    def __init__(self, initial_room: int):
        self._chi = np.empty(initial_room, dtype=np.float64)
        self._phi = np.empty(initial_room, dtype=np.float64)
        self._count = np.empty(initial_room, dtype=np.int64)
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def _nearest(self, chi: float) -> int:
        # argmin returns the first minimum, i.e. ties break toward the
        # earliest-inserted cluster.
        deltas = self._chi[: self._size] - chi
        np.absolute(deltas, out=deltas)
        return int(deltas.argmin())

    def _seed(self, sample: Sample) -> int:
        k = self._size
        self._chi[k] = sample.chi
        self._phi[k] = sample.phi
        self._count[k] = 1
        self._size = k + 1
        return k

    def _absorb(self, k: int, sample: Sample) -> None:
        c = int(self._count[k])
        self._chi[k] = (self._chi[k] * c + sample.chi) / (c + 1)
        self._phi[k] = (self._phi[k] * c + sample.phi) / (c + 1)
        self._count[k] = c + 1

    @property
    def clusters(self) -> tuple[Cluster, ...]:
        return tuple(
            Cluster(float(self._chi[k]), float(self._phi[k]), int(self._count[k]))
            for k in range(self._size)
        )

    def lookup(self, chi_target: float) -> ConsistencyLevel:
        """The ``phi`` centroid of the cluster nearest ``chi_target``.

        Raises:
            UnlearnedError: if no samples have been learned yet.
        """
        if self._size == 0:
            raise UnlearnedError("adaptation state is unlearned: no clusters to look up")
        chi_target = float(chi_target)
        if not math.isfinite(chi_target):
            raise DomainError(f"chi_target must be finite, got {chi_target!r}")
        return ConsistencyLevel(float(self._phi[self._nearest(chi_target)]))

    def csv_snapshot(self) -> str:
        """The cluster state as CSV (chi_centroid, phi_centroid, count)."""
        lines = ["chi_centroid,phi_centroid,count"]
        for cluster in self.clusters:
            lines.append(f"{cluster.chi_centroid!r},{cluster.phi_centroid!r},{cluster.count}")
        return "\n".join(lines) + "\n"


class SequentialClusterer(_OnlineClusterer):
    """Fixed-capacity streaming k-means over (chi, phi) samples."""

    def __init__(self, capacity: int):
        if isinstance(capacity, bool) or not isinstance(capacity, int):
            raise ConfigError(f"capacity must be an integer, got {capacity!r}")
        if capacity < 1:
            raise ConfigError(f"capacity must be >= 1, got {capacity}")
        super().__init__(capacity)
        self.capacity = capacity
        self.total_seen = 0

    def learn(self, sample: Sample) -> int:
        """Fold one sample into the state; returns the assigned cluster index."""
        if self._size < self.capacity:
            k = self._seed(sample)
        else:
            k = self._nearest(sample.chi)
            self._absorb(k, sample)
        self.total_seen += 1
        return k

    def reset(self) -> None:
        """Discard all clusters and counters; the capacity is retained."""
        self._size = 0
        self.total_seen = 0


class IncrementalClusterer(_OnlineClusterer):
    """Threshold-driven streaming k-means over (chi, phi) samples.

    ``threshold`` is the relative-error admission bound tau: the nearest
    cluster absorbs a sample only when
    ``|chi_centroid - chi| / max(|chi_centroid|, REL_ERR_FLOOR) < tau``.
    """

    _INITIAL_ROOM = 16

    def __init__(self, threshold: float):
        try:
            threshold = float(threshold)
        except (TypeError, ValueError):
            raise ConfigError(f"threshold must be a real number, got {threshold!r}") from None
        if not threshold > 0.0:
            raise ConfigError(f"threshold must be > 0, got {threshold!r}")
        super().__init__(self._INITIAL_ROOM)
        self.threshold = threshold

    def _grow(self) -> None:
        room = 2 * len(self._chi)
        for name in ("_chi", "_phi", "_count"):
            old = getattr(self, name)
            new = np.empty(room, dtype=old.dtype)
            new[: self._size] = old[: self._size]
            setattr(self, name, new)

    def learn(self, sample: Sample) -> int:
        """Fold one sample into the state; returns the assigned cluster index."""
        if self._size == 0:
            return self._seed(sample)
        k = self._nearest(sample.chi)
        centroid = float(self._chi[k])
        relative_error = abs(centroid - sample.chi) / max(abs(centroid), REL_ERR_FLOOR)
        if relative_error < self.threshold:
            self._absorb(k, sample)
            return k
        if self._size == len(self._chi):
            self._grow()
        return self._seed(sample)

    @property
    def total_seen(self) -> int:
        """Samples learned since creation or the last reset."""
        return int(self._count[: self._size].sum())

    def reset(self) -> None:
        """Discard all clusters; the threshold is retained."""
        self._size = 0
