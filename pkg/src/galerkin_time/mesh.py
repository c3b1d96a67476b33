"""Time partitions of [0, T] and the affine maps onto [-1, 1].

Elements are indexed 0..N-1; element n spans (nodes[n], nodes[n+1]).  The
reference coordinate is tau = (2t - (t_right + t_left)) / (t_right - t_left),
so tau = -1 at the left node and tau = +1 at the right node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Absolute endpoint slack (relative to T) for interval membership, so a nodal
# time is attributable to either adjacent element via the side flag.
_MEMBERSHIP_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class TimeMesh:
    """Strictly increasing nodes t_0 = 0 < t_1 < ... < t_N = T."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ConfigError("a mesh needs at least two nodes")
        if nodes[0] != 0.0:
            raise ConfigError(f"first mesh node must be 0, got {nodes[0]}")
        if not np.all(np.diff(nodes) > 0):
            raise ConfigError("mesh nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def N(self) -> int:
        return self.nodes.size - 1

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.nodes)

    def bounds(self, n: int) -> tuple[float, float]:
        if not 0 <= n < self.N:
            raise ConfigError(f"element index {n} out of range 0..{self.N - 1}")
        return float(self.nodes[n]), float(self.nodes[n + 1])

    def h(self, n: int) -> float:
        lo, hi = self.bounds(n)
        return hi - lo

    def to_reference(self, n: int, t):
        """Map times in element n to tau in [-1, 1]; endpoints map exactly."""
        lo, hi = self.bounds(n)
        t = np.asarray(t, dtype=np.float64)
        slack = _MEMBERSHIP_SLACK * self.T
        if np.any(t < lo - slack) or np.any(t > hi + slack):
            raise ConfigError(f"time {t} outside element {n} = [{lo}, {hi}]")
        return (2.0 * t - (hi + lo)) / (hi - lo)

    def from_reference(self, n: int, tau):
        """Inverse affine map; tau = -1 and +1 hit the element nodes exactly."""
        lo, hi = self.bounds(n)
        tau = np.asarray(tau, dtype=np.float64)
        if np.any(np.abs(tau) > 1.0 + 1e-14):
            raise ConfigError(f"reference coordinate {tau} outside [-1, 1]")
        return 0.5 * (hi + lo) + 0.5 * (hi - lo) * tau

    def locate(self, t: float, side: str = "left") -> int:
        """Element index containing t, with one-sided attribution at nodes.

        side='left' means the limit t^- (a node belongs to the element ending
        there); side='right' means t^+ (it belongs to the element starting
        there).
        """
        if side not in ("left", "right"):
            raise ConfigError(f"side must be 'left' or 'right', got {side!r}")
        slack = _MEMBERSHIP_SLACK * self.T
        if t < -slack or t > self.T + slack:
            raise ConfigError(f"time {t} outside [0, {self.T}]")
        if side == "left":
            n = int(np.searchsorted(self.nodes, t - slack, side="left")) - 1
        else:
            n = int(np.searchsorted(self.nodes, t + slack, side="right")) - 1
        return min(max(n, 0), self.N - 1)


def uniform(N: int, T: float) -> TimeMesh:
    """N equal elements on [0, T]."""
    if N < 1:
        raise ConfigError(f"element count must be >= 1, got {N}")
    if not T > 0:
        raise ConfigError(f"horizon must be positive, got {T}")
    return TimeMesh(nodes=np.linspace(0.0, T, N + 1))


def geometric(N: int, T: float, ratio: float) -> TimeMesh:
    """N elements on [0, T] with consecutive lengths in the given ratio."""
    if N < 1:
        raise ConfigError(f"element count must be >= 1, got {N}")
    if not T > 0:
        raise ConfigError(f"horizon must be positive, got {T}")
    if not ratio > 0:
        raise ConfigError(f"mesh ratio must be positive, got {ratio}")
    lengths = ratio ** np.arange(N)
    nodes = np.concatenate([[0.0], np.cumsum(lengths)])
    nodes *= T / nodes[-1]
    nodes[-1] = T
    return TimeMesh(nodes=nodes)
