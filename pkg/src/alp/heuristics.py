"""Landmark lower bounds usable as A* heuristics.

Every heuristic here is a callable ``h(v, t)`` with a ``bind(t)`` method that
returns a one-argument ``h_t(v)`` with the target-dependent lookups hoisted
out; the search loop only ever calls the bound form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from operator import sub

import numpy as np

from .embedding import AlpIndex, AltIndex

NEG_INF = -math.inf


@dataclass(frozen=True)
class QuadSides:
    """Known sides of the walk v -> l_v -> l_t -> t."""

    a: float  # d(v, l_v)
    b: float  # d(l_v, l_t)
    c: float  # d(t, l_t)


@dataclass(frozen=True)
class HeuristicConfig:
    use_ptolemy: bool = True
    clamp_nonnegative: bool = True


def alp_bounds(q: QuadSides, cfg: HeuristicConfig = HeuristicConfig()) -> list[float]:
    """The six raw quadrilateral lower bounds on d(v, t); negatives are kept."""
    a, b, c = q.a, q.b, q.c
    # d(l_v,l_t) <= d(l_v,v) + d(v,t) + d(t,l_t)
    l1 = b - a - c
    # d(v,l_v) <= d(v,t) + d(t,l_t) + d(l_t,l_v)
    l2 = a - b - c
    # d(t,l_t) <= d(t,v) + d(v,l_v) + d(l_v,l_t)
    l3 = c - a - b
    # d(v,t) >= d(v,l_t) - c with the diagonal d(v,l_t) >= |a - b|
    l4 = abs(a - b) - c
    # d(v,t) >= d(l_v,t) - a with the diagonal d(l_v,t) >= |b - c|
    l5 = abs(b - c) - a
    # Ptolemy on (v, l_v, l_t, t): d(v,l_t) d(l_v,t) <= a c + b d(v,t), diagonals lower-bounded
    if cfg.use_ptolemy and b > 0:
        l6 = (max(0.0, b - a) * max(0.0, b - c) - a * c) / b
    else:
        l6 = NEG_INF
    return [l1, l2, l3, l4, l5, l6]


class AltHeuristic:
    """max over landmarks of |d(l, v) - d(l, t)|."""

    def __init__(self, index: AltIndex):
        self.index = index
        self._rows = index.by_vertex
        self._finite = not index.has_infinite

    def bind(self, t: int):
        rows = self._rows
        tcol = rows[t].tolist()
        if self._finite:
            def h(v: int) -> float:
                return max(map(abs, map(sub, rows[v].tolist(), tcol)), default=0.0)
        else:
            def h(v: int) -> float:
                best = 0.0
                for x, y in zip(rows[v].tolist(), tcol):
                    if x != math.inf and y != math.inf:
                        d = abs(x - y)
                        if d > best:
                            best = d
                return best
        return h

    def column(self, t: int) -> np.ndarray:
        """h(v, t) for every v at once."""
        table = self.index.dist_table
        tcol = table[:, t:t + 1]
        with np.errstate(invalid="ignore"):
            diff = np.abs(table - tcol)
        if not self._finite:
            diff[~(np.isfinite(table) & np.isfinite(tcol))] = 0.0
        return diff.max(axis=0, initial=0.0)

    def __call__(self, v: int, t: int) -> float:
        return 0.0 if v == t else self.bind(t)(v)


def alt_h(index: AltIndex, v: int, t: int) -> float:
    return AltHeuristic(index)(v, t)


class AlpHeuristic:
    """Dual-landmark bound from the distributed embedding.

    Same-community pairs fall back to the single-landmark triangle bound
    |a - c|. Any infinite side yields 0.
    """

    def __init__(self, index: AlpIndex, cfg: HeuristicConfig = HeuristicConfig()):
        self.index = index
        self.cfg = cfg
        self._lab = index.label_landmark.tolist()
        self._dist = index.label_dist.tolist()
        self._matrix = index.landmark_matrix

    def quad(self, v: int, t: int) -> QuadSides:
        lv, lt = self._lab[v], self._lab[t]
        return QuadSides(self._dist[v], float(self._matrix[lv, lt]), self._dist[t])

    def bind(self, t: int):
        lab, dist = self._lab, self._dist
        lt = lab[t]
        c = dist[t]
        brow = self._matrix[:, lt].tolist() if len(self._matrix) else []
        ptolemy = self.cfg.use_ptolemy
        clamp = self.cfg.clamp_nonnegative
        inf = math.inf
        if c == inf:
            return lambda v: 0.0

        def h(v: int) -> float:
            a = dist[v]
            if a == inf:
                return 0.0
            lv = lab[v]
            if lv == lt:
                return a - c if a > c else c - a
            b = brow[lv]
            if b == inf:
                return 0.0
            best = b - a - c
            x = a - b - c
            if x > best:
                best = x
            x = c - a - b
            if x > best:
                best = x
            x = abs(a - b) - c
            if x > best:
                best = x
            x = abs(b - c) - a
            if x > best:
                best = x
            if ptolemy and b > 0:
                x = ((b - a if b > a else 0.0) * (b - c if b > c else 0.0) - a * c) / b
                if x > best:
                    best = x
            return best if best > 0.0 or not clamp else 0.0

        return h

    def column(self, t: int) -> np.ndarray:
        """h(v, t) for every v at once, bit-identical to ``bind(t)``."""
        idx = self.index
        a = idx.label_dist
        c = float(a[t])
        n = len(a)
        if c == math.inf:
            return np.zeros(n)
        lab = idx.label_landmark
        b = idx.landmark_matrix[lab, lab[t]]
        with np.errstate(invalid="ignore", divide="ignore"):
            best = np.maximum.reduce([b - a - c, a - b - c, c - a - b, np.abs(a - b) - c, np.abs(b - c) - a])
            if self.cfg.use_ptolemy:
                l6 = (np.maximum(b - a, 0.0) * np.maximum(b - c, 0.0) - a * c) / b
                best = np.where(b > 0, np.maximum(best, l6), best)
        if self.cfg.clamp_nonnegative:
            best = np.where(best > 0.0, best, 0.0)
        out = np.where(lab == lab[t], np.abs(a - c), best)
        out[~(np.isfinite(a) & np.isfinite(b))] = 0.0
        return out

    def __call__(self, v: int, t: int) -> float:
        return 0.0 if v == t else self.bind(t)(v)


def alp_h(index: AlpIndex, v: int, t: int, cfg: HeuristicConfig = HeuristicConfig()) -> float:
    """Reference evaluation through ``alp_bounds``; the bound closure must agree with it."""
    if v == t:
        return 0.0
    lv, lt = int(index.label_landmark[v]), int(index.label_landmark[t])
    a, c = float(index.label_dist[v]), float(index.label_dist[t])
    if math.isinf(a) or math.isinf(c):
        return 0.0
    if lv == lt:
        return max(0.0, abs(a - c))
    b = float(index.landmark_matrix[lv, lt])
    if math.isinf(b):
        return 0.0
    best = max(alp_bounds(QuadSides(a, b, c), cfg))
    return max(0.0, best) if cfg.clamp_nonnegative else best


class ZeroHeuristic:
    def bind(self, t: int):
        return lambda v: 0.0

    def __call__(self, v: int, t: int) -> float:
        return 0.0


class FunctionHeuristic:
    """Adapt a plain ``f(v, t)`` callable."""

    def __init__(self, fn):
        self.fn = fn

    def bind(self, t: int):
        fn = self.fn
        return lambda v: fn(v, t)

    def __call__(self, v: int, t: int) -> float:
        return self.fn(v, t)


class Tabulated:
    """Serve ``h`` from its per-target ``column``; the last column is cached.

    Meant for all-pairs sweeps that hold ``t`` fixed across many sources.
    """

    def __init__(self, h):
        self.h = h
        self._t = None
        self._get = None

    def bind(self, t: int):
        if t != self._t:
            self._t, self._get = t, self.h.column(t).tolist().__getitem__
        return self._get

    def __call__(self, v: int, t: int) -> float:
        return self.bind(t)(v)


def bind(h, t: int):
    """Bound one-argument form of any heuristic (objects with ``bind`` or plain callables)."""
    if hasattr(h, "bind"):
        return h.bind(t)
    return lambda v: h(v, t)
