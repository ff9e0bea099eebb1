"""Noisy bidirectional closest-point objective.

A candidate transform warps the deformed set ``D`` into ``W``. Points of ``W``
then greedily claim their nearest unclaimed point of the static set ``S``
(W->S), and independently points of ``S`` claim points of ``W`` (S->W). The
order in which source points are visited is given by a :class:`MatchOrder`;
changing it can change the correspondences, which is what makes the objective
noisy across generations.

The cost sums the distances of the W->S matches, each weighted by the inverse
of how many directions agree on it: 0.5 for a pair matched both ways, 1 for a
one-way W->S match. S->W-only matches carry no cost. Lower is better.

All index vectors are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .geometry import AffineParams, warp
from .validation import check_pointset, check_random_state

__all__ = [
    "MatchOrder",
    "MatchResult",
    "distance_matrix",
    "greedy_assign",
    "evaluate",
    "evaluate_population",
    "fresh_match_order",
]

W_TO_S = "w->s"
S_TO_W = "s->w"


class MatchOrder(NamedTuple):
    """Visiting order for the two greedy passes."""

    w_order: np.ndarray
    s_order: np.ndarray


@dataclass(frozen=True)
class MatchResult:
    """Correspondences and weights produced by :func:`evaluate`.

    Attributes
    ----------
    delta : ndarray (n, k)
        Euclidean distances between warped and static points.
    m_prime : ndarray (n, k) of int8
        W->S matches.
    m_double_prime : ndarray (n, k) of int8
        S->W matches.
    q : ndarray (n, k)
        ``m_prime + m_double_prime``, values in {0, 1, 2}.
    q_star : ndarray (n, k)
        Elementwise inverse of the non-zero entries of ``q``.
    m : ndarray (n, k)
        ``m_prime * q_star``.
    fitness : float
        ``sum(m * delta)``.
    """

    delta: np.ndarray
    m_prime: np.ndarray
    m_double_prime: np.ndarray
    q: np.ndarray
    q_star: np.ndarray
    m: np.ndarray
    fitness: float


# ---------------------------------------------------------------------------
# compiled kernels


@njit(cache=True)
def _fill_distances(warped, static, delta):
    n = warped.shape[0]
    k = static.shape[0]
    for i in range(n):
        wx = warped[i, 0]
        wy = warped[i, 1]
        for j in range(k):
            dx = wx - static[j, 0]
            dy = wy - static[j, 1]
            delta[i, j] = np.sqrt(dx * dx + dy * dy)


@njit(cache=True)
def _row_argmins(delta, out):
    n, k = delta.shape
    for i in range(n):
        best = 0
        for j in range(1, k):
            if delta[i, j] < delta[i, best]:
                best = j
        out[i] = best


@njit(cache=True)
def _col_argmins(delta, out):
    n, k = delta.shape
    for j in range(k):
        best = 0
        for i in range(1, n):
            if delta[i, j] < delta[best, j]:
                best = i
        out[j] = best


@njit(cache=True)
def _greedy_rows(delta, order, nearest, match, taken):
    # sources are rows of delta, targets are columns; nearest[i] is the
    # unconstrained argmin of row i (lowest index on ties), which is the
    # greedy choice whenever it is still free
    k = delta.shape[1]
    match[:] = -1
    taken[:] = False
    steps = min(order.shape[0], k)
    for t in range(steps):
        i = order[t]
        best = nearest[i]
        if taken[best]:
            best = -1
            best_d = np.inf
            for j in range(k):
                if not taken[j]:
                    d = delta[i, j]
                    if best == -1 or d < best_d:
                        best = j
                        best_d = d
        match[i] = best
        taken[best] = True


@njit(cache=True)
def _greedy_cols(delta, order, nearest, match, taken):
    # sources are columns of delta, targets are rows
    n = delta.shape[0]
    match[:] = -1
    taken[:] = False
    steps = min(order.shape[0], n)
    for t in range(steps):
        j = order[t]
        best = nearest[j]
        if taken[best]:
            best = -1
            best_d = np.inf
            for i in range(n):
                if not taken[i]:
                    d = delta[i, j]
                    if best == -1 or d < best_d:
                        best = i
                        best_d = d
        match[j] = best
        taken[best] = True


@njit(cache=True)
def _weighted_cost(delta, match_ws, match_sw):
    total = 0.0
    for i in range(match_ws.shape[0]):
        j = match_ws[i]
        if j >= 0:
            if match_sw[j] == i:
                total += 0.5 * delta[i, j]
            else:
                total += delta[i, j]
    return total


@njit(cache=True)
def _distances_and_nearest(wx, wy, sx, sy, delta, row_near, col_near, col_best):
    # one pass: distances plus unconstrained argmins of every row and column,
    # lowest index winning ties in both
    n = wx.shape[0]
    k = sx.shape[0]
    for j in range(k):
        col_best[j] = np.inf
        col_near[j] = 0
    for i in range(n):
        x = wx[i]
        y = wy[i]
        row = delta[i]
        for j in range(k):
            dx = x - sx[j]
            dy = y - sy[j]
            row[j] = np.sqrt(dx * dx + dy * dy)
        best = 0
        best_d = row[0]
        for j in range(1, k):
            if row[j] < best_d:
                best_d = row[j]
                best = j
        row_near[i] = best
        for j in range(k):
            v = row[j]
            if v < col_best[j]:
                col_best[j] = v
                col_near[j] = i


@njit(cache=True)
def _evaluate_many(genes, static, deformed, w_order, s_order, fitness):
    n = deformed.shape[0]
    k = static.shape[0]
    dx = deformed[:, 0].copy()
    dy = deformed[:, 1].copy()
    sx = static[:, 0].copy()
    sy = static[:, 1].copy()
    wx = np.empty(n)
    wy = np.empty(n)
    delta = np.empty((n, k))
    match_ws = np.empty(n, dtype=np.int64)
    match_sw = np.empty(k, dtype=np.int64)
    taken_s = np.empty(k, dtype=np.bool_)
    taken_w = np.empty(n, dtype=np.bool_)
    near_s = np.empty(n, dtype=np.int64)
    near_w = np.empty(k, dtype=np.int64)
    col_best = np.empty(k)
    for p in range(genes.shape[0]):
        t0 = genes[p, 0]
        t1 = genes[p, 1]
        t2 = genes[p, 2]
        t3 = genes[p, 3]
        t4 = genes[p, 4]
        t5 = genes[p, 5]
        for i in range(n):
            wx[i] = t0 * dx[i] + t1 * dy[i] + t2
            wy[i] = t3 * dx[i] + t4 * dy[i] + t5
        _distances_and_nearest(wx, wy, sx, sy, delta, near_s, near_w, col_best)
        _greedy_rows(delta, w_order, near_s, match_ws, taken_s)
        _greedy_cols(delta, s_order, near_w, match_sw, taken_w)
        fitness[p] = _weighted_cost(delta, match_ws, match_sw)


# ---------------------------------------------------------------------------
# public API


def _check_order(order, size, name):
    order = np.ascontiguousarray(order, dtype=np.int64)
    if order.shape != (size,) or not np.array_equal(np.sort(order), np.arange(size)):
        raise ValueError(f"{name} must be a permutation of range({size})")
    return order


def distance_matrix(w, s) -> np.ndarray:
    """Pairwise Euclidean distances, shape ``(len(w), len(s))``."""
    w = check_pointset(w, "w")
    s = check_pointset(s, "s")
    delta = np.empty((w.shape[0], s.shape[0]))
    _fill_distances(w, s, delta)
    return delta


def greedy_assign(delta, order, direction: str = W_TO_S) -> np.ndarray:
    """Greedy one-directional correspondence as a binary ``(n, k)`` matrix.

    Source points are visited in ``order``. Each one takes its nearest
    target that nobody has taken yet (lowest index on ties). Once all
    targets are taken, the remaining sources stay unmatched.

    Parameters
    ----------
    delta : array-like of shape (n, k)
        Distance matrix, rows are warped points and columns static points.
    order : array-like of int
        Permutation of the source indices: ``range(n)`` for ``"w->s"``,
        ``range(k)`` for ``"s->w"``.
    direction : {"w->s", "s->w"}
    """
    delta = np.ascontiguousarray(delta, dtype=np.float64)
    if delta.ndim != 2 or 0 in delta.shape:
        raise ValueError(f"delta must be a non-empty 2-D matrix, got shape {delta.shape}")
    n, k = delta.shape
    out = np.zeros((n, k), dtype=np.int8)
    if direction == W_TO_S:
        order = _check_order(order, n, "order")
        match = np.empty(n, dtype=np.int64)
        nearest = np.empty(n, dtype=np.int64)
        _row_argmins(delta, nearest)
        _greedy_rows(delta, order, nearest, match, np.empty(k, dtype=np.bool_))
        rows = np.flatnonzero(match >= 0)
        out[rows, match[rows]] = 1
    elif direction == S_TO_W:
        order = _check_order(order, k, "order")
        match = np.empty(k, dtype=np.int64)
        nearest = np.empty(k, dtype=np.int64)
        _col_argmins(delta, nearest)
        _greedy_cols(delta, order, nearest, match, np.empty(n, dtype=np.bool_))
        cols = np.flatnonzero(match >= 0)
        out[match[cols], cols] = 1
    else:
        raise ValueError(f"direction must be {W_TO_S!r} or {S_TO_W!r}, got {direction!r}")
    return out


def fresh_match_order(n: int, k: int, random_state=None) -> MatchOrder:
    """Draw uniformly random visiting orders for ``n`` warped and ``k`` static points.

    The W->S permutation is drawn before the S->W one.
    """
    if n < 1 or k < 1:
        raise ValueError(f"point counts must be >= 1, got n={n}, k={k}")
    rng = check_random_state(random_state)
    return MatchOrder(rng.permutation(n).astype(np.int64), rng.permutation(k).astype(np.int64))


def evaluate(s, d, c, order: MatchOrder) -> MatchResult:
    """Score transform ``c`` for aligning ``d`` onto ``s`` under one visiting order.

    Returns every intermediate matrix along with the fitness. The fitness is
    bit-identical to what :func:`evaluate_population` reports for the same
    inputs.
    """
    s = check_pointset(s, "s")
    d = check_pointset(d, "d")
    if not isinstance(c, AffineParams):
        c = AffineParams.from_array(c)
    n, k = d.shape[0], s.shape[0]
    w_order = _check_order(order[0], n, "w_order")
    s_order = _check_order(order[1], k, "s_order")

    delta = distance_matrix(warp(c, d), s)
    m_prime = greedy_assign(delta, w_order, W_TO_S)
    m_double_prime = greedy_assign(delta, s_order, S_TO_W)
    q = m_prime.astype(np.float64) + m_double_prime
    q_star = np.zeros_like(q)
    np.divide(1.0, q, out=q_star, where=q != 0)
    m = m_prime * q_star

    fitness = float(evaluate_population(s, d, c.to_array()[None, :], (w_order, s_order))[0])
    return MatchResult(delta, m_prime, m_double_prime, q, q_star, m, fitness)


def evaluate_population(s, d, genes, order: MatchOrder) -> np.ndarray:
    """Fitness of every row of ``genes`` (shape ``(p, 6)``) under one shared order."""
    s = check_pointset(s, "s")
    d = check_pointset(d, "d")
    genes = np.ascontiguousarray(genes, dtype=np.float64)
    if genes.ndim != 2 or genes.shape[1] != 6:
        raise ValueError(f"genes must have shape (p, 6), got {genes.shape}")
    w_order = np.ascontiguousarray(order[0], dtype=np.int64)
    s_order = np.ascontiguousarray(order[1], dtype=np.int64)
    if w_order.shape != (d.shape[0],) or s_order.shape != (s.shape[0],):
        raise ValueError("match order sizes do not match the point-sets")
    fitness = np.empty(genes.shape[0])
    _evaluate_many(genes, s, d, w_order, s_order, fitness)
    return fitness
