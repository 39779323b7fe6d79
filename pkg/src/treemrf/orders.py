"""Stochastic-order criteria between vertices and between tree shapes.

All criteria here are sufficient conditions: INCOMPARABLE means the check is
inconclusive, never a proof that no ordering exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .mpmrf import DiscreteDist, MpmrfModel, h_dist, h_poly
from .tree_core import Tree, prune

CDF_TOL = 1e-12
MEAN_TOL = 1e-8


class Relation(enum.Enum):
    LE = "LE"
    GE = "GE"
    EQ = "EQ"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class OrderVerdict:
    """Outcome of a dominance check between two laws a and b.

    not_le_at / not_ge_at are witness points: the first k at which the
    corresponding direction of dominance fails (None when it holds).
    """

    relation: Relation
    not_le_at: int | None = None
    not_ge_at: int | None = None

    def to_json(self) -> dict:
        witness = None
        if self.relation is Relation.INCOMPARABLE:
            witness = [self.not_le_at, self.not_ge_at]
        return {
            "relation": self.relation.value,
            "witness": witness,
            "not_le_at": self.not_le_at,
            "not_ge_at": self.not_ge_at,
        }


def _verdict(not_le_at: int | None, not_ge_at: int | None) -> OrderVerdict:
    if not_le_at is None and not_ge_at is None:
        return OrderVerdict(Relation.EQ)
    if not_le_at is None:
        return OrderVerdict(Relation.LE, None, not_ge_at)
    if not_ge_at is None:
        return OrderVerdict(Relation.GE, not_le_at, None)
    return OrderVerdict(Relation.INCOMPARABLE, not_le_at, not_ge_at)


def st_compare(a: DiscreteDist, b: DiscreteDist, tol: float = CDF_TOL) -> OrderVerdict:
    """Usual stochastic order: LE means a <=_st b, i.e. F_a >= F_b pointwise."""
    n = max(len(a.pmf), len(b.pmf))
    fa = np.cumsum(np.pad(a.pmf, (0, n - len(a.pmf))))
    fb = np.cumsum(np.pad(b.pmf, (0, n - len(b.pmf))))
    le_bad = np.nonzero(fa < fb - tol)[0]  # a <=_st b needs F_a(k) >= F_b(k)
    ge_bad = np.nonzero(fb < fa - tol)[0]
    return _verdict(int(le_bad[0]) if le_bad.size else None,
                    int(ge_bad[0]) if ge_bad.size else None)


def synecdochic_compare(model: MpmrfModel, v: int, w: int, tol: float = CDF_TOL) -> OrderVerdict:
    """Compare how much components v and w contribute to the total.

    LE certifies that the pair (N_v, M) precedes (N_w, M) in the supermodular
    order, via stochastic dominance of H_v over H_w (self-rooted laws).
    """
    if v == w:
        raise ValueError("vertices must be distinct")
    return st_compare(h_dist(model, v), h_dist(model, w), tol)


def _single_move(t1: Tree, t2: Tree) -> tuple[int, int, int]:
    """Identify the (u, v, w) of a one-edge re-anchoring between t1 and t2.

    t1 contains edge (u,v), t2 contains (u,w) instead, and all other edges
    coincide; u is the vertex of the detached subtree.
    """
    if t1.vertices != t2.vertices:
        raise ValueError("trees must share the same vertex set")
    e1 = set(t1.edges) - set(t2.edges)
    e2 = set(t2.edges) - set(t1.edges)
    if not e1 and not e2:
        raise ValueError("trees are identical")
    if len(e1) != 1 or len(e2) != 1:
        raise ValueError("trees differ by more than one edge")
    (a, b), (c, d) = next(iter(e1)), next(iter(e2))
    common = {a, b} & {c, d}
    if len(common) != 1:
        raise ValueError("differing edges do not share the moving vertex")
    u = common.pop()
    v = a if b == u else b
    w = c if d == u else d
    return u, v, w


def shape_compare(t1: Tree, t2: Tree, alpha: float, lam: float = 1.0,
                  tol: float = CDF_TOL) -> OrderVerdict:
    """Convex-order criterion between two trees one re-anchoring move apart.

    LE certifies M(t1) <=_cx M(t2) under a common edge parameter alpha: the
    anchoring vertices v (in t1) and w (in t2) are compared through their H
    laws on the shared residual subtree.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    u, v, w = _single_move(t1, t2)
    residual, detached = prune(t1, u, v)
    if w not in residual.vertices:
        raise ValueError("re-anchoring target is inside the detached subtree")
    hv = DiscreteDist.from_poly(h_poly(residual, v, alpha))
    hw = DiscreteDist.from_poly(h_poly(residual, w, alpha))
    return st_compare(hv, hw, tol)


def cx_check_empirical(m1: DiscreteDist, m2: DiscreteDist, tol: float = MEAN_TOL) -> OrderVerdict:
    """Numerical convex-order check: equal means plus stop-loss dominance.

    LE means every stop-loss premium of m1 is below m2's; raises when the
    means differ beyond tol, since the convex order forces equal means.
    """
    if abs(m1.mean() - m2.mean()) >= tol:
        raise ValueError("means differ: convex order impossible")
    n = max(len(m1.pmf), len(m2.pmf)) + 1
    s1 = _stop_loss_curve(m1.pmf, n)
    s2 = _stop_loss_curve(m2.pmf, n)
    le_bad = np.nonzero(s1 > s2 + tol)[0]
    ge_bad = np.nonzero(s2 > s1 + tol)[0]
    return _verdict(int(le_bad[0]) if le_bad.size else None,
                    int(ge_bad[0]) if ge_bad.size else None)


def _stop_loss_curve(pmf: np.ndarray, n: int) -> np.ndarray:
    """E[(X-c)+] for c = 0..n-1, via the survival-function tail sums."""
    sf = 1.0 - np.cumsum(np.pad(pmf, (0, max(0, n - len(pmf)))))[:n]
    sf = np.maximum(sf, 0.0)
    return np.cumsum(sf[::-1])[::-1]
