"""Independent oracles and generators used across the test suite.

Everything here is deliberately written without reaching into the package's
computational paths: brute-force isomorphism by permutation search, trees from
random Pruefer sequences, pgfs expanded with raw numpy convolutions, and the
compound pgf exponentiated as a truncated Taylor series.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from treemrf.tree_core import Tree


def brute_force_isomorphic(t1: Tree, t2: Tree) -> bool:
    """Isomorphism by exhaustive permutation search (small d only)."""
    if t1.d != t2.d:
        return False
    e2 = {frozenset(e) for e in t2.edges}
    vs = list(t1.vertices)
    for perm in itertools.permutations(t2.vertices):
        m = dict(zip(vs, perm))
        if {frozenset((m[a], m[b])) for a, b in t1.edges} == e2:
            return True
    return False


def pruefer_tree(seq: list[int], d: int) -> Tree:
    """Decode a Pruefer sequence over {1..d} (length d-2) into a tree."""
    degree = {v: 1 for v in range(1, d + 1)}
    for v in seq:
        degree[v] += 1
    edges = []
    seq = list(seq)
    for v in seq:
        leaf = min(u for u in degree if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
        del degree[leaf]
    a, b = sorted(u for u in degree if degree[u] == 1)
    edges.append((a, b))
    return Tree.of(d, edges)


def random_tree(rng: np.random.Generator, d: int) -> Tree:
    if d == 1:
        return Tree.of(1, [])
    if d == 2:
        return Tree.of(2, [(1, 2)])
    seq = [int(x) for x in rng.integers(1, d + 1, size=d - 2)]
    return pruefer_tree(seq, d)


def poisson_pmf(mu: float, k_max: int) -> np.ndarray:
    ks = np.arange(k_max + 1)
    return np.exp(-mu + ks * math.log(mu) - np.array([math.lgamma(k + 1.0) for k in ks]))


def eta_by_hand(tree: Tree, root: int, alpha: float) -> np.ndarray:
    """pgf of H_root expanded with raw numpy, an independent recursion."""
    adj = {v: [] for v in tree.vertices}
    for a, b in tree.edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in parent:
                parent[u] = v
                order.append(u)
                stack.append(u)
    coeffs: dict[int, np.ndarray] = {}
    for v in reversed(order):
        p = np.array([1.0])
        for u in adj[v]:
            if u != parent[v]:
                term = alpha * coeffs[u]
                term[0] += 1.0 - alpha
                p = np.convolve(p, term)
        coeffs[v] = np.concatenate([[0.0], p])
    return coeffs[root]


def agg_pmf_series_exp(tree: Tree, lam: float, alpha: float, k_max: int) -> np.ndarray:
    """pmf of the aggregate by exponentiating the compound pgf as a series.

    exp(lam * sum_v (1-a_pa(v)) (eta_v - 1)) expanded as a truncated Taylor
    series: the m-th power of the severity polynomial only feeds degrees
    >= m, so truncation at k_max is exact.
    """
    root = tree.vertices[0]
    adj = {v: [] for v in tree.vertices}
    for a, b in tree.edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in parent:
                parent[u] = v
                order.append(u)
                stack.append(u)
    etas: dict[int, np.ndarray] = {}
    for v in reversed(order):
        p = np.array([1.0])
        for u in adj[v]:
            if u != parent[v]:
                term = alpha * etas[u]
                term[0] += 1.0 - alpha
                p = np.convolve(p, term)
        etas[v] = np.concatenate([[0.0], p])
    b = np.zeros(k_max + 1)
    rate = 0.0
    for v in tree.vertices:
        w = lam if v == root else lam * (1.0 - alpha)
        rate += w
        e = etas[v]
        b[: len(e)] += w * e
    term = np.zeros(k_max + 1)
    term[0] = 1.0
    acc = term.copy()
    for m in range(1, k_max + 1):
        term = np.convolve(term, b)[: k_max + 1] / m
        acc += term
    return math.exp(-rate) * acc


def stop_loss_brute(pmf, c: int) -> float:
    return sum((k - c) * p for k, p in enumerate(pmf) if k > c)


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    n = max(len(p), len(q))
    p = np.pad(p, (0, n - len(p)))
    q = np.pad(q, (0, n - len(q)))
    return 0.5 * float(np.abs(p - q).sum())
