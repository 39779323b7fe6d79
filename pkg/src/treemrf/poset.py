"""The tree-shape partial order: single re-anchoring moves certified by the
convex-order criterion, closed transitively, reduced to Hasse edges.

An arc between two shapes is admitted only when one single-move realization
gets the same directed verdict at every alpha of the evaluation grid; moves
whose verdict varies across the grid are recorded in `flags` instead, and
moves that are INCOMPARABLE at every grid point in `undecided`. Antisymmetry
of the resulting relation is a conjecture, asserted loudly at build time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .mpmrf import DiscreteDist, MpmrfModel, aggregate_dist, h_poly
from .orders import st_compare
from .tree_core import (
    ShapeCode,
    Tree,
    _norm_edge,
    canonical_code,
    enumerate_shapes,
    prune,
)

POSET_D_RANGE = (4, 9)
DEFAULT_ALPHA_GRID = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95)


class AntisymmetryError(RuntimeError):
    """Two distinct shapes turned out order-equivalent; the conjecture the
    relation relies on would be broken."""


@dataclass(frozen=True)
class MoveRecord:
    """One re-anchoring move between shape indices, with per-alpha verdicts."""

    source: int
    target: int
    u: int
    v: int
    w: int
    relations: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "move": [self.u, self.v, self.w],
            "relations": list(self.relations),
        }


@dataclass(frozen=True)
class ShapePoset:
    d: int
    shapes: tuple[ShapeCode, ...]
    reps: tuple[Tree, ...]
    relation: np.ndarray  # boolean, reflexive-transitive closure
    hasse: tuple[tuple[int, int], ...]
    alpha_grid: tuple[float, ...]
    flags: tuple[MoveRecord, ...]       # verdict varied across the grid
    undecided: tuple[MoveRecord, ...]   # INCOMPARABLE at every grid alpha

    def index_of(self, code: ShapeCode) -> int:
        return self.shapes.index(code)

    def leq(self, a: ShapeCode, b: ShapeCode) -> bool:
        return bool(self.relation[self.index_of(a), self.index_of(b)])

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "shapes": [c.hex for c in self.shapes],
            "hasse": [list(e) for e in self.hasse],
            "flags": [f.to_json() for f in self.flags],
        }


def _moves(tree: Tree):
    """Every re-anchoring move (u, v, w, residual, moved tree) of a tree."""
    for (a, b) in tree.edges:
        for u, v in ((a, b), (b, a)):
            residual, detached = prune(tree, u, v)
            base = [e for e in tree.edges if e != _norm_edge(u, v)]
            for w in residual.vertices:
                if w == v:
                    continue
                moved = Tree.on(tree.vertices, base + [(u, w)])
                yield u, v, w, residual, moved


def single_move_neighbors(tree: Tree) -> list[tuple[Tree, int, int, int]]:
    """Trees one re-anchoring move away, one representative per shape."""
    if tree.d < 3:
        raise ValueError("single moves need at least 3 vertices")
    seen: set[ShapeCode] = set()
    out = []
    for u, v, w, _residual, moved in _moves(tree):
        code = canonical_code(moved)
        if code not in seen:
            seen.add(code)
            out.append((moved, u, v, w))
    return out


@lru_cache(maxsize=300_000)
def _h_dist_cached(tree: Tree, root: int, alpha: float) -> DiscreteDist:
    return DiscreteDist.from_poly(h_poly(tree, root, alpha))


def _grid_verdicts(residual: Tree, v: int, w: int, alpha_grid) -> tuple[str, ...]:
    rels = []
    for alpha in alpha_grid:
        hv = _h_dist_cached(residual, v, alpha)
        hw = _h_dist_cached(residual, w, alpha)
        rels.append(st_compare(hv, hw).relation.value)
    return tuple(rels)


def build_poset(d: int, alpha_grid=DEFAULT_ALPHA_GRID, lam: float = 1.0) -> ShapePoset:
    """Construct the shape poset for all d-vertex trees.

    Every move of every shape representative is evaluated at every grid
    alpha; an arc needs a unanimous direction. The closure is checked for
    antisymmetry both structurally and empirically (no two distinct shapes
    may share an aggregate law at alpha = 0.5).
    """
    lo, hi = POSET_D_RANGE
    if not lo <= d <= hi:
        raise ValueError(f"d must be in [{lo}, {hi}]")
    grid = tuple(float(a) for a in alpha_grid)
    if not grid:
        raise ValueError("alpha grid must not be empty")
    if any(not 0.0 < a < 1.0 for a in grid):
        raise ValueError("grid alphas must lie strictly inside (0, 1)")

    reps = tuple(enumerate_shapes(d))
    codes = tuple(canonical_code(t) for t in reps)
    index = {c: i for i, c in enumerate(codes)}
    n = len(reps)

    arcs = np.eye(n, dtype=bool)
    flags: list[MoveRecord] = []
    undecided: list[MoveRecord] = []
    for i, tree in enumerate(reps):
        for u, v, w, residual, moved in _moves(tree):
            j = index[canonical_code(moved)]
            rels = _grid_verdicts(residual, v, w, grid)
            rec = MoveRecord(i, j, u, v, w, rels)
            le_ok = all(r in ("LE", "EQ") for r in rels)
            ge_ok = all(r in ("GE", "EQ") for r in rels)
            if le_ok:
                arcs[i, j] = True
            if ge_ok:
                arcs[j, i] = True
            if not le_ok and not ge_ok:
                if all(r == "INCOMPARABLE" for r in rels):
                    undecided.append(rec)
                else:
                    flags.append(rec)

    relation = _transitive_closure(arcs)
    bad = relation & relation.T & ~np.eye(n, dtype=bool)
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise AntisymmetryError(f"shapes {codes[i].hex} and {codes[j].hex} compare both ways")
    _assert_distinct_aggregates(reps, codes, lam)

    strict = relation & ~np.eye(n, dtype=bool)
    two_step = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    hasse_mat = strict & ~two_step
    hasse = tuple((int(i), int(j)) for i, j in np.argwhere(hasse_mat))
    return ShapePoset(d, codes, reps, relation, hasse, grid, tuple(flags), tuple(undecided))


def _transitive_closure(arcs: np.ndarray) -> np.ndarray:
    r = arcs.copy()
    while True:
        nxt = r | ((r.astype(np.int64) @ r.astype(np.int64)) > 0)
        if (nxt == r).all():
            return r
        r = nxt


def _assert_distinct_aggregates(reps, codes, lam: float, alpha: float = 0.5) -> None:
    dists = [aggregate_dist(MpmrfModel.homogeneous(t, lam, alpha), 1e-12) for t in reps]
    n = max(len(x.pmf) for x in dists)
    mat = np.zeros((len(dists), n))
    for i, x in enumerate(dists):
        mat[i, : len(x.pmf)] = x.pmf
    for i in range(len(dists)):
        for j in range(i + 1, len(dists)):
            if np.max(np.abs(mat[i] - mat[j])) < 1e-10:
                raise AntisymmetryError(
                    f"shapes {codes[i].hex} and {codes[j].hex} share an aggregate law")


def minimal_elements(poset: ShapePoset) -> list[int]:
    strict = poset.relation & ~np.eye(len(poset.shapes), dtype=bool)
    return [i for i in range(len(poset.shapes)) if not strict[:, i].any()]


def maximal_elements(poset: ShapePoset) -> list[int]:
    strict = poset.relation & ~np.eye(len(poset.shapes), dtype=bool)
    return [i for i in range(len(poset.shapes)) if not strict[i, :].any()]


def _unique_bound(relation: np.ndarray, a: int, b: int, upper: bool) -> bool:
    r = relation if upper else relation.T
    bounds = np.nonzero(r[a] & r[b])[0]
    if bounds.size == 0:
        return False
    # the bound set must contain an element preceding all its other members
    return any(bool(r[u, bounds].all()) for u in bounds)


def is_lattice(poset: ShapePoset) -> bool:
    """True when every pair of shapes has a unique join and a unique meet."""
    n = len(poset.shapes)
    for a in range(n):
        for b in range(a + 1, n):
            if not _unique_bound(poset.relation, a, b, upper=True):
                return False
            if not _unique_bound(poset.relation, a, b, upper=False):
                return False
    return True


def hasse_dot(poset: ShapePoset) -> str:
    """DOT digraph of the Hasse diagram, drawn upward."""
    lines = [
        f'digraph shape_poset_d{poset.d} {{',
        "  rankdir=BT;",
        '  node [shape=box fontname="Courier"];',
    ]
    for i, (code, rep) in enumerate(zip(poset.shapes, poset.reps)):
        edges = " ".join(f"{a}-{b}" for a, b in rep.edges)
        lines.append(f'  n{i} [label="{code.hex}" tooltip="{edges}"];')
    for (i, j) in poset.hasse:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _chain_pairs(trees: list[Tree]) -> list[tuple[Tree, Tree]]:
    return [(trees[k], trees[k + 1]) for k in range(len(trees) - 1)]


def _attach(edges: list, base: int, subtree: Tree, anchor: int) -> int:
    """Append a relabeled copy of `subtree` joined to `anchor` by its vertex 1.

    Returns the next free label. Subtree labels must be 1..m.
    """
    if subtree.vertices != tuple(range(1, subtree.d + 1)):
        raise ValueError("attached subtrees must be labeled 1..m")
    edges.append((anchor, base + 1))
    for (a, b) in subtree.edges:
        edges.append((base + a, base + b))
    return base + subtree.d


def corollary_chain(kind: str, **params) -> list[tuple[Tree, Tree]]:
    """Concrete (lower, upper) tree pairs asserted by the comparison tools.

    Kinds:
      star_to_series(d): one-edge-at-a-time deconstruction of the d-star
        into the d-path, from below.
      ray_tool(d_ray, subtrees=()): single vertices at a hub successively
        chained into a series limb; extra subtrees stay on the hub.
      series_slide(d_se, tau): a subtree anchored on a series tree slides
        from the end toward the middle.
      beam_balance(d_beam, d_ray, subtrees=()): d_ray single vertices split
        over the two ends of a symmetric beam; more balanced splits sit
        lower. `subtrees` entries (k, tree) are mirrored onto position
        d_beam + 1 - k.
    """
    builders = {
        "star_to_series": _star_to_series,
        "ray_tool": _ray_tool,
        "series_slide": _series_slide,
        "beam_balance": _beam_balance,
    }
    if kind not in builders:
        raise ValueError(f"unknown chain kind {kind!r}")
    return builders[kind](**params)


def _star_to_series(d: int) -> list[tuple[Tree, Tree]]:
    if d < 4:
        raise ValueError("star-to-series needs d >= 4")
    trees = []
    for k in range(1, d - 1):
        edges = [(i, i + 1) for i in range(1, k + 1)]
        edges += [(1, j) for j in range(k + 2, d + 1)]
        trees.append(Tree.of(d, edges))
    trees.reverse()  # series first, star last
    return _chain_pairs(trees)


def _ray_tool(d_ray: int, subtrees=()) -> list[tuple[Tree, Tree]]:
    if d_ray < 3:
        raise ValueError("chaining rays needs d_ray >= 3")
    trees = []
    for k in range(1, d_ray):
        edges = [(i, i + 1) for i in range(1, k + 1)]         # chained rays
        edges += [(1, j) for j in range(k + 2, d_ray + 2)]    # remaining rays
        base = d_ray + 1
        for sub in subtrees:
            base = _attach(edges, base, sub, anchor=1)
        trees.append(Tree.of(base, edges))
    trees.reverse()
    return _chain_pairs(trees)


def _series_slide(d_se: int, tau: Tree) -> list[tuple[Tree, Tree]]:
    if d_se < 3:
        raise ValueError("the series part needs d_se >= 3")
    trees = []
    for k in range(1, d_se // 2 + 1):
        edges = [(i, i + 1) for i in range(1, d_se)]
        base = _attach(edges, d_se, tau, anchor=k)
        trees.append(Tree.of(base, edges))
    return _chain_pairs(trees)


def _beam_balance(d_beam: int, d_ray: int, subtrees=()) -> list[tuple[Tree, Tree]]:
    if d_beam < 2 or d_ray < 1:
        raise ValueError("need d_beam >= 2 and d_ray >= 1")
    for (k, _sub) in subtrees:
        if not 1 <= k <= d_beam:
            raise ValueError(f"subtree position {k} outside the beam")
    trees = []
    for m in range((d_ray + 1) // 2, d_ray + 1):
        edges = [(i, i + 1) for i in range(1, d_beam)]
        rays = list(range(d_beam + 1, d_beam + d_ray + 1))
        edges += [(1, r) for r in rays[:m]]
        edges += [(d_beam, r) for r in rays[m:]]
        base = d_beam + d_ray
        for (k, sub) in subtrees:
            base = _attach(edges, base, sub, anchor=k)
            mirror = d_beam + 1 - k
            if mirror != k:
                base = _attach(edges, base, sub, anchor=mirror)
        trees.append(Tree.of(base, edges))
    return _chain_pairs(trees)
