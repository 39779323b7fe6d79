"""Vertex-labeled trees: rooted views, paths, pruning, canonical shapes, enumeration.

Vertices are positive integer labels. Freshly built trees live on {1..d};
pruning preserves the original labels, so subtrees may live on any label set.
Shapes (isomorphism classes) are identified by a canonical code computed from
a center-rooted AHU encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


Edge = tuple[int, int]


def _norm_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Tree:
    """Undirected tree on an explicit, sorted vertex label set."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices) or not vs:
            raise ValueError("vertex labels must be a non-empty set")
        if any(v < 1 for v in vs):
            raise ValueError("vertex labels must be positive integers")
        if tuple(sorted(vs)) != self.vertices:
            raise ValueError("vertices must be sorted")
        seen: set[Edge] = set()
        for (a, b) in self.edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a},{b}) uses unknown vertex")
            e = _norm_edge(a, b)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        if len(self.edges) != len(self.vertices) - 1:
            raise ValueError("a tree on d vertices has exactly d-1 edges")
        if self._component(self.vertices[0]) != vs:
            raise ValueError("edge set is not connected")

    @classmethod
    def of(cls, d: int, edges) -> "Tree":
        """Tree on vertices {1..d}."""
        if d < 1:
            raise ValueError("d must be >= 1")
        return cls(tuple(range(1, d + 1)), tuple(sorted(_norm_edge(a, b) for a, b in edges)))

    @classmethod
    def on(cls, vertices, edges) -> "Tree":
        """Tree on an arbitrary vertex label set (used for subtrees)."""
        return cls(tuple(sorted(vertices)), tuple(sorted(_norm_edge(a, b) for a, b in edges)))

    @property
    def d(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for (a, b) in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for v in adj:
            adj[v].sort()
        return adj

    def has_edge(self, a: int, b: int) -> bool:
        return _norm_edge(a, b) in set(self.edges)

    def _component(self, start: int) -> set[int]:
        adj = {v: [] for v in self.vertices}
        for (a, b) in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        return comp

    def relabel(self, mapping: dict[int, int]) -> "Tree":
        """Apply a vertex relabeling (mapping must be injective on vertices)."""
        return Tree.on([mapping[v] for v in self.vertices],
                       [(mapping[a], mapping[b]) for (a, b) in self.edges])

    def to_json(self) -> dict:
        if self.vertices != tuple(range(1, self.d + 1)):
            raise ValueError("JSON export requires contiguous labels 1..d")
        return {"d": self.d, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "Tree":
        return cls.of(int(obj["d"]), [(int(a), int(b)) for a, b in obj["edges"]])


class RootedTree:
    """Read-only rooted view of a tree: parent/children maps and descendant sets.

    children lists are sorted ascending so every downstream product over
    children is deterministic.
    """

    def __init__(self, tree: Tree, root: int):
        if root not in tree.vertices:
            raise ValueError(f"invalid root {root}")
        self.tree = tree
        self.root = root
        adj = tree.adjacency()
        parent: dict[int, int] = {}
        order = [root]
        seen = {root}
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    order.append(u)
        children: dict[int, tuple[int, ...]] = {v: () for v in tree.vertices}
        for v, p in parent.items():
            children[p] = children[p] + (v,)
        self.parent = parent
        self.children = {v: tuple(sorted(cs)) for v, cs in children.items()}
        # BFS order: parents always precede children
        self.order = tuple(order)
        dsc: dict[int, set[int]] = {v: set() for v in tree.vertices}
        for v in reversed(self.order):
            for c in self.children[v]:
                dsc[v].add(c)
                dsc[v] |= dsc[c]
        self.dsc = {v: frozenset(s) for v, s in dsc.items()}

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]


@dataclass(frozen=True, order=True)
class ShapeCode:
    """Canonical byte code of a tree's isomorphism class."""

    code: bytes

    @property
    def hex(self) -> str:
        return self.code.hex()

    def __str__(self) -> str:
        return self.hex


def root_at(tree: Tree, r: int) -> RootedTree:
    """Rooted view of `tree` at vertex r."""
    return RootedTree(tree, r)


def path(tree: Tree, u: int, w: int) -> list[Edge]:
    """The unique edge sequence from u to w; empty when u == w."""
    if u not in tree.vertices or w not in tree.vertices:
        raise ValueError(f"invalid vertices ({u},{w})")
    if u == w:
        return []
    rooted = root_at(tree, w)
    seq = []
    v = u
    while v != w:
        p = rooted.parent[v]
        seq.append(_norm_edge(v, p))
        v = p
    return seq


def prune(tree: Tree, u: int, v: int) -> tuple[Tree, Tree]:
    """Delete edge (u,v) and return (residual, detached).

    `detached` is the subtree containing u, `residual` the one containing v;
    vertex labels are preserved in both parts.
    """
    if not tree.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    e = _norm_edge(u, v)
    rest = [x for x in tree.edges if x != e]
    adj: dict[int, list[int]] = {x: [] for x in tree.vertices}
    for (a, b) in rest:
        adj[a].append(b)
        adj[b].append(a)
    side = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in side:
                side.add(y)
                stack.append(y)
    detached = Tree.on(side, [x for x in rest if x[0] in side])
    res_vs = [x for x in tree.vertices if x not in side]
    residual = Tree.on(res_vs, [x for x in rest if x[0] not in side])
    return residual, detached


def _ahu_encoding(tree: Tree, root: int) -> bytes:
    """AHU canonical string of the rooted tree, as bytes of '(' / ')'."""
    rooted = root_at(tree, root)
    enc: dict[int, bytes] = {}
    for v in reversed(rooted.order):
        parts = sorted(enc[c] for c in rooted.children[v])
        enc[v] = b"(" + b"".join(parts) + b")"
    return enc[root]


def _centers(tree: Tree) -> list[int]:
    """Center vertex (or the two of a bicenter) by iterative leaf removal."""
    if tree.d == 1:
        return [tree.vertices[0]]
    deg = {v: 0 for v in tree.vertices}
    adj = tree.adjacency()
    for v in tree.vertices:
        deg[v] = len(adj[v])
    remaining = set(tree.vertices)
    layer = [v for v in tree.vertices if deg[v] == 1]
    while len(remaining) > 2:
        nxt = []
        for v in layer:
            remaining.discard(v)
            for u in adj[v]:
                if u in remaining:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt
    return sorted(remaining)


def canonical_code(tree: Tree) -> ShapeCode:
    """Isomorphism-invariant code: minimal center-rooted AHU encoding."""
    return ShapeCode(min(_ahu_encoding(tree, c) for c in _centers(tree)))


def isomorphic(t1: Tree, t2: Tree) -> bool:
    return t1.d == t2.d and canonical_code(t1) == canonical_code(t2)


def degree_vector(tree: Tree) -> tuple[int, ...]:
    """Vertex degrees in decreasing order."""
    adj = tree.adjacency()
    return tuple(sorted((len(adj[v]) for v in tree.vertices), reverse=True))


MAX_ENUM_D = 12  # combinatorial growth; n_12 = 551 shapes


@lru_cache(maxsize=None)
def _enumerate_shapes_cached(d: int) -> tuple[Tree, ...]:
    if d == 1:
        return (Tree.of(1, []),)
    reps: dict[ShapeCode, Tree] = {}
    for smaller in _enumerate_shapes_cached(d - 1):
        # every d-vertex tree arises by attaching a leaf to some (d-1)-vertex tree
        for v in smaller.vertices:
            cand = Tree.of(d, list(smaller.edges) + [(v, d)])
            reps.setdefault(canonical_code(cand), cand)
    return tuple(reps[c] for c in sorted(reps))


def enumerate_shapes(d: int) -> list[Tree]:
    """One representative per free-tree isomorphism class, ordered by ShapeCode."""
    if not 1 <= d <= MAX_ENUM_D:
        raise ValueError(f"d must be in [1, {MAX_ENUM_D}]")
    return list(_enumerate_shapes_cached(d))
