"""Tree-structured Markov random field with Poisson(lambda) marginals.

The model propagates events along edges by binomial thinning: rooted anywhere,
the root draws Poisson(lambda) and every other vertex v draws an innovation
Poisson(lambda*(1-alpha_e)) plus a Binomial(N_parent, alpha_e) carry-over,
where e is the edge to its parent. The joint law does not depend on the
rooting.

Key derived objects:
  * H_v: total events, anywhere on the tree, originating from vertex v when
    the tree is rooted at v. Its pgf is the recursive product over children
    of (1 - alpha + alpha * child pgf), times t.
  * M = sum of all components: compound Poisson with rate
    lambda * (d - sum(alpha_e)) and severity a mixture of the H_v laws,
    evaluated by Panjer recursion.
  * Expected allocations E[N_v 1{M=k}] = lambda * (pmf_{H_v} conv pmf_M)(k),
    the basis of conditional mean risk sharing and Euler TVaR contributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .series_poly import Poly, T, affine_thin, mul
from .tree_core import Tree, _norm_edge, path, root_at

PMF_SUM_TOL = 1e-9
DEFAULT_TOL = 1e-12
MAX_TOL = 1e-3


@dataclass(frozen=True)
class DiscreteDist:
    """pmf on {0..K} with explicit bookkeeping of the mass beyond K."""

    pmf: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.pmf, dtype=float)
        if p.min(initial=0.0) < -1e-15:
            raise ValueError("pmf has a significantly negative entry")
        p = np.where(p < 0.0, 0.0, p)
        p.flags.writeable = False
        object.__setattr__(self, "pmf", p)
        total = float(p.sum()) + self.tail_mass
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise ValueError(f"pmf plus tail mass sums to {total}, not 1")

    @classmethod
    def from_poly(cls, p: Poly) -> "DiscreteDist":
        return cls(np.array(p.coeffs))

    @property
    def k_max(self) -> int:
        return len(self.pmf) - 1

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.pmf)

    def mean(self) -> float:
        return float(np.arange(len(self.pmf)) @ self.pmf)

    def var(self) -> float:
        ks = np.arange(len(self.pmf))
        m = self.mean()
        return float((ks - m) ** 2 @ self.pmf)

    def quantile(self, kappa: float) -> int:
        """Smallest k with F(k) >= kappa (the inf-style quantile).

        kappa above the retained mass resolves to the support bound K.
        """
        if not 0.0 <= kappa < 1.0:
            raise ValueError("kappa must be in [0, 1)")
        return min(int(np.searchsorted(self.cdf(), kappa)), self.k_max)


@dataclass(frozen=True)
class AllocationTable:
    """Expected allocations E[N_v 1{M=k}] of one vertex across outcomes of M."""

    vertex: int
    by_k: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.by_k, dtype=float)
        if b.min(initial=0.0) < -1e-12:
            raise ValueError("allocation entries must be nonnegative")
        b = np.where(b < 0.0, 0.0, b)
        b.flags.writeable = False
        object.__setattr__(self, "by_k", b)

    def total(self) -> float:
        return float(self.by_k.sum())

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.by_k)


@dataclass(frozen=True)
class MpmrfModel:
    """Bundle of tree, marginal mean lambda and per-edge dependence alpha."""

    tree: Tree
    lam: float
    alpha: dict = field(repr=False)

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        a = {_norm_edge(*e): float(v) for e, v in self.alpha.items()}
        if set(a) != set(self.tree.edges):
            raise ValueError("alpha must be given for exactly the tree's edges")
        for e, v in a.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"alpha[{e}] = {v} outside [0, 1]")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def homogeneous(cls, tree: Tree, lam: float, alpha: float) -> "MpmrfModel":
        return cls(tree, lam, {e: alpha for e in tree.edges})

    def edge_alpha(self, a: int, b: int) -> float:
        return self.alpha[_norm_edge(a, b)]

    def is_homogeneous(self) -> bool:
        vals = set(self.alpha.values())
        return len(vals) <= 1

    def to_json(self) -> dict:
        obj = self.tree.to_json()
        obj["lambda"] = self.lam
        if self.is_homogeneous():
            obj["alpha"] = next(iter(self.alpha.values()))
        else:
            obj["alpha"] = {f"{a}-{b}": v for (a, b), v in sorted(self.alpha.items())}
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "MpmrfModel":
        tree = Tree.from_json(obj)
        lam = float(obj["lambda"])
        raw = obj["alpha"]
        if isinstance(raw, dict):
            alpha = {}
            for key, v in raw.items():
                a, b = key.split("-")
                alpha[_norm_edge(int(a), int(b))] = float(v)
            return cls(tree, lam, alpha)
        return cls.homogeneous(tree, lam, float(raw))


def _alpha_of(alpha, a: int, b: int) -> float:
    if isinstance(alpha, dict):
        return alpha[_norm_edge(a, b)]
    return float(alpha)


def h_poly(tree: Tree, root: int, alpha) -> Poly:
    """pgf of H_root as a polynomial; alpha is a scalar or an edge map."""
    rooted = root_at(tree, root)
    polys: dict[int, Poly] = {}
    for v in reversed(rooted.order):
        p = T
        for c in rooted.children[v]:
            p = mul(p, affine_thin(polys[c], _alpha_of(alpha, v, c)))
        polys[v] = p
    return polys[root]


def h_dist(model: MpmrfModel, root: int) -> DiscreteDist:
    """Exact law of H_root: support within {1..d}, no mass at 0."""
    return DiscreteDist.from_poly(h_poly(model.tree, root, model.alpha))


def _severity_mixture(model: MpmrfModel, root: int) -> tuple[float, np.ndarray]:
    """Compound-Poisson rate and normalized severity pmf of M.

    The aggregate pgf is exp(lambda * sum_v (1-alpha_pa(v)) * (eta_v(t)-1))
    with alpha_pa(root)=0, i.e. compound Poisson with rate
    lambda*(d - sum alpha_e) and severity the weight-(1-alpha_pa(v)) mixture
    of the H_v laws under this rooting.
    """
    tree = model.tree
    rooted = root_at(tree, root)
    eta: dict[int, Poly] = {}
    for v in reversed(rooted.order):
        p = T
        for c in rooted.children[v]:
            p = mul(p, affine_thin(eta[c], model.edge_alpha(v, c)))
        eta[v] = p
    weights = {}
    for v in tree.vertices:
        weights[v] = 1.0 if v == root else 1.0 - model.edge_alpha(rooted.parent[v], v)
    total = sum(weights.values())  # = d - sum(alpha_e)
    rate = model.lam * total
    sev = np.zeros(tree.d + 1)
    for v in tree.vertices:
        c = eta[v].coeffs
        sev[: len(c)] += (weights[v] / total) * c
    return rate, sev


def _panjer_compound_poisson(rate: float, sev: np.ndarray, k_max: int) -> np.ndarray:
    """pmf of a compound Poisson on {0..k_max} by Panjer recursion."""
    j_max = len(sev) - 1
    p = np.zeros(k_max + 1)
    p[0] = math.exp(-rate * (1.0 - sev[0]))
    js = np.arange(1, j_max + 1)
    jq = js * sev[1:]
    for k in range(1, k_max + 1):
        lo = max(0, k - j_max)
        window = p[lo:k][::-1]  # p[k-1], p[k-2], ..., p[k-j]
        p[k] = rate / k * float(jq[: k - lo] @ window)
    return p


def aggregate_dist(model: MpmrfModel, tol: float = DEFAULT_TOL, root: int | None = None) -> DiscreteDist:
    """Law of M = sum of all components, truncated once the tail is below tol.

    The rooting only affects intermediate quantities; the result is the same
    for every choice (tested to 1e-10 pointwise).
    """
    if not 0.0 < tol <= MAX_TOL:
        raise ValueError(f"tol must be in (0, {MAX_TOL}]")
    if root is None:
        root = model.tree.vertices[0]
    rate, sev = _severity_mixture(model, root)
    d, lam = model.tree.d, model.lam
    k = max(8, math.ceil(d * lam + 10.0 * math.sqrt(d * lam * d)))
    while True:
        pmf = _panjer_compound_poisson(rate, sev, k)
        tail = max(0.0, 1.0 - float(pmf.sum()))
        if tail < tol:
            return DiscreteDist(pmf, tail)
        k *= 2


def sample(model: MpmrfModel, root: int, rng_seed: int, n: int) -> np.ndarray:
    """n draws of the full vector, as an (n, d) array in vertex-label order.

    Reproducible across platforms: PCG64 stream, all variates by inversion.
    Consumption order is pinned: one Poisson block per vertex in BFS order
    (children ascending), each non-root block followed by its thinning block.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    tree = model.tree
    rooted = root_at(tree, root)
    col = {v: i for i, v in enumerate(tree.vertices)}
    out = np.zeros((n, tree.d), dtype=np.int64)
    out[:, col[root]] = _poisson_inverse(rng, model.lam, n)
    for v in rooted.order[1:]:
        a = model.edge_alpha(rooted.parent[v], v)
        innov = _poisson_inverse(rng, model.lam * (1.0 - a), n)
        carried = _binomial_thinning(rng, out[:, col[rooted.parent[v]]], a)
        out[:, col[v]] = innov + carried
    return out


def _poisson_inverse(rng: np.random.Generator, mu: float, n: int) -> np.ndarray:
    """Vectorized Poisson sampling by cdf inversion of one uniform per draw."""
    if mu == 0.0:
        rng.random(n)  # keep the stream layout independent of mu
        return np.zeros(n, dtype=np.int64)
    k_hi = int(mu + 12.0 * math.sqrt(mu) + 30.0)
    ks = np.arange(k_hi + 1)
    logpmf = -mu + ks * math.log(mu) - np.array([math.lgamma(k + 1) for k in ks])
    cdf = np.cumsum(np.exp(logpmf))
    u = rng.random(n)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _binomial_thinning(rng: np.random.Generator, counts: np.ndarray, alpha: float) -> np.ndarray:
    """Sum of counts[i] Bernoulli(alpha) trials per draw, one uniform each."""
    total = int(counts.sum())
    if total == 0:
        return np.zeros(len(counts), dtype=np.int64)
    hits = (rng.random(total) < alpha).astype(np.int64)
    cs = np.concatenate([[0], np.cumsum(hits)])
    ends = np.cumsum(counts)
    starts = ends - counts
    return cs[ends] - cs[starts]


def cov_with_sum(model: MpmrfModel, v: int) -> float:
    """Cov(N_v, M) = lambda * sum_j prod_{e in path(v,j)} alpha_e."""
    if v not in model.tree.vertices:
        raise ValueError(f"invalid vertex {v}")
    acc = 0.0
    for j in model.tree.vertices:
        prod = 1.0
        for (a, b) in path(model.tree, v, j):
            prod *= model.edge_alpha(a, b)
        acc += prod
    return model.lam * acc


def expected_allocation(model: MpmrfModel, v: int, tol: float = DEFAULT_TOL) -> AllocationTable:
    """E[N_v 1{M=k}] for k up to the aggregate support bound.

    Generating identity: sum_k E[N_v 1{M=k}] t^k = lambda * eta_v(t) * P_M(t),
    read coefficientwise, i.e. lambda times the convolution of the H_v and M
    pmfs. Entries total E[N_v] = lambda up to the truncation tail.
    """
    agg = aggregate_dist(model, tol)
    h = h_dist(model, v)
    by_k = model.lam * np.convolve(h.pmf, agg.pmf)
    return AllocationTable(v, by_k)


def tvar(dist: DiscreteDist, kappa: float) -> float:
    """Tail value-at-risk of an integer-valued distribution."""
    q = dist.quantile(kappa)
    ks = np.arange(len(dist.pmf))
    above = float(np.sum(ks[q + 1:] * dist.pmf[q + 1:]))
    atom = (float(dist.cdf()[q]) - kappa) * q
    return (above + atom) / (1.0 - kappa)


def _euler_contribution(agg: DiscreteDist, alloc: AllocationTable, lam: float, kappa: float) -> float:
    q = agg.quantile(kappa)
    above = lam - float(alloc.cumulative()[q])
    pq = float(agg.pmf[q])
    atom = (float(agg.cdf()[q]) - kappa) / pq * float(alloc.by_k[q]) if pq > 0 else 0.0
    return (above + atom) / (1.0 - kappa)


def tvar_contribution(model: MpmrfModel, v: int, kappa: float, tol: float = DEFAULT_TOL) -> float:
    """Euler TVaR contribution of component v at level kappa.

    With q = VaR_kappa(M):
      (E[N_v 1{M>q}] + (F_M(q)-kappa)/p_M(q) * E[N_v 1{M=q}]) / (1-kappa).
    Contributions over all vertices sum to TVaR_kappa(M).
    """
    if not 0.0 <= kappa < 1.0:
        raise ValueError("kappa must be in [0, 1)")
    agg = aggregate_dist(model, tol)
    h = h_dist(model, v)
    alloc = AllocationTable(v, model.lam * np.convolve(h.pmf, agg.pmf))
    return _euler_contribution(agg, alloc, model.lam, kappa)


def tvar_contribution_table(model: MpmrfModel, kappas, tol: float = DEFAULT_TOL) -> dict[int, np.ndarray]:
    """Contributions of every vertex over a grid of levels, one aggregate pass."""
    kappas = [float(k) for k in kappas]
    if any(not 0.0 <= k < 1.0 for k in kappas):
        raise ValueError("kappa must be in [0, 1)")
    agg = aggregate_dist(model, tol)
    out: dict[int, np.ndarray] = {}
    for v in model.tree.vertices:
        h = h_dist(model, v)
        alloc = AllocationTable(v, model.lam * np.convolve(h.pmf, agg.pmf))
        out[v] = np.array([_euler_contribution(agg, alloc, model.lam, k) for k in kappas])
    return out


def dist_to_csv(dist: DiscreteDist) -> str:
    """CSV rows k,p with a trailer recording the truncated tail mass."""
    lines = ["k,p"]
    lines += [f"{k},{repr(float(p))}" for k, p in enumerate(dist.pmf)]
    lines.append(f"# tail_mass,{repr(float(dist.tail_mass))}")
    return "\n".join(lines) + "\n"


def allocation_to_csv(table: AllocationTable) -> str:
    """CSV rows k,value for one vertex's expected allocations."""
    lines = ["k,value"]
    lines += [f"{k},{repr(float(x))}" for k, x in enumerate(table.by_k)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Closeness:
    freeman: int
    exp_transform: float


def closeness_indices(model: MpmrfModel) -> dict[int, Closeness]:
    """Freeman closeness and its exponential transform, per vertex.

    The exponential transform sum_j alpha^|path(v,j)| needs one common alpha;
    lambda times it equals Cov(N_v, M) in that case.
    """
    if not model.is_homogeneous():
        raise ValueError("exponential-transform closeness needs homogeneous alpha")
    alpha = next(iter(model.alpha.values())) if model.alpha else 0.0
    out = {}
    for v in model.tree.vertices:
        lengths = [len(path(model.tree, v, j)) for j in model.tree.vertices]
        out[v] = Closeness(sum(lengths), float(sum(alpha ** l for l in lengths)))
    return out
