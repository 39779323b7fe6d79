"""Tree-structured Markov random fields with Poisson marginals: exact
aggregate laws, risk allocations, stochastic-order comparisons between
vertices and between tree shapes, and the tree-shape partial order."""

from .mpmrf import (
    AllocationTable,
    DiscreteDist,
    MpmrfModel,
    aggregate_dist,
    allocation_to_csv,
    closeness_indices,
    cov_with_sum,
    dist_to_csv,
    expected_allocation,
    h_dist,
    sample,
    tvar,
    tvar_contribution,
    tvar_contribution_table,
)
from .orders import (
    OrderVerdict,
    Relation,
    cx_check_empirical,
    shape_compare,
    st_compare,
    synecdochic_compare,
)
from .poset import (
    ShapePoset,
    build_poset,
    corollary_chain,
    hasse_dot,
    is_lattice,
    maximal_elements,
    minimal_elements,
    single_move_neighbors,
)
from .series_poly import Poly, affine_thin, mul, psi, stop_loss
from .spectral import SpectrumReport, cospectral_pair_check, majorizes, spectrum
from .tree_core import (
    RootedTree,
    ShapeCode,
    Tree,
    canonical_code,
    degree_vector,
    enumerate_shapes,
    path,
    prune,
    root_at,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationTable", "DiscreteDist", "MpmrfModel", "OrderVerdict", "Poly",
    "Relation", "RootedTree", "ShapeCode", "ShapePoset", "SpectrumReport",
    "Tree", "aggregate_dist", "affine_thin", "allocation_to_csv",
    "build_poset", "canonical_code", "closeness_indices", "corollary_chain",
    "cospectral_pair_check", "cov_with_sum", "cx_check_empirical",
    "degree_vector", "dist_to_csv", "enumerate_shapes", "expected_allocation",
    "h_dist", "hasse_dot", "is_lattice", "majorizes", "maximal_elements",
    "minimal_elements", "mul", "path", "prune", "psi", "root_at", "sample",
    "shape_compare", "single_move_neighbors", "spectrum", "st_compare",
    "stop_loss", "synecdochic_compare", "tvar", "tvar_contribution",
    "tvar_contribution_table",
]
