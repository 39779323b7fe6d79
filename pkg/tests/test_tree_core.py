import numpy as np
import pytest

from treemrf.tree_core import (
    Tree,
    canonical_code,
    degree_vector,
    enumerate_shapes,
    isomorphic,
    path,
    prune,
    root_at,
)

from helpers import brute_force_isomorphic, random_tree

# free-tree counts, sequence A000055
FREE_TREE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23, 9: 47, 10: 106}


def path_tree(d):
    return Tree.of(d, [(i, i + 1) for i in range(1, d)])


def star_tree(d):
    return Tree.of(d, [(1, i) for i in range(2, d + 1)])


class TestTreeValidation:
    def test_wrong_edge_count(self):
        with pytest.raises(ValueError):
            Tree.of(3, [(1, 2)])

    def test_disconnected(self):
        with pytest.raises(ValueError):
            Tree.of(4, [(1, 2), (1, 2), (3, 4)])
        with pytest.raises(ValueError):
            Tree.of(4, [(1, 2), (3, 4), (3, 4)])

    def test_self_loop(self):
        with pytest.raises(ValueError):
            Tree.of(2, [(1, 1)])

    def test_unknown_vertex(self):
        with pytest.raises(ValueError):
            Tree.of(2, [(1, 3)])

    def test_degenerate_sizes_are_legal(self):
        assert Tree.of(1, []).d == 1
        assert Tree.of(2, [(1, 2)]).d == 2

    def test_json_roundtrip(self):
        t = path_tree(4)
        assert Tree.from_json(t.to_json()) == t


class TestRootAt:
    def test_path3_rooted_at_middle(self):
        r = root_at(path_tree(3), 2)
        assert r.children[2] == (1, 3)
        assert r.dsc[2] == {1, 3}
        assert r.is_leaf(1) and r.is_leaf(3)

    def test_star10_rooted_at_center(self, star10):
        r = root_at(star10, 1)
        assert r.children[1] == tuple(range(2, 11))
        assert all(r.is_leaf(v) for v in range(2, 11))
        assert r.dsc[1] == set(range(2, 11))

    def test_single_vertex(self):
        r = root_at(Tree.of(1, []), 1)
        assert r.children[1] == ()
        assert r.dsc[1] == frozenset()

    def test_root_descendants_are_everything_else(self):
        t = random_tree(np.random.default_rng(5), 8)
        for v in t.vertices:
            assert root_at(t, v).dsc[v] == set(t.vertices) - {v}

    def test_invalid_root(self):
        with pytest.raises(ValueError):
            root_at(path_tree(3), 9)

    def test_children_partition(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            t = random_tree(rng, int(rng.integers(2, 10)))
            r = root_at(t, int(rng.choice(t.vertices)))
            assert sum(len(r.children[v]) for v in t.vertices) == t.d - 1
            # descendant sets nest along parent links
            for v, p in r.parent.items():
                assert r.dsc[v] | {v} <= r.dsc[p]


class TestPath:
    def test_path3(self):
        assert path(path_tree(3), 1, 3) == [(1, 2), (2, 3)]

    def test_star_leaf_to_leaf(self):
        t = star_tree(3)
        assert path(t, 2, 3) == [(1, 2), (1, 3)]

    def test_self_path_is_empty(self):
        assert path(path_tree(3), 2, 2) == []

    def test_invalid_vertex(self):
        with pytest.raises(ValueError):
            path(path_tree(3), 1, 7)


class TestPrune:
    def test_detaches_four_vertex_subtree(self, anchoring14):
        residual, detached = prune(anchoring14, 10, 4)
        assert set(detached.vertices) == {10, 11, 12, 13}
        assert residual.d == 10
        assert set(residual.vertices) == set(range(1, 10)) | {14}

    def test_path3(self):
        residual, detached = prune(path_tree(3), 2, 3)
        assert set(detached.vertices) == {1, 2}
        assert set(residual.vertices) == {3}

    def test_star4_any_edge(self):
        t = star_tree(4)
        residual, detached = prune(t, 3, 1)
        assert detached.d == 1
        assert isomorphic(residual, star_tree(3))

    def test_non_edge_rejected(self):
        with pytest.raises(ValueError):
            prune(star_tree(4), 2, 3)

    def test_reattach_restores_shape(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            t = random_tree(rng, 8)
            a, b = t.edges[int(rng.integers(len(t.edges)))]
            residual, detached = prune(t, a, b)
            back = Tree.on(t.vertices, list(residual.edges) + list(detached.edges) + [(a, b)])
            assert back == t


class TestEnumerateShapes:
    @pytest.mark.parametrize("d,count", sorted(FREE_TREE_COUNTS.items()))
    def test_counts_match_free_tree_sequence(self, d, count):
        assert len(enumerate_shapes(d)) == count

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            enumerate_shapes(0)
        with pytest.raises(ValueError):
            enumerate_shapes(13)

    def test_deterministic_order(self):
        a = [canonical_code(t) for t in enumerate_shapes(7)]
        assert a == sorted(a)

    def test_all_have_d_vertices(self):
        assert all(t.d == 6 for t in enumerate_shapes(6))


class TestCanonicalCode:
    def test_relabelled_path_same_code(self):
        a = path_tree(3)
        b = Tree.of(3, [(2, 1), (1, 3)])  # path 2-1-3
        assert canonical_code(a) == canonical_code(b)

    def test_path_vs_star_distinct(self):
        assert canonical_code(path_tree(4)) != canonical_code(star_tree(4))

    def test_d9_codes_all_distinct(self):
        codes = {canonical_code(t) for t in enumerate_shapes(9)}
        assert len(codes) == 47

    def test_invariant_under_random_relabelling(self):
        rng = np.random.default_rng(11)
        t = random_tree(rng, 9)
        ref = canonical_code(t)
        for _ in range(100):
            perm = rng.permutation(np.arange(1, 10))
            mapping = {v: int(perm[v - 1]) for v in t.vertices}
            assert canonical_code(t.relabel(mapping)) == ref

    @pytest.mark.parametrize("d", [4, 5, 6, 7])
    def test_agrees_with_brute_force_isomorphism(self, d):
        shapes = enumerate_shapes(d)
        for i in range(len(shapes)):
            for j in range(i + 1, len(shapes)):
                assert not brute_force_isomorphic(shapes[i], shapes[j])
        rng = np.random.default_rng(d)
        by_code = {canonical_code(t): t for t in shapes}
        for _ in range(10):
            t = random_tree(rng, d)
            assert brute_force_isomorphic(t, by_code[canonical_code(t)])

    def test_hex_serialization(self):
        code = canonical_code(path_tree(3))
        assert code.hex == code.code.hex()
        assert code.hex == code.hex.lower()


class TestDegreeVector:
    def test_star6(self):
        assert degree_vector(star_tree(6)) == (5, 1, 1, 1, 1, 1)

    def test_path6(self):
        assert degree_vector(path_tree(6)) == (2, 2, 2, 2, 1, 1)

    def test_incomparable12_tree(self, incomparable12):
        # hand count from the edge list: vertex 5 carries five leaves plus
        # its parent, vertices 2 and 3 have three neighbours each
        t, _ = incomparable12
        assert degree_vector(t) == (6, 3, 3, 2, 1, 1, 1, 1, 1, 1, 1, 1)

    def test_sum_is_twice_edge_count(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            t = random_tree(rng, 9)
            assert sum(degree_vector(t)) == 2 * (t.d - 1)
