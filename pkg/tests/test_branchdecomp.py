"""Branch decompositions: widths, searches, rooting, serialization."""

import random

import pytest

from conftest import (
    GF2,
    c5_graphic,
    fano,
    mk4_linear,
    parallel_coloop,
    path_matroid,
    u23,
)
from decompwidth import (
    BranchTree,
    MatroidInstance,
    RootedBranchTree,
    caterpillar_tree,
    edge_width,
    exact_branch_decomposition,
    format_branch_tree,
    greedy_branch_decomposition,
    parse_branch_tree,
    root_tree,
    width,
)
from decompwidth.branchdecomp import default_root_edge
from decompwidth.errors import ParseError


def star3():
    return BranchTree(3, {0: (3,), 1: (3,), 2: (3,), 3: (0, 1, 2)})


def brute_side_mask(tree, u, v):
    """Side of v by DFS that never crosses (u, v)."""
    mask, stack, seen = 0, [v], {u, v}
    while stack:
        x = stack.pop()
        if x < tree.n:
            mask |= 1 << x
        for y in tree.adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return mask


def test_side_masks_match_brute_dfs():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randrange(3, 9)
        order = list(range(n))
        rng.shuffle(order)
        tree = caterpillar_tree(n, order)
        for u, v in tree.edges():
            assert tree.side_mask(u, v) == brute_side_mask(tree, u, v)
            assert tree.side_mask(v, u) == brute_side_mask(tree, v, u)
            assert tree.side_mask(u, v) | tree.side_mask(v, u) == (1 << n) - 1


# ---------------------------------------------------------------------------
# widths
# ---------------------------------------------------------------------------


def test_edge_width_u23_star():
    m = u23()
    lam = m.rank(0b001) + m.rank(0b110) - m.rank(0b111)
    assert lam == 1
    assert edge_width(m, star3(), (0, 3)) == 1


def test_edge_width_loop_leaf_is_zero():
    m = MatroidInstance.linear(GF2, [[0, 1, 1], [0, 1, 0]])
    assert edge_width(m, star3(), (0, 3)) == 0


def test_edge_width_fano_leaf_edges():
    m = fano()
    tree, _ = exact_branch_decomposition(m)
    for leaf in range(7):
        (neighbor,) = tree.adj[leaf]
        assert edge_width(m, tree, (min(leaf, neighbor), max(leaf, neighbor))) == 1


def test_width_u23_star():
    assert width(u23(), star3()) == 1


def test_width_all_loops_any_tree():
    m = MatroidInstance.linear(GF2, [[0, 0, 0]])
    assert width(m, star3()) == 0


def test_width_single_element():
    tree = BranchTree(1, {0: ()})
    assert width(MatroidInstance.uniform(1, 1), tree) == 0


# ---------------------------------------------------------------------------
# exact search
# ---------------------------------------------------------------------------


def test_exact_u23():
    tree, w = exact_branch_decomposition(u23())
    assert w == 1
    assert width(u23(), tree) == 1


def test_exact_parallel_coloop():
    m = parallel_coloop()
    tree, w = exact_branch_decomposition(m)
    assert w == 1


def test_exact_fano_width_2():
    tree, w = exact_branch_decomposition(fano())
    assert w == 2
    assert width(fano(), tree) == 2


def test_exact_mk4_width_2():
    _, w = exact_branch_decomposition(mk4_linear())
    assert w == 2


def test_exact_matches_full_enumeration_without_pruning():
    # independent route: evaluate every caterpillar plus every tree produced
    # by unpruned insertion on a small instance
    m = c5_graphic()

    def all_trees(n):
        trees = [[(0, 1, 0b10)]]
        for k in range(2, n):
            grown = []
            node = n + (k - 2)
            bit = 1 << k
            for edges in trees:
                for i in range(len(edges)):
                    u, v, mask = edges[i]
                    new = [
                        (a, b, mb | bit if mb & mask == mask else mb)
                        for j, (a, b, mb) in enumerate(edges)
                        if j != i
                    ]
                    new += [(u, node, mask | bit), (node, v, mask), (node, k, bit)]
                    grown.append(new)
            trees = grown
        return trees

    full = m.full_set
    best = None
    for edges in all_trees(5):
        w = max(m.rank(mask) + m.rank(full & ~mask) - m.rank(full) for _, _, mask in edges)
        best = w if best is None else min(best, w)
    tree, w = exact_branch_decomposition(m)
    # every proper bipartition of U_{4,5} has defect |A| + |B| - 4 = 1
    assert w == best == 1
    assert len(all_trees(5)) == 15  # (2*5-5)!! leaf-labeled cubic trees


def test_exact_guard():
    with pytest.raises(ValueError):
        exact_branch_decomposition(MatroidInstance.uniform(2, 10))


def test_exact_tiny_instances():
    tree, w = exact_branch_decomposition(MatroidInstance.uniform(1, 1))
    assert (tree.n, w) == (1, 0)
    tree, w = exact_branch_decomposition(MatroidInstance.uniform(1, 2))
    assert (tree.n, w) == (2, 1)


# ---------------------------------------------------------------------------
# greedy search
# ---------------------------------------------------------------------------


def test_greedy_path_matroid_is_width_zero_caterpillar():
    # every subset of a path's edges is a forest, so every separation has
    # rank defect 0 and any caterpillar is optimal
    m = path_matroid(6)
    tree, w = greedy_branch_decomposition(m)
    assert w == 0
    full = m.full_set
    for u, v in tree.edges():
        mask = tree.side_mask(u, v)
        assert m.rank(mask) + m.rank(full & ~mask) - m.rank(full) == 0


def test_greedy_all_loops():
    m = MatroidInstance.linear(GF2, [[0, 0, 0, 0]])
    _, w = greedy_branch_decomposition(m)
    assert w == 0


def test_greedy_u23():
    _, w = greedy_branch_decomposition(u23())
    assert w == 1


def test_exact_never_worse_than_greedy():
    rng = random.Random(13)
    for _ in range(10):
        matrix = [[rng.randrange(2) for _ in range(6)] for _ in range(3)]
        m = MatroidInstance.linear(GF2, matrix)
        _, exact_w = exact_branch_decomposition(m)
        _, greedy_w = greedy_branch_decomposition(m)
        assert exact_w <= greedy_w


# ---------------------------------------------------------------------------
# rooting
# ---------------------------------------------------------------------------


def test_root_star3_gives_leaf_and_cherry():
    rooted = root_tree(star3(), (0, 3))
    kids = rooted.children[rooted.root]
    shapes = sorted(("leaf" if k < 3 else "cherry") for k in kids)
    assert shapes == ["cherry", "leaf"]
    masks = rooted.subtree_masks()
    assert masks[rooted.root] == 0b111


def test_root_caterpillar_end_edge_is_left_deep():
    tree = caterpillar_tree(5, [0, 1, 2, 3, 4])
    (spine_end,) = tree.adj[4]
    rooted = root_tree(tree, (4, spine_end))
    depth = 0
    node = rooted.root
    while node >= 5:
        kids = rooted.children[node]
        inner_kids = [k for k in kids if k >= 5]
        assert len(inner_kids) <= 1
        node = inner_kids[0] if inner_kids else kids[0]
        depth += 1
    assert depth == 4  # n - 1 inner nodes strung in a chain


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_rooted_tree_has_n_minus_1_inner_nodes(n):
    order = list(range(n))
    tree = caterpillar_tree(n, order)
    rooted = root_tree(tree)
    assert len(rooted.children) == n - 1


def test_rooting_preserves_bipartitions_and_width():
    m = fano()
    tree, w = exact_branch_decomposition(m)
    full = m.full_set
    unrooted = {tree.side_mask(u, v) for u, v in tree.edges()}
    unrooted |= {full & ~mask for mask in unrooted}
    for edge in tree.edges():
        rooted = root_tree(tree, edge)
        masks = rooted.subtree_masks()
        rooted_parts = {masks[x] for x in rooted.children} - {full}
        assert rooted_parts <= unrooted
        rooted_width = max(
            m.rank(mask) + m.rank(full & ~mask) - m.rank(full) for mask in rooted_parts
        )
        assert rooted_width == w


def test_root_single_leaf():
    rooted = root_tree(BranchTree(1, {0: ()}))
    assert rooted.root == 0
    assert rooted.children == {}


def test_default_root_edge_deterministic():
    tree = caterpillar_tree(5, [0, 1, 2, 3, 4])
    assert default_root_edge(tree) == default_root_edge(caterpillar_tree(5, [0, 1, 2, 3, 4]))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def test_unrooted_roundtrip():
    tree, _ = exact_branch_decomposition(fano())
    again = parse_branch_tree(format_branch_tree(tree))
    assert isinstance(again, BranchTree)
    assert {frozenset((u, v)) for u, v in again.edges()} == {
        frozenset((u, v)) for u, v in tree.edges()
    }


def test_rooted_roundtrip():
    rooted = root_tree(exact_branch_decomposition(u23())[0])
    again = parse_branch_tree(format_branch_tree(rooted))
    assert isinstance(again, RootedBranchTree)
    assert again == rooted


def test_rooted_two_leaf_file():
    rooted = root_tree(BranchTree(2, {0: (1,), 1: (0,)}))
    text = format_branch_tree(rooted)
    again = parse_branch_tree(text)
    assert again.children[again.root] == (0, 1)


def test_parse_branch_tree_errors():
    with pytest.raises(ParseError):
        parse_branch_tree("node 3 L0 L1 L2\n")  # missing header
    with pytest.raises(ParseError):
        parse_branch_tree("bd n=3\nnode 3 L0 L9 L2\n")
    with pytest.raises(ParseError):
        parse_branch_tree("bd n=3\nnode 1 L0 L1 L2\n")  # id collides with leaves
    with pytest.raises(ParseError):
        parse_branch_tree("bd n=4\nnode 4 L0 L1 L2\n")  # leaf 3 missing
