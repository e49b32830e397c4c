"""Branch-decomposition trees of matroids.

A branch decomposition is an unrooted tree whose leaves correspond one-to-one
to the matroid's elements and whose inner nodes all have degree three.
Removing an edge splits the leaves into (E1, E2); the width of the edge is
r(E1) + r(E2) - r(E) and the width of the tree is the maximum over its
edges.  Note the convention: this is one less than the width used by the
standard matroid texts, so e.g. the optimal trees for the Fano matroid and
for K4's cycle matroid both have width 2 here.

Leaves are the node ids 0..n-1 (leaf id = element id); inner nodes get ids
from n upward.

Exact search enumerates the (2n-5)!! leaf-labeled cubic trees by inserting
leaves in element order into every edge of every partial tree.  Partial
trees are pruned against the best width so far, which is sound because
connectivity cannot grow when elements are deleted: every bipartition of a
partial tree is induced by an edge of any completion, restricted to fewer
elements.  The first tree attaining the minimum in enumeration order is
returned.

The greedy fallback builds a caterpillar over a greedily chosen element
order and works at any size, without optimality.

Text format ('#' comments allowed):

    bd n=<n>
    node <id> <child-or-leaf> <child-or-leaf> [<third>]
    root <id>                                  (rooted form only)

where L<k> denotes the leaf of element k.  Unrooted files list each inner
node with its children in a traversal from the inner node adjacent to leaf 0
(that node carries three children); rooted files give every inner node two
children.  Trees on n <= 2 leaves have a forced shape and list no inner
nodes (a rooted two-leaf tree keeps its single inner node as the root).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError
from .matroids import ElementSet, MatroidInstance

Edge = tuple[int, int]

_EXACT_LIMIT = 9


class BranchTree:
    """Unrooted cubic tree; leaves are node ids 0..n-1."""

    def __init__(self, n: int, adj: dict[int, tuple[int, ...]]):
        self.n = n
        self.adj = {u: tuple(sorted(vs)) for u, vs in adj.items()}
        self._masks: dict[Edge, ElementSet] | None = None
        self._validate()

    def _validate(self) -> None:
        n = self.n
        if n < 1:
            raise ValueError("branch tree needs at least one element")
        if n == 1:
            if set(self.adj) != {0} or self.adj[0]:
                raise ValueError("a 1-element branch tree is a single isolated leaf")
            return
        for leaf in range(n):
            if len(self.adj.get(leaf, ())) != 1:
                raise ValueError(f"leaf {leaf} must have degree 1")
        inner = [u for u in self.adj if u >= n]
        if len(inner) != max(n - 2, 0):
            raise ValueError(f"expected {max(n - 2, 0)} inner nodes, found {len(inner)}")
        for u in inner:
            if len(self.adj[u]) != 3:
                raise ValueError(f"inner node {u} must have degree 3")
        # connectivity
        seen = set()
        stack = [0]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(self.adj[u])
        if len(seen) != len(self.adj):
            raise ValueError("branch tree is not connected")

    def edges(self) -> list[Edge]:
        return sorted((u, v) for u, vs in self.adj.items() for v in vs if u < v)

    def _compute_masks(self) -> dict[Edge, tuple[int, ElementSet]]:
        """Per edge: (the endpoint away from leaf 0, its side's leaf mask).

        One DFS from leaf 0 covers every edge.
        """
        if self._masks is not None:
            return self._masks
        masks: dict[Edge, tuple[int, ElementSet]] = {}
        order: list[tuple[int, int]] = []
        stack = [(0, -1)]
        while stack:
            u, parent = stack.pop()
            order.append((u, parent))
            for v in self.adj[u]:
                if v != parent:
                    stack.append((v, u))
        sub: dict[int, int] = {}
        for u, parent in reversed(order):
            mask = 1 << u if u < self.n else 0
            for v in self.adj[u]:
                if v != parent:
                    mask |= sub[v]
            sub[u] = mask
            if parent >= 0:
                masks[(min(u, parent), max(u, parent))] = (u, mask)
        self._masks = masks
        return masks

    def side_mask(self, u: int, v: int) -> ElementSet:
        """Elements on v's side of the edge (u, v)."""
        entry = self._compute_masks().get((min(u, v), max(u, v)))
        if entry is None:
            raise ValueError(f"({u}, {v}) is not a tree edge")
        away_node, away_mask = entry
        full = (1 << self.n) - 1
        return away_mask if v == away_node else full & ~away_mask

    def directed_min_leaf(self, u: int, v: int) -> int:
        """Smallest leaf on v's side of the edge (u, v)."""
        mask = self.side_mask(u, v)
        return (mask & -mask).bit_length() - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, BranchTree) and self.n == other.n and self.adj == other.adj

    def __repr__(self) -> str:
        return f"BranchTree(n={self.n}, inner={len(self.adj) - self.n})"


@dataclass
class RootedBranchTree:
    """Rooted binary tree from subdividing one branch-tree edge.

    Leaves keep ids 0..n-1; the n-1 inner nodes (root included) each have
    exactly two children.
    """

    n: int
    children: dict[int, tuple[int, int]]
    root: int
    _masks: dict[int, ElementSet] | None = field(default=None, repr=False, compare=False)

    def postorder(self) -> list[int]:
        order: list[int] = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            stack.append((node, True))
            for child in reversed(self.children.get(node, ())):
                stack.append((child, False))
        return order

    def subtree_masks(self) -> dict[int, ElementSet]:
        if self._masks is None:
            masks: dict[int, ElementSet] = {}
            for node in self.postorder():
                kids = self.children.get(node, ())
                masks[node] = (
                    1 << node if not kids else masks[kids[0]] | masks[kids[1]]
                )
            self._masks = masks
        return self._masks


def edge_width(m: MatroidInstance, tree: BranchTree, edge: Edge) -> int:
    """r(E1) + r(E2) - r(E) for the bipartition induced by removing ``edge``."""
    side = tree.side_mask(*edge)
    full = m.full_set
    return m.rank(side) + m.rank(full & ~side) - m.rank(full)


def width(m: MatroidInstance, tree: BranchTree) -> int:
    """Maximum edge width; 0 for trees on at most one leaf."""
    if tree.n <= 1:
        return 0
    return max(edge_width(m, tree, e) for e in tree.edges())


def _tree_from_edges(n: int, edge_list: list[tuple[int, int, int]]) -> BranchTree:
    adj: dict[int, list[int]] = {}
    for u, v, _ in edge_list:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if n == 1:
        adj = {0: []}
    return BranchTree(n, {u: tuple(vs) for u, vs in adj.items()})


def exact_branch_decomposition(m: MatroidInstance) -> tuple[BranchTree, int]:
    """Minimum-width tree by exhaustive insertion enumeration, n <= 9.

    Ties break to the first tree in enumeration order; pruning never skips
    a tree that could beat or pre-empt the recorded one.
    """
    n = m.n
    if n > _EXACT_LIMIT:
        raise ValueError(f"exact search limited to n <= {_EXACT_LIMIT}, got {n}")
    if n == 0:
        raise ValueError("matroid has no elements")
    rank = [m.rank(s) for s in range(1 << n)]
    if n == 1:
        return BranchTree(1, {0: ()}), 0
    full = (1 << n) - 1

    def lam(mask: int, present: int) -> int:
        return rank[mask] + rank[present & ~mask] - rank[present]

    best_width = width(m, _tree_from_edges(n, [(0, 1, 2)])) if n == 2 else None
    start = [(0, 1, 0b10)]
    if n == 2:
        return _tree_from_edges(2, start), lam(0b10, 0b11)

    best: list = [None, n + 1]  # edges snapshot, width
    stack: list[tuple[int, list[tuple[int, int, int]]]] = [(2, start)]
    # depth-first, explicit stack; children pushed in reverse keeps the
    # insertion order identical to the recursive formulation
    while stack:
        k, edges = stack.pop()
        present = (1 << k) - 1
        partial = max(lam(mask, present) for _, _, mask in edges)
        if partial >= best[1]:
            continue
        if k == n:
            best[0], best[1] = edges, partial
            continue
        bit = 1 << k
        node = n + (k - 2)
        for i in reversed(range(len(edges))):
            u, v, mask = edges[i]
            grown = [
                (a, b, mb | bit if mb & mask == mask else mb)
                for j, (a, b, mb) in enumerate(edges)
                if j != i
            ]
            grown += [(u, node, mask | bit), (node, v, mask), (node, k, bit)]
            stack.append((k + 1, grown))
    assert best[0] is not None
    return _tree_from_edges(n, best[0]), best[1]


def greedy_branch_decomposition(m: MatroidInstance) -> tuple[BranchTree, int]:
    """Caterpillar over a greedy element order; width reported, not optimal.

    Each step appends the element whose extended prefix has the smallest
    separation rank, ties to the smallest element id.
    """
    n = m.n
    if n == 0:
        raise ValueError("matroid has no elements")
    full = m.full_set
    full_rank = m.rank(full)
    order: list[int] = []
    prefix = 0
    remaining = list(range(n))
    while remaining:
        best_e, best_lam = None, None
        for e in remaining:
            grown = prefix | 1 << e
            lam = m.rank(grown) + m.rank(full & ~grown) - full_rank
            if best_lam is None or lam < best_lam:
                best_e, best_lam = e, lam
        order.append(best_e)
        remaining.remove(best_e)
        prefix |= 1 << best_e
    tree = caterpillar_tree(n, order)
    return tree, width(m, tree)


def caterpillar_tree(n: int, order: list[int]) -> BranchTree:
    """Caterpillar whose spine visits the leaves in the given order."""
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    if n == 1:
        return BranchTree(1, {0: ()})
    if n == 2:
        return BranchTree(2, {order[0]: (order[1],), order[1]: (order[0],)})
    adj: dict[int, list[int]] = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    spine = [n + i for i in range(n - 2)]
    link(order[0], spine[0])
    link(order[1], spine[0])
    for i in range(1, n - 2):
        link(spine[i - 1], spine[i])
        link(order[i + 1], spine[i])
    link(order[n - 1], spine[-1])
    return BranchTree(n, {u: tuple(vs) for u, vs in adj.items()})


def default_root_edge(tree: BranchTree) -> Edge | None:
    """Deterministic rooting edge: smallest (min leaf, mask) of the side
    away from leaf 0."""
    if tree.n <= 1:
        return None
    best_key, best_edge = None, None
    masks = tree._compute_masks()
    for edge in tree.edges():
        _, away = masks[edge]
        low = (away & -away).bit_length() - 1
        key = (low, away)
        if best_key is None or key < best_key:
            best_key, best_edge = key, edge
    return best_edge


def root_tree(tree: BranchTree, edge: Edge | None = None) -> RootedBranchTree:
    """Subdivide ``edge`` (default: the canonical one) and root there.

    Every node's induced leaf set is preserved, so the rooted tree has the
    same bipartitions and width as the unrooted one.  Inner nodes are
    relabeled n, n+1, ... in walk order from the root; within a node the
    child with the smaller minimum leaf goes left.
    """
    n = tree.n
    if n == 1:
        return RootedBranchTree(1, {}, 0)
    if edge is None:
        edge = default_root_edge(tree)
    u, v = edge
    if v not in tree.adj.get(u, ()):
        raise ValueError(f"({u}, {v}) is not a tree edge")

    children: dict[int, tuple[int, int]] = {}
    root = n
    next_id = n + 1
    placeholders: dict[int, tuple[int, int]] = {}  # new id -> (old node, old parent)
    if tree.directed_min_leaf(u, v) < tree.directed_min_leaf(v, u):
        u, v = v, u  # the side with the smaller minimum leaf goes left
    # iterative top-down relabeling; the worklist order fixes the new ids
    work: list[tuple[int, int, int]] = []  # (new id, old node, old parent)

    def allocate(old: int, old_parent: int) -> int:
        nonlocal next_id
        if old < n:
            return old
        new = next_id
        next_id += 1
        work.append((new, old, old_parent))
        return new

    children[root] = (allocate(u, v), allocate(v, u))
    cursor = 0
    while cursor < len(work):
        new_id, old, old_parent = work[cursor]
        cursor += 1
        kids = [w for w in tree.adj[old] if w != old_parent]
        kids.sort(key=lambda w: tree.directed_min_leaf(old, w))
        children[new_id] = (allocate(kids[0], old), allocate(kids[1], old))
    return RootedBranchTree(n, children, root)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _child_token(node: int, n: int) -> str:
    return f"L{node}" if node < n else str(node)


def format_branch_tree(tree: BranchTree | RootedBranchTree) -> str:
    if isinstance(tree, RootedBranchTree):
        out = [f"bd n={tree.n}"]
        for node in sorted(tree.children):
            kids = " ".join(_child_token(c, tree.n) for c in tree.children[node])
            out.append(f"node {node} {kids}")
        out.append(f"root {_child_token(tree.root, tree.n)}")
        return "\n".join(out) + "\n"
    n = tree.n
    out = [f"bd n={n}"]
    if n >= 3:
        # orient from the inner node next to leaf 0; that node lists all
        # three neighbors, every other inner node its two children
        start = tree.adj[0][0]
        stack = [(start, -1)]
        lines = {}
        while stack:
            node, parent = stack.pop()
            if node < n:
                continue
            kids = [w for w in tree.adj[node] if w != parent]
            lines[node] = " ".join(_child_token(c, n) for c in kids)
            stack.extend((w, node) for w in kids)
        for node in sorted(lines):
            out.append(f"node {node} {lines[node]}")
    return "\n".join(out) + "\n"


def parse_branch_tree(text: str) -> BranchTree | RootedBranchTree:
    n = None
    node_lines: list[tuple[int, int, list[str]]] = []
    root_token = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "bd":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tok) != 2 or not tok[1].startswith("n="):
                raise ParseError(lineno, "header must be 'bd n=<n>'")
            n = int(tok[1][2:])
        elif tok[0] == "node":
            if len(tok) not in (4, 5):
                raise ParseError(lineno, "node line needs an id and 2 or 3 children")
            node_lines.append((lineno, int(tok[1]), tok[2:]))
        elif tok[0] == "root":
            if len(tok) != 2:
                raise ParseError(lineno, "root line needs one token")
            root_token = (lineno, tok[1])
        else:
            raise ParseError(lineno, f"unknown record {tok[0]!r}")
    if n is None:
        raise ParseError(1, "missing 'bd' header")

    def resolve(token: str, lineno: int) -> int:
        if token.startswith("L"):
            try:
                leaf = int(token[1:])
            except ValueError:
                raise ParseError(lineno, f"bad leaf token {token!r}") from None
            if not 0 <= leaf < n:
                raise ParseError(lineno, f"leaf {leaf} outside 0..{n - 1}")
            return leaf
        value = int(token)
        if value < n:
            raise ParseError(lineno, f"inner node id {value} collides with leaf ids")
        return value

    if root_token is not None:
        lineno, token = root_token
        root = resolve(token, lineno)
        children: dict[int, tuple[int, int]] = {}
        for lineno, node_id, tokens in node_lines:
            if len(tokens) != 2:
                raise ParseError(lineno, "rooted inner nodes need exactly 2 children")
            if node_id < n:
                raise ParseError(lineno, f"inner node id {node_id} collides with leaf ids")
            if node_id in children:
                raise ParseError(lineno, f"duplicate node {node_id}")
            children[node_id] = (resolve(tokens[0], lineno), resolve(tokens[1], lineno))
        rooted = RootedBranchTree(n, children, root)
        leaves = [x for x in rooted.postorder() if x < n]
        if sorted(leaves) != list(range(n)):
            raise ParseError(1, "leaves reachable from the root are not exactly 0..n-1")
        return rooted

    adj: dict[int, list[int]] = {leaf: [] for leaf in range(n)}
    for lineno, node_id, tokens in node_lines:
        if node_id < n:
            raise ParseError(lineno, f"inner node id {node_id} collides with leaf ids")
        adj.setdefault(node_id, [])
        for token in tokens:
            child = resolve(token, lineno)
            adj.setdefault(child, [])
            adj[node_id].append(child)
            adj[child].append(node_id)
    try:
        return BranchTree(n, {u: tuple(vs) for u, vs in adj.items()})
    except ValueError as exc:
        raise ParseError(1, str(exc)) from None
