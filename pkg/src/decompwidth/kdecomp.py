"""Rank-defining tree decompositions of matroids.

A decomposition is a rooted binary tree.  Leaves carry a ground-set element
and a loop flag; each inner node carries a color table and a rank-defect
table, both indexed by the colors of its two children.  Evaluating the rank
of a subset F is a single bottom-up pass: a leaf is colored 1 when its
element lies in F (0 otherwise) and labeled 1 when additionally it is not a
loop; an inner node with child states (c1, l1), (c2, l2) takes color
``color[c1][c2]`` and label ``l1 + l2 - defect[c1][c2]``.  The rank of F is
the label of the root.

Colors at a leaf always range over {0, 1}; colors at an inner node v range
over its own palette 0..kv-1.  The width of a decomposition is the maximum
palette size minus one (leaves included, so it is always >= 1).

The empty set must color and label every node with 0, which pins the (0, 0)
entry of every table to color 0 / defect 0.

Everything here treats decompositions as immutable once built; evaluation
caches the traversal order on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

ElementSet = int  # bitmask over ground-set elements


@dataclass
class Leaf:
    element: int
    loop: bool


@dataclass
class Inner:
    children: tuple[int, ...]
    palette: int
    color: list[list[int]]
    defect: list[list[int]]


@dataclass
class KDecomposition:
    n: int
    nodes: dict[int, Leaf | Inner]
    root: int
    _postorder: list[int] | None = field(default=None, repr=False, compare=False)

    def palette_of(self, node_id: int) -> int:
        node = self.nodes[node_id]
        return 2 if isinstance(node, Leaf) else node.palette

    def postorder(self) -> list[int]:
        """Children-before-parent order, computed iteratively and cached."""
        if self._postorder is None:
            order: list[int] = []
            stack: list[tuple[int, bool]] = [(self.root, False)]
            seen = set()
            while stack:
                node_id, expanded = stack.pop()
                if expanded:
                    order.append(node_id)
                    continue
                if node_id in seen:
                    raise ValueError("decomposition tree contains a cycle")
                seen.add(node_id)
                stack.append((node_id, True))
                node = self.nodes.get(node_id)
                if node is None:
                    raise ValueError(f"undefined node id {node_id}")
                if isinstance(node, Inner):
                    for child in reversed(node.children):
                        stack.append((child, False))
            self._postorder = order
        return self._postorder

    def subtree_elements(self, node_id: int) -> ElementSet:
        """Bitmask of ground-set elements under ``node_id``."""
        mask = 0
        stack = [node_id]
        while stack:
            node = self.nodes[stack.pop()]
            if isinstance(node, Leaf):
                mask |= 1 << node.element
            else:
                stack.extend(node.children)
        return mask

    def full_set(self) -> ElementSet:
        return (1 << self.n) - 1


def node_states(dec: KDecomposition, subset: ElementSet) -> dict[int, tuple[int, int]]:
    """(color, label) of every node for the given subset."""
    states: dict[int, tuple[int, int]] = {}
    for node_id in dec.postorder():
        node = dec.nodes[node_id]
        if isinstance(node, Leaf):
            selected = subset >> node.element & 1
            states[node_id] = (selected, selected if not node.loop else 0)
        else:
            c1, l1 = states[node.children[0]]
            c2, l2 = states[node.children[1]]
            try:
                color = node.color[c1][c2]
                drop = node.defect[c1][c2]
            except IndexError:
                raise ValueError(
                    f"node {node_id}: child color ({c1}, {c2}) outside the declared table domain"
                ) from None
            states[node_id] = (color, l1 + l2 - drop)
    return states


def eval_rank(dec: KDecomposition, subset: ElementSet) -> int:
    """Label of the root; the rank of ``subset`` in the described matroid.

    May be negative for decompositions that do not describe a matroid;
    rejecting those is the verifier's job.
    """
    if subset & ~dec.full_set():
        raise ValueError("subset contains elements outside the ground set")
    return node_states(dec, subset)[dec.root][1]


def singleton_ranks(dec: KDecomposition) -> list[int]:
    """eval_rank({e}) for every element e, in one O(n) top-down pass.

    The label of a singleton travels from its leaf to the root against
    empty siblings (color 0), so the total defect picked up above a node
    depends only on that node's color.
    """
    offsets: dict[int, list[int]] = {dec.root: [0] * dec.palette_of(dec.root)}
    ranks = [0] * dec.n
    for node_id in reversed(dec.postorder()):
        node = dec.nodes[node_id]
        off = offsets[node_id]
        if isinstance(node, Leaf):
            ranks[node.element] = (0 if node.loop else 1) + off[1]
            continue
        for side, child in enumerate(node.children):
            child_off = [0] * dec.palette_of(child)
            for gamma in range(len(child_off)):
                c1, c2 = (gamma, 0) if side == 0 else (0, gamma)
                try:
                    up_color = node.color[c1][c2]
                    drop = node.defect[c1][c2]
                except IndexError:
                    raise ValueError(
                        f"node {node_id}: child color ({c1}, {c2}) outside the table domain"
                    ) from None
                child_off[gamma] = off[up_color] - drop
            offsets[child] = child_off
    return ranks


def dw_width(dec: KDecomposition) -> int:
    """Maximum palette size minus one over all nodes (leaves count as 2)."""
    return max(dec.palette_of(node_id) for node_id in dec.nodes) - 1


@dataclass
class StructureDefect:
    kind: str  # "tree" | "arity" | "leaf bijection" | "palette bound" | "empty-set convention"
    node: int | None
    message: str

    def __str__(self) -> str:
        where = f" at node {self.node}" if self.node is not None else ""
        return f"{self.kind}{where}: {self.message}"


def validate_structure(dec: KDecomposition) -> StructureDefect | None:
    """First structural defect, or None when the decomposition is well formed."""
    if dec.root not in dec.nodes:
        return StructureDefect("tree", None, f"root {dec.root} is not a node")
    referenced: dict[int, int] = {}
    for node_id, node in dec.nodes.items():
        if isinstance(node, Inner):
            for child in node.children:
                if child not in dec.nodes:
                    return StructureDefect("tree", node_id, f"child {child} is undefined")
                referenced[child] = referenced.get(child, 0) + 1
    if referenced.get(dec.root):
        return StructureDefect("tree", dec.root, "root appears as a child")
    for node_id in dec.nodes:
        if node_id != dec.root and referenced.get(node_id, 0) != 1:
            return StructureDefect(
                "tree", node_id, f"referenced {referenced.get(node_id, 0)} times; expected once"
            )
    for node_id, node in sorted(dec.nodes.items()):
        if isinstance(node, Inner) and len(node.children) != 2:
            return StructureDefect("arity", node_id, f"{len(node.children)} children; expected 2")
    elements = sorted(
        node.element for node in dec.nodes.values() if isinstance(node, Leaf)
    )
    if elements != list(range(dec.n)):
        return StructureDefect(
            "leaf bijection", None, f"leaf elements {elements} are not exactly 0..{dec.n - 1}"
        )
    for node_id, node in sorted(dec.nodes.items()):
        if isinstance(node, Leaf):
            continue
        if node.palette < 1:
            return StructureDefect("palette bound", node_id, "palette size must be >= 1")
        lp = dec.palette_of(node.children[0])
        rp = dec.palette_of(node.children[1])
        for table, name in ((node.color, "color"), (node.defect, "defect")):
            if len(table) != lp or any(len(row) != rp for row in table):
                return StructureDefect(
                    "palette bound", node_id, f"{name} table domain is not {lp}x{rp}"
                )
        for g1 in range(lp):
            for g2 in range(rp):
                if not 0 <= node.color[g1][g2] < node.palette:
                    return StructureDefect(
                        "palette bound",
                        node_id,
                        f"color[{g1}][{g2}]={node.color[g1][g2]} outside 0..{node.palette - 1}",
                    )
                if node.defect[g1][g2] < 0:
                    return StructureDefect(
                        "palette bound", node_id, f"defect[{g1}][{g2}] is negative"
                    )
        if node.color[0][0] != 0 or node.defect[0][0] != 0:
            return StructureDefect(
                "empty-set convention", node_id, "(0, 0) table entry must be color 0, defect 0"
            )
    return None


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------
#
#   dw version=1 n=<n> K=<K>
#   leaf <id> elem=<k> loop=<0|1>
#   inner <id> left=<id> right=<id> kv=<palette size>
#   phi <id> <g1> <g2> <color> <rdef>      (omitted entries default to 0 0)
#   root <id>
#
# '#' starts a comment line.  All integers decimal.


def _kv(token: str, key: str, line: int) -> int:
    if not token.startswith(key + "="):
        raise ParseError(line, f"expected {key}=<int>, got {token!r}")
    try:
        return int(token[len(key) + 1 :])
    except ValueError:
        raise ParseError(line, f"bad integer in {token!r}") from None


def serialize(dec: KDecomposition) -> str:
    """Text form of a decomposition; ``parse`` inverts it exactly."""
    out = [f"dw version=1 n={dec.n} K={dw_width(dec)}"]
    for node_id in sorted(dec.nodes):
        node = dec.nodes[node_id]
        if isinstance(node, Leaf):
            out.append(f"leaf {node_id} elem={node.element} loop={int(node.loop)}")
    for node_id in sorted(dec.nodes):
        node = dec.nodes[node_id]
        if isinstance(node, Inner):
            left, right = node.children[0], node.children[-1]
            out.append(f"inner {node_id} left={left} right={right} kv={node.palette}")
    for node_id in sorted(dec.nodes):
        node = dec.nodes[node_id]
        if isinstance(node, Inner):
            for g1, row in enumerate(node.color):
                for g2, color in enumerate(row):
                    drop = node.defect[g1][g2]
                    if color or drop:
                        out.append(f"phi {node_id} {g1} {g2} {color} {drop}")
    out.append(f"root {dec.root}")
    return "\n".join(out) + "\n"


def parse(text: str) -> KDecomposition:
    """Parse the decomposition text format; errors carry line numbers."""
    header = None
    leaves: dict[int, tuple[int, int, bool]] = {}
    inners: dict[int, tuple[int, int, int, int]] = {}
    phis: list[tuple[int, int, int, int, int, int]] = []
    root: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "dw":
            if header is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tok) != 4 or tok[1] != "version=1":
                raise ParseError(lineno, "header must be 'dw version=1 n=<n> K=<K>'")
            header = (_kv(tok[2], "n", lineno), _kv(tok[3], "K", lineno))
        elif tok[0] == "leaf":
            if len(tok) != 4:
                raise ParseError(lineno, "leaf line needs: leaf <id> elem=<k> loop=<0|1>")
            node_id = int(tok[1])
            if node_id in leaves or node_id in inners:
                raise ParseError(lineno, f"duplicate node id {node_id}")
            loop = _kv(tok[3], "loop", lineno)
            if loop not in (0, 1):
                raise ParseError(lineno, "loop flag must be 0 or 1")
            leaves[node_id] = (lineno, _kv(tok[2], "elem", lineno), bool(loop))
        elif tok[0] == "inner":
            if len(tok) != 5:
                raise ParseError(lineno, "inner line needs: inner <id> left=<id> right=<id> kv=<k>")
            node_id = int(tok[1])
            if node_id in leaves or node_id in inners:
                raise ParseError(lineno, f"duplicate node id {node_id}")
            inners[node_id] = (
                lineno,
                _kv(tok[2], "left", lineno),
                _kv(tok[3], "right", lineno),
                _kv(tok[4], "kv", lineno),
            )
        elif tok[0] == "phi":
            if len(tok) != 6:
                raise ParseError(lineno, "phi line needs: phi <id> <g1> <g2> <color> <rdef>")
            try:
                vals = [int(t) for t in tok[1:]]
            except ValueError:
                raise ParseError(lineno, "phi entries must be integers") from None
            phis.append((lineno, *vals))
        elif tok[0] == "root":
            if root is not None:
                raise ParseError(lineno, "duplicate root line")
            if len(tok) != 2:
                raise ParseError(lineno, "root line needs: root <id>")
            root = int(tok[1])
        else:
            raise ParseError(lineno, f"unknown record {tok[0]!r}")
    if header is None:
        raise ParseError(1, "missing 'dw' header")
    n, width_cap = header
    if root is None:
        raise ParseError(1, "missing 'root' line")
    if len(leaves) != n:
        raise ParseError(1, f"header declares n={n} but file has {len(leaves)} leaves")

    nodes: dict[int, Leaf | Inner] = {}
    for node_id, (lineno, elem, loop) in leaves.items():
        if not 0 <= elem < n:
            raise ParseError(lineno, f"leaf element {elem} outside 0..{n - 1}")
        nodes[node_id] = Leaf(elem, loop)
    for node_id, (lineno, left, right, palette) in inners.items():
        if palette < 1:
            raise ParseError(lineno, f"kv={palette} must be >= 1")
        if palette - 1 > width_cap:
            raise ParseError(lineno, f"kv={palette} exceeds the header bound K={width_cap}")
        for child in (left, right):
            if child not in leaves and child not in inners:
                raise ParseError(lineno, f"child {child} is undefined")
        lp = 2 if left in leaves else inners[left][3]
        rp = 2 if right in leaves else inners[right][3]
        nodes[node_id] = Inner(
            (left, right),
            palette,
            [[0] * rp for _ in range(lp)],
            [[0] * rp for _ in range(lp)],
        )
    filled: set[tuple[int, int, int]] = set()
    for lineno, node_id, g1, g2, color, drop in phis:
        node = nodes.get(node_id)
        if not isinstance(node, Inner):
            raise ParseError(lineno, f"phi refers to non-inner node {node_id}")
        if (node_id, g1, g2) in filled:
            raise ParseError(lineno, f"duplicate phi entry for node {node_id} at ({g1}, {g2})")
        filled.add((node_id, g1, g2))
        if not (0 <= g1 < len(node.color) and 0 <= g2 < len(node.color[0])):
            raise ParseError(lineno, f"phi index ({g1}, {g2}) outside the child palettes")
        if not 0 <= color < node.palette:
            raise ParseError(lineno, f"color {color} outside palette 0..{node.palette - 1}")
        if drop < 0:
            raise ParseError(lineno, f"rank defect {drop} is negative")
        node.color[g1][g2] = color
        node.defect[g1][g2] = drop
    if root not in nodes:
        raise ParseError(1, f"root {root} is not a node")
    return KDecomposition(n, nodes, root)
