"""Decide whether a decomposition defines a matroid.

An integer-valued set function is a matroid rank function exactly when it is
zero on the empty set, monotone, submodular, and at most 1 on singletons
(those four together imply the unit-increase property).  Each condition is
checked here without enumerating subsets:

* empty set: structural, the (0, 0) table entries are pinned to (0, 0);
* submodularity: a bottom-up DP over colored quadruples (gA, gB, gI, gU)
  tracking, per node, the minimum of label(A) + label(B) - label(A|B)
  - label(A&B) over set pairs realizing those four colors;
* monotonicity: the analogous DP over colored pairs (gA, gB) with A <= B,
  tracking the minimum of label(B) - label(A);
* singletons: all n singleton ranks in one linear pass.

Unreachable color combinations are simply absent from the sparse DP tables
(an absent entry behaves as +infinity: adding anything keeps it absent).
The DP keeps one argmin backpointer per entry, so a negative root entry can
be unfolded into concrete witness sets A and B.

A loop flag that disagrees with the decomposition's own singleton ranks does
not stop the function from being a matroid rank function, so it is reported
on the result instead of flipping the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kdecomp import ElementSet, KDecomposition, Leaf, singleton_ranks, validate_structure

Quad = tuple[int, int, int, int]
Pair = tuple[int, int]

# Single-element base cases: (A cap {e}, B cap {e}) ranges over the four
# subset pairs, giving colors (A, B, A&B, A|B) below, each with defect 0.
_LEAF_QUADS: tuple[Quad, ...] = ((0, 0, 0, 0), (1, 0, 0, 1), (0, 1, 0, 1), (1, 1, 1, 1))


@dataclass
class VerifyResult:
    is_matroid: bool
    reason: str | None = None  # "structure" | "empty-set" | "submodularity" | "monotonicity" | "singleton"
    detail: str | None = None
    loop_flag_mismatches: tuple[int, ...] = ()
    _witness_kind: str | None = field(default=None, repr=False)
    _root_key: tuple | None = field(default=None, repr=False)
    _tables: dict | None = field(default=None, repr=False)
    _back: dict | None = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.is_matroid


def _submodularity_tables(dec: KDecomposition):
    """Per node: {quadruple: min defect} plus argmin backpointers."""
    tables: dict[int, dict[Quad, int]] = {}
    back: dict[int, dict[Quad, tuple[Quad, Quad]]] = {}
    for node_id in dec.postorder():
        node = dec.nodes[node_id]
        if isinstance(node, Leaf):
            tables[node_id] = {q: 0 for q in _LEAF_QUADS}
            continue
        left, right = node.children
        color, defect = node.color, node.defect
        merged: dict[Quad, int] = {}
        pointers: dict[Quad, tuple[Quad, Quad]] = {}
        for q1, v1 in tables[left].items():
            for q2, v2 in tables[right].items():
                key = (
                    color[q1[0]][q2[0]],
                    color[q1[1]][q2[1]],
                    color[q1[2]][q2[2]],
                    color[q1[3]][q2[3]],
                )
                value = (
                    v1
                    + v2
                    - defect[q1[0]][q2[0]]
                    - defect[q1[1]][q2[1]]
                    + defect[q1[2]][q2[2]]
                    + defect[q1[3]][q2[3]]
                )
                if key not in merged or value < merged[key]:
                    merged[key] = value
                    pointers[key] = (q1, q2)
        tables[node_id] = merged
        back[node_id] = pointers
    return tables, back


def _monotonicity_tables(dec: KDecomposition):
    """Per node: {(color(A), color(B)): min label(B) - label(A)} over A <= B."""
    tables: dict[int, dict[Pair, int]] = {}
    back: dict[int, dict[Pair, tuple[Pair, Pair]]] = {}
    for node_id in dec.postorder():
        node = dec.nodes[node_id]
        if isinstance(node, Leaf):
            tables[node_id] = {(0, 0): 0, (0, 1): 0 if node.loop else 1, (1, 1): 0}
            continue
        left, right = node.children
        color, defect = node.color, node.defect
        merged: dict[Pair, int] = {}
        pointers: dict[Pair, tuple[Pair, Pair]] = {}
        for p1, v1 in tables[left].items():
            for p2, v2 in tables[right].items():
                key = (color[p1[0]][p2[0]], color[p1[1]][p2[1]])
                value = v1 + v2 + defect[p1[0]][p2[0]] - defect[p1[1]][p2[1]]
                if key not in merged or value < merged[key]:
                    merged[key] = value
                    pointers[key] = (p1, p2)
        tables[node_id] = merged
        back[node_id] = pointers
    return tables, back


def verify(dec: KDecomposition) -> VerifyResult:
    """Full matroid verdict for a decomposition.

    Work per inner node is bounded by the fourth power of the reachable
    quadruple counts of its children (K^8 in the worst case), so the whole
    pass is linear in n for fixed width.
    """
    defect = validate_structure(dec)
    if defect is not None:
        reason = "empty-set" if defect.kind == "empty-set convention" else "structure"
        return VerifyResult(False, reason, str(defect))

    sub_tables, sub_back = _submodularity_tables(dec)
    worst_key, worst = None, 0
    for key, value in sorted(sub_tables[dec.root].items()):
        if value < worst:
            worst_key, worst = key, value
    if worst_key is not None:
        return VerifyResult(
            False,
            "submodularity",
            f"root quadruple {worst_key} has defect minimum {worst}",
            _witness_kind="submodularity",
            _root_key=worst_key,
            _tables=sub_tables,
            _back=sub_back,
        )

    mono_tables, mono_back = _monotonicity_tables(dec)
    worst_key, worst = None, 0
    for key, value in sorted(mono_tables[dec.root].items()):
        if value < worst:
            worst_key, worst = key, value
    if worst_key is not None:
        return VerifyResult(
            False,
            "monotonicity",
            f"root pair {worst_key} has rank drop {-worst}",
            _witness_kind="monotonicity",
            _root_key=worst_key,
            _tables=mono_tables,
            _back=mono_back,
        )

    ranks = singleton_ranks(dec)
    for e, r in enumerate(ranks):
        if r not in (0, 1):
            return VerifyResult(False, "singleton", f"rank of single element {e} is {r}")
    mismatches = tuple(
        node.element
        for node in dec.nodes.values()
        if isinstance(node, Leaf) and node.loop != (ranks[node.element] == 0)
    )
    return VerifyResult(True, loop_flag_mismatches=mismatches)


class NotAMatroidError(ValueError):
    """Raised when an operation requires a verified matroid decomposition."""

    def __init__(self, result: VerifyResult):
        super().__init__(f"decomposition does not define a matroid: {result.reason} ({result.detail})")
        self.result = result


def extract_witness(dec: KDecomposition, result: VerifyResult) -> tuple[ElementSet, ElementSet]:
    """Concrete sets (A, B) behind a submodularity or monotonicity verdict.

    Replaying eval_rank on the returned pair reproduces the violation; for
    monotonicity the pair satisfies A <= B with rank(A) > rank(B).
    """
    if result._witness_kind not in ("submodularity", "monotonicity"):
        raise ValueError("witness extraction needs a submodularity or monotonicity verdict")
    a_mask = b_mask = 0
    stack: list[tuple[int, tuple]] = [(dec.root, result._root_key)]
    while stack:
        node_id, key = stack.pop()
        node = dec.nodes[node_id]
        if isinstance(node, Leaf):
            if key[0]:
                a_mask |= 1 << node.element
            if key[1]:
                b_mask |= 1 << node.element
            continue
        k1, k2 = result._back[node_id][key]
        stack.append((node.children[0], k1))
        stack.append((node.children[1], k2))
    return a_mask, b_mask
