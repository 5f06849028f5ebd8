"""Lie graphs of type (n,2): two ground vertices G1, G2 and n air vertices.

A geometric (unlabeled) graph is modelled as a full binary tree with
unordered children and leaves in {A, B}; A stands for a ground edge into
G1 and B for one into G2.  The labeled realization assigns air indices by
a depth-first traversal of the canonical child order, which makes the
bracket orientation of the extracted Lie monomial and the lexicographic
edge order (the form order) deterministic.  Consumers must always take
the monomial and the edge order from the same representative; the
:class:`GeometricClass` API returns them together.

Edges are stored as a lexicographically sorted sequence of
(source, target) pairs under the vertex order G1 < G2 < A1 < ... < An.
Parallel ground edges are allowed (they occur exactly in the classes
whose monomial vanishes, e.g. both edges of an air vertex into G1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from . import ncalg
from .ncalg import BracketTree, NCSeries

GROUND_A = "G1"
GROUND_B = "G2"


def air(i: int) -> str:
    return f"A{i}"


def is_air(v: str) -> bool:
    return v.startswith("A") and v not in ("A",)


def vertex_key(v: str):
    if v == GROUND_A:
        return (0, 0)
    if v == GROUND_B:
        return (0, 1)
    return (1, int(v[1:]))


def sort_edges(edges) -> tuple:
    return tuple(sorted(edges, key=lambda e: (vertex_key(e[0]), vertex_key(e[1]))))


@dataclass(frozen=True)
class LieGraph:
    n: int
    edges: tuple  # sorted ((source, target), ...)

    def __post_init__(self):
        object.__setattr__(self, "edges", sort_edges(self.edges))

    @property
    def degree(self) -> int:
        """Degree of the Lie monomial (= n + 1)."""
        return self.n + 1

    def out_edges(self, v: str) -> list:
        return [e for e in self.edges if e[0] == v]

    def in_edges(self, v: str) -> list:
        return [e for e in self.edges if e[1] == v]

    def root(self) -> str:
        """The unique air vertex no edge points at."""
        shot = {t for _, t in self.edges}
        roots = [air(i) for i in range(1, self.n + 1) if air(i) not in shot]
        if len(roots) != 1:
            raise ValueError(f"graph has {len(roots)} roots, expected 1")
        return roots[0]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[s, t] for s, t in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "LieGraph":
        return cls(obj["n"], tuple((s, t) for s, t in obj["edges"]))


@dataclass(frozen=True)
class Violation:
    condition: int
    detail: str


def validate(g: LieGraph) -> list:
    """Check conditions (1)-(4); returns a (possibly empty) violation list."""
    out = []
    airs = [air(i) for i in range(1, g.n + 1)]
    vertices = {GROUND_A, GROUND_B, *airs}
    for s, t in g.edges:
        if s not in vertices or t not in vertices:
            out.append(Violation(0, f"unknown vertex in edge ({s},{t})"))
            return out
    for a in airs:
        k = len(g.out_edges(a))
        if k != 2:
            out.append(Violation(1, f"{a} fires {k} edges, expected 2"))
    for a in airs:
        k = len(g.in_edges(a))
        if k > 1:
            out.append(Violation(2, f"{a} is shot by {k} edges"))
    for ground in (GROUND_A, GROUND_B):
        k = len(g.out_edges(ground))
        if k:
            out.append(Violation(3, f"ground {ground} fires {k} edges"))
    if len(g.edges) != 2 * g.n:
        out.append(Violation(1, f"{len(g.edges)} edges, expected {2 * g.n}"))
    if out:
        return out
    # condition 4: unique root and, with ground-edge targets distinguished,
    # a rooted trivalent tree (every air reachable exactly once, no cycles)
    shot = [t for _, t in g.edges if t in set(airs)]
    roots = [a for a in airs if a not in shot]
    if len(roots) != 1:
        out.append(Violation(4, f"{len(roots)} root candidates"))
        return out
    seen = set()
    stack = [roots[0]]
    while stack:
        v = stack.pop()
        if v in seen:
            out.append(Violation(4, f"{v} reached twice"))
            return out
        seen.add(v)
        for _, t in g.out_edges(v):
            if t in (GROUND_A, GROUND_B):
                continue
            stack.append(t)
    if len(seen) != g.n:
        out.append(Violation(4, "not all air points hang below the root"))
    return out


# -- geometric trees -------------------------------------------------------
#
# GeomTree: "A" | "B" | (child_small, child_large); children are stored in
# canonical order, compared by (degree, encoding).

GeomTree = BracketTree


def tree_key(t: GeomTree):
    return (ncalg.tree_degree(t), tree_encode(t))


def tree_node(a: GeomTree, b: GeomTree) -> GeomTree:
    return (a, b) if tree_key(a) <= tree_key(b) else (b, a)


def tree_encode(t: GeomTree) -> str:
    if isinstance(t, str):
        return t
    return f"({tree_encode(t[0])}{tree_encode(t[1])})"


def tree_canonical(t: GeomTree) -> GeomTree:
    if isinstance(t, str):
        return t
    return tree_node(tree_canonical(t[0]), tree_canonical(t[1]))


def realize(tree: GeomTree) -> LieGraph:
    """Labeled representative: air indices by depth-first preorder of the
    canonical child order, so the lexicographic edge order reproduces the
    canonical bracket orientation."""
    if isinstance(tree, str):
        raise ValueError("a Lie graph needs at least one air vertex")
    tree = tree_canonical(tree)
    edges = []
    counter = [0]

    def walk(node) -> str:
        counter[0] += 1
        me = air(counter[0])
        for child in node:
            if child == "A":
                edges.append((me, GROUND_A))
            elif child == "B":
                edges.append((me, GROUND_B))
            else:
                edges.append((me, walk(child)))
        return me

    walk(tree)
    n = counter[0]
    return LieGraph(n, tuple(edges))


def graph_tree(g: LieGraph) -> GeomTree:
    """Canonical geometric tree of a labeled graph (labels forgotten)."""

    def walk(v: str) -> GeomTree:
        children = []
        for _, t in g.out_edges(v):
            if t == GROUND_A:
                children.append("A")
            elif t == GROUND_B:
                children.append("B")
            else:
                children.append(walk(t))
        if len(children) != 2:
            raise ValueError(f"air vertex {v} does not fire two edges")
        return tree_node(children[0], children[1])

    return walk(g.root())


@dataclass(frozen=True)
class GeometricClass:
    """A geometric Lie graph with its distinguished labeled representative.

    ``graph`` and ``monomial`` come from the same representative; their
    pairing is what makes downstream signs consistent.
    """

    tree: GeomTree
    graph: LieGraph
    encoding: bytes

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def degree(self) -> int:
        return self.graph.degree

    def key(self) -> str:
        """Hex form of the canonical encoding, used in cache keys."""
        return self.encoding.hex()

    def monomial(self) -> BracketTree:
        return to_lie_monomial(self.graph)

    def expand(self, trunc: int | None = None) -> NCSeries:
        return ncalg.bracket_expand(self.monomial(), trunc or self.degree)

    def __repr__(self):
        return f"GeometricClass({tree_encode(self.tree)})"


def geometric_class(tree: GeomTree) -> GeometricClass:
    tree = tree_canonical(tree)
    return GeometricClass(tree=tree, graph=realize(tree),
                          encoding=tree_encode(tree).encode("ascii"))


def class_of_graph(g: LieGraph) -> GeometricClass:
    return geometric_class(graph_tree(g))


@lru_cache(maxsize=None)
def _trees_with_leaves(leaves: int) -> tuple:
    if leaves == 1:
        return ("A", "B")
    out = []
    seen = set()
    for left_leaves in range(1, leaves):
        for left in _trees_with_leaves(left_leaves):
            for right in _trees_with_leaves(leaves - left_leaves):
                t = tree_node(left, right)
                enc = tree_encode(t)
                if enc not in seen:
                    seen.add(enc)
                    out.append(t)
    out.sort(key=tree_key)
    return tuple(out)


ENUMERATION_CAP = 12


def enumerate_geometric(n: int, cap: int = ENUMERATION_CAP) -> list:
    """All geometric classes with n air vertices, in a deterministic order.

    Zero-monomial classes (e.g. both ground edges into G1) are included
    and can be filtered with :func:`classify`.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > cap:
        raise ValueError(f"n={n} exceeds enumeration cap {cap}")
    return [geometric_class(t) for t in _trees_with_leaves(n + 1)]


def to_lie_monomial(g: LieGraph) -> BracketTree:
    """G1 -> A, G2 -> B; each air vertex with ordered out-edges e1 < e2
    becomes [tree(target(e1)), tree(target(e2))]."""
    bad = validate(g)
    if bad:
        raise ValueError(f"invalid Lie graph: {bad}")

    def walk(v: str) -> BracketTree:
        if v == GROUND_A:
            return "A"
        if v == GROUND_B:
            return "B"
        e1, e2 = g.out_edges(v)  # already in lexicographic order
        return (walk(e1[1]), walk(e2[1]))

    return walk(g.root())


def comb(m: int) -> LieGraph:
    """The depth-1 graph whose monomial is (ad A)^m (B)."""
    if m < 1:
        raise ValueError("comb needs m >= 1")
    t: GeomTree = "B"
    for _ in range(m):
        t = tree_node("A", t)
    return realize(t)


def comb_class(m: int) -> GeometricClass:
    t: GeomTree = "B"
    for _ in range(m):
        t = tree_node("A", t)
    return geometric_class(t)


def triple(i: int, j: int, k: int) -> LieGraph:
    """The depth-2 graph with monomial (ad A)^(i-1)[(ad A)^j B, (ad A)^k B]."""
    return triple_class(i, j, k).graph


def triple_class(i: int, j: int, k: int) -> GeometricClass:
    if i < 1:
        raise ValueError("need i >= 1")
    if not (0 <= j < k):
        raise ValueError("need 0 <= j < k (j = k has zero monomial)")

    def comb_tree(m: int) -> GeomTree:
        t: GeomTree = "B"
        for _ in range(m):
            t = tree_node("A", t)
        return t

    t = tree_node(comb_tree(j), comb_tree(k))
    for _ in range(i - 1):
        t = tree_node("A", t)
    return geometric_class(t)


@dataclass(frozen=True)
class AugmentedGraph:
    """Graph with the extra edge e_L = (G1, root) or e_R = (G2, root)
    prepended as the first row of the form order."""

    graph: LieGraph
    side: str  # "L" | "R"

    def __post_init__(self):
        if self.side not in ("L", "R"):
            raise ValueError("side must be 'L' or 'R'")

    @property
    def edges(self) -> tuple:
        src = GROUND_A if self.side == "L" else GROUND_B
        return ((src, self.graph.root()),) + self.graph.edges


def augment(g: LieGraph, side: str) -> AugmentedGraph:
    bad = validate(g)
    if bad:
        raise ValueError(f"invalid Lie graph: {bad}")
    return AugmentedGraph(graph=g, side=side)


@dataclass(frozen=True)
class Classification:
    is_zero: bool
    depth: int
    family: str  # "comb(m)" | "triple(i,j,k)" | "general" | "zero"


def classify(g: LieGraph | GeometricClass) -> Classification:
    """Zero iff the bracket expansion vanishes; depth = number of G2
    leaves; tags the comb/triple families by encoding comparison."""
    cls = g if isinstance(g, GeometricClass) else class_of_graph(g)
    expanded = cls.expand()
    if expanded.is_zero():
        return Classification(is_zero=True, depth=0, family="zero")
    d = tree_encode(cls.tree).count("B")
    n = cls.n
    if d == 1 and cls.tree == comb_class(n).tree:
        return Classification(is_zero=False, depth=1, family=f"comb({n})")
    if d == 2:
        for i in range(1, n + 1):
            for j in range(0, n):
                k = n - i - j
                if k > j and cls.tree == triple_class(i, j, k).tree:
                    return Classification(is_zero=False, depth=2,
                                          family=f"triple({i},{j},{k})")
    return Classification(is_zero=False, depth=d, family="general")


def relabel(g: LieGraph, perm: dict) -> LieGraph:
    """Apply an air permutation {old index -> new index}; edges re-sort."""

    def m(v: str) -> str:
        if v in (GROUND_A, GROUND_B):
            return v
        return air(perm[int(v[1:])])

    return LieGraph(g.n, tuple((m(s), m(t)) for s, t in g.edges))


def parse_family(spec: str) -> LieGraph:
    """Parse 'comb(m)' or 'triple(i,j,k)' into a labeled graph."""
    spec = spec.strip()
    if spec.startswith("comb(") and spec.endswith(")"):
        return comb(int(spec[5:-1]))
    if spec.startswith("triple(") and spec.endswith(")"):
        parts = [int(x) for x in spec[7:-1].split(",")]
        if len(parts) != 3:
            raise ValueError(f"bad family spec {spec!r}")
        return triple(*parts)
    raise ValueError(f"bad family spec {spec!r}")
