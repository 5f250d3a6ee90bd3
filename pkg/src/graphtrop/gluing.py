"""Partially labeled graphs, gluing products, and moment matrices of densities.

A labeled graph carries an injective partial map from positive integer labels
to vertices. Gluing identifies equally labeled vertices and merges duplicate
edges; forgetting labels turns products of labeled graphs into ordinary
(possibly disconnected) hypergraphs, read as monomials in the densities of
their connected components.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .hypergraphs import (
    Hypergraph,
    _min_relabeling,
    _refine_classes,
    canonical_form,
    connected_components,
    density,
    disjoint_union,
    empty_graph,
    is_isomorphic,
)

_TRIVIAL_SQUARE_EDGE_LIMIT = 12


@dataclass(frozen=True)
class LabeledGraph:
    """Hypergraph plus an injective partial labeling, stored as (label, vertex) pairs."""

    graph: Hypergraph
    labels: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        labs = [l for l, _ in self.labels]
        verts = [v for _, v in self.labels]
        if sorted(labs) != sorted(set(labs)) or list(self.labels) != sorted(self.labels):
            raise ValueError("labels must be distinct and sorted")
        if len(set(verts)) != len(verts):
            raise ValueError("labeling must be injective on vertices")
        for l, v in self.labels:
            if l < 1:
                raise ValueError(f"label {l} must be a positive integer")
            if not 0 <= v < self.graph.n:
                raise ValueError(f"labeled vertex {v} out of range")
        if self.graph.n > 0:
            deg = self.graph.degrees()
            if min(deg) == 0:
                raise ValueError("isolated vertices are only allowed in the empty graph")

    @property
    def r(self) -> int:
        return self.graph.r

    def label_map(self) -> dict[int, int]:
        return dict(self.labels)

    def vertex_labels(self) -> dict[int, int]:
        return {v: l for l, v in self.labels}

    def to_json(self) -> str:
        obj = json.loads(self.graph.to_json())
        obj["labels"] = {str(l): v for l, v in self.labels}
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "LabeledGraph":
        obj = json.loads(text)
        return labeled_graph_from_obj(obj)


def labeled_graph_from_obj(obj) -> LabeledGraph:
    if not isinstance(obj, dict) or "labels" not in obj:
        raise ValueError("labeled graph JSON must be an object with a 'labels' key")
    base = {k: obj[k] for k in ("r", "n", "edges") if k in obj}
    if len(base) != 3:
        raise ValueError("labeled graph JSON missing r/n/edges")
    G = Hypergraph.make(base["r"], base["n"], base["edges"])
    labels = tuple(sorted((int(l), v) for l, v in obj["labels"].items()))
    return LabeledGraph(G, labels)


def unit(r: int = 2) -> LabeledGraph:
    """The empty labeled graph, the multiplicative unit of gluing."""
    return LabeledGraph(empty_graph(0, r), ())


def labeled_graph(r: int, n: int, edges, labels: dict[int, int]) -> LabeledGraph:
    return labeled_canonical_form(
        LabeledGraph(Hypergraph.make(r, n, edges), tuple(sorted(labels.items())))
    )


def labeled_edge(*labels: int, r: int = 2) -> LabeledGraph:
    """A single edge with the given labels on its first vertices."""
    if len(labels) > r:
        raise ValueError("more labels than edge vertices")
    return labeled_graph(r, r, [tuple(range(r))], {l: i for i, l in enumerate(labels)})


def cherry(center: int, leaf1: int, leaf2: int) -> LabeledGraph:
    """Two-edge path fully labeled with the given center and leaf labels."""
    return labeled_graph(2, 3, [(0, 1), (0, 2)], {center: 0, leaf1: 1, leaf2: 2})


# ---------------------------------------------------------------------------
# Canonical form for labeled graphs
# ---------------------------------------------------------------------------


def labeled_canonical_form(A: LabeledGraph) -> LabeledGraph:
    """Canonical relabeling: labeled vertices first in label order, rest minimized."""
    G = A.graph
    in_order = sorted(A.labels)
    fixed = {v: i for i, (_, v) in enumerate(in_order)}
    free = [v for v in range(G.n) if v not in fixed]
    if not free:
        enc = tuple(sorted(tuple(sorted(fixed[v] for v in e)) for e in G.edges))
        new_labels = tuple((l, i) for i, (l, _) in enumerate(in_order))
        return LabeledGraph(Hypergraph(G.r, G.n, frozenset(enc)), new_labels)

    # seed invariants pin each labeled vertex to a unique class
    seed = {v: 0 for v in range(G.n)}
    for v, i in fixed.items():
        seed[v] = i + 1
    classes = [cl for cl in _refine_classes(G.n, G.sorted_edges(), seed) if cl[0] not in fixed]
    enc, _ = _min_relabeling(G.n, G.sorted_edges(), classes, fixed)
    new_labels = tuple((l, i) for i, (l, _) in enumerate(in_order))
    return LabeledGraph(Hypergraph(G.r, G.n, frozenset(enc)), new_labels)


def labeled_isomorphic(A: LabeledGraph, B: LabeledGraph) -> bool:
    """Isomorphism fixing every label pointwise."""
    return labeled_canonical_form(A) == labeled_canonical_form(B)


def labeled_components(A: LabeledGraph) -> list[LabeledGraph]:
    """Connected components of A, each keeping its labels, in canonical form."""
    G = A.graph
    vlabs = A.vertex_labels()
    out = []
    parent = list(range(G.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in G.edges:
        root = find(e[0])
        for v in e[1:]:
            parent[find(v)] = root
    groups: dict[int, list[int]] = {}
    for v in range(G.n):
        groups.setdefault(find(v), []).append(v)
    for root in sorted(groups, key=lambda x: min(groups[x])):
        verts = sorted(groups[root])
        remap = {v: i for i, v in enumerate(verts)}
        vset = set(verts)
        edges = [tuple(remap[v] for v in e) for e in G.edges if e[0] in vset]
        labels = {vlabs[v]: remap[v] for v in verts if v in vlabs}
        out.append(labeled_graph(G.r, len(verts), edges, labels))
    return out


# ---------------------------------------------------------------------------
# Gluing
# ---------------------------------------------------------------------------


def _glue_raw(A: LabeledGraph, B: LabeledGraph) -> LabeledGraph:
    if A.graph.r != B.graph.r:
        raise ValueError(f"uniformity mismatch: {A.graph.r} vs {B.graph.r}")
    amap = A.label_map()
    bvlabs = B.vertex_labels()
    bmap: dict[int, int] = {}
    nxt = A.graph.n
    for v in range(B.graph.n):
        lab = bvlabs.get(v)
        if lab is not None and lab in amap:
            bmap[v] = amap[lab]
        else:
            bmap[v] = nxt
            nxt += 1
    edges = set(A.graph.edges)
    for e in B.graph.edges:
        edges.add(tuple(sorted(bmap[v] for v in e)))
    labels = dict(amap)
    for lab, v in B.labels:
        labels[lab] = bmap[v]
    return LabeledGraph(Hypergraph(A.graph.r, nxt, frozenset(edges)), tuple(sorted(labels.items())))


def glue(A: LabeledGraph, B: LabeledGraph) -> LabeledGraph:
    """Glue along shared labels, merging duplicate edges; commutative and associative."""
    return labeled_canonical_form(_glue_raw(A, B))


def unlabel(A: LabeledGraph) -> Hypergraph:
    """Forget the labels; result is canonical."""
    return canonical_form(A.graph)


def unlabeled_product(A: LabeledGraph, B: LabeledGraph) -> Hypergraph:
    """unlabel(glue(A, B)) without canonicalizing the labeled intermediate."""
    return canonical_form(_glue_raw(A, B).graph)


# ---------------------------------------------------------------------------
# Linear combinations
# ---------------------------------------------------------------------------


class Combination:
    """Formal Q-linear combination of canonical labeled or unlabeled graphs."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, coeff in items:
                coeff = Fraction(coeff)
                if isinstance(key, LabeledGraph):
                    key = labeled_canonical_form(key)
                elif isinstance(key, Hypergraph):
                    key = canonical_form(key)
                else:
                    raise ValueError(f"unsupported term {key!r}")
                acc[key] = acc.get(key, Fraction(0)) + coeff
        self.terms = {k: c for k, c in acc.items() if c != 0}

    def __eq__(self, other) -> bool:
        return isinstance(other, Combination) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Combination") -> "Combination":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Combination(out)

    def __sub__(self, other: "Combination") -> "Combination":
        return self + (-1) * other

    def __neg__(self) -> "Combination":
        return (-1) * self

    def __rmul__(self, scalar) -> "Combination":
        s = Fraction(scalar)
        return Combination({k: s * c for k, c in self.terms.items()})

    def __repr__(self) -> str:
        parts = [f"{c}*{k.to_json()}" for k, c in sorted(self.terms.items(), key=lambda t: t[0].to_json())]
        return "Combination(" + " + ".join(parts) + ")" if parts else "Combination(0)"


def lift(key) -> Combination:
    return Combination({key: 1})


def glue_product(a: Combination, b: Combination) -> Combination:
    """Bilinear extension of gluing to combinations of labeled graphs."""
    out: dict = {}
    for A, ca in a.terms.items():
        for B, cb in b.terms.items():
            P = glue(A, B)
            out[P] = out.get(P, Fraction(0)) + ca * cb
    return Combination(out)


def unlabel_combination(a: Combination) -> Combination:
    out: dict = {}
    for A, c in a.terms.items():
        U = unlabel(A)
        out[U] = out.get(U, Fraction(0)) + c
    return Combination(out)


def square_expand(a: Combination) -> Combination:
    """Unlabeled expansion of the glued square of a labeled combination."""
    out: dict = {}
    terms = list(a.terms.items())
    for A, ca in terms:
        for B, cb in terms:
            U = unlabeled_product(A, B)
            out[U] = out.get(U, Fraction(0)) + ca * cb
    return Combination(out)


def eval_combination(a: Combination, G: Hypergraph) -> Fraction:
    """Evaluate a combination of unlabeled graphs as densities in G."""
    total = Fraction(0)
    for H, c in a.terms.items():
        if not isinstance(H, Hypergraph):
            raise ValueError("evaluation requires unlabeled terms")
        total += c * density(H, G)
    return total


# ---------------------------------------------------------------------------
# Exponent vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentVector:
    """Integer multiplicities of connected graphs, over an explicit ordered basis."""

    basis: tuple[str, ...]
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.basis) != len(self.exponents):
            raise ValueError("basis and exponents must have equal length")
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis entries must be distinct")

    def as_dict(self) -> dict[str, int]:
        return {b: e for b, e in zip(self.basis, self.exponents) if e}


def graph_key(G: Hypergraph) -> str:
    return canonical_form(G).to_json()


def basis_sort_key(canon: str) -> tuple[int, str]:
    return (len(json.loads(canon)["edges"]), canon)


def component_counts(G: Hypergraph) -> dict[str, int]:
    out: dict[str, int] = {}
    for comp in connected_components(G):
        key = graph_key(comp)
        out[key] = out.get(key, 0) + 1
    return out


def alpha_vector(G: Hypergraph, basis) -> ExponentVector:
    """Multiplicity vector of G's connected components over the given basis."""
    keys = tuple(b if isinstance(b, str) else graph_key(b) for b in basis)
    counts = component_counts(G)
    unknown = set(counts) - set(keys)
    if unknown:
        raise ValueError(f"components outside basis: {sorted(unknown)}")
    return ExponentVector(keys, tuple(counts.get(k, 0) for k in keys))


# ---------------------------------------------------------------------------
# Bases of partially labeled graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Basis:
    kind: str
    d: int
    label_budget: int
    r: int
    elements: tuple

    def __len__(self) -> int:
        return len(self.elements)


def _edge_shapes(d: int, r: int) -> list[Hypergraph]:
    """All unlabeled graphs with 1..d edges and no isolated vertices, up to isomorphism."""
    shapes: dict[str, Hypergraph] = {}
    pool = d * r
    all_edges = list(combinations(range(pool), r))
    for m in range(1, d + 1):
        for chosen in combinations(all_edges, m):
            used = sorted({v for e in chosen for v in e})
            remap = {v: i for i, v in enumerate(used)}
            G = canonical_form(
                Hypergraph.make(r, len(used), [tuple(remap[v] for v in e) for e in chosen])
            )
            shapes.setdefault(G.to_json(), G)
    return [shapes[k] for k in sorted(shapes, key=basis_sort_key)]


def _labelings(shape: Hypergraph, label_budget: int) -> list[LabeledGraph]:
    out: dict[str, LabeledGraph] = {}
    for sz in range(0, min(shape.n, label_budget) + 1):
        for vset in combinations(range(shape.n), sz):
            for labs in permutations(range(1, label_budget + 1), sz):
                L = labeled_canonical_form(
                    LabeledGraph(shape, tuple(sorted(zip(labs, vset))))
                )
                out.setdefault(L.to_json(), L)
    return list(out.values())


def enumerate_basis(kind: str, d: int, label_budget: int | None = None, r: int = 2) -> Basis:
    """Enumerate a gluing basis: "B" (all), "B_tilde" (every component labeled), or "V".

    "V" is the set of connected unlabeled graphs arising as unlabeled products
    of two "B" elements; it indexes moment matrix entries.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if label_budget is None:
        label_budget = 2 * d
    if label_budget < 0:
        raise ValueError("label budget must be nonnegative")
    if kind not in ("B", "B_tilde", "V"):
        raise ValueError(f"unknown basis kind {kind!r}")

    if kind == "V":
        base = enumerate_basis("B", d, label_budget, r)
        vset: dict[str, Hypergraph] = {}
        elems = list(base.elements)
        for i in range(len(elems)):
            for j in range(i, len(elems)):
                U = unlabeled_product(elems[i], elems[j])
                if U.n > 0 and len(connected_components(U)) == 1:
                    vset.setdefault(U.to_json(), U)
        ordered = sorted(vset, key=basis_sort_key)
        return Basis("V", d, label_budget, r, tuple(vset[k] for k in ordered))

    elements: dict[str, LabeledGraph] = {unit(r).to_json(): unit(r)}
    for shape in _edge_shapes(d, r):
        for L in _labelings(shape, label_budget):
            if kind == "B_tilde" and any(not comp.labels for comp in labeled_components(L)):
                continue
            elements[L.to_json()] = L

    ordered = sorted(elements, key=basis_sort_key)
    return Basis(kind, d, label_budget, r, tuple(elements[k] for k in ordered))


# ---------------------------------------------------------------------------
# Moment matrices
# ---------------------------------------------------------------------------


@dataclass
class MomentMatrix:
    """Symmetric matrix of unlabeled gluing products over a labeled basis."""

    basis: tuple[LabeledGraph, ...]
    vbasis: tuple[str, ...]
    products: dict[tuple[int, int], Hypergraph]
    extensions: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def entry_graph(self, i: int, j: int) -> Hypergraph:
        return self.products[(i, j) if i <= j else (j, i)]

    def alpha_entry(self, i: int, j: int) -> dict[str, int]:
        return component_counts(self.entry_graph(i, j))

    def exponent_vector(self, i: int, j: int) -> ExponentVector:
        counts = self.alpha_entry(i, j)
        return ExponentVector(self.vbasis, tuple(counts.get(k, 0) for k in self.vbasis))


def moment_matrix(basis, vbasis=None) -> MomentMatrix:
    """Products of all basis pairs; the V-basis is extended as needed and reported."""
    elems = tuple(basis.elements if isinstance(basis, Basis) else basis)
    products: dict[tuple[int, int], Hypergraph] = {}
    needed: set[str] = set()
    for i in range(len(elems)):
        for j in range(i, len(elems)):
            U = unlabeled_product(elems[i], elems[j])
            products[(i, j)] = U
            needed.update(component_counts(U))
    provided = set()
    if vbasis is not None:
        provided = {b if isinstance(b, str) else graph_key(b) for b in vbasis}
    extensions = tuple(sorted(needed - provided, key=basis_sort_key)) if vbasis is not None else ()
    allkeys = sorted(needed | provided, key=basis_sort_key)
    return MomentMatrix(elems, tuple(allkeys), products, extensions)


# ---------------------------------------------------------------------------
# Trivial squares
# ---------------------------------------------------------------------------


def is_trivial_square(H: Hypergraph) -> bool:
    """True when the only labeled graphs whose glued square is H are full copies of H.

    Exhaustive: any F with [[F^2]] = H embeds in H, so candidates are the
    subgraphs of H with every subset of their vertices labeled.
    """
    if H.edge_count == 0:
        raise ValueError("trivial-square test requires at least one edge")
    if H.edge_count > _TRIVIAL_SQUARE_EDGE_LIMIT:
        raise ValueError("trivial-square search limited to 12 edges")
    H = canonical_form(H)
    hedges = H.sorted_edges()
    seen_shapes: set[str] = set()
    for m in range(1, len(hedges) + 1):
        for chosen in combinations(hedges, m):
            used = sorted({v for e in chosen for v in e})
            remap = {v: i for i, v in enumerate(used)}
            F0 = canonical_form(
                Hypergraph.make(H.r, len(used), [tuple(remap[v] for v in e) for e in chosen])
            )
            key = F0.to_json()
            if key in seen_shapes:
                continue
            seen_shapes.add(key)
            full_copy = is_isomorphic(F0, H)
            for sz in range(0, F0.n + 1):
                for vset in combinations(range(F0.n), sz):
                    F = LabeledGraph(F0, tuple((i + 1, v) for i, v in enumerate(vset)))
                    sq = unlabeled_product(F, F)
                    if is_isomorphic(sq, H) and not (sz == F0.n and full_copy):
                        return False
    return True
