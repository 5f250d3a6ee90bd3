"""Exact r-uniform hypergraphs: densities, products, canonical forms, extremal families.

Vertices are 0..n-1 and every edge is a sorted tuple of r distinct vertices.
All densities are returned as `fractions.Fraction`, never floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

MAX_CANON_VERTICES = 20
_SEARCH_NODE_CAP = 100_000

# einsum is exact in int64 as long as every partial count stays below 2^63;
# partial counts are bounded by n^|V(H)|, so this is the safe ceiling.
_EXACT_COUNT_LIMIT = 2**62
_TENSOR_CELL_LIMIT = 40_000_000


@dataclass(frozen=True)
class Hypergraph:
    """An r-uniform hypergraph on vertices 0..n-1 with a frozen edge set."""

    r: int
    n: int
    edges: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError(f"uniformity must be at least 2, got {self.r}")
        if self.n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {self.n}")
        for e in self.edges:
            if len(e) != self.r or len(set(e)) != self.r:
                raise ValueError(f"edge {e} is not a set of {self.r} distinct vertices")
            if tuple(sorted(e)) != e:
                raise ValueError(f"edge {e} is not sorted")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"edge {e} out of range for n={self.n}")

    @staticmethod
    def make(r: int, n: int, edges) -> "Hypergraph":
        """Build a hypergraph, sorting and deduplicating the edge list."""
        return Hypergraph(r, n, frozenset(tuple(sorted(e)) for e in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        d = [0] * self.n
        for e in self.edges:
            for v in e:
                d[v] += 1
        return d

    def to_json(self) -> str:
        obj = {"r": self.r, "n": self.n, "edges": [list(e) for e in self.sorted_edges()]}
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "Hypergraph":
        obj = json.loads(text)
        return hypergraph_from_obj(obj)


def hypergraph_from_obj(obj) -> Hypergraph:
    """Build a hypergraph from a parsed JSON object, validating the schema."""
    if not isinstance(obj, dict):
        raise ValueError("hypergraph JSON must be an object")
    missing = {"r", "n", "edges"} - set(obj)
    if missing:
        raise ValueError(f"hypergraph JSON missing keys: {sorted(missing)}")
    r, n, edges = obj["r"], obj["n"], obj["edges"]
    if not isinstance(r, int) or not isinstance(n, int) or not isinstance(edges, list):
        raise ValueError("hypergraph JSON has wrongly typed fields")
    return Hypergraph.make(r, n, edges)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def empty_graph(n: int = 0, r: int = 2) -> Hypergraph:
    return Hypergraph(r, n, frozenset())


def single_edge(r: int = 2) -> Hypergraph:
    return Hypergraph(r, r, frozenset({tuple(range(r))}))


def complete_graph(j: int, r: int = 2) -> Hypergraph:
    """Complete r-uniform hypergraph on j vertices (edgeless when j < r)."""
    return Hypergraph(r, j, frozenset(combinations(range(j), r)))


def path_graph(k: int) -> Hypergraph:
    """Path with k edges (k+1 vertices), 2-uniform."""
    if k < 0:
        raise ValueError("edge count must be nonnegative")
    if k == 0:
        return empty_graph(1)
    return Hypergraph.make(2, k + 1, [(i, i + 1) for i in range(k)])


def complete_bipartite(a: int, b: int) -> Hypergraph:
    return Hypergraph.make(2, a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_hypergraph(b: int, c: int, r: int = 2) -> Hypergraph:
    """Sunflower with b edges through a common core of c vertices (1 <= c < r)."""
    if not 1 <= c <= r - 1:
        raise ValueError(f"core size must satisfy 1 <= c <= r-1, got c={c}, r={r}")
    if b < 1:
        raise ValueError("branch count must be at least 1")
    core = tuple(range(c))
    edges = []
    nxt = c
    for _ in range(b):
        branch = tuple(range(nxt, nxt + r - c))
        nxt += r - c
        edges.append(core + branch)
    return Hypergraph.make(r, nxt, edges)


def longbroom() -> Hypergraph:
    """Path of three edges with two extra pendant edges at one end."""
    return Hypergraph.make(2, 6, [(0, 1), (1, 2), (2, 3), (3, 4), (3, 5)])


NAMED_GRAPHS = {
    "edge": single_edge,
    "path2": lambda: path_graph(2),
    "P3": lambda: path_graph(3),
    "P4": lambda: path_graph(4),
    "K3": lambda: complete_graph(3),
    "K4": lambda: complete_graph(4),
    "longbroom": longbroom,
}


def named_graph(name: str) -> Hypergraph:
    base, _, power = name.partition("^")
    if base not in NAMED_GRAPHS:
        raise ValueError(f"unknown graph name {name!r}; known: {sorted(NAMED_GRAPHS)}")
    g = NAMED_GRAPHS[base]()
    if not power:
        return g
    k = int(power)
    if k < 1:
        raise ValueError(f"power must be positive in {name!r}")
    out = g
    for _ in range(k - 1):
        out = disjoint_union(out, g)
    return out


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------


def connected_components(G: Hypergraph) -> list[Hypergraph]:
    """Components as hypergraphs with compacted vertex ids, ordered by first vertex."""
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

    comps = []
    for root in sorted(groups, key=lambda x: min(groups[x])):
        verts = sorted(groups[root])
        remap = {v: i for i, v in enumerate(verts)}
        vset = set(verts)
        edges = [tuple(remap[v] for v in e) for e in G.edges if e[0] in vset]
        comps.append(Hypergraph.make(G.r, len(verts), edges))
    return comps


def disjoint_union(G1: Hypergraph, G2: Hypergraph) -> Hypergraph:
    if G1.r != G2.r:
        raise ValueError(f"uniformity mismatch: {G1.r} vs {G2.r}")
    edges = list(G1.edges)
    edges += [tuple(v + G1.n for v in e) for e in G2.edges]
    return Hypergraph.make(G1.r, G1.n + G2.n, edges)


def direct_product(G1: Hypergraph, G2: Hypergraph) -> Hypergraph:
    """Categorical product: each edge pair contributes all r! aligned edges."""
    if G1.r != G2.r:
        raise ValueError(f"uniformity mismatch: {G1.r} vs {G2.r}")
    edges = set()
    for e1 in G1.edges:
        for e2 in G2.edges:
            for p in permutations(e2):
                edges.add(tuple(sorted(u * G2.n + v for u, v in zip(e1, p))))
    return Hypergraph(G1.r, G1.n * G2.n, frozenset(edges))


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------


def _refine_classes(n: int, edges, seed_inv: dict[int, int]) -> list[list[int]]:
    """Partition vertices by iterated neighborhood invariants, classes in invariant order."""
    inc: dict[int, list] = {v: [] for v in range(n)}
    for e in edges:
        for v in e:
            inc[v].append(e)
    inv = dict(seed_inv)
    for _ in range(3):
        sigs = {}
        for v in range(n):
            esigs = sorted(tuple(sorted(inv[u] for u in e if u != v)) for e in inc[v])
            sigs[v] = (inv[v], tuple(esigs))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new_inv = {v: ranks[sigs[v]] for v in range(n)}
        if new_inv == inv:
            break
        inv = new_inv
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(inv[v], []).append(v)
    return [classes[k] for k in sorted(classes)]


def _min_relabeling(n: int, edges, classes: list[list[int]], fixed: dict[int, int]):
    """Smallest edge encoding over relabelings that keep each class in its block.

    `fixed` maps already-pinned vertices to their final indices; the class blocks
    fill the remaining indices in order. Branch and bound over one index at a
    time: candidates are ordered by an exact lower bound on the final sorted
    edge list, and a branch is cut once it cannot beat the best completion.
    """
    class_of: dict[int, int] = {}
    blocks: list[list[int]] = []
    owner: list[int] = [-1] * n
    start = len(fixed)
    for ci, cl in enumerate(classes):
        for v in cl:
            class_of[v] = ci
        blocks.append(list(range(start, start + len(cl))))
        for t in range(start, start + len(cl)):
            owner[t] = ci
        start += len(cl)

    mapping = dict(fixed)
    filled = [0] * len(classes)
    best = None
    best_map = None
    nodes = 0

    def lower_bound():
        tuples = []
        for e in edges:
            known = []
            need: dict[int, int] = {}
            for v in e:
                idx = mapping.get(v)
                if idx is None:
                    c = class_of[v]
                    need[c] = need.get(c, 0) + 1
                else:
                    known.append(idx)
            for c, k in need.items():
                known.extend(blocks[c][filled[c] : filled[c] + k])
            tuples.append(tuple(sorted(known)))
        return tuple(sorted(tuples))

    def rec(t: int):
        nonlocal best, best_map, nodes
        nodes += 1
        if nodes > _SEARCH_NODE_CAP:
            raise ValueError("graph too symmetric for canonical relabeling")
        if t == n:
            enc = lower_bound()
            if best is None or enc < best:
                best, best_map = enc, dict(mapping)
            return
        c = owner[t]
        scored = []
        for v in classes[c]:
            if v in mapping:
                continue
            mapping[v] = t
            filled[c] += 1
            scored.append((lower_bound(), v))
            filled[c] -= 1
            del mapping[v]
        scored.sort()
        for lb, v in scored:
            if best is not None and lb >= best:
                break
            mapping[v] = t
            filled[c] += 1
            rec(t + 1)
            filled[c] -= 1
            del mapping[v]

    rec(len(fixed))
    return best, best_map


@lru_cache(maxsize=None)
def _canonical_connected(G: Hypergraph) -> Hypergraph:
    if not G.edges or len(G.edges) == math.comb(G.n, G.r):
        return G
    classes = _refine_classes(G.n, G.sorted_edges(), {v: 0 for v in range(G.n)})
    enc, _ = _min_relabeling(G.n, G.sorted_edges(), classes, {})
    return Hypergraph(G.r, G.n, frozenset(enc))


def canonical_form(G: Hypergraph) -> Hypergraph:
    """Isomorphism-canonical relabeling, componentwise with sorted components."""
    comps = connected_components(G)
    if len(comps) <= 1:
        if G.n > MAX_CANON_VERTICES:
            raise ValueError(f"canonical form limited to {MAX_CANON_VERTICES} vertices, got {G.n}")
        return _canonical_connected(comps[0]) if comps else G
    if max(c.n for c in comps) > MAX_CANON_VERTICES:
        raise ValueError(f"canonical form limited to {MAX_CANON_VERTICES} vertices per component")
    parts = sorted(
        (_canonical_connected(c) for c in comps),
        key=lambda c: (c.n, c.edge_count, c.sorted_edges()),
    )
    out = parts[0]
    for c in parts[1:]:
        out = disjoint_union(out, c)
    return out


def is_isomorphic(G1: Hypergraph, G2: Hypergraph) -> bool:
    if (G1.r, G1.n, G1.edge_count) != (G2.r, G2.n, G2.edge_count):
        return False
    if sorted(G1.degrees()) != sorted(G2.degrees()):
        return False
    return canonical_form(G1) == canonical_form(G2)


# ---------------------------------------------------------------------------
# Homomorphism counting and densities
# ---------------------------------------------------------------------------


def _adjacency_tensor(G: Hypergraph) -> np.ndarray:
    A = np.zeros((G.n,) * G.r, dtype=np.int64)
    for e in G.edges:
        for p in permutations(e):
            A[p] = 1
    return A


def _hom_backtrack(H: Hypergraph, G: Hypergraph) -> int:
    """Plain backtracking count; exact for any size, used when tensors would overflow."""
    adj = {e: True for e in G.edges}
    order = []
    seen: set[int] = set()
    hedges = H.sorted_edges()
    for e in hedges:
        for v in e:
            if v not in seen:
                seen.add(v)
                order.append(v)
    for v in range(H.n):
        if v not in seen:
            order.append(v)
    pos = {v: i for i, v in enumerate(order)}
    # edges become checkable once their last vertex (in assignment order) is placed
    ready: dict[int, list[tuple[int, ...]]] = {i: [] for i in range(H.n)}
    for e in hedges:
        ready[max(pos[v] for v in e)].append(e)

    count = 0
    image = [0] * H.n

    def rec(i: int) -> None:
        nonlocal count
        if i == H.n:
            count += 1
            return
        v = order[i]
        for g in range(G.n):
            image[v] = g
            ok = True
            for e in ready[i]:
                t = tuple(sorted(image[u] for u in e))
                if len(set(t)) != H.r or t not in adj:
                    ok = False
                    break
            if ok:
                rec(i + 1)

    rec(0)
    return count


def _hom_connected(H: Hypergraph, G: Hypergraph) -> int:
    if H.n == 0:
        return 1
    if G.n == 0:
        return 0
    if not H.edges:
        return G.n ** H.n
    if G.n**H.n >= _EXACT_COUNT_LIMIT or G.n**G.r > _TENSOR_CELL_LIMIT:
        return _hom_backtrack(H, G)
    A = _adjacency_tensor(G)
    operands = []
    for e in H.sorted_edges():
        operands.append(A)
        operands.append(list(e))
    result = np.einsum(*operands, [], optimize="greedy")
    return int(result)


def hom_count(H: Hypergraph, G: Hypergraph) -> int:
    """Number of maps V(H) -> V(G) sending every edge of H onto an edge of G."""
    if H.r != G.r:
        raise ValueError(f"uniformity mismatch: {H.r} vs {G.r}")
    total = 1
    for comp in connected_components(H):
        total *= _hom_connected(comp, G)
        if total == 0:
            return 0
    return total


def density(H: Hypergraph, G: Hypergraph) -> Fraction:
    """Homomorphism density t(H; G) as an exact fraction."""
    if G.n < 1:
        raise ValueError("density target must have at least one vertex")
    return Fraction(hom_count(H, G), G.n**H.n)


def star_density_fast(G: Hypergraph, b: int, c: int) -> Fraction:
    """Density of the b-branch, c-core sunflower via the core degree sequence.

    Exact: a sunflower hom is an injective core placement plus b independent
    ordered edge extensions, giving c! * sum_S ((r-c)! * deg(S))^b over c-sets S.
    """
    r = G.r
    if not 1 <= c <= r - 1:
        raise ValueError(f"core size must satisfy 1 <= c <= r-1, got c={c}, r={r}")
    if b < 1:
        raise ValueError("branch count must be at least 1")
    if G.n < 1:
        raise ValueError("density target must have at least one vertex")
    deg: dict[tuple[int, ...], int] = {}
    for e in G.edges:
        for core in combinations(e, c):
            deg[core] = deg.get(core, 0) + 1
    scale = math.factorial(r - c)
    total = sum((scale * d) ** b for d in deg.values())
    return Fraction(math.factorial(c) * total, G.n ** (b * (r - c) + c))


@dataclass(frozen=True)
class DensityVector:
    """Densities of a fixed list of connected graphs in one target graph."""

    basis: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.basis) != len(self.values):
            raise ValueError("basis and values must have equal length")
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis entries must be distinct")
        for v in self.values:
            if not 0 <= v <= 1:
                raise ValueError(f"density {v} outside [0, 1]")


def density_vector(basis: list[Hypergraph], G: Hypergraph) -> DensityVector:
    for B in basis:
        if len(connected_components(B)) != 1:
            raise ValueError("density vector basis graphs must be connected")
    keys = tuple(canonical_form(B).to_json() for B in basis)
    return DensityVector(keys, tuple(density(B, G) for B in basis))


# ---------------------------------------------------------------------------
# Extremal families
# ---------------------------------------------------------------------------


def turan_hypergraph(m: int, k: int, r: int = 2) -> Hypergraph:
    """Balanced k-partite r-graph: edges are r-sets meeting r distinct parts.

    Part sizes differ by at most one, larger parts first. Edgeless when k < r.
    """
    if m < 0:
        raise ValueError("vertex count must be nonnegative")
    if k < 1:
        raise ValueError("part count must be positive")
    q, rem = divmod(m, k)
    part = []
    for i in range(k):
        part += [i] * (q + 1 if i < rem else q)
    edges = [e for e in combinations(range(m), r) if len({part[v] for v in e}) == r]
    return Hypergraph.make(r, m, edges)


def clique_turan_density(j: int, alpha: Fraction, parts: int, r: int = 2) -> Fraction:
    """Limit density of the complete graph on j vertices in clique_plus_turan blowups."""
    if j < r:
        raise ValueError(f"clique size must be at least the uniformity, got j={j}, r={r}")
    alpha = Fraction(alpha)
    value = alpha**j
    if r <= j <= parts:
        falling = Fraction(math.factorial(parts), math.factorial(parts - j))
        value += falling * (1 - alpha) ** j / Fraction(parts) ** j
    return value


def clique_plus_turan(n: int, alpha: Fraction, parts: int, r: int = 2) -> Hypergraph:
    """Disjoint union of a clique on alpha*n vertices and a balanced Turan graph."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    a = alpha * n
    if a.denominator != 1:
        raise ValueError(f"alpha*n must be an integer, got {a}")
    a = int(a)
    return disjoint_union(complete_graph(a, r), turan_hypergraph(n - a, parts, r))


def star_limit_density(b: int, r: int, c: int, rho: Fraction, m: int) -> Fraction:
    """Limit sunflower density in the regular-plus-clique family with alpha = rho^(m/c)."""
    if not 1 <= c <= r - 1:
        raise ValueError(f"core size must satisfy 1 <= c <= r-1, got c={c}, r={r}")
    if b < 1 or m < 1:
        raise ValueError("branch count and exponent must be positive")
    if m % c != 0:
        raise ValueError(f"core size {c} must divide exponent {m} for a rational alpha")
    rho = Fraction(rho)
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie strictly between 0 and 1, got {rho}")
    alpha = rho ** (m // c)
    beta = 1 - alpha
    inner = beta ** (r - c) * rho
    if r - 2 * c >= 0:
        inner += (
            Fraction(math.factorial(r - c), math.factorial(r - 2 * c) * math.factorial(c))
            * beta ** (r - 2 * c)
            * alpha**c
        )
    total = alpha**c + beta**c * inner**b
    for i in range(max(1, 2 * c - r), c):
        coeff = Fraction(math.comb(c, i)) * alpha**i * beta ** (c - i)
        base = (
            Fraction(math.factorial(r - c), math.factorial(c - i) * math.factorial(r - 2 * c + i))
            * alpha ** (c - i)
            * beta ** (r - 2 * c + i)
        )
        total += coeff * base**b
    return total


def regular_plus_clique(n: int, rho: Fraction, m: int, r: int = 2, c: int = 1) -> Hypergraph:
    """Clique on rho^m * n vertices joined completely to a rho*n'-regular circulant.

    Only the graph case (r=2, c=1) admits this explicit construction; the
    closed-form limit is available for general parameters via
    star_limit_density.
    """
    if (r, c) != (2, 1):
        raise ValueError("explicit construction only available for r=2, c=1")
    rho = Fraction(rho)
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie strictly between 0 and 1, got {rho}")
    alpha = rho**m
    a = alpha * n
    if a.denominator != 1:
        raise ValueError(f"alpha*n must be an integer, got {a}")
    a = int(a)
    nb = n - a
    if a < 1 or nb < 1:
        raise ValueError("both the clique part and the regular part must be nonempty")
    kf = rho * nb
    if kf.denominator != 1:
        raise ValueError(f"regular degree rho*(n - alpha*n) must be an integer, got {kf}")
    k = int(kf)
    if k % 2 == 1 and nb % 2 == 1:
        raise ValueError("odd regular degree requires an even number of vertices")
    if k >= nb:
        raise ValueError(f"regular degree {k} must be below part size {nb}")

    edges = list(combinations(range(a), 2))
    edges += [(i, a + j) for i in range(a) for j in range(nb)]
    for j in range(nb):
        for off in range(1, k // 2 + 1):
            edges.append(tuple(sorted((a + j, a + (j + off) % nb))))
        if k % 2 == 1:
            edges.append(tuple(sorted((a + j, a + (j + nb // 2) % nb))))
    return Hypergraph.make(2, n, edges)
