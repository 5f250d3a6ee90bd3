"""Counting obstructions to binomial density inequalities, with exact certificates.

A convex non-increasing vertex weight, summed over the vertices of a connected
graph, pairs nonnegatively with every two-by-two minor generator m(A, B).
Counting fully labeled copies of a witness component then caps the exponent k
for which k copies of the upper graph can dominate k+1 copies of the lower one
inside the degree-d relaxation; an exact LP over the generators acts as an
independent oracle, and every verdict ships with a re-verified certificate.
Minor certificates exclude single density points by Sturm-exact sign analysis
of univariate principal-minor polynomials.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .cones import CertificateError, cone_member, dot, primitive
from .gluing import (
    ExponentVector,
    LabeledGraph,
    alpha_vector,
    basis_sort_key,
    component_counts,
    enumerate_basis,
    glue,
    graph_key,
    is_trivial_square,
    labeled_components,
    moment_matrix,
    unlabeled_product,
)
from .hypergraphs import Hypergraph, canonical_form, connected_components

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Degree weights
# ---------------------------------------------------------------------------


def g_eval(m: int, p: int) -> Fraction:
    """Vertex weight -m up to the breakpoint p + 3/2, constant beyond it."""
    if m < 0:
        raise ValueError(f"degree must be nonnegative, got {m}")
    if p < 1:
        raise ValueError(f"threshold p must be at least 1, got {p}")
    cap = Fraction(2 * p + 3, 2)
    return -Fraction(m) if m <= cap else -cap


def l_value(F: Hypergraph, p: int) -> Fraction:
    """Total vertex weight of F: the sum of g_eval over all vertex degrees."""
    return sum((g_eval(m, p) for m in F.degrees()), Fraction(0))


@dataclass(frozen=True)
class YVector:
    """Total vertex weights over an ordered basis of connected graphs."""

    basis: tuple[str, ...]
    p: int
    values: tuple[Fraction, ...]


def y_vector(basis, p: int) -> YVector:
    """Evaluate the total vertex weight on every graph of the basis.

    Entries may be canonical JSON keys or graphs; each must be nonempty and
    connected so that componentwise evaluation is well defined.
    """
    keys = []
    values = []
    for b in basis:
        G = Hypergraph.from_json(b) if isinstance(b, str) else b
        if G.n == 0 or len(connected_components(G)) != 1:
            raise ValueError("y-vector basis entries must be nonempty connected graphs")
        keys.append(graph_key(G))
        values.append(l_value(G, p))
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate y-vector basis entries")
    return YVector(tuple(keys), p, tuple(values))


def y_pairing(y: YVector, v) -> Fraction:
    """Exact inner product of a y-vector with an exponent vector or count dict."""
    if isinstance(v, ExponentVector):
        if v.basis != y.basis:
            raise ValueError("exponent vector basis does not match the y-vector basis")
        return sum((val * e for val, e in zip(y.values, v.exponents)), Fraction(0))
    lookup = dict(zip(y.basis, y.values))
    total = Fraction(0)
    for key, e in v.items():
        if key not in lookup:
            raise ValueError(f"coordinate outside the y-vector basis: {key}")
        total += lookup[key] * e
    return total


# ---------------------------------------------------------------------------
# Minor generators
# ---------------------------------------------------------------------------


def m_vector(A: LabeledGraph, B: LabeledGraph, basis=None) -> ExponentVector:
    """Generator alpha([[A^2]]) + alpha([[B^2]]) - 2 alpha([[AB]]) of the dual cone.

    With an explicit basis the result is reported over it, extended in sorted
    order by any support falling outside; with none, over the sorted support.
    """
    counts: dict[str, int] = {}
    for X, Y, w in ((A, A, 1), (B, B, 1), (A, B, -2)):
        for key, c in component_counts(unlabeled_product(X, Y)).items():
            counts[key] = counts.get(key, 0) + w * c
    if basis is None:
        keys = tuple(sorted(counts, key=basis_sort_key))
    else:
        keys = tuple(b if isinstance(b, str) else graph_key(b) for b in basis)
        extra = sorted(set(counts) - set(keys), key=basis_sort_key)
        if extra:
            log.info("m_vector basis extended by %d component(s)", len(extra))
            keys = keys + tuple(extra)
    return ExponentVector(keys, tuple(counts.get(k, 0) for k in keys))


# ---------------------------------------------------------------------------
# Pair statistics for a witness component
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairStats:
    """Census of the copies of a witness component C across A, B, and their gluing.

    Fully labeled copies are keyed by their label set and classified by whether
    that label set still spans a copy of C after gluing; unlabeled copies pass
    through unchanged.  Copies of C arising any other way show up as the
    self-glue residuals (in the squares) and the hybrid residual (in the
    gluing), all of which are provably nonnegative.
    """

    witness: str
    z_a: int
    z_b: int
    l_a: int
    l_b: int
    l_ab: int
    u_a: int
    u_b: int
    self_glue_a: int
    self_glue_b: int
    hybrid: int
    coordinate: int


def _witness_graph(C) -> Hypergraph:
    G = Hypergraph.from_json(C) if isinstance(C, str) else canonical_form(C)
    if G.edge_count == 0 or len(connected_components(G)) != 1:
        raise ValueError("witness must be a connected graph with at least one edge")
    return G


def _fully_labeled_copies(X: LabeledGraph, ckey: str) -> dict[frozenset[int], LabeledGraph]:
    """Fully labeled components of X isomorphic to the witness, by label set."""
    out: dict[frozenset[int], LabeledGraph] = {}
    for comp in labeled_components(X):
        if len(comp.labels) == comp.graph.n and graph_key(comp.graph) == ckey:
            out[frozenset(l for l, _ in comp.labels)] = comp
    return out


def pair_stats(A: LabeledGraph, B: LabeledGraph, C) -> PairStats:
    """Count copies of the witness C in the squares and the gluing of (A, B)."""
    W = _witness_graph(C)
    ckey = graph_key(W)
    aa = component_counts(unlabeled_product(A, A)).get(ckey, 0)
    bb = component_counts(unlabeled_product(B, B)).get(ckey, 0)
    G = glue(A, B)
    gcomps = labeled_components(G)
    ab = sum(1 for comp in gcomps if graph_key(comp.graph) == ckey)

    owner: dict[int, int] = {}
    for idx, comp in enumerate(gcomps):
        for l, _ in comp.labels:
            owner[l] = idx

    def survivors(copies: dict[frozenset[int], LabeledGraph]) -> set[frozenset[int]]:
        alive = set()
        for labset in copies:
            comp = gcomps[owner[next(iter(labset))]]
            if graph_key(comp.graph) != ckey:
                continue
            if frozenset(l for l, _ in comp.labels) != labset:
                raise CertificateError("surviving copy carries unexpected labels")
            alive.add(labset)
        return alive

    fl_a = _fully_labeled_copies(A, ckey)
    fl_b = _fully_labeled_copies(B, ckey)
    surv_a = survivors(fl_a)
    surv_b = survivors(fl_b)
    l_ab = len(surv_a & surv_b)
    l_a = len(surv_a) - l_ab
    l_b = len(surv_b) - l_ab
    z_a = len(fl_a) - len(surv_a)
    z_b = len(fl_b) - len(surv_b)
    u_a = sum(
        1 for c in labeled_components(A) if not c.labels and graph_key(c.graph) == ckey
    )
    u_b = sum(
        1 for c in labeled_components(B) if not c.labels and graph_key(c.graph) == ckey
    )
    self_glue_a = aa - len(fl_a) - 2 * u_a
    self_glue_b = bb - len(fl_b) - 2 * u_b
    hybrid = ab - (l_a + l_b + l_ab) - u_a - u_b
    if self_glue_a < 0 or self_glue_b < 0 or hybrid < 0:
        raise CertificateError("pair census produced a negative residual")
    coordinate = aa + bb - 2 * ab
    return PairStats(
        ckey, z_a, z_b, l_a, l_b, l_ab, u_a, u_b, self_glue_a, self_glue_b, hybrid, coordinate
    )


@dataclass(frozen=True)
class PairVerdict:
    """Result of the census bounds for one pair against one witness component."""

    stats: PairStats
    pairing: Fraction
    applies: bool
    coordinate_bound_ok: bool
    pairing_bound_ok: bool
    passed: bool


def positive_pair_check(A: LabeledGraph, B: LabeledGraph, C, p: int = 1) -> PairVerdict:
    """Check the two census bounds that drive the counting argument.

    When the witness coordinate of m(A, B) is positive it must not exceed
    z_a + z_b, and the pairing with the weight vector must be at least half
    of z_a + z_b; for nonpositive coordinates the bounds are not required.
    """
    stats = pair_stats(A, B, C)
    m = m_vector(A, B)
    pairing = y_pairing(y_vector(m.basis, p), m)
    zsum = stats.z_a + stats.z_b
    applies = stats.coordinate > 0
    coordinate_bound_ok = stats.coordinate <= zsum
    pairing_bound_ok = pairing >= Fraction(zsum, 2)
    passed = (not applies) or (coordinate_bound_ok and pairing_bound_ok)
    return PairVerdict(stats, pairing, applies, coordinate_bound_ok, pairing_bound_ok, passed)


# ---------------------------------------------------------------------------
# The counting obstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    """Outcome of the counting and LP analysis of one binomial density target."""

    upper: str
    lower: str
    k: int
    degree: int
    label_budget: int
    p: int
    status: str
    conclusion: str
    preconditions: tuple[tuple[str, bool], ...]
    witness: str | None = None
    vbasis: tuple[str, ...] = ()
    vbasis_extensions: tuple[str, ...] = ()
    pair_count: int = 0
    pairings_nonnegative: bool | None = None
    positive_pair_indices: tuple[tuple[int, int], ...] = ()
    positive_pair_verdicts: tuple[PairVerdict, ...] = ()
    target: tuple[int, ...] = ()
    target_pairing: Fraction | None = None
    chain_bound: Fraction | None = None
    chain_contradiction: bool | None = None
    lp_inside: bool | None = None
    lp_combination: tuple[tuple[tuple[int, ...], Fraction], ...] | None = None
    lp_separator: tuple[int, ...] | None = None
    separator_verified: bool | None = None

    def to_json(self) -> str:
        return json.dumps(_jsonable(asdict(self)), sort_keys=True, indent=2)


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def counting_obstruction(
    upper: Hypergraph,
    lower: Hypergraph,
    k: int,
    degree: int,
    label_budget: int | None = None,
    p: int = 1,
) -> ObstructionReport:
    """Analyse whether k copies of upper can dominate k+1 copies of lower.

    The target k*alpha(upper) - (k+1)*alpha(lower) is tested against the cone
    generated by the m(A, B) of all basis pairs at the given degree and label
    budget, along two independent routes: the counting argument over a witness
    component (whose census bounds cap k by twice the target pairing), and an
    exact LP membership run whose certificate is re-verified.  Disagreement
    between the two routes raises CertificateError.
    """
    if k < 1:
        raise ValueError(f"exponent k must be at least 1, got {k}")
    if degree < 1:
        raise ValueError(f"degree must be at least 1, got {degree}")
    if label_budget is None:
        label_budget = 2 * degree
    upper_c = canonical_form(upper)
    lower_c = canonical_form(lower)
    upper_counts = component_counts(upper_c)
    lower_counts = component_counts(lower_c)
    witness = None
    for key in sorted(upper_counts, key=basis_sort_key):
        if key not in lower_counts:
            witness = key
            break
    degs = set(upper_c.degrees())
    checks = (
        ("equal edge counts", upper_c.edge_count == lower_c.edge_count),
        ("upper graph is a trivial square", is_trivial_square(upper_c)),
        ("upper degrees within {p, p+1}", degs <= {p, p + 1}),
        ("lower max degree at most p+1", max(lower_c.degrees(), default=0) <= p + 1),
        ("witness component of upper absent from lower", witness is not None),
    )
    base = dict(
        upper=upper_c.to_json(),
        lower=lower_c.to_json(),
        k=k,
        degree=degree,
        label_budget=label_budget,
        p=p,
        preconditions=checks,
    )
    if not all(ok for _, ok in checks):
        return ObstructionReport(
            status="precondition-failure", conclusion="precondition failure", **base
        )

    basis = enumerate_basis("B_tilde", degree, label_budget, upper_c.r)
    M = moment_matrix(basis.elements)
    vkeys = set(M.vbasis) | set(upper_counts) | set(lower_counts)
    vbasis = tuple(sorted(vkeys, key=basis_sort_key))
    extensions = tuple(sorted(vkeys - set(M.vbasis), key=basis_sort_key))
    if extensions:
        log.info("moment basis extended by %d component(s) for the target", len(extensions))
    y = y_vector(vbasis, p)
    up = alpha_vector(upper_c, vbasis).exponents
    low = alpha_vector(lower_c, vbasis).exponents
    target = tuple(k * a - (k + 1) * b for a, b in zip(up, low))
    target_pairing = y_pairing(y, ExponentVector(vbasis, target))
    chain_bound = 2 * target_pairing / upper_counts[witness]
    chain_contradiction = k > chain_bound

    witness_g = Hypergraph.from_json(witness)
    diag = [M.alpha_entry(i, i) for i in range(M.size)]
    generators: dict[tuple[int, ...], None] = {}
    pos_indices = []
    verdicts = []
    pair_count = 0
    for i in range(M.size):
        for j in range(i + 1, M.size):
            pair_count += 1
            entry: dict[str, int] = {}
            for key, c in diag[i].items():
                entry[key] = entry.get(key, 0) + c
            for key, c in diag[j].items():
                entry[key] = entry.get(key, 0) + c
            for key, c in M.alpha_entry(i, j).items():
                entry[key] = entry.get(key, 0) - 2 * c
            if y_pairing(y, entry) < 0:
                raise CertificateError(f"negative weight pairing for basis pair ({i}, {j})")
            vec = tuple(entry.get(b, 0) for b in vbasis)
            if any(vec):
                generators.setdefault(primitive(vec))
            if entry.get(witness, 0) > 0:
                verdict = positive_pair_check(M.basis[i], M.basis[j], witness_g, p)
                if not verdict.passed:
                    raise CertificateError(f"census bounds failed for basis pair ({i}, {j})")
                pos_indices.append((i, j))
                verdicts.append(verdict)

    membership = cone_member(target, tuple(generators))
    if membership.inside:
        if chain_contradiction:
            raise CertificateError("counting chain contradicts the LP membership verdict")
        status = "inconclusive"
        conclusion = f"implied by the degree-{degree} generators at label budget {label_budget}"
        lp_combination = tuple(
            (gen, coeff)
            for gen, coeff in zip(generators, membership.coefficients)
            if coeff
        )
        lp_separator = None
        separator_verified = None
    else:
        lp_combination = None
        lp_separator = membership.separator
        separator_verified = dot(lp_separator, target) < 0 and all(
            dot(lp_separator, g) >= 0 for g in generators
        )
        if not separator_verified:
            raise CertificateError("Farkas separator failed the report re-verification")
        status = "validated-obstruction"
        if chain_contradiction:
            conclusion = f"not sos-testable at degree {degree}"
        else:
            conclusion = (
                f"not implied by the degree-{degree} generators at label budget {label_budget}"
            )
    return ObstructionReport(
        status=status,
        conclusion=conclusion,
        witness=witness,
        vbasis=vbasis,
        vbasis_extensions=extensions,
        pair_count=pair_count,
        pairings_nonnegative=True,
        positive_pair_indices=tuple(pos_indices),
        positive_pair_verdicts=tuple(verdicts),
        target=target,
        target_pairing=target_pairing,
        chain_bound=chain_bound,
        chain_contradiction=chain_contradiction,
        lp_inside=membership.inside,
        lp_combination=lp_combination,
        lp_separator=lp_separator,
        separator_verified=separator_verified,
        **base,
    )


# ---------------------------------------------------------------------------
# Exact univariate polynomials and Sturm sequences
# ---------------------------------------------------------------------------
# A polynomial is a list of Fractions, ascending powers, no trailing zeros.


def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _poly_trim(out)


def _poly_scale(a, s: Fraction):
    return _poly_trim([x * s for x in a])


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, z in enumerate(b):
            out[i + j] += x * z
    return _poly_trim(out)


def _poly_eval(a, x: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(a):
        total = total * x + c
    return total


def _poly_deriv(a):
    return _poly_trim([i * c for i, c in enumerate(a)][1:])


def _poly_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b):
        coeff = rem[-1] / lead
        shift = len(rem) - len(b)
        quo[shift] = coeff
        for i, c in enumerate(b):
            rem[shift + i] -= coeff * c
        _poly_trim(rem)
        if not rem:
            break
    return _poly_trim(quo), rem


def _poly_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if a:
        a = _poly_scale(a, 1 / a[-1])
    return a


def _poly_squarefree(a):
    g = _poly_gcd(a, _poly_deriv(a))
    if len(g) <= 1:
        return _poly_scale(a, 1 / a[-1])
    quo, _ = _poly_divmod(a, g)
    return _poly_scale(quo, 1 / quo[-1])


def _sturm_chain(a):
    chain = [list(a), _poly_deriv(a)]
    while chain[-1]:
        rem = _poly_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(_poly_scale(rem, Fraction(-1)))
    return chain


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for q in chain:
        v = _poly_eval(q, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def _roots_within(chain, a: Fraction, b: Fraction) -> int:
    """Number of distinct roots in (a, b], for a squarefree chain head."""
    return _sign_variations(chain, a) - _sign_variations(chain, b)


class _RationalRootFound(Exception):
    def __init__(self, root: Fraction) -> None:
        self.root = root


def _isolate_core_roots(core):
    """Isolating intervals with non-root endpoints for all roots of core in (0, 1).

    The core polynomial is squarefree and nonzero at 0 and 1.  Bisection that
    lands exactly on a root reports it instead, so the caller can deflate.
    """
    chain = _sturm_chain(core)
    intervals = []
    stack = [(Fraction(0), Fraction(1))]
    while stack:
        lo, hi = stack.pop()
        count = _roots_within(chain, lo, hi)
        if count == 0:
            continue
        if count == 1:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _poly_eval(core, mid) == 0:
            raise _RationalRootFound(mid)
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(intervals)


class _RootData:
    """Root isolation for one polynomial over (0, 1), reusable across systems."""

    def __init__(self, pol) -> None:
        self.pol = tuple(pol)
        sf = _poly_squarefree(list(pol))
        self.sf_chain = _sturm_chain(sf)
        core = list(sf)
        while _poly_eval(core, Fraction(0)) == 0:
            core = _poly_divmod(core, [Fraction(0), Fraction(1)])[0]
        while _poly_eval(core, Fraction(1)) == 0:
            core = _poly_divmod(core, [Fraction(-1), Fraction(1)])[0]
        rational = []
        while True:
            try:
                intervals = _isolate_core_roots(core)
                break
            except _RationalRootFound as hit:
                rational.append(hit.root)
                core = _poly_divmod(core, [-hit.root, Fraction(1)])[0]
        self.core = tuple(core)
        self.core_chain = _sturm_chain(core)
        self.rational = sorted(rational)
        self.intervals = intervals


class _SturmCache:
    """Shared root data and sign memos for repeated feasibility queries."""

    def __init__(self) -> None:
        self.roots: dict[tuple, _RootData] = {}
        self.signs: dict[tuple, int] = {}

    def data(self, pol) -> _RootData:
        key = tuple(pol)
        if key not in self.roots:
            self.roots[key] = _RootData(key)
        return self.roots[key]


def _sign_point(cache: _SturmCache, pol, x: Fraction) -> int:
    key = (tuple(pol), "pt", x)
    if key not in cache.signs:
        v = _poly_eval(pol, x)
        cache.signs[key] = 0 if v == 0 else (1 if v > 0 else -1)
    return cache.signs[key]


def _sign_at_root(cache: _SturmCache, pol, data: _RootData, lo: Fraction, hi: Fraction) -> int:
    """Exact sign of pol at the unique root of data.core inside (lo, hi)."""
    key = (tuple(pol), data.core, lo, hi)
    if key in cache.signs:
        return cache.signs[key]
    sign = None
    shared = _poly_gcd(list(pol), list(data.core))
    if len(shared) > 1 and _roots_within(_sturm_chain(shared), lo, hi) > 0:
        sign = 0
    else:
        own = cache.data(pol)
        while sign is None:
            if (
                _poly_eval(pol, lo) != 0
                and _poly_eval(pol, hi) != 0
                and _roots_within(own.sf_chain, lo, hi) == 0
            ):
                v = _poly_eval(pol, (lo + hi) / 2)
                sign = 1 if v > 0 else -1
                break
            mid = (lo + hi) / 2
            if _poly_eval(data.core, mid) == 0:
                v = _poly_eval(pol, mid)
                sign = 0 if v == 0 else (1 if v > 0 else -1)
                break
            if _roots_within(data.core_chain, lo, mid) == 1:
                hi = mid
            else:
                lo = mid
    cache.signs[key] = sign
    return sign


def _system_feasible(polys, cache: _SturmCache | None = None):
    """Decide whether all polynomials are simultaneously >= 0 somewhere on [0, 1].

    Returns (feasible, point, interval): a rational witness point, or an
    interval isolating an algebraic witness root of one constraint.  The
    candidate set {0, 1, roots of the constraints} is complete: a nonempty
    feasible set is closed, and each of its boundary points inside (0, 1)
    zeroes some constraint.  Exact throughout.
    """
    if cache is None:
        cache = _SturmCache()
    active = []
    for p in polys:
        t = _poly_trim(list(p))
        if t:
            active.append(tuple(t))
    if not active:
        return True, Fraction(0), None
    datas = [cache.data(p) for p in active]
    points = [Fraction(0), Fraction(1)]
    seen_points = set(points)
    for d in datas:
        for r in d.rational:
            if r not in seen_points:
                seen_points.add(r)
                points.append(r)
    for x in points:
        if all(_sign_point(cache, p, x) >= 0 for p in active):
            return True, x, None
    seen_ivs = set()
    for d in datas:
        for lo, hi in d.intervals:
            if (d.core, lo, hi) in seen_ivs:
                continue
            seen_ivs.add((d.core, lo, hi))
            if all(_sign_at_root(cache, p, d, lo, hi) >= 0 for p in active):
                return True, None, (lo, hi)
    return False, None, None


# ---------------------------------------------------------------------------
# Minor certificates for single density points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinorConstraint:
    """One principal-minor constraint, as a polynomial in the free density."""

    indices: tuple[int, ...]
    coefficients: tuple[Fraction, ...]


@dataclass(frozen=True)
class MinorCertificate:
    """Sturm-exact feasibility verdict for one partially fixed density point."""

    status: str
    free: str
    fixed: tuple[tuple[str, Fraction], ...]
    degree: int
    label_budget: int
    eligible_minors: int
    constraints: int
    refutation: tuple[MinorConstraint, ...] | None = None
    witness_point: Fraction | None = None
    witness_interval: tuple[Fraction, Fraction] | None = None

    def to_json(self) -> str:
        return json.dumps(_jsonable(asdict(self)), sort_keys=True, indent=2)


def _minor_poly(M, S, fixed_map, free_key):
    """Determinant of the principal minor on S, as a polynomial in the free density."""
    size = len(S)
    entries = []
    for i in S:
        row = []
        for j in S:
            coeff = Fraction(1)
            power = 0
            for key, cnt in M.alpha_entry(i, j).items():
                if key == free_key:
                    power += cnt
                else:
                    coeff *= fixed_map[key] ** cnt
            row.append((coeff, power))
        entries.append(row)
    poly: dict[int, Fraction] = {}
    for perm in permutations(range(size)):
        sign = 1
        seen = list(perm)
        for i in range(size):
            for j in range(i + 1, size):
                if seen[i] > seen[j]:
                    sign = -sign
        coeff = Fraction(sign)
        power = 0
        for i, j in enumerate(perm):
            c, w = entries[i][j]
            coeff *= c
            power += w
        if coeff:
            poly[power] = poly.get(power, Fraction(0)) + coeff
    out = [Fraction(0)] * (max(poly, default=0) + 1)
    for w, c in poly.items():
        out[w] = c
    return _poly_trim(out)


def minor_certificate(fixed, free, degree: int, label_budget: int | None = None) -> MinorCertificate:
    """Test a density point with one free coordinate against small principal minors.

    All principal minors of size at most 3 of the degree-d moment matrix whose
    entries involve only the fixed graphs and the free one become univariate
    polynomial constraints >= 0; their joint solvability over [0, 1] is decided
    exactly.  An empty solution set is reported with a minimal refuting
    constraint set (a single minor or a pair where possible).
    """
    free_c = canonical_form(free)
    free_key = graph_key(free_c)
    fixed_map: dict[str, Fraction] = {}
    for g, value in fixed.items():
        key = g if isinstance(g, str) else graph_key(g)
        if key in fixed_map:
            raise ValueError("duplicate fixed coordinate")
        fixed_map[key] = Fraction(value)
    if free_key in fixed_map:
        raise ValueError("the free coordinate is also fixed")
    if label_budget is None:
        label_budget = 2 * degree
    basis = enumerate_basis("B_tilde", degree, label_budget, free_c.r)
    M = moment_matrix(basis.elements)
    allowed = set(fixed_map) | {free_key}

    def eligible(i: int, j: int) -> bool:
        return set(M.alpha_entry(i, j)) <= allowed

    diag = [i for i in range(M.size) if eligible(i, i)]
    pair_ok = {
        (i, j) for i, j in combinations(diag, 2) if eligible(i, j)
    }
    index_sets = [(i,) for i in diag]
    index_sets += sorted(pair_ok)
    index_sets += [
        (i, j, k)
        for i, j, k in combinations(diag, 3)
        if (i, j) in pair_ok and (i, k) in pair_ok and (j, k) in pair_ok
    ]
    constraints: dict[tuple[Fraction, ...], tuple[int, ...]] = {}
    for S in index_sets:
        pol = _minor_poly(M, S, fixed_map, free_key)
        if pol:
            constraints.setdefault(tuple(pol), S)

    cache = _SturmCache()
    polys = [list(pol) for pol in constraints]
    feasible, point, interval = _system_feasible(polys, cache)
    fixed_out = tuple(sorted(fixed_map.items(), key=lambda kv: basis_sort_key(kv[0])))
    base = dict(
        free=free_key,
        fixed=fixed_out,
        degree=degree,
        label_budget=label_budget,
        eligible_minors=len(index_sets),
        constraints=len(constraints),
    )
    if feasible:
        return MinorCertificate(
            status="inconclusive", witness_point=point, witness_interval=interval, **base
        )
    ordered = [(pol, constraints[pol]) for pol in constraints]
    refutation = None
    for pol, S in ordered:
        if not _system_feasible([pol], cache)[0]:
            refutation = ((pol, S),)
            break
    if refutation is None:
        for (p1, s1), (p2, s2) in combinations(ordered, 2):
            if not _system_feasible([p1, p2], cache)[0]:
                refutation = ((p1, s1), (p2, s2))
                break
    if refutation is None:
        refutation = tuple(ordered)
    return MinorCertificate(
        status="refuted",
        refutation=tuple(MinorConstraint(S, pol) for pol, S in refutation),
        **base,
    )
