"""Tests for exact cone computations: double description, membership, formula cones."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from graphtrop.cones import (
    CertificateError,
    Membership,
    RationalCone,
    clique_trop_cone,
    cone_contains,
    cone_from_facets,
    cone_from_rays,
    cone_member,
    cones_equal,
    dd_rays,
    dot,
    facets_from_rays,
    minor_cone,
    primitive,
    project_cone,
    rank_of,
    rays_from_facets,
    star_trop_cone,
)
from graphtrop.gluing import enumerate_basis, moment_matrix


def test_primitive_normalization():
    """Rational vectors scale to coprime integers with direction preserved."""
    assert primitive((Fraction(2, 3), Fraction(-4, 3))) == (1, -2)
    assert primitive((6, -9, 0)) == (2, -3, 0)
    assert primitive((0, 0)) == (0, 0)
    assert primitive((Fraction(-1, 2),)) == (-1,)


def test_dd_frozen_wedge():
    """Three halfplanes cut out the wedge spanned by (-1,-1) and (-1,-2)."""
    lines, rays = dd_rays([(-2, 1), (1, -1), (-1, 0)], 2)
    assert lines == []
    assert sorted(rays) == [(-1, -2), (-1, -1)]


def test_dd_no_constraints_gives_full_space():
    """With no facets the cone is the whole space, reported as lineality."""
    lines, rays = dd_rays([], 3)
    assert rays == []
    assert rank_of(lines) == 3


def test_dd_single_halfspace():
    """One halfspace has a lineality hyperplane plus its inner normal as ray."""
    lines, rays = dd_rays([(1, 0, 0)], 3)
    assert rank_of(lines) == 2
    assert all(l[0] == 0 for l in lines)
    assert len(rays) == 1 and rays[0][0] > 0


def test_dd_opposite_facets_make_equation():
    """Facets a and -a force the cone into the hyperplane a = 0."""
    lines, rays = dd_rays([(1, 1), (-1, -1), (1, -1)], 2)
    assert lines == []
    assert rays == [(1, -1)]


def test_clique_cone_frozen_2_3():
    """Edge and triangle densities give facets -y1 and 3y1 - 2y2."""
    c = clique_trop_cone(2, 3)
    assert c.facets == ((-1, 0), (3, -2))
    assert c.rays == ((-2, -3), (0, -1))
    assert c.lineality == ()


def test_clique_cone_formula_matches_dd():
    """Explicit clique-cone rays agree with double description from the facets."""
    for r in range(2, 5):
        for l in range(r, r + 5):
            c = clique_trop_cone(r, l)
            d = cone_from_facets(c.basis, c.facets)
            assert d.rays == c.rays
            assert d.lineality == ()
            assert cones_equal(c, d)


def test_star_cone_frozen_l1():
    """A single branch count gives the nonpositive halfline."""
    s = star_trop_cone(3, 1, 1)
    assert s.facets == ((-1,),)
    assert s.rays == ((-1,),)


def test_star_cone_formula_matches_dd():
    """Explicit sunflower-cone rays agree with double description from the facets."""
    for r, c in [(2, 1), (3, 1), (3, 2), (4, 2)]:
        for l in range(1, 7):
            s = star_trop_cone(r, c, l)
            d = cone_from_facets(s.basis, s.facets)
            assert d.rays == s.rays
            assert d.lineality == ()


def test_star_cone_ray_shape():
    """Ray b decreases by unit steps then flattens at depth b."""
    s = star_trop_cone(2, 1, 5)
    assert (-1, -2, -3, -3, -3) in s.rays
    assert (-1, -1, -1, -1, -1) in s.rays


def _random_facets(rng, dim, count):
    return [tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(count)]


def test_duality_round_trip_random():
    """H to V to H to V round trips reproduce rays and lineality exactly."""
    rng = random.Random(20819)
    for _ in range(50):
        dim = rng.randint(1, 5)
        c1 = cone_from_facets([str(i) for i in range(dim)], _random_facets(rng, dim, rng.randint(0, 8)))
        c2 = facets_from_rays(c1)
        c3 = rays_from_facets(c2)
        assert c3.rays == c1.rays
        assert c3.lineality == c1.lineality
        # original facets remain valid for the minimal representation
        RationalCone(c1.basis, c1.facets, c2.rays, c2.lineality).validate()


def test_vrep_round_trip_random():
    """Cones rebuilt from random generators keep exactly their minimal generators."""
    rng = random.Random(5417)
    for _ in range(30):
        dim = rng.randint(1, 4)
        gens = _random_facets(rng, dim, rng.randint(1, 6))
        c1 = cone_from_rays([str(i) for i in range(dim)], gens)
        c2 = rays_from_facets(c1)
        assert c2.rays == c1.rays
        assert c2.lineality == c1.lineality
        for g in gens:
            assert cone_contains(c1, g).inside


def test_extreme_ray_tightness_rank():
    """Each extreme ray is tight on facets of rank exactly dim - lines - 1."""
    rng = random.Random(3301)
    for _ in range(25):
        dim = rng.randint(2, 5)
        c = cone_from_facets([str(i) for i in range(dim)], _random_facets(rng, dim, rng.randint(2, 8)))
        c = facets_from_rays(c)
        for r in c.rays:
            tight = [a for a in c.facets if dot(a, r) == 0]
            assert rank_of(tight) == dim - len(c.lineality) - 1


def test_cone_member_inside_certificate():
    """Nonnegative combinations are recognised with exact coefficients."""
    gens = [(-1, -1), (-1, -2)]
    m = cone_member((Fraction(-3), Fraction(-4)), gens)
    assert m.inside
    assert m.coefficients == (Fraction(2), Fraction(1))
    assert m.separator is None


def test_cone_member_outside_certificate():
    """Points outside come with a separating functional verified both ways."""
    gens = [(-1, -1), (-1, -2)]
    m = cone_member((1, 0), gens)
    assert not m.inside
    assert m.coefficients is None
    assert dot(m.separator, (1, 0)) < 0
    assert all(dot(m.separator, g) >= 0 for g in gens)


def test_cone_member_zero_target():
    """The origin belongs to every cone, even the empty one."""
    assert cone_member((0, 0, 0), []).inside
    assert cone_member((Fraction(0),), [(5,)]).inside


def test_cone_member_empty_generators():
    """Without generators only the origin is inside."""
    m = cone_member((2, -3), [])
    assert not m.inside
    assert dot(m.separator, (2, -3)) < 0


def test_cone_member_dimension_mismatch():
    """Generators of the wrong length are rejected."""
    with pytest.raises(ValueError):
        cone_member((1, 0), [(1, 0, 0)])


def test_cone_member_random_combinations():
    """Random nonnegative combinations of random generators always test inside."""
    rng = random.Random(90125)
    for _ in range(40):
        dim = rng.randint(1, 5)
        gens = _random_facets(rng, dim, rng.randint(1, 5))
        coeffs = [Fraction(rng.randint(0, 5), rng.randint(1, 4)) for _ in gens]
        target = [sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(dim)]
        m = cone_member(target, gens)
        assert m.inside
        rebuilt = [sum(c * Fraction(g[i]) for c, g in zip(m.coefficients, gens)) for i in range(dim)]
        assert [Fraction(t) for t in target] == rebuilt


def test_cone_contains_cross_checks_facets():
    """Membership by simplex agrees with direct facet evaluation on random points."""
    rng = random.Random(777)
    c = cone_from_facets(["a", "b", "c"], [(-2, 1, 0), (1, -1, 0), (-1, 0, 1)])
    for _ in range(30):
        target = tuple(rng.randint(-4, 4) for _ in range(3))
        result = cone_contains(c, target)
        assert result.inside == all(dot(a, target) >= 0 for a in c.facets)


def test_cones_equal_and_unequal():
    """Set equality of cones is decided by mutual generator membership."""
    c1 = clique_trop_cone(2, 4)
    redundant = cone_from_facets(c1.basis, list(c1.facets) + [(-1, -1, -1)])
    assert cones_equal(c1, redundant)
    smaller = cone_from_facets(c1.basis, list(c1.facets) + [(1, 0, 0)])
    assert not cones_equal(c1, smaller)
    assert not cones_equal(clique_trop_cone(2, 3), star_trop_cone(2, 1, 2))
    assert not cones_equal(clique_trop_cone(2, 3), clique_trop_cone(2, 4))


def test_projection_clique_cone_drops_to_smaller_profile():
    """Forgetting K4 projects the (2,4) clique cone onto the (2,3) one."""
    p = project_cone(clique_trop_cone(2, 4), [0, 1])
    c = clique_trop_cone(2, 3)
    assert p.rays == c.rays
    assert p.facets == tuple(sorted(c.facets))
    assert cones_equal(p, c)


def test_projection_clique_cone_shifts_profile():
    """Forgetting the edge coordinate turns the (2,4) cone into the (3,4) one."""
    p = project_cone(clique_trop_cone(2, 4), [1, 2])
    assert cones_equal(p, clique_trop_cone(3, 4))


def test_projection_star_cone():
    """Forgetting the longest branch count projects sunflower cones consistently."""
    p = project_cone(star_trop_cone(3, 1, 3), [0, 1])
    s = star_trop_cone(3, 1, 2)
    assert p.rays == s.rays
    assert cones_equal(p, s)


def test_projection_by_name():
    """Coordinates can be selected by basis name as well as by index."""
    c = clique_trop_cone(2, 4)
    p = project_cone(c, [c.basis[0], c.basis[1]])
    assert p.basis == c.basis[:2]


def test_minor_cone_degree_one_frozen():
    """The degree-1 moment matrix yields the wedge with facets -2y1+y2, y1-y2, -y1."""
    M = moment_matrix(enumerate_basis("B_tilde", 1, 2))
    c = minor_cone(M)
    assert c.facets == ((-2, 1), (-1, 0), (1, -1))
    assert c.rays == ((-1, -2), (-1, -1))
    assert c.lineality == ()
    assert c.basis == M.vbasis


def test_minor_cone_rejects_unlabeled_components():
    """Bases with fully unlabeled components have symbolically zero minors."""
    M = moment_matrix(enumerate_basis("B", 1, 2))
    with pytest.raises(ValueError):
        minor_cone(M)


def test_minor_cone_requires_unit():
    """The empty graph must be part of the moment basis."""
    B = enumerate_basis("B_tilde", 1, 2)
    M = moment_matrix(B.elements[1:])
    with pytest.raises(ValueError):
        minor_cone(M)


def test_cone_json_round_trip():
    """Serialisation keeps facets, rays and the lineality key only when present."""
    c = clique_trop_cone(2, 3)
    back = RationalCone.from_json(c.to_json())
    assert back == c
    assert '"lineality"' not in c.to_json()
    full = cone_from_facets(["x", "y"], [])
    assert '"lineality"' in full.to_json()
    assert RationalCone.from_json(full.to_json()) == full


def test_cone_json_rejects_garbage():
    """Cone JSON must be an object with a basis."""
    with pytest.raises(ValueError):
        RationalCone.from_json("[1,2,3]")


def test_validate_catches_bad_ray():
    """A ray violating a facet fails validation."""
    bad = RationalCone(("a", "b"), ((-1, 0),), ((1, 0),))
    with pytest.raises(CertificateError):
        bad.validate()


def test_formula_cone_validation():
    """Parameter ranges for the explicit cones are enforced."""
    with pytest.raises(ValueError):
        clique_trop_cone(3, 2)
    with pytest.raises(ValueError):
        clique_trop_cone(1, 4)
    with pytest.raises(ValueError):
        star_trop_cone(3, 3, 2)
    with pytest.raises(ValueError):
        star_trop_cone(2, 1, 0)


def test_dd_dimension_cap():
    """Double description refuses ambient dimensions above the cap."""
    with pytest.raises(ValueError):
        dd_rays([], 13)
