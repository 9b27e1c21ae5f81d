"""Screens: validation, enumeration, depth, boundaries, exponent bridges."""

from __future__ import annotations

from fractions import Fraction

import pytest

from fatscreens import fatgraph as fgr
from fatscreens import geometry as geo
from fatscreens import screens as scn
from fatscreens.errors import DomainError


def family_sets(s: scn.Screen) -> set[frozenset]:
    return set(s.family)


# -- validation ---------------------------------------------------------------

def test_validate_ok(theta):
    s = scn.screen(theta, [{0, 1}])
    assert scn.validate_screen(s).ok


def test_validate_condition_ii(theta):
    s = scn.Screen(theta, scn._sorted_family({frozenset({0}), theta.all_edges()}))
    check = scn.validate_screen(s)
    assert (check.ok, check.condition) == (False, "ii")
    assert frozenset({0}) in check.witness


def test_validate_condition_iii(theta):
    s = scn.screen(theta, [{0, 1}, {1, 2}])
    check = scn.validate_screen(s)
    assert (check.ok, check.condition) == (False, "iii")


def test_validate_condition_iv(genus2):
    # two disjoint recurrent circles whose union is a third member
    circles = []
    for mask in range(1, 1 << genus2.n_edges):
        sub = frozenset(e for e in range(genus2.n_edges) if mask >> e & 1)
        if fgr.is_recurrent(genus2, sub) and len(scn._connected_edge_components(genus2, sub)) == 1:
            circles.append(sub)
    pair = None
    for a in circles:
        for b in circles:
            if not (a & b) and fgr.is_recurrent(genus2, a | b):
                pair = (a, b)
                break
        if pair:
            break
    assert pair is not None
    a, b = pair
    s = scn.screen(genus2, [a, b, a | b])
    check = scn.validate_screen(s)
    assert (check.ok, check.condition) == (False, "iv")


def test_validate_condition_i(theta):
    s = scn.Screen(theta, scn._sorted_family({frozenset({0, 1})}))
    check = scn.validate_screen(s)
    assert (check.ok, check.condition) == (False, "i")


# -- enumeration ---------------------------------------------------------------

def test_enumerate_theta(theta):
    screens = scn.enumerate_screens(theta)
    families = [family_sets(s) for s in screens]
    top = theta.all_edges()
    assert {frozenset({0, 1}), top} in families
    assert {frozenset({0, 2}), top} in families
    assert {frozenset({1, 2}), top} in families
    assert {top} in families
    assert len(screens) == 4
    for s in screens:
        assert scn.validate_screen(s).ok


def test_enumerate_single_loop():
    loop = fgr.build([(0, 1)], [(0, 1)])
    screens = scn.enumerate_screens(loop)
    assert len(screens) == 1
    assert family_sets(screens[0]) == {frozenset({0})}


def test_enumerate_all_validate(screen_corpus):
    for g in screen_corpus.values():
        screens = scn.enumerate_screens(g)
        assert screens, "every recurrent graph carries the trivial screen"
        for s in screens:
            assert scn.validate_screen(s).ok


def test_enumerate_deterministic(mercedes):
    a = scn.enumerate_screens(mercedes)
    b = scn.enumerate_screens(mercedes)
    assert [s.family for s in a] == [s.family for s in b]


def test_enumerate_bound():
    big = fgr.build([tuple(range(26))],
                    [(2 * i, 2 * i + 1) for i in range(13)])
    with pytest.raises(DomainError, match="bound"):
        scn.enumerate_screens(big)


def test_simple_cycles_are_atomic(screen_corpus):
    # members inducing a circle have no proper nonempty sub-members
    for g in screen_corpus.values():
        for s in scn.enumerate_screens(g):
            for a in s.family:
                sub = fgr.subgraph(g, a)
                if all(sub.graph.valence(v) == 2 for v in range(sub.graph.n_vertices)):
                    assert not any(b < a for b in s.family)


# -- depth ----------------------------------------------------------------------

def test_depth_and_predecessor(theta):
    s = scn.screen(theta, [{0, 1}])
    member = frozenset({0, 1})
    assert scn.immediate_predecessor(s, member) == theta.all_edges()
    assert scn.depth_of_member(s, theta.all_edges()) == 0
    assert scn.depth_of_member(s, member) == 1
    assert scn.depth_of_edge(s, 0) == 1
    assert scn.depth_of_edge(s, 2) == 0
    with pytest.raises(DomainError):
        scn.immediate_predecessor(s, theta.all_edges())
    with pytest.raises(DomainError):
        scn.depth_of_member(s, frozenset({1, 2}))


def test_three_level_nest(mercedes):
    deep = [s for s in scn.enumerate_screens(mercedes)
            if max(scn.depth_of_member(s, a) for a in s.family) >= 2]
    assert deep
    s = deep[0]
    chain = [a for a in s.family if scn.depth_of_member(s, a) == 2]
    assert scn.depth_of_member(s, chain[0]) == 2
    mid = scn.immediate_predecessor(s, chain[0])
    assert scn.depth_of_member(s, mid) == 1


# -- boundaries -------------------------------------------------------------------

def test_relative_boundary_theta(theta):
    s = scn.screen(theta, [{0, 1}])
    curves = scn.relative_boundary(s, frozenset({0, 1}))
    assert [c.steps for c in curves] == [fgr.canonical_path(theta, fgr.EdgePath((0, 4))).steps]


def test_relative_boundary_drops_parallel_in_predecessor(theta_planar):
    s = scn.screen(theta_planar, [{0, 1}])
    assert scn.validate_screen(s).ok
    assert len(scn.relative_boundary(s, frozenset({0, 1}))) == 0


def test_screen_boundary_union(theta):
    assert len(scn.screen_boundary(scn.screen(theta, []))) == 0
    s = scn.screen(theta, [{0, 1}])
    assert len(scn.screen_boundary(s)) == 1


def test_screen_boundary_members_essential(screen_corpus):
    for g in screen_corpus.values():
        for s in scn.enumerate_screens(g):
            curves = scn.screen_boundary(s)
            assert len(set(c.steps for c in curves)) == len(curves)
            for c in curves:
                assert not fgr.is_boundary_parallel(g, c)


def test_two_screens_share_boundary(mercedes):
    by_boundary: dict[tuple, list] = {}
    for s in scn.enumerate_screens(mercedes):
        curves = scn.screen_boundary(s)
        if len(curves) == 0:
            continue
        key = tuple(c.steps for c in curves)
        by_boundary.setdefault(key, []).append(s)
    assert any(len(v) >= 2 for v in by_boundary.values())


# -- monomial families ---------------------------------------------------------------

def test_depth_family_values(theta):
    s = scn.screen(theta, [{0, 1}])
    fam = scn.depth_family(s)
    assert fam.exponents == (Fraction(1), Fraction(1), Fraction(0))
    trivial = scn.screen(theta, [])
    assert scn.depth_family(trivial).exponents == (Fraction(0),) * 3


def test_screen_of_exponents(theta):
    fam = scn.monomial_family([1, 1, 0])
    s = scn.screen_of_exponents(theta, fam)
    assert family_sets(s) == {frozenset({0, 1}), theta.all_edges()}
    const = scn.screen_of_exponents(theta, scn.monomial_family([2, 2, 2]))
    assert family_sets(const) == {theta.all_edges()}
    # rational exponents compare exactly
    fam2 = scn.monomial_family([Fraction(1, 3), Fraction(1, 3), Fraction(1, 4)])
    s2 = scn.screen_of_exponents(theta, fam2)
    assert family_sets(s2) == {frozenset({0, 1}), theta.all_edges()}


def test_screen_of_exponents_invalid_candidate(theta):
    s = scn.screen_of_exponents(theta, scn.monomial_family([1, 0, 0]))
    check = scn.validate_screen(s)
    assert not check.ok and check.condition == "ii"


def test_round_trip_all_screens(screen_corpus):
    for g in screen_corpus.values():
        for s in scn.enumerate_screens(g):
            fam = scn.depth_family(s)
            again = scn.screen_of_exponents(g, fam)
            assert again.family == s.family


def test_depth_families_stay_in_cell(screen_corpus):
    for g in screen_corpus.values():
        for s in scn.enumerate_screens(g):
            fam = scn.depth_family(s)
            for t in (2.0, 10.0, 100.0):
                lam = geo.lambda_assignment([t ** float(p) for p in fam.exponents])
                coords = geo.simplicial_coords(g, lam)
                assert min(coords.values) > 0.0
