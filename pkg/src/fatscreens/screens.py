"""Screens: laminar families of recurrent edge subsets.

A screen on a fatgraph with edge set E is a family of subsets containing E
in which every member is recurrent, any two members are nested or disjoint,
and no member is the union of its proper sub-members.  Screens index the
ways a one-parameter family of edge weights can degenerate; the bridge in
both directions is monomial: a screen yields exponents equal to member
depths, and exponents yield a screen through the filtration by strictly
faster growth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DomainError
from .fatgraph import (CurveSystem, EdgeSubset, Fatgraph, boundary_cycles,
                       canonical_path, curve_system, EdgePath, is_recurrent,
                       reduce_path, subgraph)


def _family_key(fam: Iterable[frozenset]) -> tuple:
    return tuple(sorted((len(a), tuple(sorted(a))) for a in fam))


def _sorted_family(fam: Iterable[frozenset]) -> tuple[frozenset, ...]:
    return tuple(sorted(fam, key=lambda a: (len(a), tuple(sorted(a)))))


@dataclass(frozen=True)
class Screen:
    """A family of edge subsets on an ambient graph, stored canonically sorted."""

    graph: Fatgraph = field(compare=False)
    family: tuple[EdgeSubset, ...] = ()

    def __iter__(self) -> Iterator[EdgeSubset]:
        return iter(self.family)

    def __len__(self) -> int:
        return len(self.family)

    def members(self) -> tuple[EdgeSubset, ...]:
        return self.family


def screen(g: Fatgraph, family: Iterable[Iterable[int]]) -> Screen:
    """Normalize a family into a Screen, adding the full edge set."""
    fam = {frozenset(a) for a in family}
    fam.add(g.all_edges())
    return Screen(g, _sorted_family(fam))


@dataclass(frozen=True)
class ScreenCheck:
    ok: bool
    condition: str | None = None
    witness: tuple = ()
    message: str = "ok"


def validate_screen(s: Screen) -> ScreenCheck:
    """Check the four screen conditions; report the first violation."""
    g = s.graph
    top = g.all_edges()
    fam = set(s.family)
    if top not in fam:
        return ScreenCheck(False, "i", (top,), "full edge set missing from family")
    for a in s.family:
        if not a or not is_recurrent(g, a):
            return ScreenCheck(False, "ii", (a,),
                               f"member {sorted(a)} is not recurrent")
    members = list(s.family)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a & b and not (a <= b or b <= a):
                return ScreenCheck(False, "iii", (a, b),
                                   f"members {sorted(a)} and {sorted(b)} overlap without nesting")
    for a in members:
        union: set = set()
        for b in members:
            if b < a:
                union |= b
        if union == set(a):
            return ScreenCheck(False, "iv", (a,),
                               f"member {sorted(a)} is the union of its proper sub-members")
    return ScreenCheck(True)


def _connected_edge_components(g: Fatgraph, edges: EdgeSubset) -> list[EdgeSubset]:
    """Edge sets of the connected components of the induced subgraph."""
    if not edges:
        return []
    sub = subgraph(g, edges)
    sg = sub.graph
    seen: set[int] = set()
    comps = []
    for h0 in range(sg.n_half_edges):
        if h0 in seen:
            continue
        stack = [h0]
        comp_halves = set()
        while stack:
            h = stack.pop()
            if h in comp_halves:
                continue
            comp_halves.add(h)
            stack.append(sg.pairing(h))
            stack.append(sg.sigma(h))
        seen |= comp_halves
        comps.append(frozenset(sub.to_parent_edge[sg.edge_of(h)] for h in comp_halves))
    return comps


def enumerate_screens(g: Fatgraph, max_edges: int = 12) -> list[Screen]:
    """All screens whose members induce connected subgraphs, in a fixed order.

    Members are required connected so that the depth-exponent round trip is
    exact: the filtration recovered from growth exponents always splits
    members into connected components.  A family with a disconnected member
    still passes ``validate_screen``; it describes the same degeneration as
    its componentwise refinement, which this enumeration does produce.
    """
    n = g.n_edges
    if n > max_edges:
        raise DomainError(f"edge count {n} exceeds enumeration bound {max_edges}")
    top = g.all_edges()
    candidates = []
    for mask in range(1, 1 << n):
        sub = frozenset(i for i in range(n) if mask >> i & 1)
        if sub == top or not is_recurrent(g, sub):
            continue
        if len(_connected_edge_components(g, sub)) != 1:
            continue
        candidates.append(sub)
    candidates.sort(key=lambda a: (len(a), tuple(sorted(a))))

    screens: list[Screen] = []

    def compatible(a: EdgeSubset, chosen: list[EdgeSubset]) -> bool:
        return all(not (a & b) or a <= b or b <= a for b in chosen)

    def union_condition(fam: list[EdgeSubset]) -> bool:
        full = fam + [top]
        for a in full:
            union: set = set()
            for b in full:
                if b < a:
                    union |= b
            if union == set(a):
                return False
        return True

    def extend(start: int, chosen: list[EdgeSubset]) -> None:
        if union_condition(chosen):
            screens.append(Screen(g, _sorted_family(set(chosen) | {top})))
        for i in range(start, len(candidates)):
            cand = candidates[i]
            if compatible(cand, chosen):
                chosen.append(cand)
                extend(i + 1, chosen)
                chosen.pop()

    extend(0, [])
    screens.sort(key=lambda s: _family_key(s.family))
    return screens


# ---------------------------------------------------------------------------
# Depth structure
# ---------------------------------------------------------------------------

def immediate_predecessor(s: Screen, member: EdgeSubset) -> EdgeSubset:
    """The unique minimal member strictly containing the given one."""
    member = frozenset(member)
    if member not in set(s.family):
        raise DomainError(f"{sorted(member)} is not a member of the screen")
    if member == s.graph.all_edges():
        raise DomainError("the full edge set has no predecessor")
    supersets = [a for a in s.family if member < a]
    return min(supersets, key=len)


def depth_of_member(s: Screen, member: EdgeSubset) -> int:
    member = frozenset(member)
    if member not in set(s.family):
        raise DomainError(f"{sorted(member)} is not a member of the screen")
    depth = 0
    cur = member
    top = s.graph.all_edges()
    while cur != top:
        cur = immediate_predecessor(s, cur)
        depth += 1
    return depth


def depth_of_edge(s: Screen, e: int) -> int:
    if not (0 <= e < s.graph.n_edges):
        raise DomainError(f"unknown edge id {e}")
    return max(depth_of_member(s, a) for a in s.family if e in a)


# ---------------------------------------------------------------------------
# Boundaries
# ---------------------------------------------------------------------------

def relative_boundary(s: Screen, member: EdgeSubset) -> CurveSystem:
    """Boundary curves of a member inside its immediate predecessor.

    Boundary cycles of the member's subsurface are read as paths in the
    ambient graph; those that are boundary-parallel inside the predecessor's
    subsurface (equal to one of its boundary cycles or a power, up to
    rotation and reversal) are discarded.
    """
    g = s.graph
    member = frozenset(member)
    pred = immediate_predecessor(s, member)
    sub = subgraph(g, member)
    pred_sub = subgraph(g, pred)
    pred_cycles = []
    for cyc in boundary_cycles(pred_sub.graph):
        steps = tuple(pred_sub.to_parent_half[x] for x in cyc.steps)
        pred_cycles.append(EdgePath(steps))
    keep = []
    for cyc in boundary_cycles(sub.graph):
        path = EdgePath(tuple(sub.to_parent_half[x] for x in cyc.steps))
        red = reduce_path(g, path)
        if red is None:
            continue
        if _parallel_to_any(g, red, pred_cycles):
            continue
        keep.append(red)
    return curve_system(g, keep, check=False)


def _parallel_to_any(g: Fatgraph, path: EdgePath, cycles: list[EdgePath]) -> bool:
    target = canonical_path(g, path)
    n = len(target)
    for cyc in cycles:
        m = len(cyc)
        if m and n % m == 0:
            if canonical_path(g, EdgePath(cyc.steps * (n // m))) == target:
                return True
    return False


def screen_boundary(s: Screen) -> CurveSystem:
    """Union of the relative boundaries of all non-top members."""
    g = s.graph
    top = g.all_edges()
    paths = []
    for a in s.family:
        if a == top:
            continue
        paths.extend(relative_boundary(s, a).curves)
    return curve_system(g, paths, check=False)


# ---------------------------------------------------------------------------
# Monomial families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialFamily:
    """One-parameter weights t**p_e with exact rational exponents per edge."""

    exponents: tuple[Fraction, ...]

    def __getitem__(self, e: int) -> Fraction:
        return self.exponents[e]

    def __len__(self) -> int:
        return len(self.exponents)


def monomial_family(exponents: Iterable[Fraction | int | str]) -> MonomialFamily:
    return MonomialFamily(tuple(Fraction(p) for p in exponents))


def depth_family(s: Screen) -> MonomialFamily:
    """Exponent of each edge equal to its depth in the screen."""
    return MonomialFamily(tuple(Fraction(depth_of_edge(s, e))
                                for e in range(s.graph.n_edges)))


def screen_of_exponents(g: Fatgraph, fam: MonomialFamily) -> Screen:
    """Screen candidate read off from growth exponents.

    The filtration keeps, at each stage, the edges whose exponent strictly
    exceeds the stage minimum; the family collects the connected components
    of every stage.  Recurrence of the members is not checked here, so the
    result may fail ``validate_screen`` when the exponents do not come from
    a valid degeneration.
    """
    if len(fam) != g.n_edges:
        raise DomainError("one exponent per edge required")
    family: set[EdgeSubset] = {g.all_edges()}
    stage = set(range(g.n_edges))
    while stage:
        lo = min(fam[e] for e in stage)
        stage = {e for e in stage if fam[e] > lo}
        for comp in _connected_edge_components(g, frozenset(stage)):
            family.add(comp)
    return Screen(g, _sorted_family(family))
