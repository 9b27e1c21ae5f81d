"""Holonomy of closed edge-paths as path-ordered 2x2 matrix products.

A closed efficient path on a trivalent graph alternates turns and edge
traversals.  With the counter-clockwise vertex order, turning onto the
next slot after the arrival half-edge is a right turn, onto the previous
slot a left turn; boundary cycles as produced by face tracing make right
turns only.  The product multiplies a constant turn matrix R or L with a
cross-ratio matrix per traversed edge:

    R = [[1, 1], [-1, 0]]     L = [[0, -1], [1, 1]]
    X = [[0, s], [-1/s, 0]]   with  s = sqrt(ac/bd)

in the neighbor-slot notation of :mod:`fatscreens.geometry`.  Matrices are
kept unnormalized; only |trace| is geometric (PSL sign ambiguity), and
|trace| = 2 cosh(length/2) for the hyperbolic length of the geodesic
representative.  Traces that land within 1e-6 of 2 are re-evaluated at
extended precision, since near-parabolic products cancel catastrophically
in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath

from .errors import DomainError
from .fatgraph import EdgePath, Fatgraph, check_closed_path, is_efficient
from .geometry import LambdaAssignment, quad_slots

LEFT = "L"
RIGHT = "R"

REFINE_GAP = 1e-6
_MP_DPS = 60


@dataclass(frozen=True)
class Mat2:
    """Real 2x2 matrix, interpreted up to global sign."""

    m11: float
    m12: float
    m21: float
    m22: float

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.m11 * other.m11 + self.m12 * other.m21,
                    self.m11 * other.m12 + self.m12 * other.m22,
                    self.m21 * other.m11 + self.m22 * other.m21,
                    self.m21 * other.m12 + self.m22 * other.m22)

    def trace(self) -> float:
        return self.m11 + self.m22

    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21


IDENTITY = Mat2(1.0, 0.0, 0.0, 1.0)


def turn_matrices() -> tuple[Mat2, Mat2]:
    """(R, L); they satisfy R*L = 1 and R^3 = L^3 = -1."""
    return Mat2(1.0, 1.0, -1.0, 0.0), Mat2(0.0, -1.0, 1.0, 1.0)


def turn_direction(g: Fatgraph, incoming: int, outgoing: int) -> str:
    """LEFT or RIGHT for a turn at a trivalent vertex.

    ``incoming`` is the arrival half-edge of the previous step, ``outgoing``
    the departing half-edge of the next.
    """
    v = g.vertex_of(incoming)
    if v != g.vertex_of(outgoing):
        raise DomainError("turn half-edges must share a vertex")
    if g.valence(v) != 3:
        raise DomainError("turns are defined at trivalent vertices")
    if outgoing == incoming:
        raise DomainError("backtrack is not a turn")
    if outgoing == g.sigma(incoming):
        return RIGHT
    return LEFT


def edge_matrix(g: Fatgraph, lam: LambdaAssignment, step: int) -> Mat2:
    """Cross-ratio matrix of the traversed edge; squares to -1."""
    a, b, c, d = quad_slots(g, step)
    s = math.sqrt((lam[a] * lam[c]) / (lam[b] * lam[d]))
    return Mat2(0.0, s, -1.0 / s, 0.0)


def path_turns(g: Fatgraph, path: EdgePath) -> tuple[str, ...]:
    """Turn before each step (from the previous step's arrival), cyclically."""
    n = len(path.steps)
    turns = []
    for k in range(n):
        incoming = g.pairing(path.steps[k - 1])
        turns.append(turn_direction(g, incoming, path.steps[k]))
    return tuple(turns)


def holonomy(g: Fatgraph, lam: LambdaAssignment, path: EdgePath,
             allow_backtrack: bool = False) -> Mat2:
    """Path-ordered product T_1 X_1 T_2 X_2 ... over the closed path.

    Backtracking paths are rejected unless ``allow_backtrack`` is set, in
    which case the turn at a backtrack contributes the identity; the group
    relations make the |trace| agree with the reduced path's.
    """
    if not g.is_trivalent():
        raise DomainError("holonomy needs a trivalent graph")
    check_closed_path(g, path)
    if not allow_backtrack and not is_efficient(g, path):
        raise DomainError("path is not efficient")
    r_mat, l_mat = turn_matrices()
    acc = IDENTITY
    n = len(path.steps)
    for k in range(n):
        incoming = g.pairing(path.steps[k - 1])
        outgoing = path.steps[k]
        if outgoing == incoming:
            turn = IDENTITY
        else:
            turn = r_mat if turn_direction(g, incoming, outgoing) == RIGHT else l_mat
        acc = acc @ turn @ edge_matrix(g, lam, outgoing)
    return acc


def abs_trace(m: Mat2) -> float:
    return abs(m.trace())


def hyp_length(abs_tr: float, atol: float = 1e-12) -> float:
    """Hyperbolic length from |trace| = 2 cosh(length / 2)."""
    if abs_tr < 2.0 - atol:
        raise DomainError(f"|trace| = {abs_tr} < 2: no geodesic length")
    return 2.0 * math.acosh(max(1.0, abs_tr / 2.0))


def hyp_length_from_gap(gap: float, atol: float = 1e-12) -> float:
    """Length from |trace| - 2, stable for gaps far below double epsilon.

    Uses acosh(1 + u) = log1p(u + sqrt(u * (2 + u))) with u = gap / 2.
    """
    if gap < -atol:
        raise DomainError(f"trace gap {gap} < 0: no geodesic length")
    u = max(0.0, gap) / 2.0
    return 2.0 * math.log1p(u + math.sqrt(u * (2.0 + u)))


def _holonomy_mp(g: Fatgraph, lam: LambdaAssignment, path: EdgePath):
    r_mat = mpmath.matrix([[1, 1], [-1, 0]])
    l_mat = mpmath.matrix([[0, -1], [1, 1]])
    ident = mpmath.matrix([[1, 0], [0, 1]])
    acc = ident
    n = len(path.steps)
    for k in range(n):
        incoming = g.pairing(path.steps[k - 1])
        outgoing = path.steps[k]
        if outgoing == incoming:
            turn = ident
        else:
            turn = r_mat if turn_direction(g, incoming, outgoing) == RIGHT else l_mat
        a, b, c, d = quad_slots(g, outgoing)
        s = mpmath.sqrt(mpmath.mpf(lam[a]) * mpmath.mpf(lam[c])
                        / (mpmath.mpf(lam[b]) * mpmath.mpf(lam[d])))
        x = mpmath.matrix([[0, s], [-1 / s, 0]])
        acc = acc * turn * x
    return acc


def _needs_refinement(m: Mat2, lam: LambdaAssignment, n_steps: int,
                      refine_gap: float) -> bool:
    # the double product loses roughly eps times the largest entry per
    # factor, which swamps a small trace gap when weights span many orders
    # of magnitude
    peak = max(abs(m.m11), abs(m.m12), abs(m.m21), abs(m.m22),
               max(lam.values) ** 2)
    roundoff = 2e-16 * peak * n_steps
    gap = abs(abs_trace(m) - 2.0)
    return gap < refine_gap or roundoff > 1e-3 * max(gap, 1e-300)


def abs_trace_of_path(g: Fatgraph, lam: LambdaAssignment, path: EdgePath,
                      allow_backtrack: bool = False,
                      refine_gap: float = REFINE_GAP) -> float:
    """|trace| of the path holonomy, re-evaluated at high precision near 2."""
    m = holonomy(g, lam, path, allow_backtrack=allow_backtrack)
    tr = abs_trace(m)
    if _needs_refinement(m, lam, len(path.steps), refine_gap):
        with mpmath.workdps(_MP_DPS):
            mm = _holonomy_mp(g, lam, path)
            tr = float(abs(mm[0, 0] + mm[1, 1]))
    return tr


def trace_gap_of_path(g: Fatgraph, lam: LambdaAssignment, path: EdgePath,
                      allow_backtrack: bool = False,
                      refine_gap: float = REFINE_GAP) -> float:
    """|trace| - 2 with the subtraction done at extended precision.

    Gaps far below 2**-52 are representable this way even though the trace
    itself rounds to 2.0 in double precision.
    """
    m = holonomy(g, lam, path, allow_backtrack=allow_backtrack)
    if _needs_refinement(m, lam, len(path.steps), refine_gap):
        with mpmath.workdps(_MP_DPS):
            mm = _holonomy_mp(g, lam, path)
            return float(abs(mm[0, 0] + mm[1, 1]) - 2)
    return abs_trace(m) - 2.0


# ---------------------------------------------------------------------------
# Closed form for paths with a single left turn
# ---------------------------------------------------------------------------

def one_left_turn_trace(zetas: Sequence[float]) -> float:
    """Trace of L X(z_1) R X(z_2) ... R X(z_{n+1}) up to sign.

    X(z) = [[0, z], [-1/z, 0]]; the value is

        P + 1/P + z_1^{-2} * P * sum_{k=1..n} prod_{j=2..k} z_j^{-2}

    with P the product of all the z's.  Multiplying the factors directly
    confirms the plus sign on the correction term (n = 1, all z = 1 gives
    trace 3, matching the matrix product).
    """
    zs = [float(z) for z in zetas]
    if len(zs) < 2:
        raise DomainError("need at least two factors (one right turn)")
    if min(zs) <= 0:
        raise DomainError("factors must be positive")
    n = len(zs) - 1
    prod_all = math.prod(zs)
    acc = 0.0
    term = 1.0
    for k in range(1, n + 1):
        if k >= 2:
            term /= zs[k - 1] ** 2
        acc += term
    return prod_all + 1.0 / prod_all + (prod_all * acc) / (zs[0] ** 2)


@dataclass(frozen=True)
class OneLeftTurnData:
    """Cross-ratio factors of a one-left-turn path and diagnostics."""

    zetas: tuple[float, ...]
    zeta_product: float          # telescopes to lambda(y_{n+1}) / lambda(y_1)
    traversed_edges: tuple[int, ...]


def one_left_turn_data(g: Fatgraph, lam: LambdaAssignment, path: EdgePath
                       ) -> OneLeftTurnData:
    """Read off the zeta factors from a closed path with exactly one left turn.

    The path is rotated to start at the left turn.  With traversed edges
    y_1..y_{n+1}, off-path slot x_0 at the left turn and x_1..x_n at the
    right turns:

        zeta_1^2 = y_2 y_{n+1} / (x_1 x_0)
        zeta_k^2 = y_{k+1} x_{k-1} / (x_k y_{k-1})   for k = 2..n
        zeta_{n+1}^2 = x_0 x_n / (y_1 y_n)

    and zeta_k^{-2} is the cross ratio of y_k.
    """
    turns = path_turns(g, path)
    lefts = [i for i, t in enumerate(turns) if t == LEFT]
    if len(lefts) != 1:
        raise DomainError("path must have exactly one left turn")
    start = lefts[0]
    steps = path.steps[start:] + path.steps[:start]
    n1 = len(steps)            # n + 1 edges
    n = n1 - 1
    if n < 1:
        raise DomainError("need at least one right turn")

    def third_slot(arrive: int, depart: int) -> int:
        return next(h for h in g.vertex_cycles[g.vertex_of(arrive)]
                    if h not in (arrive, depart))

    y = [lam[g.edge_of(s)] for s in steps]
    # x_k sits at the turn between step k and step k+1 (x_0 at the wrap)
    x = []
    for k in range(n1):
        arrive = g.pairing(steps[k])
        depart = steps[(k + 1) % n1]
        x.append(lam[g.edge_of(third_slot(arrive, depart))])
    x0 = x[-1]
    zetas = []
    z1_sq = (y[1] * y[n1 - 1]) / (x[0] * x0)
    zetas.append(math.sqrt(z1_sq))
    for k in range(2, n + 1):
        zk_sq = (y[k] * x[k - 2]) / (x[k - 1] * y[k - 2])
        zetas.append(math.sqrt(zk_sq))
    zlast_sq = (x0 * x[n - 1]) / (y[0] * y[n - 1])
    zetas.append(math.sqrt(zlast_sq))
    return OneLeftTurnData(tuple(zetas), math.prod(zetas),
                           tuple(g.edge_of(s) for s in steps))
