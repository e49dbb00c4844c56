"""Deterministic builders for every example surface, chart and quiver.

All vertex values are exact integers (interpreted as rationals), so a
fixture name always produces a bit-identical complex.  Grid tori are
triangulated with the "flattest diagonal" rule: each quad takes the
diagonal whose endpoint values differ least, which keeps steepest
descent running along the designed ridges; a few quads can be pinned
explicitly where a fixture needs a specific link structure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .complexes import SimplicialComplex
from .quiveralg import Quiver
from .scalarfield import ScalarField

FIXTURE_NAMES = (
    "sphere", "torus_standard", "torus_degenerate", "torus_bott", "genus2",
    "hexagon_chart", "saddle_chart", "gamma1", "gamma2", "gamma3",
    "bott_quiver",
)


def grid_torus(values: Sequence[Sequence[int]],
               pinned: Optional[Dict[Tuple[int, int], str]] = None) -> ScalarField:
    """Triangulated torus grid; values[u][v] with both directions wrapped.

    ``pinned`` maps a quad (u, v) to "ad" or "bc" to force its diagonal:
    "ad" joins (u,v)-(u+1,v+1), "bc" joins (u+1,v)-(u,v+1).
    """
    n_u = len(values)
    n_v = len(values[0])
    if n_u < 3 or n_v < 3:
        raise ValueError("grid torus needs at least 3 rows and columns")
    pinned = pinned or {}

    def vid(u: int, v: int) -> int:
        return (u % n_u) * n_v + (v % n_v)

    def val(u: int, v: int) -> int:
        return values[u % n_u][v % n_v]

    tris = []
    for u in range(n_u):
        for v in range(n_v):
            a, b = vid(u, v), vid(u + 1, v)
            c, d = vid(u, v + 1), vid(u + 1, v + 1)
            choice = pinned.get((u, v))
            if choice is None:
                ad = abs(val(u, v) - val(u + 1, v + 1))
                bc = abs(val(u + 1, v) - val(u, v + 1))
                choice = "ad" if ad <= bc else "bc"
            if choice == "ad":
                tris.append((a, b, d))
                tris.append((a, d, c))
            else:
                tris.append((a, b, c))
                tris.append((b, d, c))
    complex_ = SimplicialComplex(tris)
    field_values = {vid(u, v): Fraction(values[u][v])
                    for u in range(n_u) for v in range(n_v)}
    return ScalarField(complex_, field_values)


def sphere() -> ScalarField:
    """Octahedron: min, max and four regular equator vertices."""
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 1, 4),
            (5, 1, 2), (5, 2, 3), (5, 3, 4), (5, 1, 4)]
    values = {0: 0, 1: 10, 2: 20, 3: 30, 4: 40, 5: 100}
    return ScalarField(SimplicialComplex(tris),
                       {k: Fraction(v) for k, v in values.items()})


# Standing torus: sum of a main-circle profile P(u) and a tube profile
# Q(v).  Critical points: min (0,0), saddles (0,4) and (4,0), max (4,4).
_TORUS_P = [0, 310, 600, 920, 1000, 890, 570, 270]
_TORUS_Q = [0, 260, 530, 810, 960, 830, 550, 250]


def torus_standard(routing: str = "generic") -> ScalarField:
    if routing == "generic":
        values = [[_TORUS_P[u] + _TORUS_Q[v] for v in range(8)]
                  for u in range(8)]
        return grid_torus(values)
    if routing == "axisymmetric":
        return _torus_axisymmetric()
    raise ValueError(f"unknown routing variant {routing!r}")


def _torus_axisymmetric() -> ScalarField:
    """Variant with both saddles on the inner equator.

    Product profile f = A(u) * W(v): the inner row v=3 descends
    monotonically from the upper saddle into the lower one, so the
    steepest-descent flow carries a saddle-saddle connecting orbit.
    """
    a = [-40, -27, -8, 14, 40, 26, 6, -16]
    w = [25, 18, 10, 7, 9, 16]
    values = [[a[u] * w[v] for v in range(6)] for u in range(8)]
    return grid_torus(values)


# Degenerate torus: the standing torus with a drainage canyon carved
# along the back so the lower saddle (0,4) acquires a third valley and
# a third ridge, becoming a monkey saddle, and with the back ridge
# vertex (7,3) truncated into a local maximum just above it.  Critical
# points in value order:
#   c1 = (0,0) min 0, c2 = (0,4) monkey 960, c3 = (7,3) local max 980,
#   c4 = (4,0) saddle 1000, c5 = (4,4) global max 1960.
_DEGENERATE_CARVE = {
    (7, 4): 700, (6, 4): 600, (6, 3): 500, (6, 2): 400,
    (6, 1): 300, (6, 0): 250, (7, 0): 150, (7, 3): 980,
}


def torus_degenerate() -> ScalarField:
    values = [[_TORUS_P[u] + _TORUS_Q[v] for v in range(8)] for u in range(8)]
    for (u, v), x in _DEGENERATE_CARVE.items():
        values[u][v] = x
    # keep the (7,5) ridge and the new (7,4) valley separate in the
    # monkey's link
    return grid_torus(values, pinned={(7, 4): "bc"})


def torus_bott() -> ScalarField:
    """Height along the tube axis: two critical circles."""
    tube = [0, 70, 130, 180, 130, 70]
    values = [[tube[v] for v in range(6)] for u in range(6)]
    return grid_torus(values)


def _zip_cycles(upper: Sequence[int], lower: Sequence[int]) -> List[Tuple[int, int, int]]:
    """Triangulated annulus between two disjoint vertex cycles."""
    nu, nl = len(upper), len(lower)
    tris = []
    i = j = 0
    while i < nu or j < nl:
        advance_upper = (j >= nl) or (i < nu and (i + 1) * nl <= (j + 1) * nu)
        if advance_upper:
            tris.append((upper[i % nu], lower[j % nl], upper[(i + 1) % nu]))
            i += 1
        else:
            tris.append((lower[j % nl], lower[(j + 1) % nl], upper[i % nu]))
            j += 1
    return tris


class _MeshBuilder:
    def __init__(self):
        self.values: Dict[int, Fraction] = {}
        self.tris: List[Tuple[int, int, int]] = []
        self._next = 0

    def vertex(self, value) -> int:
        vid = self._next
        self._next += 1
        self.values[vid] = Fraction(value)
        return vid

    def ring(self, values: Sequence[int]) -> List[int]:
        return [self.vertex(x) for x in values]

    def cap(self, center: int, ring: Sequence[int]):
        n = len(ring)
        for i in range(n):
            self.tris.append((center, ring[i], ring[(i + 1) % n]))

    def annulus(self, upper: Sequence[int], lower: Sequence[int]):
        self.tris.extend(_zip_cycles(upper, lower))

    def field(self) -> ScalarField:
        return ScalarField(SimplicialComplex(self.tris), self.values)


def genus2() -> ScalarField:
    """Genus-2 surface built as a branching stack of tubes.

    A monkey saddle sits over the global minimum and sprouts three
    tubes; two of them close into a handle through the Bott maximum
    circle C3, the third splits at an ordinary saddle into two tubes
    closed by C5.  A dimple on one upper tube adds the extra local
    minimum and saddle.  Components in value order:
      c1 min 0, v's/monkey c2 60, C3 circle 500, c7 min 690,
      c4 saddle 700, c6 saddle 768, C5 circle 900.
    """
    b = _MeshBuilder()
    c1 = b.vertex(0)
    r_low = b.ring([40] * 12)
    b.cap(c1, r_low)
    c2 = b.vertex(60)
    v1, v2, v3 = b.vertex(45), b.vertex(46), b.vertex(47)
    ring_a = b.ring([120, 118, 112, 108, 110, 114])
    ring_b = b.ring([122, 117, 111, 107, 109, 113])
    ring_c = b.ring([124, 119, 116, 106, 109, 115])
    a1, a2 = ring_a[0], ring_a[1]
    b1, b2 = ring_b[0], ring_b[1]
    c1_, c2_ = ring_c[0], ring_c[1]
    # monkey star: nine triangles around c2
    link = [a1, a2, v1, b1, b2, v2, c1_, c2_, v3]
    for i in range(9):
        b.tris.append((c2, link[i], link[(i + 1) % 9]))
    # flower boundary: valleys and the outer arcs of the three rings
    zc = ([v1, ring_b[0], ring_b[5], ring_b[4], ring_b[3], ring_b[2], ring_b[1],
           v2, ring_c[0], ring_c[5], ring_c[4], ring_c[3], ring_c[2], ring_c[1],
           v3, ring_a[0], ring_a[5], ring_a[4], ring_a[3], ring_a[2], ring_a[1]])
    b.annulus(zc, r_low)
    # handle one: tubes a and b joined through the Bott circle C3
    mid_a = b.ring([164, 160, 156, 152, 154, 158])
    top_a = b.ring([430, 426, 422, 418, 420, 424])
    b.annulus(mid_a, ring_a)
    b.annulus(top_a, mid_a)
    mid_b = b.ring([165, 161, 157, 153, 155, 159])
    top_b = b.ring([431, 427, 423, 419, 421, 425])
    b.annulus(mid_b, ring_b)
    b.annulus(top_b, mid_b)
    circle3 = b.ring([500] * 6)
    b.annulus(circle3, top_a)
    b.annulus(circle3, top_b)
    # tube c rises to the splitting saddle c4
    mid_c = b.ring([250, 248, 246, 244, 245, 247])
    top_c = b.ring([650, 648, 646, 644, 645, 647])
    b.annulus(mid_c, ring_c)
    b.annulus(top_c, mid_c)
    c4 = b.vertex(700)
    w1, w2 = b.vertex(660), b.vertex(662)
    ring_d = b.ring([730, 728, 726, 724, 725, 727])
    ring_e = b.ring([731, 729, 733, 735, 734, 732])
    d1, d2 = ring_d[0], ring_d[1]
    e1, e2 = ring_e[0], ring_e[1]
    link4 = [d1, d2, w1, e1, e2, w2]
    for i in range(6):
        b.tris.append((c4, link4[i], link4[(i + 1) % 6]))
    z4 = [w1, ring_e[0], ring_e[5], ring_e[4], ring_e[3], ring_e[2], ring_e[1],
          w2, ring_d[0], ring_d[5], ring_d[4], ring_d[3], ring_d[2], ring_d[1]]
    b.annulus(z4, top_c)
    # tube d carries the dimple: local min c7 with its saddle c6
    ring_x = b.ring([768, 772, 776, 774, 771, 769])
    ring_y = b.ring([690, 815, 830, 840, 835, 820])
    ring_z = b.ring([860, 858, 856, 854, 855, 857])
    top_d = b.ring([880, 878, 876, 874, 875, 877])
    b.annulus(ring_x, ring_d)
    b.annulus(ring_y, ring_x)
    b.annulus(ring_z, ring_y)
    b.annulus(top_d, ring_z)
    mid_e = b.ring([820, 818, 816, 814, 815, 817])
    top_e = b.ring([881, 879, 877, 873, 874, 878])
    b.annulus(mid_e, ring_e)
    b.annulus(top_e, mid_e)
    circle5 = b.ring([900] * 6)
    b.annulus(circle5, top_d)
    b.annulus(circle5, top_e)
    return b.field()


def _disk_chart(ring_values: Sequence[int], outer_values: Sequence[int],
                center_value: int) -> ScalarField:
    """Center vertex, inner ring, outer ring of twice the size."""
    k = len(ring_values)
    assert len(outer_values) == 2 * k
    center = 0
    ring = [1 + i for i in range(k)]
    outer = [1 + k + i for i in range(2 * k)]
    tris = []
    for i in range(k):
        tris.append((center, ring[i], ring[(i + 1) % k]))
        # ring vertex i spans outer vertices 2i-1, 2i, 2i+1
        tris.append((ring[i], outer[2 * i], outer[(2 * i + 1) % (2 * k)]))
        tris.append((ring[i], outer[(2 * i - 1) % (2 * k)], outer[2 * i]))
        tris.append((ring[i], ring[(i + 1) % k], outer[(2 * i + 1) % (2 * k)]))
    values = {center: Fraction(center_value)}
    for i, x in enumerate(ring_values):
        values[ring[i]] = Fraction(x)
    for i, x in enumerate(outer_values):
        values[outer[i]] = Fraction(x)
    return ScalarField(SimplicialComplex(tris), values)


def hexagon_chart() -> ScalarField:
    """Monkey-saddle disk: center at 0, ring alternating low/high,
    twelve boundary vertices in three low and three high arcs."""
    ring = [-20, 20, -20, 20, -20, 20]
    outer = [-40, 5, 40, 45, -35, -40,
             -45, 8, 35, 42, -38, 6]
    # arrange so each low ring vertex sits over a low boundary arc
    outer = [-40, -10, 30, 40, -35, -12,
             28, 38, -42, -8, 32, 36]
    return _disk_chart(ring, outer, 0)


def saddle_chart() -> ScalarField:
    """Ordinary saddle disk: square-like chart with two low and two
    high boundary arcs."""
    ring = [-20, 20, -20, 20]
    outer = [-40, -10, 30, 40, -35, -12, 28, 38]
    return _disk_chart(ring, outer, 0)


_GAMMA_VERTICES = ["c1", "c2", "c3", "c4", "c5"]
_GAMMA_GRADING = {0: Fraction(0), 1: Fraction(1), 2: Fraction(2),
                  3: Fraction(3), 4: Fraction(4)}


def _gamma(arrow_counts: Dict[Tuple[int, int], int]) -> Quiver:
    arrows = []
    for (t, h), k in sorted(arrow_counts.items()):
        arrows.extend([(t, h)] * k)
    return Quiver(5, arrows, labels=_GAMMA_VERTICES, grading=_GAMMA_GRADING)


def gamma1() -> Quiver:
    """Pinned solution of the generic-metric path-count constraints:
    10 two-step routes c5 -> c1, 3 two-step routes c4 -> c1, and no
    three-step routes at all."""
    return _gamma({(1, 0): 3, (3, 1): 1, (3, 0): 1,
                   (4, 1): 2, (4, 2): 4, (2, 0): 1})


def gamma2() -> Quiver:
    return _gamma({(1, 0): 3, (2, 1): 1, (3, 1): 1, (3, 0): 1,
                   (4, 3): 2, (4, 1): 1})


def gamma3() -> Quiver:
    return _gamma({(1, 0): 3, (2, 1): 1, (3, 1): 2, (4, 3): 2})


def bott_quiver() -> Quiver:
    return Quiver(2, [(1, 0), (1, 0)], labels=["Cmin", "Cmax"],
                  grading={0: Fraction(0), 1: Fraction(1)})


_BUILDERS = {
    "sphere": sphere,
    "torus_standard": torus_standard,
    "torus_degenerate": torus_degenerate,
    "torus_bott": torus_bott,
    "genus2": genus2,
    "hexagon_chart": hexagon_chart,
    "saddle_chart": saddle_chart,
    "gamma1": gamma1,
    "gamma2": gamma2,
    "gamma3": gamma3,
    "bott_quiver": bott_quiver,
}

SURFACE_FIXTURES = ("sphere", "torus_standard", "torus_degenerate",
                    "torus_bott", "genus2")
QUIVER_FIXTURES = ("gamma1", "gamma2", "gamma3", "bott_quiver")


def build(name: str, **params):
    """Build a fixture by name; surface names yield a ScalarField,
    quiver names a Quiver, chart names a cobordism ScalarField."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r} "
                         f"(expected one of {', '.join(FIXTURE_NAMES)})")
    return builder(**params)
