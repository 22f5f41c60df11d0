"""Alternating link diagrams as labeled 4-valent sphere maps.

A Diagram stores the rotation system (``sigma``: next dart counterclockwise
at the same crossing), the edge involution (``alpha``), one ``over`` flag per
dart (True where the strand through that dart passes over), a dart marking
the outer face, and a count of crossing-free circles (nonzero only for the
degenerate unknot diagrams).

Construction from Conway notation assembles 4-ended tangle fragments:
an integer n >= 1 is a horizontal chain of n crossings, the sum glues east
to west legs, and product / ramification are reduced to the identities
a b = -a + b and (a, b, ...) = -a - b - ..., where -a reflects the fragment
in the NW-SE diagonal.  The closure is the numerator closure.  Over/under
flags are then assigned from the checkerboard shading, so the builder always
emits one canonical member of the mirror pair {K, K*}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from . import conway, maps


class DiagramError(ValueError):
    pass


LEG_ORDER = ("NE", "NW", "SW", "SE")  # counterclockwise around a fragment


@dataclass(frozen=True)
class Diagram:
    sigma: dict
    alpha: dict
    over: dict
    outer_dart: int | None
    circles: int = 0

    # -- basic structure ----------------------------------------------------

    @property
    def n_crossings(self):
        return len(self.sigma) // 4

    def crossings(self):
        return maps.vertices(self.sigma)

    def faces(self):
        return maps.faces(self.sigma, self.alpha)

    def opposite(self, d):
        return self.sigma[self.sigma[d]]

    @property
    def n_components(self):
        if not self.sigma:
            return self.circles
        seen = set()
        count = 0
        for d in self.sigma:
            if d in seen:
                continue
            count += 1
            x = d
            while x not in seen:
                seen.add(x)
                x = self.alpha[self.opposite(x)]
        return count // 2 + self.circles

    def validate(self):
        if not self.sigma:
            if self.circles < 1:
                raise DiagramError("empty diagram must carry at least one circle")
            return
        maps.check_map(self.sigma, self.alpha)
        for cyc in self.crossings():
            if len(cyc) != 4:
                raise DiagramError(f"crossing {cyc} is not 4-valent")
            flags = [self.over[d] for d in cyc]
            if flags[0] != flags[2] or flags[1] != flags[3] or flags[0] == flags[1]:
                raise DiagramError(f"bad over/under flags at {cyc}")
        if self.outer_dart is not None and self.outer_dart not in self.sigma:
            raise DiagramError("outer dart is not a dart of the map")

    def is_alternating(self):
        """Each edge is over at one end and under at the other."""
        return all(self.over[d] != self.over[self.alpha[d]] for d in self.sigma)

    # -- shading ------------------------------------------------------------

    def shading(self):
        """Proper 2-coloring of faces with the outer face unshaded.

        Returns (face_index_of_dart, shaded_flags_by_face_index).
        """
        if not self.sigma:
            raise DiagramError("crossing-free diagram has no crossings to shade")
        fidx = maps.face_of_dart(self.sigma, self.alpha)
        nfaces = max(fidx.values()) + 1
        outer = fidx[self.outer_dart if self.outer_dart is not None
                     else min(self.sigma)]
        color = [None] * nfaces
        color[outer] = False
        stack = [outer]
        face_darts = [[] for _ in range(nfaces)]
        for d, i in fidx.items():
            face_darts[i].append(d)
        while stack:
            f = stack.pop()
            for d in face_darts[f]:
                g = fidx[self.alpha[d]]
                if color[g] is None:
                    color[g] = not color[f]
                    stack.append(g)
                elif color[g] == color[f]:
                    raise DiagramError("faces are not checkerboard colorable")
        return fidx, color

    # -- elementary operations ----------------------------------------------

    def mirror(self):
        """Switch every crossing (same map, toggled over/under flags)."""
        return Diagram(self.sigma, self.alpha,
                       {d: not v for d, v in self.over.items()},
                       self.outer_dart, self.circles)

    def canonical_code(self, reflect=False):
        if not self.sigma:
            return ("circles", self.circles)
        return maps.canonical_code(self.sigma, self.alpha,
                                   labels=self.over, reflect=reflect)

    def relabeled(self, perm):
        """Apply a dart relabeling (dict old -> new); used by property tests."""
        return Diagram({perm[d]: perm[v] for d, v in self.sigma.items()},
                       {perm[d]: perm[v] for d, v in self.alpha.items()},
                       {perm[d]: v for d, v in self.over.items()},
                       perm[self.outer_dart] if self.outer_dart is not None else None,
                       self.circles)

    # -- serialization --------------------------------------------------------

    def to_pd(self):
        """PD-style code: per crossing the 4 edge labels in rotation order
        starting at its smallest dart, plus the index of an over dart."""
        edge_id = {}
        for d in sorted(self.sigma):
            e = frozenset((d, self.alpha[d]))
            if e not in edge_id:
                edge_id[e] = len(edge_id)
        out = []
        for cyc in self.crossings():
            labels = [edge_id[frozenset((d, self.alpha[d]))] for d in cyc]
            over_index = 0 if self.over[cyc[0]] else 1
            out.append({"edges": labels, "over": over_index})
        return out

    def to_json(self):
        return json.dumps({
            "crossings": self.n_crossings,
            "components": self.n_components,
            "circles": self.circles,
            "pd": self.to_pd(),
        }, sort_keys=True)

    @classmethod
    def from_pd(cls, pd, circles=0):
        sigma, alpha, over = {}, {}, {}
        by_edge = {}
        for ci, rec in enumerate(pd):
            darts = [4 * ci + j for j in range(4)]
            for j, d in enumerate(darts):
                sigma[d] = darts[(j + 1) % 4]
                over[d] = (j % 2) == (rec["over"] % 2)
            for j, e in enumerate(rec["edges"]):
                by_edge.setdefault(e, []).append(darts[j])
        for e, ds in by_edge.items():
            if len(ds) != 2:
                raise DiagramError(f"edge label {e} appears {len(ds)} times")
            alpha[ds[0]], alpha[ds[1]] = ds[1], ds[0]
        d = cls(sigma, alpha, over, min(sigma) if sigma else None, circles)
        d.validate()
        return d

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls.from_pd(data["pd"], data.get("circles", 0))


UNKNOT = Diagram({}, {}, {}, None, circles=1)


# ---------------------------------------------------------------------------
# Sphere isomorphism


def sphere_iso(d1: Diagram, d2: Diagram, allow_reflection=False):
    """Dart bijection preserving rotation (up to global reversal if allowed)
    and over/under flags, or None."""
    if not d1.sigma and not d2.sigma:
        return {} if d1.circles == d2.circles else None
    return maps.map_isomorphism(d1.sigma, d1.alpha, d2.sigma, d2.alpha,
                                labels1=d1.over, labels2=d2.over,
                                reflect=allow_reflection)


# ---------------------------------------------------------------------------
# Builder


class _Assembler:
    """Wire-level assembly: endpoints are crossing darts or pass-through
    tokens; tokens are eliminated by chasing chains once the link is closed."""

    def __init__(self):
        self.next_id = 0
        self.sigma = {}
        self.tokens = set()
        self.links = {}  # endpoint -> list of joined endpoints

    def _fresh(self):
        self.next_id += 1
        return self.next_id - 1

    def new_token(self):
        t = self._fresh()
        self.tokens.add(t)
        self.links[t] = []
        return t

    def new_crossing(self):
        """Darts in counterclockwise order NE, NW, SW, SE."""
        ds = [self._fresh() for _ in range(4)]
        for j, d in enumerate(ds):
            self.sigma[d] = ds[(j + 1) % 4]
            self.links[d] = []
        return dict(zip(LEG_ORDER, ds))

    def join(self, a, b):
        self.links[a].append(b)
        self.links[b].append(a)

    def integer(self, n):
        if n < 0:
            raise DiagramError(
                f"integer tangle {n}: negative tangles are outside the "
                "alternating scope of this builder")
        if n == 0:
            legs = {k: self.new_token() for k in LEG_ORDER}
            self.join(legs["NW"], legs["NE"])
            self.join(legs["SW"], legs["SE"])
            return {"legs": legs, "darts": set()}
        first = prev = self.new_crossing()
        darts = set(prev.values())
        for _ in range(n - 1):
            cur = self.new_crossing()
            darts.update(cur.values())
            self.join(prev["NE"], cur["NW"])
            self.join(prev["SE"], cur["SW"])
            prev = cur
        legs = {"NW": first["NW"], "SW": first["SW"],
                "NE": prev["NE"], "SE": prev["SE"]}
        return {"legs": legs, "darts": darts}

    def mirror_frag(self, frag):
        """Reflect in the NW-SE diagonal: reverse rotations, swap NE and SW."""
        darts = frag["darts"]
        done = set()
        for d in list(darts):
            if d in done:
                continue
            cyc = [d]
            x = self.sigma[d]
            while x != d:
                cyc.append(x)
                x = self.sigma[x]
            done.update(cyc)
            for i, y in enumerate(cyc):
                self.sigma[cyc[(i + 1) % len(cyc)]] = y
        legs = dict(frag["legs"])
        legs["NE"], legs["SW"] = legs["SW"], legs["NE"]
        return {"legs": legs, "darts": darts}

    def sum_frag(self, a, b):
        self.join(a["legs"]["NE"], b["legs"]["NW"])
        self.join(a["legs"]["SE"], b["legs"]["SW"])
        legs = {"NW": a["legs"]["NW"], "SW": a["legs"]["SW"],
                "NE": b["legs"]["NE"], "SE": b["legs"]["SE"]}
        return {"legs": legs, "darts": a["darts"] | b["darts"]}

    def fragment(self, expr):
        if isinstance(expr, conway.Integer):
            return self.integer(expr.n)
        if isinstance(expr, conway.Sum):
            return self.sum_frag(self.fragment(expr.left), self.fragment(expr.right))
        if isinstance(expr, conway.Product):
            return self.sum_frag(self.mirror_frag(self.fragment(expr.left)),
                                 self.fragment(expr.right))
        if isinstance(expr, conway.Ramification):
            frag = self.mirror_frag(self.fragment(expr.parts[0]))
            for part in expr.parts[1:]:
                frag = self.sum_frag(frag, self.mirror_frag(self.fragment(part)))
            return frag
        if isinstance(expr, conway.Polyhedron):
            raise DiagramError("polyhedron only allowed at the top level")
        raise TypeError(f"not a TangleExpr: {expr!r}")

    def chase(self, start, first):
        """Follow a wire from endpoint ``start`` into neighbor ``first``;
        return the crossing dart it reaches, or None if the wire closes up."""
        prev, cur = start, first
        while cur in self.tokens:
            nbrs = self.links[cur]
            if len(nbrs) != 2:
                raise DiagramError("open wire: tangle not fully closed")
            nxt = nbrs[0] if nbrs[1] == prev else nbrs[1]
            prev, cur = cur, nxt
            if cur == start:
                return None
        return cur

    def contract(self):
        """Eliminate tokens; returns (alpha, circles)."""
        alpha = {}
        for d in self.sigma:
            if len(self.links[d]) != 1:
                raise DiagramError("dangling dart: tangle not fully closed")
            alpha[d] = self.chase(d, self.links[d][0])
            if alpha[d] is None:
                raise DiagramError("dart wired into a closed circle")
        circles = 0
        seen = set()
        for t in self.tokens:
            if t in seen or len(self.links[t]) != 2:
                continue
            prev, cur, chain = t, self.links[t][0], {t}
            while cur in self.tokens and cur != t:
                chain.add(cur)
                nbrs = self.links[cur]
                prev, cur = cur, nbrs[0] if nbrs[1] == prev else nbrs[1]
            if cur == t:
                circles += 1
                seen.update(chain)
        return alpha, circles


def _assign_alternating(sigma, alpha, outer_dart):
    """Type-A over/under flags: a dart is over iff the corner it opens
    counterclockwise into (the face of sigma(d)) is shaded."""
    d = Diagram(sigma, alpha, {x: False for x in sigma}, outer_dart)
    fidx, color = d.shading()
    over = {x: bool(color[fidx[sigma[x]]]) for x in sigma}
    return Diagram(sigma, alpha, over, outer_dart)


def _load_polyhedra():
    with resources.files(__package__).joinpath("polyhedra.json").open() as fh:
        return json.load(fh)


_POLYHEDRA = None


def polyhedron_table():
    global _POLYHEDRA
    if _POLYHEDRA is None:
        _POLYHEDRA = _load_polyhedra()
    return _POLYHEDRA


def build(expr) -> Diagram:
    """Numerator closure of the assembled tangle (or the substituted basic
    polyhedron), as a reduced-alternating-ready labeled sphere map."""
    if isinstance(expr, str):
        expr = conway.parse(expr)
    asm = _Assembler()
    if isinstance(expr, conway.Polyhedron):
        probe, into = _build_polyhedral(asm, expr)
    else:
        frag = asm.fragment(expr)
        legs = frag["legs"]
        asm.join(legs["NW"], legs["NE"])
        asm.join(legs["SW"], legs["SE"])
        probe = legs["NE"]
        # walk into the tangle, away from the closure arc (joined last)
        into = asm.links[probe][0] if probe in asm.tokens else None
    alpha, circles = asm.contract()
    if not asm.sigma:
        if circles != 1:
            return Diagram({}, {}, {}, None, circles=circles)
        return UNKNOT
    if circles:
        raise DiagramError("disconnected closure: free circles alongside crossings")
    if not maps.is_connected(asm.sigma, alpha):
        raise DiagramError("disconnected closure")
    outer_dart = asm.chase(probe, into) if probe in asm.tokens else probe
    diagram = _assign_alternating(asm.sigma, alpha, outer_dart)
    diagram.validate()
    if not diagram.is_alternating():
        raise DiagramError("assembled map does not admit the alternating labeling")
    expected = conway.leaf_sum(expr)
    if diagram.n_crossings != expected:
        raise DiagramError(
            f"crossing count {diagram.n_crossings} != leaf sum {expected}")
    return diagram


def _build_polyhedral(asm, expr):
    table = polyhedron_table()[expr.name]
    rotation = table["rotation"]
    offsets = table["slot_offsets"]
    nv = len(rotation)
    if len(expr.slots) != nv:
        raise DiagramError(f"{expr.name} needs {nv} slots, got {len(expr.slots)}")
    tok = {}
    for v in range(nv):
        for j in range(4):
            tok[(v, j)] = asm.new_token()
    for v in range(nv):
        for j, u in enumerate(rotation[v]):
            k = rotation[u - 1].index(v + 1)
            a, b = tok[(v, j)], tok[(u - 1, k)]
            if a < b:
                asm.join(a, b)
    for v, slot in enumerate(expr.slots):
        frag = asm.fragment(slot)
        off = offsets[v]
        for j in range(4):
            asm.join(tok[(v, j)], frag["legs"][LEG_ORDER[(j + off) % 4]])
    ov, oj = table["outer"]
    probe = tok[(ov, oj)]
    # walk toward the tangle substituted at that vertex (slot joins are second)
    return probe, asm.links[probe][1]
