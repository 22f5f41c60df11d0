"""Flype moves on alternating diagrams.

A flype site is a crossing together with a 4-edge cut separating a tangle
from the rest of the diagram, the crossing touching two of the four cut
strands.  Applying the flype turns the tangle upside down and carries the
crossing to its far side.  The orbit of a reduced alternating diagram under
flypes is the complete set of its minimal diagrams, which is what the
mirror-membership test for amphicheirality walks over.
"""

from dataclasses import dataclass
from itertools import combinations

from .diagram import Diagram, DiagramError
from .maps import face_of_dart


class OrbitOverflowError(RuntimeError):
    """Raised when the flype orbit exceeds the requested bound; the partial
    orbit gathered so far is attached as ``partial``."""

    def __init__(self, max_size, partial):
        super().__init__(f"flype orbit exceeded max_size={max_size}")
        self.max_size = max_size
        self.partial = partial


@dataclass(frozen=True)
class FlypeSite:
    """A flype position: the travelling crossing, the 4-edge cut around the
    tangle, and which side of the cut the tangle occupies.

    ``q`` is the dart at the crossing such that ``q`` and ``sigma[q]`` face
    the tangle; ``u`` and ``v`` are the tangle-side darts of the two cut
    edges not incident to the crossing, ordered so that walking the tangle
    boundary visits its cut darts as (alpha[sigma[q]], alpha[q], v, u).
    """

    crossing: int
    q: int
    u: int
    v: int
    cut: tuple        # four edges, each a sorted dart pair, sorted
    side: frozenset   # all darts of the tangle sub-map

    @property
    def key(self):
        return (self.crossing, self.cut, self.side)


def _crossing_ids(d: Diagram):
    """Map each dart to the id (minimal dart) of its crossing."""
    out = {}
    for cyc in d.crossings():
        c = min(cyc)
        for x in cyc:
            out[x] = c
    return out


def _split(d: Diagram, cross_of, cut_edges, seed):
    """Crossings reachable from ``seed``'s crossing without using any cut
    edge, or None if that fails to separate the map in two."""
    banned = {frozenset(e) for e in cut_edges}
    adj = {}
    for x, y in d.alpha.items():
        if x < y and frozenset((x, y)) not in banned:
            adj.setdefault(cross_of[x], set()).add(cross_of[y])
            adj.setdefault(cross_of[y], set()).add(cross_of[x])
    comp = {cross_of[seed]}
    stack = [cross_of[seed]]
    while stack:
        for w in adj.get(stack.pop(), ()):
            if w not in comp:
                comp.add(w)
                stack.append(w)
    if len(comp) == len(d.crossings()):
        return None
    return comp


def _boundary_order(d: Diagram, cut_darts, start):
    """Cut darts in the cyclic order met while walking the tangle boundary,
    or None if they do not lie on a single boundary cycle."""
    order = [start]
    t = start
    for _ in range(len(d.sigma)):
        s = d.sigma[t]
        while s not in cut_darts:
            s = d.sigma[d.alpha[s]]
        if s == start:
            return order if len(order) == len(cut_darts) else None
        order.append(s)
        t = s
    return None


def find_flypes(d: Diagram, include_trivial=False):
    """All flype sites of ``d``, deduplicated by (crossing, cut, side).

    Candidate cuts are generated from the faces the flype circle's arcs
    travel through: one arc lies in the corner face at the crossing, and the
    two arcs flanking the tangle lie in the far faces of the crossing's two
    tangle-side edges, so each remaining cut edge must border one of those
    far faces and the two must share the face behind the tangle.  Candidates
    are then validated for separation, adjacency, and boundary shape.
    Sites whose application reproduces a sphere-isomorphic diagram are
    dropped unless ``include_trivial`` is set.
    """
    if d.n_crossings < 2:
        return []
    F = face_of_dart(d.sigma, d.alpha)
    cross_of = _crossing_ids(d)
    edges = [(x, y) for x, y in d.alpha.items() if x < y]
    sites = {}
    base_code = d.canonical_code() if not include_trivial else None
    for cyc in d.crossings():
        c = min(cyc)
        for q in cyc:
            p = d.sigma[q]
            a, b = d.alpha[p], d.alpha[q]
            if cross_of[a] == c or cross_of[b] == c:
                continue
            e_pa, e_qb = frozenset((p, a)), frozenset((q, b))
            fa, fq = F[a], F[q]   # arc faces flanking the two crossing legs
            pool = [e for e in edges if frozenset(e) not in (e_pa, e_qb)]
            cand_u = [e for e in pool if fa in (F[e[0]], F[e[1]])]
            cand_v = [e for e in pool if fq in (F[e[0]], F[e[1]])]
            for e1 in cand_u:
                s1 = {F[e1[0]], F[e1[1]]}
                for e2 in cand_v:
                    if e1 == e2 or not s1 & {F[e2[0]], F[e2[1]]}:
                        continue
                    site = _validate_site(d, cross_of, c, q, p, a, b, e1, e2)
                    if site is None or site.key in sites:
                        continue
                    if base_code is not None:
                        if apply_flype(d, site).canonical_code() == base_code:
                            continue
                    sites[site.key] = site
    return sorted(sites.values(), key=lambda s: (s.crossing, s.q, s.u, s.v))


def _validate_site(d, cross_of, c, q, p, a, b, e1, e2):
    cut_edges = [(min(p, a), max(p, a)), (min(q, b), max(q, b)),
                 tuple(sorted(e1)), tuple(sorted(e2))]
    comp = _split(d, cross_of, cut_edges, a)
    if comp is None or c in comp or cross_of[b] not in comp:
        return None
    # the two extra cut edges must each join the tangle to the rest
    extra = []
    for x, y in (e1, e2):
        inside = (cross_of[x] in comp, cross_of[y] in comp)
        if inside == (True, False):
            extra.append(x)
        elif inside == (False, True):
            extra.append(y)
        else:
            return None
    cut_darts = {a, b, extra[0], extra[1]}
    if len(cut_darts) != 4:
        return None
    order = _boundary_order(d, cut_darts, a)
    if order is None:
        return None
    if order[1] == b:
        v, u = order[2], order[3]
    else:
        return None
    side = frozenset(x for x in d.sigma if cross_of[x] in comp)
    return FlypeSite(crossing=c, q=q, u=u, v=v,
                     cut=tuple(sorted(cut_edges)), side=side)


def apply_flype(d: Diagram, site: FlypeSite) -> Diagram:
    """Perform the flype: rotate the tangle 180 degrees (reversing its
    rotations and toggling its over labels) and reattach the crossing on
    the opposite side, rewiring the four cut strands crosswise."""
    q = site.q
    p = d.sigma[q]
    m = d.sigma[p]
    n = d.sigma[m]
    a, b = d.alpha[p], d.alpha[q]
    u, v = site.u, site.v
    subst = {m: b, n: a, u: p, v: q}
    dropped = {frozenset((p, a)), frozenset((q, b))}
    new_pairs = [{m, v}, {n, u}]
    for x, y in d.alpha.items():
        if x < y and frozenset((x, y)) not in dropped:
            new_pairs.append({subst.get(x, x), subst.get(y, y)})
    alpha = {}
    for pair in new_pairs:
        x, y = tuple(pair)
        if x in alpha or y in alpha:
            raise DiagramError("flype rewiring produced a conflicting edge")
        alpha[x], alpha[y] = y, x
    sigma, over = {}, {}
    inside = site.side
    for cyc in d.crossings():
        run = tuple(reversed(cyc)) if cyc[0] in inside else cyc
        for i, x in enumerate(run):
            sigma[x] = run[(i + 1) % 4]
            over[x] = (not d.over[x]) if x in inside else d.over[x]
    out = Diagram(sigma, alpha, over, d.outer_dart, circles=d.circles)
    out.validate()
    if not out.is_alternating():
        raise DiagramError("flype broke the alternating structure")
    return out


@dataclass(frozen=True)
class OrbitMember:
    """One minimal diagram in a flype orbit, with the flype path (list of
    site keys) that reached it from the starting diagram."""

    diagram: Diagram
    path: tuple


def orbit(d: Diagram, max_size: int = 4096) -> dict:
    """Breadth-first closure of ``d`` under flypes, keyed by canonical code
    (orientation-preserving).  Raises OrbitOverflowError past ``max_size``."""
    d.validate()
    root = d.canonical_code()
    members = {root: OrbitMember(d, ())}
    queue = [root]
    while queue:
        code = queue.pop(0)
        cur = members[code]
        for site in find_flypes(cur.diagram):
            nxt = apply_flype(cur.diagram, site)
            ncode = nxt.canonical_code()
            if ncode in members:
                continue
            if len(members) >= max_size:
                raise OrbitOverflowError(max_size, members)
            members[ncode] = OrbitMember(nxt, cur.path + (site.key,))
            queue.append(ncode)
    return members


def orbit_dump(members: dict) -> list:
    """JSON-ready description of an orbit: canonical code, PD code and
    flype path per member, sorted by code for deterministic output."""
    out = []
    for code in sorted(members):
        mem = members[code]
        out.append({
            "code": repr(code),
            "pd": mem.diagram.to_pd(),
            "path": [
                {"crossing": c, "cut": [list(e) for e in cut],
                 "side": sorted(side)}
                for c, cut, side in mem.path
            ],
        })
    return out
