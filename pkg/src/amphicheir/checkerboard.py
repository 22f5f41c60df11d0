"""Checkerboard graphs of link diagrams, planar duals, and isomorphism tests.

The checkerboard graph has one vertex per shaded region and one edge per
crossing.  It is represented as an embedded multigraph (combinatorial map):
the graph darts are the diagram darts that open counterclockwise into a
shaded corner, ``alpha`` pairs the two shaded corners of a crossing, and the
rotation at a region follows its face trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import networkx as nx

from . import maps
from .diagram import Diagram, DiagramError, sphere_iso


class GraphIsoMode(Enum):
    ABSTRACT = "abstract-multigraph"
    EMBEDDED = "embedded-sphere"
    EMBEDDED_REFLECT = "embedded-sphere-with-reflection"


@dataclass(frozen=True)
class PlaneGraph:
    sigma: dict
    alpha: dict
    signs: dict | None = None      # edge sign per dart, equal on both darts
    outer_dart: int | None = None  # a dart on the marked outer face

    @property
    def n_vertices(self):
        if not self.sigma:
            return 1  # the one-vertex, zero-edge graph (unknot checkerboard)
        return len(maps.vertices(self.sigma))

    @property
    def n_edges(self):
        return len(self.sigma) // 2

    def vertices(self):
        return maps.vertices(self.sigma)

    def edges(self):
        """Distinct edges as frozensets of their two darts."""
        return sorted({frozenset((d, self.alpha[d])) for d in self.sigma},
                      key=lambda e: min(e))

    def validate(self):
        if self.sigma:
            maps.check_map(self.sigma, self.alpha)
        if self.signs is not None:
            for d in self.sigma:
                if self.signs[d] != self.signs[self.alpha[d]]:
                    raise ValueError("edge sign differs between dart ends")

    def canonical_code(self, reflect=False):
        if not self.sigma:
            return ("trivial-graph",)
        return maps.canonical_code(self.sigma, self.alpha, reflect=reflect)

    def multigraph(self):
        """Abstract view as a networkx MultiGraph (vertices = rotation cycles)."""
        g = nx.MultiGraph()
        vid = {}
        for i, cyc in enumerate(self.vertices()):
            g.add_node(i)
            for d in cyc:
                vid[d] = i
        if not self.sigma:
            g.add_node(0)
        for e in self.edges():
            d = min(e)
            g.add_edge(vid[d], vid[self.alpha[d]])
        return g

    # -- export -------------------------------------------------------------

    def to_dot(self, name="G"):
        lines = [f"graph {name} {{"]
        vid = {}
        for i, cyc in enumerate(self.vertices()):
            lines.append(f"  v{i};")
            for d in cyc:
                vid[d] = i
        if not self.sigma:
            lines.append("  v0;")
        for e in self.edges():
            d = min(e)
            attr = ""
            if self.signs is not None:
                attr = f' [label="{"+" if self.signs[d] > 0 else "-"}"]'
            lines.append(f"  v{vid[d]} -- v{vid[self.alpha[d]]}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        """Adjacency-with-rotation export."""
        vid = {}
        rot = []
        for i, cyc in enumerate(self.vertices()):
            for d in cyc:
                vid[d] = i
            rot.append(list(cyc))
        edge_ids = {e: i for i, e in enumerate(self.edges())}
        data = {
            "vertices": len(rot) if self.sigma else 1,
            "edges": [sorted((vid[min(e)], vid[self.alpha[min(e)]]))
                      for e in self.edges()],
            "rotation": [[edge_ids[frozenset((d, self.alpha[d]))] for d in cyc]
                         for cyc in rot],
        }
        if self.signs is not None:
            data["signs"] = [self.signs[min(e)] for e in self.edges()]
        return json.dumps(data, sort_keys=True)


TRIVIAL_GRAPH = PlaneGraph({}, {}, None, None)


# ---------------------------------------------------------------------------
# Construction from diagrams


def shade(d: Diagram):
    """Checkerboard coloring: list of faces plus a shaded flag per face,
    outer face unshaded."""
    if not d.sigma:
        return [(), ()], [False, True]
    fidx, color = d.shading()
    return d.faces(), color


def graph_of(d: Diagram, signed=False, shaded=True,
             convention="type-positive") -> PlaneGraph:
    """Checkerboard graph with one vertex per shaded region.

    With the default "type-positive" convention the shading is the one that
    makes every crossing sign positive, which is canonical for alternating
    diagrams and does not depend on an outer-face choice; switching all
    crossings then dualizes the graph, the identity behind the mirror test.
    With "outer-unshaded" the outer face fixes the shading instead.  Passing
    ``shaded=False`` swaps to the complementary regions (the dual
    prescription) under either convention.
    """
    if not d.sigma:
        return TRIVIAL_GRAPH
    fidx, color = d.shading()
    if convention == "type-positive":
        x = min(d.sigma)
        corner_color = color[fidx[d.sigma[x]]]
        want = corner_color if d.over[d.sigma[x]] else (not corner_color)
    elif convention == "outer-unshaded":
        want = True
    else:
        raise ValueError(f"unknown shading convention {convention!r}")
    if not shaded:
        want = not want
    inv_sigma = {v: k for k, v in d.sigma.items()}
    # graph darts: diagram darts d whose corner (d, sigma(d)) has the wanted color
    gdarts = [x for x in d.sigma if color[fidx[d.sigma[x]]] == want]
    sigma_g, alpha_g, signs = {}, {}, {}
    for x in gdarts:
        alpha_g[x] = d.opposite(x)
    for face, col in zip(d.faces(), (color[fidx[f[0]]] for f in d.faces())):
        if col != want:
            continue
        corners = [inv_sigma[x] for x in face]
        for i, c in enumerate(corners):
            sigma_g[c] = corners[(i + 1) % len(corners)]
    if signed:
        for x in gdarts:
            signs[x] = 1 if d.over[d.sigma[x]] else -1
    outer = None
    outer_face = fidx[d.outer_dart if d.outer_dart is not None else min(d.sigma)]
    if color[outer_face] == want:
        # the outer region becomes a graph vertex; mark one of its darts
        for x in gdarts:
            if fidx[d.sigma[x]] == outer_face:
                outer = x
                break
    g = PlaneGraph(sigma_g, alpha_g, signs if signed else None, outer)
    g.validate()
    return g


def dual(g: PlaneGraph) -> PlaneGraph:
    """Planar dual as a combinatorial map: vertices become face traces."""
    if not g.sigma:
        return TRIVIAL_GRAPH
    sigma_star = {d: g.sigma[g.alpha[d]] for d in g.sigma}
    return PlaneGraph(sigma_star, dict(g.alpha), g.signs, g.outer_dart)


# ---------------------------------------------------------------------------
# Isomorphism engines


def _abstract_iso(g: PlaneGraph, h: PlaneGraph):
    """Multigraph isomorphism via collapsed simple graphs with loop and
    multiplicity labels (exact for multigraphs with loops)."""
    def collapse(pg):
        mg = pg.multigraph()
        s = nx.Graph()
        for v in mg.nodes:
            s.add_node(v, loops=0)
        for u, v in mg.edges():
            if u == v:
                s.nodes[u]["loops"] += 1
            elif s.has_edge(u, v):
                s[u][v]["mult"] += 1
            else:
                s.add_edge(u, v, mult=1)
        return s

    s1, s2 = collapse(g), collapse(h)
    gm = nx.algorithms.isomorphism.GraphMatcher(
        s1, s2,
        node_match=lambda a, b: a["loops"] == b["loops"],
        edge_match=lambda a, b: a["mult"] == b["mult"])
    if gm.is_isomorphic():
        return dict(gm.mapping)
    return None


def _embedded_iso(g: PlaneGraph, h: PlaneGraph, reflect):
    if not g.sigma and not h.sigma:
        return {}
    m = maps.map_isomorphism(g.sigma, g.alpha, h.sigma, h.alpha, reflect=reflect)
    if m is None:
        return None
    # translate the dart bijection into a vertex mapping
    vid_g, vid_h = {}, {}
    for i, cyc in enumerate(g.vertices()):
        for d in cyc:
            vid_g[d] = i
    for i, cyc in enumerate(h.vertices()):
        for d in cyc:
            vid_h[d] = i
    return {vid_g[d]: vid_h[e] for d, e in m.items()}


def iso(g: PlaneGraph, h: PlaneGraph, mode=GraphIsoMode.ABSTRACT):
    """Vertex mapping under the requested isomorphism notion, or None."""
    if g.n_edges != h.n_edges or g.n_vertices != h.n_vertices:
        return None
    if not g.sigma and not h.sigma:
        return {0: 0}
    if mode == GraphIsoMode.ABSTRACT:
        return _abstract_iso(g, h)
    if mode == GraphIsoMode.EMBEDDED:
        return _embedded_iso(g, h, reflect=False)
    if mode == GraphIsoMode.EMBEDDED_REFLECT:
        return _embedded_iso(g, h, reflect=True)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Reconstruction (medial construction on a signed graph)


def reconstruct(g: PlaneGraph) -> Diagram:
    """Rebuild a diagram from a signed checkerboard graph: one crossing per
    edge, over/under chosen by the edge sign."""
    if g.signs is None:
        raise ValueError("reconstruct needs edge signs")
    if not g.sigma:
        from .diagram import UNKNOT
        return UNKNOT
    for d in g.sigma:
        if d not in g.signs:
            raise ValueError(f"missing sign on edge dart {d}")
    inv_sigma = {v: k for k, v in g.sigma.items()}
    # two medial darts per graph dart: P[h] opens into corner (h, sigma h),
    # Q[h] into corner (inv_sigma h, h)
    P = {h: 2 * i for i, h in enumerate(sorted(g.sigma))}
    Q = {h: 2 * i + 1 for i, h in enumerate(sorted(g.sigma))}
    sigma_m, alpha_m, over = {}, {}, {}
    for h in g.sigma:
        hbar = g.alpha[h]
        sigma_m[Q[h]] = P[h]
        sigma_m[P[h]] = Q[hbar]
        alpha_m[P[h]] = Q[g.sigma[h]]
        alpha_m[Q[g.sigma[h]]] = P[h]
        positive = g.signs[h] > 0
        over[P[h]] = positive
        over[Q[h]] = not positive
    outer = None
    if g.outer_dart is not None:
        outer = Q[g.outer_dart]
    d = Diagram(sigma_m, alpha_m, over, outer)
    d.validate()
    return d
