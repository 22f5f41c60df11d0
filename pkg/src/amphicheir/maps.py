"""Combinatorial map primitives shared by diagrams and checkerboard graphs.

A map is a pair of dart permutations: ``sigma`` (next dart counterclockwise
around the same vertex) and ``alpha`` (the fixed-point-free involution pairing
the two darts of each edge).  Faces are the orbits of ``sigma . alpha``; the
corner between darts d and sigma(d) lies on the face of sigma(d).
"""

from __future__ import annotations


def vertices(sigma):
    """Orbits of sigma, each as a tuple starting at its smallest dart."""
    seen = set()
    out = []
    for d in sorted(sigma):
        if d in seen:
            continue
        cyc = [d]
        x = sigma[d]
        while x != d:
            cyc.append(x)
            x = sigma[x]
        seen.update(cyc)
        out.append(tuple(cyc))
    return out


def faces(sigma, alpha):
    """Orbits of sigma(alpha(.)), each as a tuple starting at its smallest dart."""
    seen = set()
    out = []
    for d in sorted(sigma):
        if d in seen:
            continue
        cyc = [d]
        x = sigma[alpha[d]]
        while x != d:
            cyc.append(x)
            x = sigma[alpha[x]]
        seen.update(cyc)
        out.append(tuple(cyc))
    return out


def face_of_dart(sigma, alpha):
    """Map dart -> index into faces(sigma, alpha)."""
    idx = {}
    for i, f in enumerate(faces(sigma, alpha)):
        for d in f:
            idx[d] = i
    return idx


def euler_characteristic(sigma, alpha):
    v = len(vertices(sigma))
    e = len(sigma) // 2
    f = len(faces(sigma, alpha))
    return v - e + f


def is_connected(sigma, alpha):
    if not sigma:
        return True
    darts = set(sigma)
    start = next(iter(darts))
    seen = {start}
    stack = [start]
    while stack:
        d = stack.pop()
        for nxt in (sigma[d], alpha[d]):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen == darts


def check_map(sigma, alpha):
    """Sanity: permutation structure, involution, connectivity, sphere."""
    assert set(sigma) == set(alpha), "sigma and alpha domains differ"
    assert sorted(sigma.values()) == sorted(sigma), "sigma is not a permutation"
    for d, e in alpha.items():
        assert e != d and alpha[e] == d, f"alpha not a fixed-point-free involution at {d}"
    assert is_connected(sigma, alpha), "map is not connected"
    assert euler_characteristic(sigma, alpha) == 2, "map is not a sphere map"


def _invert(perm):
    return {v: k for k, v in perm.items()}


def _encode(start, sig, alpha, labels):
    """Deterministic relabeling code from one starting dart.

    Vertices are numbered in breadth-first discovery order; the darts of a
    vertex are numbered from its entry dart following ``sig``.  The code is
    the alpha table in the new numbering plus one label per vertex (taken at
    the entry dart), which is a complete map-isomorphism invariant.
    """
    index = {}
    entry_labels = []
    degrees = []
    queue = [start]
    qi = 0
    while qi < len(queue):
        e = queue[qi]
        qi += 1
        if e in index:
            continue
        deg = 0
        x = e
        while True:
            index[x] = len(index)
            deg += 1
            x = sig[x]
            if x == e:
                break
        degrees.append(deg)
        if labels is not None:
            entry_labels.append(labels[e])
        x = e
        while True:
            queue.append(alpha[x])
            x = sig[x]
            if x == e:
                break
    code = (tuple(degrees), tuple(index[alpha[d]] for d in sorted(index, key=index.get)))
    if labels is not None:
        return code + (tuple(entry_labels),)
    return code


def canonical_code(sigma, alpha, labels=None, reflect=False):
    """Minimal relabeling code over all start darts (and both orientations
    when ``reflect`` is set).  Equal codes <=> isomorphic labeled maps."""
    if not sigma:
        return ("empty",)
    sigmas = [sigma]
    if reflect:
        sigmas.append(_invert(sigma))
    best = None
    for sig in sigmas:
        for start in sigma:
            code = _encode(start, sig, alpha, labels)
            if best is None or code < best:
                best = code
    return best


def map_isomorphism(sigma1, alpha1, sigma2, alpha2, labels1=None, labels2=None,
                    reflect=False):
    """A dart bijection carrying (sigma1, alpha1, labels1) onto map 2, or None.

    With ``reflect`` the bijection may reverse rotation order globally.
    """
    if len(sigma1) != len(sigma2):
        return None
    if not sigma1:
        return {}
    start1 = min(sigma1)
    code1 = _encode(start1, sigma1, alpha1, labels1)
    order1 = _visit_order(start1, sigma1, alpha1)
    sigmas2 = [sigma2]
    if reflect:
        sigmas2.append(_invert(sigma2))
    for sig2 in sigmas2:
        for start2 in sigma2:
            if _encode(start2, sig2, alpha2, labels2) == code1:
                order2 = _visit_order(start2, sig2, alpha2)
                return dict(zip(order1, order2))
    return None


def _visit_order(start, sig, alpha):
    """Darts in the discovery order used by _encode."""
    index = {}
    queue = [start]
    qi = 0
    order = []
    while qi < len(queue):
        e = queue[qi]
        qi += 1
        if e in index:
            continue
        x = e
        while True:
            index[x] = len(index)
            order.append(x)
            x = sig[x]
            if x == e:
                break
        x = e
        while True:
            queue.append(alpha[x])
            x = sig[x]
            if x == e:
                break
    return order
