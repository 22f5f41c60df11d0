"""Conway notation: tangle ASTs, parser, renderer, and pretzel predicates.

Grammar (whitespace-sensitive):
    link      := polyhedral | tangle
    polyhedral:= NAME '*' slots | '.' slots     (leading '.' implies "6*")
    slots     := slot ('.' slot)*               (empty slot -> 1)
    tangle    := product ('+' product)*
    product   := factor (factor)*               (left associative)
    factor    := INT | '(' tangle (',' tangle)* ')'

A parenthesized list with at least one comma is a ramification; plain
parentheses only group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class ConwaySyntaxError(ValueError):
    """Raised on malformed Conway notation; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Integer:
    n: int


@dataclass(frozen=True)
class Sum:
    left: "TangleExpr"
    right: "TangleExpr"


@dataclass(frozen=True)
class Product:
    left: "TangleExpr"
    right: "TangleExpr"


@dataclass(frozen=True)
class Ramification:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("ramification needs at least 2 parts")


@dataclass(frozen=True)
class Polyhedron:
    name: str
    slots: tuple


TangleExpr = Integer | Sum | Product | Ramification | Polyhedron


def leaf_sum(expr) -> int:
    """Total number of crossings the expression contributes (sum of |leaf|)."""
    if isinstance(expr, Integer):
        return abs(expr.n)
    if isinstance(expr, (Sum, Product)):
        return leaf_sum(expr.left) + leaf_sum(expr.right)
    if isinstance(expr, Ramification):
        return sum(leaf_sum(p) for p in expr.parts)
    if isinstance(expr, Polyhedron):
        return sum(leaf_sum(s) for s in expr.slots)
    raise TypeError(f"not a TangleExpr: {expr!r}")


def to_dict(expr) -> dict:
    """Variant-tagged JSON tree."""
    if isinstance(expr, Integer):
        return {"kind": "integer", "n": expr.n}
    if isinstance(expr, Sum):
        return {"kind": "sum", "left": to_dict(expr.left), "right": to_dict(expr.right)}
    if isinstance(expr, Product):
        return {"kind": "product", "left": to_dict(expr.left), "right": to_dict(expr.right)}
    if isinstance(expr, Ramification):
        return {"kind": "ramification", "parts": [to_dict(p) for p in expr.parts]}
    if isinstance(expr, Polyhedron):
        return {"kind": "polyhedron", "name": expr.name, "slots": [to_dict(s) for s in expr.slots]}
    raise TypeError(f"not a TangleExpr: {expr!r}")


def from_dict(d) -> TangleExpr:
    kind = d["kind"]
    if kind == "integer":
        return Integer(d["n"])
    if kind == "sum":
        return Sum(from_dict(d["left"]), from_dict(d["right"]))
    if kind == "product":
        return Product(from_dict(d["left"]), from_dict(d["right"]))
    if kind == "ramification":
        return Ramification(tuple(from_dict(p) for p in d["parts"]))
    if kind == "polyhedron":
        return Polyhedron(d["name"], tuple(from_dict(s) for s in d["slots"]))
    raise ValueError(f"unknown node kind {kind!r}")


# ---------------------------------------------------------------------------
# Parsing

_POLY_SLOT_COUNT = {"6*": 6}

_NAME_RE = re.compile(r"^(\d+\*+)")
_INT_RE = re.compile(r"-?\d+")


def parse(text: str) -> TangleExpr:
    """Parse a Conway-notation string into a TangleExpr."""
    s = text.strip()
    if not s:
        raise ConwaySyntaxError("empty input", 0)
    m = _NAME_RE.match(s)
    if m:
        return _parse_polyhedral(m.group(1), s[m.end():], m.end())
    if s.startswith("."):
        return _parse_polyhedral("6*", s, 0)
    expr, pos = _parse_tangle(s, 0)
    pos = _skip_ws(s, pos)
    if pos != len(s):
        raise ConwaySyntaxError(f"unexpected {s[pos]!r}", pos)
    return expr


def _parse_polyhedral(name, rest, offset):
    if name not in _POLY_SLOT_COUNT:
        raise ConwaySyntaxError(f"unknown basic polyhedron {name!r}", 0)
    nslots = _POLY_SLOT_COUNT[name]
    texts = _split_slots(rest, offset)
    if len(texts) > nslots:
        raise ConwaySyntaxError(
            f"{name} takes at most {nslots} slots, got {len(texts)}", offset)
    slots = []
    for chunk, pos in texts:
        if chunk.strip() == "":
            slots.append(Integer(1))
        else:
            expr, end = _parse_tangle(chunk, 0)
            end = _skip_ws(chunk, end)
            if end != len(chunk):
                raise ConwaySyntaxError(f"unexpected {chunk[end]!r}", pos + end)
            slots.append(expr)
    while len(slots) < nslots:
        slots.append(Integer(1))
    return Polyhedron(name, tuple(slots))


def _split_slots(rest, offset):
    """Split slot text on top-level dots, tracking positions."""
    chunks, depth, cur, start = [], 0, [], 0
    for i, ch in enumerate(rest):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ConwaySyntaxError("unbalanced ')'", offset + i)
        if ch == "." and depth == 0:
            chunks.append(("".join(cur), offset + start))
            cur, start = [], i + 1
        else:
            cur.append(ch)
    if depth != 0:
        raise ConwaySyntaxError("unbalanced '('", offset + len(rest))
    chunks.append(("".join(cur), offset + start))
    return chunks


def _skip_ws(s, pos):
    while pos < len(s) and s[pos] == " ":
        pos += 1
    return pos


def _parse_tangle(s, pos):
    left, pos = _parse_product(s, pos)
    while True:
        p = _skip_ws(s, pos)
        if p < len(s) and s[p] == "+":
            right, pos = _parse_product(s, p + 1)
            left = Sum(left, right)
        else:
            return left, pos


def _parse_product(s, pos):
    left, pos = _parse_factor(s, pos)
    while True:
        p = _skip_ws(s, pos)
        if p < len(s) and (s[p] == "(" or s[p].isdigit() or
                           (s[p] == "-" and p + 1 < len(s) and s[p + 1].isdigit())):
            right, pos = _parse_factor(s, p)
            left = Product(left, right)
        else:
            return left, pos


def _parse_factor(s, pos):
    pos = _skip_ws(s, pos)
    if pos >= len(s):
        raise ConwaySyntaxError("expected a tangle", pos)
    if s[pos] == "(":
        parts = []
        p = pos + 1
        while True:
            expr, p = _parse_tangle(s, p)
            parts.append(expr)
            p = _skip_ws(s, p)
            if p >= len(s):
                raise ConwaySyntaxError("unbalanced '('", pos)
            if s[p] == ",":
                p += 1
                continue
            if s[p] == ")":
                p += 1
                break
            raise ConwaySyntaxError(f"unexpected {s[p]!r}", p)
        if len(parts) == 1:
            return parts[0], p  # plain grouping
        return Ramification(tuple(parts)), p
    m = _INT_RE.match(s, pos)
    if not m:
        raise ConwaySyntaxError(f"unexpected {s[pos]!r}", pos)
    return Integer(int(m.group())), m.end()


# ---------------------------------------------------------------------------
# Rendering


def render(expr) -> str:
    """Canonical Conway string; parse(render(e)) is structurally equal to e."""
    if isinstance(expr, Polyhedron):
        return expr.name + ".".join(_render(s, "top") for s in expr.slots)
    return _render(expr, "top")


def _render(expr, ctx):
    if isinstance(expr, Integer):
        return str(expr.n)
    if isinstance(expr, Ramification):
        return "(" + ",".join(_render(p, "top") for p in expr.parts) + ")"
    if isinstance(expr, Sum):
        body = _render(expr.left, "sum-left") + "+" + _render(expr.right, "sum-right")
        # inside a product, or as the right arm of a sum, grouping is required
        if ctx in ("factor", "sum-right"):
            return "(" + body + ")"
        return body
    if isinstance(expr, Product):
        body = _render(expr.left, "prod-left") + " " + _render(expr.right, "factor")
        if ctx in ("factor",):
            return "(" + body + ")"
        return body
    if isinstance(expr, Polyhedron):
        raise ValueError("polyhedron node only allowed at top level")
    raise TypeError(f"not a TangleExpr: {expr!r}")


# ---------------------------------------------------------------------------
# Rational and pretzel tangles


@dataclass(frozen=True)
class RationalTangle:
    sequence: tuple

    def __post_init__(self):
        if not self.sequence:
            raise ValueError("rational tangle sequence must be nonempty")
        if any(not isinstance(x, int) or x < 1 for x in self.sequence):
            raise ValueError("rational tangle entries must be integers >= 1")

    @classmethod
    def from_text(cls, text):
        return cls(tuple(int(t) for t in text.split()))

    def to_expr(self):
        expr = Integer(self.sequence[0])
        for n in self.sequence[1:]:
            expr = Product(expr, Integer(n))
        return expr

    def render(self):
        return " ".join(str(n) for n in self.sequence)


@dataclass(frozen=True)
class PretzelTangle:
    components: tuple

    def __post_init__(self):
        if len(self.components) < 2:
            raise ValueError("pretzel tangle needs at least 2 components")
        if any(not isinstance(c, RationalTangle) for c in self.components):
            raise ValueError("pretzel components must be RationalTangle")

    @classmethod
    def from_text(cls, text):
        """Parse e.g. "2 1, 3" into a PretzelTangle."""
        return cls(tuple(RationalTangle.from_text(p) for p in text.split(",")))

    def to_expr(self):
        return Ramification(tuple(c.to_expr() for c in self.components))

    def render(self):
        return "(" + ",".join(c.render() for c in self.components) + ")"


@dataclass(frozen=True)
class FamilyParams:
    pretzel: PretzelTangle
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")


def reverse(t: RationalTangle) -> RationalTangle:
    return RationalTangle(tuple(reversed(t.sequence)))


def is_palindromic(t: RationalTangle) -> bool:
    return reverse(t) == t


def classify_pretzel(p: PretzelTangle) -> dict:
    """Symbol-level predicates: oriented (list != reversed list) and integer."""
    comps = [c.sequence for c in p.components]
    return {
        "oriented": comps != list(reversed(comps)),
        "integer": all(len(c) == 1 for c in comps),
    }


def generate_family(params: FamilyParams) -> TangleExpr:
    """Pretzel, 4k-2 single twists, same pretzel again, as one product chain."""
    for c in params.pretzel.components:
        if c.sequence[0] == 1:
            raise ValueError(
                f"pretzel component '{c.render()}' begins with 1")
    expr = params.pretzel.to_expr()
    for _ in range(4 * params.k - 2):
        expr = Product(expr, Integer(1))
    return Product(expr, params.pretzel.to_expr())


def generate_twist_form(pretzel: PretzelTangle, t: RationalTangle,
                        reverse_second=False) -> TangleExpr:
    """Pretzel, rational twist region t, pretzel (optionally reversed)."""
    expr = pretzel.to_expr()
    for n in t.sequence:
        expr = Product(expr, Integer(n))
    second = pretzel
    if reverse_second:
        second = PretzelTangle(tuple(reversed(pretzel.components)))
    return Product(expr, second.to_expr())
