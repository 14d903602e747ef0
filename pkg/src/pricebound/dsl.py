"""Tiny expression language for describing valuation distributions.

Grammar (whitespace-insensitive)::

    expr   := family | mix
    family := NAME "(" args? ")"
    mix    := "mix" "(" NUMBER "*" expr ("," NUMBER "*" expr)* ")"
    args   := arg ("," arg)*
    arg    := NAME "=" value | value          (positional before keyword)
    value  := NUMBER | STRING

Numbers are decimal literals with optional sign and exponent; strings are
double-quoted with no escape sequences.  ``parse_spec`` validates family
names, arities, and parameter domains up front, so ``build`` can only fail
on file I/O (the ``empirical`` family reads its samples from disk).

Round-trip guarantee: ``parse_spec(spec.pretty()).ast == spec.ast``.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .distributions import (
    Distribution,
    Empirical,
    EqualRevenue,
    Exponential,
    LogNormal,
    Mixture,
    Pareto,
    PointMass,
    Uniform,
)
from .errors import SpecSyntaxError, SpecValueError

__all__ = ["DistributionSpec", "FamilyNode", "MixNode", "parse_spec", "build"]


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class FamilyNode:
    name: str
    args: tuple  # of (param_name, value), in the family's declared order


@dataclass(frozen=True)
class MixNode:
    terms: tuple  # of (weight, child node), in source order


def _fmt(v) -> str:
    return f'"{v}"' if isinstance(v, str) else repr(v)


def _pretty(node) -> str:
    if isinstance(node, MixNode):
        return "mix(" + ", ".join(f"{w!r}*{_pretty(t)}" for w, t in node.terms) + ")"
    return node.name + "(" + ", ".join(f"{k}={_fmt(v)}" for k, v in node.args) + ")"


@dataclass(frozen=True)
class DistributionSpec:
    """A validated AST plus conveniences to print and instantiate it."""

    ast: object

    def pretty(self) -> str:
        return _pretty(self.ast)

    def build(self, base_dir: str | None = None) -> Distribution:
        return _build_node(self.ast, base_dir)


# ---------------------------------------------------------------------------
# family registry


class _Family(NamedTuple):
    params: tuple
    string_params: frozenset
    check: Callable  # dict -> error message or None
    make: Callable  # (dict, base_dir) -> Distribution


def _pos(p, k):
    x = p[k]
    if not (math.isfinite(x) and x > 0.0):
        return f"{k} must be positive and finite, got {x!r}"
    return None


def _chk_pointmass(p):
    return _pos(p, "v")


def _chk_uniform(p):
    a, b = p["a"], p["b"]
    if not (math.isfinite(a) and a >= 0.0):
        return f"a must be nonnegative and finite, got {a!r}"
    if not (math.isfinite(b) and b > a):
        return f"b must exceed a, got a={a!r} b={b!r}"
    return None


def _chk_exponential(p):
    return _pos(p, "rate")


def _chk_pareto(p):
    return _pos(p, "alpha") or _pos(p, "scale")


def _chk_lognormal(p):
    if not math.isfinite(p["mu"]):
        return f"mu must be finite, got {p['mu']!r}"
    return _pos(p, "sigma")


def _chk_equalrev(p):
    return _pos(p, "c")


def _chk_empirical(p):
    if not p["path"]:
        return "path must be nonempty"
    return None


def _make_empirical(p, base_dir):
    path = p["path"]
    if base_dir is not None and not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    return Empirical.from_file(path)


_FAMILIES = {
    "pointmass": _Family(("v",), frozenset(), _chk_pointmass, lambda p, _: PointMass(p["v"])),
    "uniform": _Family(("a", "b"), frozenset(), _chk_uniform, lambda p, _: Uniform(p["a"], p["b"])),
    "exponential": _Family(
        ("rate",), frozenset(), _chk_exponential, lambda p, _: Exponential(p["rate"])
    ),
    "pareto": _Family(
        ("alpha", "scale"), frozenset(), _chk_pareto, lambda p, _: Pareto(p["alpha"], p["scale"])
    ),
    "lognormal": _Family(
        ("mu", "sigma"), frozenset(), _chk_lognormal, lambda p, _: LogNormal(p["mu"], p["sigma"])
    ),
    "equalrev": _Family(("c",), frozenset(), _chk_equalrev, lambda p, _: EqualRevenue(p["c"])),
    "empirical": _Family(("path",), frozenset(["path"]), _chk_empirical, _make_empirical),
}


# ---------------------------------------------------------------------------
# scanner


class _Token(NamedTuple):
    kind: str  # NAME NUMBER STRING ( ) , * = EOF
    value: object
    pos: int  # byte offset into the source text


_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _tokenize(text: str) -> list:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("NAME", text[i:j], i))
            i = j
        elif ch.isdigit() or ch == "." or (ch in "+-" and _NUMBER_RE.match(text, i)):
            m = _NUMBER_RE.match(text, i)
            if m is None:
                raise SpecSyntaxError("malformed number", i)
            toks.append(_Token("NUMBER", float(m.group()), i))
            i = m.end()
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise SpecSyntaxError("unterminated string", i)
            toks.append(_Token("STRING", text[i + 1 : j], i))
            i = j + 1
        elif ch in "(),*=":
            toks.append(_Token(ch, ch, i))
            i += 1
        else:
            raise SpecSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(_Token("EOF", None, n))
    return toks


def _describe(t: _Token) -> str:
    return "end of input" if t.kind == "EOF" else repr(t.value)


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, toks):
        self._toks = toks
        self._i = 0

    def _peek(self) -> _Token:
        return self._toks[self._i]

    def _take(self, kind: str | None = None) -> _Token:
        t = self._toks[self._i]
        if kind is not None and t.kind != kind:
            raise SpecSyntaxError(f"expected {kind}, found {_describe(t)}", t.pos)
        self._i += 1
        return t

    def expr(self):
        t = self._take("NAME")
        return self._mix(t) if t.value == "mix" else self._family(t)

    def _mix(self, head: _Token):
        self._take("(")
        terms = []
        while True:
            wtok = self._take("NUMBER")
            if not (math.isfinite(wtok.value) and wtok.value > 0.0):
                raise SpecValueError(
                    f"mixture weight must be positive, got {wtok.value!r}", wtok.pos
                )
            self._take("*")
            terms.append((wtok.value, self.expr()))
            nxt = self._take()
            if nxt.kind == ")":
                return MixNode(tuple(terms))
            if nxt.kind != ",":
                raise SpecSyntaxError(f"expected ',' or ')', found {_describe(nxt)}", nxt.pos)

    def _family(self, head: _Token):
        name = head.value
        fam = _FAMILIES.get(name)
        if fam is None:
            raise SpecValueError(f"unknown family {name!r}", head.pos)
        self._take("(")
        got: dict = {}
        pos_index, kw_seen = 0, False
        if self._peek().kind == ")":
            self._take()
        else:
            while True:
                t0 = self._peek()
                if t0.kind == "NAME":
                    self._take()
                    self._take("=")
                    vt = self._take_value()
                    pname, kw_seen = t0.value, True
                    if pname not in fam.params:
                        raise SpecValueError(f"{name} has no parameter {pname!r}", t0.pos)
                else:
                    if kw_seen:
                        raise SpecSyntaxError("positional argument after keyword argument", t0.pos)
                    vt = self._take_value()
                    if pos_index >= len(fam.params):
                        raise SpecValueError(f"too many arguments for {name}", t0.pos)
                    pname = fam.params[pos_index]
                    pos_index += 1
                if pname in got:
                    raise SpecValueError(f"duplicate parameter {pname!r}", t0.pos)
                want_str = pname in fam.string_params
                if want_str != (vt.kind == "STRING"):
                    need = "a string" if want_str else "a number"
                    raise SpecValueError(f"{name} parameter {pname!r} expects {need}", vt.pos)
                got[pname] = vt.value
                nxt = self._take()
                if nxt.kind == ")":
                    break
                if nxt.kind != ",":
                    raise SpecSyntaxError(f"expected ',' or ')', found {_describe(nxt)}", nxt.pos)
        missing = [p for p in fam.params if p not in got]
        if missing:
            raise SpecValueError(f"{name} missing parameter(s): {', '.join(missing)}", head.pos)
        err = fam.check(got)
        if err:
            raise SpecValueError(f"{name}: {err}", head.pos)
        return FamilyNode(name, tuple((p, got[p]) for p in fam.params))

    def _take_value(self) -> _Token:
        t = self._peek()
        if t.kind not in ("NUMBER", "STRING"):
            raise SpecSyntaxError(f"expected a value, found {_describe(t)}", t.pos)
        return self._take()


def parse_spec(text: str) -> DistributionSpec:
    """Parse and validate a distribution expression.

    Raises :class:`SpecSyntaxError` (with byte offset) on malformed input
    and :class:`SpecValueError` on unknown families, bad arities, or
    out-of-domain parameters.
    """
    if not isinstance(text, str) or not text.strip():
        raise SpecSyntaxError("empty spec", 0)
    parser = _Parser(_tokenize(text))
    root = parser.expr()
    tail = parser._peek()
    if tail.kind != "EOF":
        raise SpecSyntaxError(f"unexpected trailing input: {_describe(tail)}", tail.pos)
    return DistributionSpec(root)


def _build_node(node, base_dir):
    if isinstance(node, MixNode):
        return Mixture([(w, _build_node(t, base_dir)) for w, t in node.terms])
    fam = _FAMILIES[node.name]
    return fam.make(dict(node.args), base_dir)


def build(spec, base_dir: str | None = None) -> Distribution:
    """Instantiate a spec (or spec text) as a Distribution."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    return spec.build(base_dir)
