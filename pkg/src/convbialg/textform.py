"""Text forms for the printable objects, inverse to their .text() methods.

Grammar (all sums joined by " + "):

    coefficient   poly | poly + phi[c,c] | poly + flat[neg={..}, pos={..}]
    uea element   coeff | coeff * X1^a X2 ... | (coeff) * X1 ...
    conv element  <uea | E> + ...
    distribution  [[E, uea]] + ...

Bisections are resolved through the model registry (aliases or content ids).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .coeffs import Chart, CoeffFn, Polynomial, Q
from .errors import ParseError
from .uea import UEAElement

_OPEN = {"(": ")", "[": "]", "<": ">", "{": "}"}
_CLOSE = {v: k for k, v in _OPEN.items()}


def split_top(text: str, sep: str):
    """Split at every occurrence of `sep` outside brackets of any kind."""
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced {ch!r}", i)
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            i += len(sep)
            start = i
            continue
        i += 1
    if depth != 0:
        raise ParseError("unbalanced brackets", len(text))
    parts.append(text[start:])
    return parts


_FLAT_ENTRY = re.compile(
    r"(-?\d+)\s*:\s*(?:Fraction\((-?\d+),\s*(-?\d+)\)|(-?\d+(?:/\d+)?))"
)


def _parse_flat_dict(text: str) -> dict:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError(f"bad flat dict {text!r}")
    out = {}
    for m in _FLAT_ENTRY.finditer(text):
        k = int(m.group(1))
        if m.group(2) is not None:
            out[k] = Fraction(int(m.group(2)), int(m.group(3)))
        else:
            out[k] = Q(m.group(4))
    return out


def parse_coeff(chart: Chart, text: str) -> CoeffFn:
    """Inverse of CoeffFn.text()."""
    text = text.strip()
    k = text.rfind(" + phi[")
    if k >= 0 and text.endswith("]"):
        body = text[k + len(" + phi[") : -1]
        cs = body.split(",")
        if len(cs) != 2:
            raise ParseError(f"bad phi part in {text!r}")
        p = Polynomial.parse(text[:k], chart.dim)
        return CoeffFn.flat_piece(chart, p, Q(cs[0]), Q(cs[1]))
    k = text.rfind(" + flat[")
    if k >= 0 and text.endswith("]"):
        body = text[k + len(" + flat[") : -1]
        m = re.fullmatch(r"neg=(\{.*?\}),\s*pos=(\{.*\})", body)
        if not m:
            raise ParseError(f"bad flat part in {text!r}")
        p = Polynomial.parse(text[:k], chart.dim)
        return CoeffFn(chart, p, _parse_flat_dict(m.group(1)), _parse_flat_dict(m.group(2)))
    return CoeffFn(chart, Polynomial.parse(text, chart.dim))


_MONO_TOKEN = re.compile(r"(\S+?)(?:\^(\d+))?$")


def parse_uea(A, text: str) -> UEAElement:
    """Inverse of UEAElement.text() for the enveloping algebra of A."""
    text = text.strip()
    if not text:
        raise ParseError("empty element", 0)
    if text == "0":
        return UEAElement.zero(A)
    name_index = {n: i for i, n in enumerate(A.basis_names)}
    out = UEAElement.zero(A)
    for term in split_top(text, " + "):
        term = term.strip()
        if not term:
            raise ParseError(f"empty term in {text!r}")
        pieces = split_top(term, " * ")
        ctext = pieces[0].strip()
        if ctext.startswith("(") and ctext.endswith(")"):
            ctext = ctext[1:-1]
        f = parse_coeff(A.chart, ctext)
        exp = [0] * A.rank
        for mono in pieces[1:]:
            for tok in mono.split():
                m = _MONO_TOKEN.fullmatch(tok)
                if not m or m.group(1) not in name_index:
                    raise ParseError(f"unknown generator {tok!r}")
                exp[name_index[m.group(1)]] += int(m.group(2) or 1)
        out = out + UEAElement(A, {tuple(exp): f})
    return out


def parse_conv(model, text: str):
    """Inverse of ConvElement.text() over the given model."""
    from .conv import ConvElement

    text = text.strip()
    if text == "0":
        return ConvElement.zero(model)
    out = ConvElement.zero(model)
    for term in split_top(text, " + "):
        term = term.strip()
        if not (term.startswith("<") and term.endswith(">")):
            raise ParseError(f"expected <u | E>, got {term!r}")
        inner = term[1:-1]
        pieces = split_top(inner, "|")
        if len(pieces) != 2:
            raise ParseError(f"expected one '|' in {term!r}")
        u = parse_uea(model.algebroid, pieces[0])
        try:
            E = model.lookup(pieces[1].strip())
        except KeyError as exc:
            raise ParseError(str(exc))
        out = out + ConvElement.single(model, E, u)
    return out


def parse_dist(model, text: str):
    """Inverse of TransvDist.text() over the given model."""
    from .dist import TransvDist

    text = text.strip()
    if text == "0":
        return TransvDist.zero(model)
    out = TransvDist.zero(model)
    for term in split_top(text, " + "):
        term = term.strip()
        if not (term.startswith("[[") and term.endswith("]]")):
            raise ParseError(f"expected [[E, u]], got {term!r}")
        inner = term[2:-2]
        pieces = split_top(inner, ",")
        if len(pieces) < 2:
            raise ParseError(f"expected [[E, u]], got {term!r}")
        try:
            E = model.lookup(pieces[0].strip())
        except KeyError as exc:
            raise ParseError(str(exc))
        u = parse_uea(model.algebroid, ",".join(pieces[1:]))
        out = out + TransvDist.single(model, E, u)
    return out
