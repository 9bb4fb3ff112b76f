"""System description files: parsing and canonical serialization.

A system description is JSON with rational-function entries written as
strings in the variable z, for example::

    {
      "m": 2,
      "A": [["0", "1"], ["-1", "(-1)/(z)"]],
      "T": "z",
      "seeds": [["1"], ["0"]],
      "labels": ["J0", "J0'"],
      "growth": {"C": "1", "D": "2", "provenance": "catalog"},
      "exponent_bound": {"global": "2"}
    }

Expressions support + - * / ^ with parentheses, integer literals and z;
rationals are spelled as quotients (e.g. "1/2*z^2 - z").  Serialization is
canonical (sorted keys, fixed coefficient order), so emit -> parse -> emit
is byte-stable.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra import Poly, RatFunc
from .efunction import DiffSystem, GrowthCertificate, make_system
from .errors import InputError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Rational-function expressions
# ---------------------------------------------------------------------------

class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise InputError(f"expression {self.text!r}, column {self.pos + 1}: "
                         f"{message}")

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take(self) -> str:
        ch = self.peek()
        if ch is None:
            self.error("unexpected end of expression")
        self.pos += 1
        return ch

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])


def parse_ratfunc(text: str) -> RatFunc:
    """Parse an expression in z to an exact rational function."""
    tok = _Tokenizer(text)
    value = _parse_sum(tok)
    if tok.peek() is not None:
        tok.error(f"unexpected {tok.peek()!r}")
    return value


def _parse_sum(tok: _Tokenizer) -> RatFunc:
    value = _parse_product(tok)
    while tok.peek() in ("+", "-"):
        op = tok.take()
        rhs = _parse_product(tok)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_product(tok: _Tokenizer) -> RatFunc:
    value = _parse_unary(tok)
    while tok.peek() in ("*", "/"):
        op = tok.take()
        rhs = _parse_unary(tok)
        if op == "*":
            value = value * rhs
        else:
            if rhs.is_zero():
                tok.error("division by zero")
            value = value * RatFunc(rhs.denom, rhs.num)
    return value


def _parse_unary(tok: _Tokenizer) -> RatFunc:
    sign = 1
    while tok.peek() in ("+", "-"):
        if tok.take() == "-":
            sign = -sign
    value = _parse_power(tok)
    return value if sign == 1 else -value


def _parse_power(tok: _Tokenizer) -> RatFunc:
    base = _parse_atom(tok)
    if tok.peek() == "^":
        tok.take()
        exp = tok.integer()
        out = RatFunc.constant(1)
        for _ in range(exp):
            out = out * base
        return out
    return base


def _parse_atom(tok: _Tokenizer) -> RatFunc:
    ch = tok.peek()
    if ch is None:
        tok.error("unexpected end of expression")
    if ch == "(":
        tok.take()
        value = _parse_sum(tok)
        if tok.peek() != ")":
            tok.error("expected ')'")
        tok.take()
        return value
    if ch == "z":
        tok.take()
        return RatFunc(Poly.x())
    if ch.isdigit():
        return RatFunc.constant(tok.integer())
    tok.error(f"unexpected {ch!r}")


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------

def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed rational {text!r}: {exc}") from None


def poly_str(p: Poly) -> str:
    """Canonical polynomial string, descending powers."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coefficient(k)
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = frac_str(mag)
        else:
            var = "z" if k == 1 else f"z^{k}"
            body = var if mag == 1 else f"{frac_str(mag)}*{var}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def ratfunc_str(f: RatFunc) -> str:
    if f.is_polynomial():
        return poly_str(f.to_poly())
    return f"({poly_str(f.num)})/({poly_str(f.denom)})"


# ---------------------------------------------------------------------------
# System files
# ---------------------------------------------------------------------------

def system_to_dict(sys: DiffSystem) -> dict:
    out = {
        "m": sys.m,
        "labels": list(sys.labels),
        "A": [[ratfunc_str(e) for e in row] for row in sys.A],
        "T": poly_str(sys.T),
        "seeds": [[frac_str(c) for c in row] for row in sys.seeds],
        "growth": None,
        "exponent_bound": None,
    }
    if sys.growth is not None:
        out["growth"] = {"C": frac_str(sys.growth.C),
                         "D": frac_str(sys.growth.D),
                         "provenance": sys.growth.provenance}
    if sys.exponent_bound is not None:
        out["exponent_bound"] = {k: frac_str(v)
                                 for k, v in sorted(sys.exponent_bound.items())}
    return out


def emit_system(sys: DiffSystem) -> str:
    return json.dumps(system_to_dict(sys), indent=2, sort_keys=True) + "\n"


def system_from_dict(doc: dict, origin: str = "<dict>") -> DiffSystem:
    def fail(field: str, message: str):
        raise InputError(f"{origin}: field {field!r}: {message}")

    if not isinstance(doc, dict):
        raise InputError(f"{origin}: top level must be a JSON object")
    try:
        m = int(doc["m"])
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{origin}: field 'm': missing or not an integer")
    raw_a = doc.get("A")
    if (not isinstance(raw_a, list) or len(raw_a) != m
            or any(not isinstance(r, list) or len(r) != m for r in raw_a)):
        fail("A", f"must be an {m}x{m} array of strings")
    a = []
    for i, row in enumerate(raw_a):
        out_row = []
        for j, cell in enumerate(row):
            try:
                out_row.append(parse_ratfunc(str(cell)))
            except InputError as exc:
                fail(f"A[{i}][{j}]", str(exc))
        a.append(tuple(out_row))

    raw_seeds = doc.get("seeds")
    if not isinstance(raw_seeds, list) or len(raw_seeds) != m:
        fail("seeds", f"must be a list of {m} arrays of rational strings")
    seeds = []
    for i, row in enumerate(raw_seeds):
        if not isinstance(row, list) or not row:
            fail(f"seeds[{i}]", "must be a nonempty array of rational strings")
        try:
            seeds.append(tuple(parse_rational(str(c)) for c in row))
        except InputError as exc:
            fail(f"seeds[{i}]", str(exc))

    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != m:
            fail("labels", f"must be a list of {m} strings")
        labels = tuple(str(s) for s in labels)

    t_poly = None
    if doc.get("T") is not None:
        try:
            t_func = parse_ratfunc(str(doc["T"]))
            if not t_func.is_polynomial():
                fail("T", "must be a polynomial")
            t_poly = t_func.to_poly()
        except InputError as exc:
            fail("T", str(exc))

    growth = None
    if doc.get("growth") is not None:
        g = doc["growth"]
        if not isinstance(g, dict):
            fail("growth", "must be an object with C, D, provenance")
        try:
            growth = GrowthCertificate(
                parse_rational(str(g["C"])), parse_rational(str(g["D"])),
                str(g.get("provenance", "user-supplied")))
        except (KeyError, InputError) as exc:
            fail("growth", str(exc))

    bound = None
    if doc.get("exponent_bound") is not None:
        be = doc["exponent_bound"]
        if isinstance(be, dict):
            bound = {str(k): parse_rational(str(v)) for k, v in be.items()}
        else:
            bound = {"global": parse_rational(str(be))}
        for key, val in bound.items():
            if val < 0:
                fail("exponent_bound", f"bound at {key!r} must be >= 0")

    system = make_system(a, seeds, labels=labels, T=t_poly, growth=growth,
                         exponent_bound=bound)
    if t_poly is not None and system.T != t_poly:
        logger.warning("%s: supplied T = %s does not clear A integrally; "
                       "rescaled to T = %s", origin, poly_str(t_poly),
                       poly_str(system.T))
    return system


def parse_system(path: str | Path) -> DiffSystem:
    """Load a system description file; errors carry file/line context."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return system_from_dict(doc, origin=str(path))


def catalog_file(name: str) -> Path:
    """Path of a packaged catalog description (bessel_j0, exp_pair, ...)."""
    base = resources.files("efcert") / "data" / f"{name}.json"
    if not base.is_file():
        raise InputError(f"no packaged catalog file {name}.json")
    return Path(str(base))


def resolve_system_path(arg: str) -> Path:
    """A real path wins; otherwise fall back to the packaged catalog."""
    p = Path(arg)
    if p.is_file():
        return p
    name = p.name
    if name.endswith(".json"):
        name = name[:-5]
    try:
        return catalog_file(name)
    except InputError:
        raise InputError(f"system description {arg!r} not found") from None
