"""Exact scalars: rationals and rational functions in formal log symbols.

The field Q(L_p : p prime) stands in for a field containing the logarithms
of the positive integers; L_p plays the role of log(p), and log(n) is
``sum(v_p(n) * L_p)``.  Distinct primes give algebraically independent
symbols, so the map n -> log(n) is injective.

Rationals are ``gmpy2.mpq``.  A :class:`Scalar` is only created when a value
actually involves a symbol; arithmetic demotes constant results back to
``mpq``, so purely rational data never pays for the symbolic machinery.

A monomial ``L_2^a * L_3^b * ...`` is stored as the integer ``2^a * 3^b * ...``.
Unique factorization makes this a bijection with monomial multiplication
becoming integer multiplication and monomial divisibility becoming integer
divisibility.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from gmpy2 import mpq

from .errors import MissingSymbol, ScalarParseError, ScalarZeroDivision
from .ntheory import factorize

Rational = type(mpq())
Value = Union[Rational, "Scalar"]

ZERO = mpq(0)
ONE_Q = mpq(1)


def as_rational(x) -> Rational:
    """Coerce int, Fraction, mpq or a literal like ``"3/2"`` to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not _RATIONAL_RE.fullmatch(s):
            raise ScalarParseError(x, 0, "malformed rational literal")
        return mpq(s)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


@lru_cache(maxsize=None)
def _mono_key(code: int):
    # graded lex with the smallest prime most significant
    fac = factorize(code) if code > 1 else ()
    return (sum(e for _, e in fac), tuple((-p, e) for p, e in fac))


@lru_cache(maxsize=None)
def _mono_str(code: int) -> str:
    parts = []
    for p, e in factorize(code):
        parts.append(f"L{p}" if e == 1 else f"L{p}^{e}")
    return "*".join(parts)


class LogPoly:
    """Sparse polynomial in the symbols L_p with rational coefficients.

    Immutable.  ``terms`` maps monomial codes to nonzero mpq coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        self._terms = {k: v for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LogPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "LogPoly":
        c = as_rational(c)
        return cls._raw({1: c} if c else {})

    @classmethod
    def symbol(cls, p: int) -> "LogPoly":
        return cls._raw({p: ONE_Q})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        t = self._terms
        return not t or (len(t) == 1 and 1 in t)

    def constant_value(self) -> Rational:
        return self._terms.get(1, ZERO)

    def symbols(self) -> set[int]:
        out = set()
        for code in self._terms:
            if code > 1:
                out.update(p for p, _ in factorize(code))
        return out

    def degree(self) -> int:
        return max((_mono_key(c)[0] for c in self._terms), default=0)

    def leading(self) -> tuple[int, Rational]:
        """(code, coefficient) of the leading term in graded lex order."""
        code = max(self._terms, key=_mono_key)
        return code, self._terms[code]

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, LogPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Rational, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return LogPoly._raw({k: -v for k, v in self._terms.items()})

    def __add__(self, other: "LogPoly") -> "LogPoly":
        if len(self._terms) < len(other._terms):
            self, other = other, self
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LogPoly._raw(out)

    def __sub__(self, other: "LogPoly") -> "LogPoly":
        return self + (-other)

    def __mul__(self, other: "LogPoly") -> "LogPoly":
        a, b = self._terms, other._terms
        if not a or not b:
            return LogPoly._raw({})
        if len(b) == 1 and 1 in b:
            return self.scale(b[1])
        if len(a) == 1 and 1 in a:
            return other.scale(a[1])
        out: dict = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = ka * kb
                s = out.get(k, ZERO) + va * vb
                if s:
                    out[k] = s
                else:
                    del out[k]
        return LogPoly._raw(out)

    def scale(self, c) -> "LogPoly":
        if not c:
            return LogPoly._raw({})
        return LogPoly._raw({k: v * c for k, v in self._terms.items()})

    def exact_div(self, d: "LogPoly") -> "LogPoly | None":
        """Quotient self / d if d divides self exactly, else None."""
        if not d:
            raise ScalarZeroDivision("division by the zero polynomial")
        lt_code, lt_c = d.leading()
        rem = dict(self._terms)
        quo: dict = {}
        dterms = list(d._terms.items())
        while rem:
            code = max(rem, key=_mono_key)
            if code % lt_code:
                return None
            mcode = code // lt_code
            c = rem[code] / lt_c
            quo[mcode] = c
            for dk, dv in dterms:
                k = mcode * dk
                s = rem.get(k, ZERO) - c * dv
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return LogPoly._raw(quo)

    def evaluate(self, assignment: Mapping[int, Rational]) -> Rational:
        total = ZERO
        for code, c in self._terms.items():
            term = c
            if code > 1:
                for p, e in factorize(code):
                    try:
                        x = assignment[p]
                    except KeyError:
                        raise MissingSymbol(p) from None
                    term = term * as_rational(x) ** e
            total += term
        return total

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for code in sorted(self._terms, key=_mono_key, reverse=True):
            c = self._terms[code]
            if code == 1:
                body = str(abs(c))
            elif abs(c) == 1:
                body = _mono_str(code)
            else:
                body = f"{abs(c)}*{_mono_str(code)}"
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"LogPoly({str(self)!r})"


ONE = LogPoly.const(1)


class Scalar:
    """Element num/den of Q(L_p) with at least one symbol present.

    Canonical form: den has leading coefficient 1, and if den divides num
    exactly the quotient is stored with den == 1.  Equality is by
    cross-multiplication, so non-reduced forms still compare correctly.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LogPoly, den: LogPoly = ONE):
        # Prefer make_scalar(), which also demotes constants to mpq.
        if den.is_zero():
            raise ScalarZeroDivision("zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: LogPoly, den: LogPoly) -> "Scalar":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    def is_polynomial(self) -> bool:
        return self.den is ONE or self.den == ONE

    def symbols(self) -> set[int]:
        return self.num.symbols() | self.den.symbols()

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.num * other.den == other.num * self.den
        if isinstance(other, (int, Rational, Fraction)):
            return self.num == self.den.scale(as_rational(other))
        return NotImplemented

    def __hash__(self):
        if self.is_polynomial():
            return hash(self.num)
        try:
            return hash(_eval_pair(self.num, self.den, _HashPoint()))
        except ScalarZeroDivision:
            return 0

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __add__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if self.den is ONE and d2 is ONE:
            return _from_poly(self.num + n2)
        return make_scalar(self.num * d2 + n2 * self.den, self.den * d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if self.den is ONE and d2 is ONE:
            return _from_poly(self.num - n2)
        return make_scalar(self.num * d2 - n2 * self.den, self.den * d2)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return ZERO
            return Scalar._raw(self.num.scale(other), self.den)
        o = _lift(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if self.den is ONE and d2 is ONE:
            return _from_poly(self.num * n2)
        return make_scalar(self.num * n2, self.den * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        n2, d2 = o
        if not n2:
            raise ScalarZeroDivision("division by the zero scalar")
        return make_scalar(self.num * d2, self.den * n2)

    def __rtruediv__(self, other):
        o = _lift(other)
        if o is None:
            return NotImplemented
        if not self.num:
            raise ScalarZeroDivision("division by the zero scalar")
        n2, d2 = o
        return make_scalar(n2 * self.den, d2 * self.num)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out: Value = ONE_Q
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        if self.den is ONE or self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"Scalar({str(self)!r})"


class _HashPoint(dict):
    def __missing__(self, p):
        return mpq(p * p + 1, 2 * p + 7)


def _lift(x):
    if isinstance(x, Scalar):
        return x.num, x.den
    if isinstance(x, (int, Rational, Fraction)) and not isinstance(x, bool):
        return LogPoly.const(x), ONE
    return None


def _from_poly(p: LogPoly) -> Value:
    if p.is_constant():
        return p.constant_value()
    return Scalar._raw(p, ONE)


def _normalize(num: LogPoly, den: LogPoly) -> tuple[LogPoly, LogPoly]:
    if not num:
        return num, ONE
    if den.is_constant():
        c = den.constant_value()
        return (num if c == 1 else num.scale(1 / c)), ONE
    q = num.exact_div(den)
    if q is not None:
        return q, ONE
    _, lc = den.leading()
    if lc != 1:
        inv = 1 / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def make_scalar(num: LogPoly, den: LogPoly = ONE) -> Value:
    """Build num/den in canonical form; constants come back as mpq."""
    if den.is_zero():
        raise ScalarZeroDivision("zero denominator")
    num, den = _normalize(num, den)
    if den is ONE and num.is_constant():
        return num.constant_value()
    return Scalar._raw(num, den)


def symbol(p: int) -> "Scalar":
    """The formal symbol L_p standing for log(p)."""
    from .ntheory import is_prime

    if not is_prime(p):
        from .errors import NotPrimeError

        raise NotPrimeError(p)
    return Scalar._raw(LogPoly.symbol(p), ONE)


@lru_cache(maxsize=4096)
def scalar_log(n: int) -> Value:
    """log(n) as sum(v_p(n) * L_p); log(1) == 0."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"scalar_log needs a positive integer, got {n!r}")
    if n == 1:
        return ZERO
    return Scalar._raw(LogPoly._raw({p: mpq(e) for p, e in factorize(n)}), ONE)


def is_scalar_zero(x: Value) -> bool:
    return not x


def scalar_arith(a: Value, b: Value, op: str) -> Value:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two scalars."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ScalarZeroDivision("division by the zero scalar")
        if isinstance(a, Rational) and isinstance(b, Rational):
            return a / b
        return (a if isinstance(a, Scalar) else _as_scalar(a)) / b
    raise ValueError(f"unknown scalar operation {op!r}")


def _as_scalar(x) -> Scalar:
    return Scalar._raw(LogPoly.const(x), ONE)


def _eval_pair(num: LogPoly, den: LogPoly, assignment) -> Rational:
    d = den.evaluate(assignment)
    if not d:
        raise ScalarZeroDivision("denominator evaluates to zero")
    return num.evaluate(assignment) / d


def scalar_eval(a: Value, assignment: Mapping[int, object]) -> Rational:
    """Substitute L_p -> assignment[p] and evaluate exactly."""
    if isinstance(a, Scalar):
        return _eval_pair(a.num, a.den, assignment)
    return as_rational(a)


def scalar_symbols(a: Value) -> set[int]:
    return a.symbols() if isinstance(a, Scalar) else set()


def to_value(x) -> Value:
    """Coerce user input (int, Fraction, str, Scalar, mpq) to a library scalar."""
    if isinstance(x, Scalar):
        if x.den is ONE and x.num.is_constant():
            return x.num.constant_value()
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return as_rational(x)


def format_scalar(x: Value) -> str:
    return str(x)


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:/\d+)?)|L(\d+)|(\^)|(\*)|(\+)|(-)|(\()|(\))|(/))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ScalarParseError(text, pos, "unexpected character")
        start = m.start(m.lastindex)
        kind = ("num", "sym", "^", "*", "+", "-", "(", ")", "/")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ScalarParseError(self.text, tok[2], f"expected {kind!r}, found {tok[1] or 'end'!r}")
        self.i += 1
        return tok

    def poly(self) -> LogPoly:
        neg = False
        if self.peek()[0] == "-":
            self.take()
            neg = True
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek()[0] in ("+", "-"):
            sign = self.take()[0]
            t = self.term()
            acc = acc + t if sign == "+" else acc - t
        return acc

    def term(self) -> LogPoly:
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> LogPoly:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return LogPoly.const(mpq(val))
        if kind == "sym":
            self.take()
            p = int(val)
            from .ntheory import is_prime

            if not is_prime(p):
                raise ScalarParseError(self.text, pos, f"L{p} does not name a prime")
            base = LogPoly.symbol(p)
            if self.peek()[0] == "^":
                self.take()
                k = self.take("num")
                if "/" in k[1]:
                    raise ScalarParseError(self.text, k[2], "exponent must be an integer")
                out = ONE
                for _ in range(int(k[1])):
                    out = out * base
                return out
            return base
        raise ScalarParseError(self.text, pos, f"unexpected {val or 'end'!r}")


def parse_logpoly(text: str) -> LogPoly:
    """Parse output of ``str(LogPoly)``, e.g. ``"3/2*L2^2*L3 + 1"``."""
    p = _Parser(text)
    out = p.poly()
    p.take("end")
    return out


def parse_scalar(text: str) -> Value:
    """Parse ``str(Scalar)`` or a rational literal back into a value."""
    p = _Parser(text)
    if p.peek()[0] == "(":
        p.take("(")
        num = p.poly()
        p.take(")")
        p.take("/")
        p.take("(")
        den = p.poly()
        p.take(")")
        p.take("end")
        if den.is_zero():
            raise ScalarParseError(text, len(text), "zero denominator")
        return make_scalar(num, den)
    out = p.poly()
    p.take("end")
    return _from_poly(out)
