"""Truncated arithmetic functions under Dirichlet convolution.

An :class:`ArithFn` stores the exact values f(1), ..., f(N).  Because
(f*g)(n) only reads f and g at divisors of n, sums and convolutions of
truncations are exact truncations of the true results; the precision of a
result is the smaller of the input precisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import NonSmoothSupport, NonUnit, PrecisionExhausted
from .ntheory import divisor_table, factorize, nth_prime
from .scalar import ZERO, Rational, Scalar, Value, to_value

DEFAULT_PRECISION = 64


class ArithFn:
    """Values of an arithmetic function at 1..precision.  Immutable."""

    __slots__ = ("_v",)

    def __init__(self, values: Iterable, precision: int | None = None):
        vals = [to_value(x) for x in values]
        if precision is not None:
            if precision < 1:
                raise ValueError("precision must be >= 1")
            if len(vals) > precision:
                if any(vals[precision:]):
                    raise ValueError(f"values given beyond precision {precision}")
                vals = vals[:precision]
            vals.extend([ZERO] * (precision - len(vals)))
        if not vals:
            raise ValueError("an ArithFn needs precision >= 1")
        self._v = tuple(vals)

    @classmethod
    def _raw(cls, values) -> "ArithFn":
        obj = cls.__new__(cls)
        obj._v = tuple(values)
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], precision: int) -> "ArithFn":
        vals = [ZERO] * precision
        for n, c in terms.items():
            if not 1 <= n <= precision:
                raise ValueError(f"index {n} outside 1..{precision}")
            vals[n - 1] = to_value(c)
        return cls._raw(vals)

    @property
    def precision(self) -> int:
        return len(self._v)

    @property
    def values(self) -> tuple:
        return self._v

    def __call__(self, n: int) -> Value:
        if not 1 <= n <= len(self._v):
            raise IndexError(f"index {n} outside known window 1..{len(self._v)}")
        return self._v[n - 1]

    def terms(self) -> dict[int, Value]:
        return {i: v for i, v in enumerate(self._v, 1) if v}

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self._v, 1) if v]

    def is_zero(self) -> bool:
        """True if every known value vanishes (zero up to precision)."""
        return not any(self._v)

    def truncate(self, N: int) -> "ArithFn":
        if N < 1:
            raise PrecisionExhausted("truncation to precision 0")
        if N >= len(self._v):
            return self
        return ArithFn._raw(self._v[:N])

    def __eq__(self, other):
        if not isinstance(other, ArithFn):
            return NotImplemented
        return self._v == other._v

    def __hash__(self):
        return hash(self._v)

    def agrees_with(self, other: "ArithFn") -> bool:
        """Equality on the common window."""
        N = min(len(self._v), len(other._v))
        return self._v[:N] == other._v[:N]

    def __neg__(self):
        return ArithFn._raw([-v for v in self._v])

    def __add__(self, other):
        if not isinstance(other, ArithFn):
            return NotImplemented
        return af_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, ArithFn):
            return NotImplemented
        return ArithFn._raw([a - b for a, b in zip(self._v, other._v)])

    def __mul__(self, other):
        if isinstance(other, ArithFn):
            return af_convolve(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "ArithFn":
        c = to_value(c)
        if not c:
            return ArithFn._raw([ZERO] * len(self._v))
        return ArithFn._raw([v * c if v else ZERO for v in self._v])

    def __repr__(self):
        body = ", ".join(f"{n}: {v}" for n, v in self.terms().items())
        return f"ArithFn({{{body}}}, precision={len(self._v)})"

    def __str__(self):
        return to_dirichlet_string(self)


# -- order and norm ----------------------------------------------------------


@dataclass(frozen=True)
class Known:
    n: int


@dataclass(frozen=True)
class AllZeroUpTo:
    N: int


OrdResult = Known | AllZeroUpTo


def af_ord(f: ArithFn) -> OrdResult:
    for i, v in enumerate(f.values, 1):
        if v:
            return Known(i)
    return AllZeroUpTo(f.precision)


def af_norm(f: ArithFn) -> Rational | None:
    """1/ord(f), or None when ord is not visible in the window."""
    o = af_ord(f)
    if isinstance(o, Known):
        return mpq(1, o.n)
    return None


# -- constructors ------------------------------------------------------------


def af_basis(n: int, precision: int = DEFAULT_PRECISION) -> ArithFn:
    """e_n truncated at ``precision`` (all zero when n > precision)."""
    if n < 1:
        raise ValueError(f"e_n needs n >= 1, got {n}")
    if precision < 1:
        raise ValueError("precision must be >= 1")
    vals = [ZERO] * precision
    if n <= precision:
        vals[n - 1] = mpq(1)
    return ArithFn._raw(vals)


def af_zero(precision: int = DEFAULT_PRECISION) -> ArithFn:
    return ArithFn._raw([ZERO] * precision)


def af_const(c, precision: int = DEFAULT_PRECISION) -> ArithFn:
    """The scalar c embedded as c*e_1."""
    return af_basis(1, precision).scale(c)


# -- ring operations ---------------------------------------------------------


def af_add(f: ArithFn, g: ArithFn) -> ArithFn:
    return ArithFn._raw([a + b for a, b in zip(f.values, g.values)])


def af_convolve(f: ArithFn, g: ArithFn) -> ArithFn:
    """Dirichlet convolution on the common window."""
    N = min(f.precision, g.precision)
    fz = [(i, v) for i, v in enumerate(f.values[:N], 1) if v]
    gz = [(i, v) for i, v in enumerate(g.values[:N], 1) if v]
    out: list = [ZERO] * N
    if len(fz) > len(gz):
        fz, gz = gz, fz
    for i, a in fz:
        lim = N // i
        for j, b in gz:
            if j > lim:
                break
            out[i * j - 1] += a * b
    return ArithFn._raw(out)


def af_shift(k: int, g: ArithFn, precision: int | None = None) -> ArithFn:
    """e_k * g, using that e_k is known exactly at every index.

    (e_k * g)(n) = g(n/k) when k | n and 0 otherwise, so the result is known
    up to k*(precision(g) + 1) - 1.  ``precision`` caps the result.
    """
    if k < 1:
        raise ValueError("shift needs k >= 1")
    full = k * (g.precision + 1) - 1
    N = full if precision is None else min(precision, full)
    out = [ZERO] * N
    gv = g.values
    for m in range(1, N // k + 1):
        out[m * k - 1] = gv[m - 1]
    return ArithFn._raw(out)


def af_invert(f: ArithFn) -> ArithFn:
    """Convolution inverse of a unit (f(1) != 0) on the same window."""
    N = f.precision
    f1 = f.values[0]
    if not f1:
        raise NonUnit("f(1) == 0: not a unit of the ring of arithmetic functions")
    inv1 = mpq(1) / f1 if isinstance(f1, Rational) else 1 / f1
    fv = f.values
    g: list = [ZERO] * N
    g[0] = inv1
    divs = divisor_table(N)
    for n in range(2, N + 1):
        acc = ZERO
        for d in divs[n][1:]:
            a = fv[d - 1]
            if a:
                b = g[n // d - 1]
                if b:
                    acc = acc + a * b
        g[n - 1] = -(acc * inv1) if acc else ZERO
    return ArithFn._raw(g)


# -- power series correspondence --------------------------------------------


class PowerSeriesPoly:
    """Finite truncation of a power series in X_1..X_m with exact coefficients."""

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], object] | None = None):
        if num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        self.num_vars = num_vars
        out = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {num_vars} variables")
            c = to_value(c)
            if c:
                out[exps] = out.get(exps, ZERO) + c
                if not out[exps]:
                    del out[exps]
        self._terms = out

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __eq__(self, other):
        if not isinstance(other, PowerSeriesPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __repr__(self):
        return f"PowerSeriesPoly({self.num_vars}, {self._terms!r})"


def monomial_index(exps: Sequence[int]) -> int:
    """Index n = prod p_i^{a_i} of the monomial X^a under the prime encoding."""
    n = 1
    for i, a in enumerate(exps, 1):
        if a:
            n *= nth_prime(i) ** a
    return n


def from_power_series(ps: PowerSeriesPoly, precision: int = DEFAULT_PRECISION) -> ArithFn:
    """Send X_i to the i-th prime; monomials past ``precision`` are dropped."""
    vals = [ZERO] * precision
    for exps, c in ps._terms.items():
        n = monomial_index(exps)
        if n <= precision:
            vals[n - 1] = vals[n - 1] + c
    return ArithFn._raw(vals)


def to_power_series(f: ArithFn, num_vars: int) -> PowerSeriesPoly:
    primes = [nth_prime(i) for i in range(1, num_vars + 1)]
    pos = {p: i for i, p in enumerate(primes)}
    terms = {}
    for n, c in f.terms().items():
        exps = [0] * num_vars
        for p, e in factorize(n):
            if p not in pos:
                raise NonSmoothSupport(n, primes)
            exps[pos[p]] = e
        terms[tuple(exps)] = c
    return PowerSeriesPoly(num_vars, terms)


# -- Dirichlet series rendering ---------------------------------------------


def _coef_text(c: Value) -> str:
    s = str(c)
    if isinstance(c, Scalar) or "/" in s:
        return f"({s})"
    return s


def to_dirichlet_string(f: ArithFn) -> str:
    """Render sum f(n)/n^s over the known nonzero terms, e.g. ``"1/2^s + 3/4^s"``."""
    pieces = []
    for n, c in f.terms().items():
        neg = isinstance(c, Rational) and c < 0
        mag = -c if neg else c
        body = _coef_text(mag) if n == 1 else f"{_coef_text(mag)}/{n}^s"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces) if pieces else "0"
