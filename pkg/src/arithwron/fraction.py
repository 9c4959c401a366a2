"""The field of fractions of the ring of arithmetic functions.

Fractions are kept as unreduced numerator/denominator pairs; equality is by
cross-multiplication on the common window.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .arithfn import AllZeroUpTo, ArithFn, Known, af_basis, af_convolve, af_ord
from .derivations import (
    Composition,
    DerivationOp,
    Log,
    LogFn,
    Monomial,
    apply,
)
from .errors import UncertifiedNonzero
from .scalar import Rational, Value, scalar_log


class FracElem:
    """num/den with den certified nonzero inside its known window."""

    __slots__ = ("num", "den")

    def __init__(self, num: ArithFn, den: ArithFn | None = None):
        if den is None:
            den = af_basis(1, num.precision)
        if isinstance(af_ord(den), AllZeroUpTo):
            raise UncertifiedNonzero(
                f"denominator vanishes up to precision {den.precision}"
            )
        self.num = num
        self.den = den

    @classmethod
    def embed(cls, f: ArithFn) -> "FracElem":
        """f as f/e_1."""
        return cls(f, af_basis(1, f.precision))

    @property
    def eff_precision(self) -> int:
        return min(self.num.precision, self.den.precision)

    def is_zero(self) -> bool:
        """Zero up to the numerator's precision."""
        return self.num.is_zero()

    def norm(self) -> Rational | None:
        """ord(den)/ord(num), or None when either order is not visible."""
        a, b = af_ord(self.num), af_ord(self.den)
        if isinstance(a, Known) and isinstance(b, Known):
            return mpq(b.n, a.n)
        return None

    def __eq__(self, other):
        if isinstance(other, ArithFn):
            other = FracElem.embed(other)
        if not isinstance(other, FracElem):
            return NotImplemented
        return af_convolve(self.num, other.den) == af_convolve(other.num, self.den)

    __hash__ = None

    def __neg__(self):
        return FracElem(-self.num, self.den)

    def __add__(self, other):
        return frac_arith(self, _as_frac(other), "add")

    def __sub__(self, other):
        return frac_arith(self, _as_frac(other), "sub")

    def __mul__(self, other):
        if isinstance(other, (FracElem, ArithFn)):
            return frac_arith(self, _as_frac(other), "mul")
        return FracElem(self.num.scale(other), self.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return frac_arith(self, _as_frac(other), "div")

    def __repr__(self):
        return f"FracElem({self.num!r}, {self.den!r})"


def _as_frac(x) -> FracElem:
    if isinstance(x, FracElem):
        return x
    if isinstance(x, ArithFn):
        return FracElem.embed(x)
    raise TypeError(f"cannot use {type(x).__name__} as a fraction")


def frac_arith(a: FracElem, b: FracElem, op: str) -> FracElem:
    if op == "add":
        return FracElem(a.num * b.den + b.num * a.den, a.den * b.den)
    if op == "sub":
        return FracElem(a.num * b.den - b.num * a.den, a.den * b.den)
    if op == "mul":
        return FracElem(a.num * b.num, a.den * b.den)
    if op == "div":
        if isinstance(af_ord(b.num), AllZeroUpTo):
            raise UncertifiedNonzero(
                f"divisor vanishes up to precision {b.num.precision}"
            )
        return FracElem(a.num * b.den, a.den * b.num)
    raise ValueError(f"unknown fraction operation {op!r}")


def _flatten(op: DerivationOp) -> list:
    """Single derivations making up op, innermost first."""
    if isinstance(op, Monomial):
        return op.basics()
    if isinstance(op, Composition):
        out = []
        for sub in reversed(op.ops):
            out.extend(_flatten(sub))
        return out
    return [op]


def derive_power_form(
    ops: list, num: ArithFn, den: ArithFn, log: LogFn = scalar_log
) -> tuple[ArithFn, int]:
    """Apply the derivations ``ops`` (innermost first) to num/den.

    Returns (u, k) with the result equal to u / den^(k+1), k = len(ops).  Uses
    D(u/g^j) = (D(u) g - j u D(g)) / g^(j+1), which keeps the denominator a
    power of den instead of squaring it at each step.
    """
    u = num
    for j, op in enumerate(ops, start=1):
        Du = apply(op, u, log)
        Dg = apply(op, den, log)
        u = af_convolve(Du, den) - af_convolve(u, Dg).scale(j)
    return u, len(ops)


def _power(g: ArithFn, k: int) -> ArithFn:
    out = af_basis(1, g.precision)
    for _ in range(k):
        out = af_convolve(out, g)
    return out


def frac_derive(D: DerivationOp, a: FracElem, log: LogFn = scalar_log) -> FracElem:
    """Extend D to fractions by the quotient rule.

    A single derivation gives (D(num) den - num D(den)) / den^2; a monomial
    or composite operator is applied one derivation at a time.
    """
    ops = _flatten(D)
    if not ops:
        return a
    u, k = derive_power_form(ops, a.num, a.den, log)
    return FracElem(u, _power(a.den, k + 1))


# -- kernel probing ----------------------------------------------------------


@dataclass(frozen=True)
class InKernelConstant:
    value: Value


@dataclass(frozen=True)
class NotInKernel:
    index: int


@dataclass(frozen=True)
class NonConstantKernelElement:
    """D(a) vanishes in the window but a is certified non-constant."""

    ord_num: int
    ord_den: int


@dataclass(frozen=True)
class Inconclusive:
    reason: str


def kernel_probe(D: DerivationOp, a: FracElem, log: LogFn = scalar_log):
    """Test whether a is a constant killed by D.

    Returns NotInKernel(index) when D(a) has a visible nonzero coefficient.
    Otherwise runs the descent h = f - (f(n)/g(n)) g with n = ord f = ord g:
    a vanishing h exhibits the constant; mismatched orders certify that a is
    not a constant.
    """
    # D(a) = 0 iff the quotient-rule numerator vanishes; the squared
    # denominator is never needed (and may lie past the window).
    dnum, _ = derive_power_form(_flatten(D), a.num, a.den, log)
    o = af_ord(dnum)
    if isinstance(o, Known):
        return NotInKernel(o.n)
    W = a.eff_precision
    f, g = a.num.truncate(W), a.den.truncate(W)
    go = af_ord(g)
    assert isinstance(go, Known)
    if f.is_zero():
        return InKernelConstant(mpq(0))
    const: Value = mpq(0)
    while True:
        fo = af_ord(f)
        if isinstance(fo, AllZeroUpTo):
            return InKernelConstant(const)
        if fo.n != go.n:
            return NonConstantKernelElement(fo.n, go.n)
        c = f(fo.n) / g(go.n)
        const = const + c
        f = f - g.scale(c)


def kernel_probe_log(a: FracElem, log: LogFn = scalar_log):
    """Probe membership in the kernel of the log-derivation.

    By injectivity of log the kernel on fractions is the constants, so a
    certified non-constant with vanishing derivative can only come from the
    derivative's witness index lying beyond the window; that case is
    reported as Inconclusive.
    """
    r = kernel_probe(Log(), a, log)
    if isinstance(r, NonConstantKernelElement):
        return Inconclusive(
            f"orders {r.ord_num} and {r.ord_den} differ but the derivative's "
            f"witness index {r.ord_num * r.ord_den} is past the window {a.eff_precision}"
        )
    return r
