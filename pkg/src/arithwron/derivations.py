"""Derivations of the ring of arithmetic functions.

Precision bookkeeping follows what each formula reads: the basic derivation
for p evaluates f at n*p, so it divides the known window by p; the log and
Omega derivations act pointwise and keep it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from .arithfn import ArithFn, af_shift
from .errors import DerivationSyntaxError, NotPrimeError, PrecisionExhausted
from .ntheory import big_omega, factorize, is_prime, primes_up_to
from .scalar import ZERO, Value, scalar_log

LogFn = Callable[[int], Value]


@dataclass(frozen=True)
class Basic:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrimeError(self.p)

    def __str__(self):
        return f"d_{self.p}"


@dataclass(frozen=True)
class Log:
    def __str__(self):
        return "dlog"


@dataclass(frozen=True)
class OmegaWeighted:
    def __str__(self):
        return "dOmega"


@dataclass(frozen=True)
class Monomial:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"monomial derivation needs m >= 1, got {self.m}")

    def basics(self) -> list[Basic]:
        """Constituent basic derivations, ascending prime order."""
        return [Basic(p) for p, e in factorize(self.m) for _ in range(e)] if self.m > 1 else []

    def __str__(self):
        return f"d[{self.m}]"


@dataclass(frozen=True)
class Composition:
    """ops[0] applied last: Composition((A, B)) is A after B."""

    ops: tuple

    def __str__(self):
        return " ".join(map(str, self.ops))


DerivationOp = Basic | Log | OmegaWeighted | Monomial | Composition


def apply_basic(p: int, f: ArithFn) -> ArithFn:
    """(d_p f)(n) = v_p(np) f(np), known for n <= precision(f) // p."""
    if not is_prime(p):
        raise NotPrimeError(p)
    N = f.precision // p
    if N == 0:
        raise PrecisionExhausted(f"d_{p} of a function known to precision {f.precision}")
    fv = f.values
    out = [ZERO] * N
    for n in range(1, N + 1):
        v = fv[n * p - 1]
        if v:
            k = 1
            m = n
            while m % p == 0:
                m //= p
                k += 1
            out[n - 1] = v * k
    return ArithFn._raw(out)


def apply_log(f: ArithFn, log: LogFn = scalar_log) -> ArithFn:
    """(d f)(n) = log(n) f(n).

    ``log`` maps n to log(n); the default is the symbolic one.  Passing a
    rational specialization gives the randomized-evaluation variant.
    """
    return ArithFn._raw([v * log(n) if v and n > 1 else ZERO for n, v in enumerate(f.values, 1)])


def apply_omega(f: ArithFn) -> ArithFn:
    """(d_Omega f)(n) = Omega(n) f(n)."""
    return ArithFn._raw(
        [v * big_omega(n) if v and n > 1 else ZERO for n, v in enumerate(f.values, 1)]
    )


def apply_monomial(m: int, f: ArithFn) -> ArithFn:
    """d_m = prod_p d_p^{v_p(m)}; d_1 is the identity."""
    if m < 1:
        raise ValueError(f"monomial derivation needs m >= 1, got {m}")
    if f.precision // m == 0:
        raise PrecisionExhausted(f"d[{m}] of a function known to precision {f.precision}")
    if m == 1:
        return f
    fv = f.values
    N = f.precision // m
    fac = factorize(m)
    out = [ZERO] * N
    for n in range(1, N + 1):
        v = fv[n * m - 1]
        if v:
            # d_p^e picks up the falling factorial (a+e)(a+e-1)...(a+1), a = v_p(n)
            c = 1
            for p, e in fac:
                a = 0
                t = n
                while t % p == 0:
                    t //= p
                    a += 1
                for j in range(a + 1, a + e + 1):
                    c *= j
            out[n - 1] = v * c
    return ArithFn._raw(out)


def apply(op: DerivationOp, f: ArithFn, log: LogFn = scalar_log) -> ArithFn:
    if isinstance(op, Basic):
        return apply_basic(op.p, f)
    if isinstance(op, Log):
        return apply_log(f, log)
    if isinstance(op, OmegaWeighted):
        return apply_omega(f)
    if isinstance(op, Monomial):
        return apply_monomial(op.m, f)
    if isinstance(op, Composition):
        for sub in reversed(op.ops):
            f = apply(sub, f, log)
        return f
    raise TypeError(f"not a derivation operator: {op!r}")


def output_precision(op: DerivationOp, N: int) -> int:
    """Precision of apply(op, f) for f known to precision N."""
    if isinstance(op, Basic):
        return N // op.p
    if isinstance(op, Monomial):
        return N // op.m
    if isinstance(op, Composition):
        for sub in reversed(op.ops):
            N = output_precision(sub, N)
        return N
    return N


def partial_sum_log(P: int, f: ArithFn, log: LogFn = scalar_log) -> ArithFn:
    """s_P(f) = sum over primes p <= P of log(p) * (e_p * d_p f).

    Each e_p * d_p f is formed with :func:`af_shift`, which is exact on the
    whole window of f, so the sum keeps precision(f).
    """
    N = f.precision
    acc = [ZERO] * N
    for p in primes_up_to(min(P, N)):
        term = af_shift(p, apply_basic(p, f), N)
        lp = log(p)
        for i, v in enumerate(term.values):
            if v:
                acc[i] = acc[i] + lp * v
    return ArithFn._raw(acc)


def commutator_apply(m: int, f: ArithFn, log: LogFn = scalar_log) -> tuple[ArithFn, ArithFn]:
    """(d_m d f - d d_m f, log(m) d_m f) on the window precision(f) // m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if f.precision < m:
        raise PrecisionExhausted(f"commutator with d[{m}] needs precision >= {m}")
    left = apply_monomial(m, apply_log(f, log)) - apply_log(apply_monomial(m, f), log)
    right = apply_monomial(m, f).scale(log(m)) if m > 1 else ArithFn._raw([ZERO] * (f.precision // m))
    return left, right


# -- text syntax -------------------------------------------------------------

_OP_RE = re.compile(r"d_(\d+)|dlog|dOmega|d\[(\d+)\]")


def parse_derivation(text: str) -> DerivationOp:
    """Parse ``"d_3"``, ``"dlog"``, ``"dOmega"``, ``"d[6]"`` or a juxtaposition
    of these such as ``"d[4] dlog"`` (rightmost applied first)."""
    ops = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _OP_RE.match(text, pos)
        if not m or (m.end() < len(text) and not text[m.end()].isspace()):
            raise DerivationSyntaxError(text, pos, "expected d_<prime>, dlog, dOmega or d[<m>]")
        if m.group(1) is not None:
            p = int(m.group(1))
            if not is_prime(p):
                raise DerivationSyntaxError(text, m.start(1), f"d_{p}: {p} is not prime")
            ops.append(Basic(p))
        elif m.group(2) is not None:
            k = int(m.group(2))
            if k < 1:
                raise DerivationSyntaxError(text, m.start(2), "d[m] needs m >= 1")
            ops.append(Monomial(k))
        elif m.group(0) == "dlog":
            ops.append(Log())
        else:
            ops.append(OmegaWeighted())
        pos = m.end()
    if not ops:
        raise DerivationSyntaxError(text, 0, "empty derivation")
    return ops[0] if len(ops) == 1 else Composition(tuple(ops))


def rational_log(assignment) -> LogFn:
    """A log function sending log(p) to assignment[p] (a rational)."""

    def log(n: int) -> Value:
        if n == 1:
            return ZERO
        return sum((mpq(e) * assignment[p] for p, e in factorize(n)), ZERO)

    return log
