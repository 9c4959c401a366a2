"""Generalized Wronskians and linear-dependence testing.

A family f_1..f_n of arithmetic functions (or fractions of them) is linearly
dependent over the scalars exactly when every generalized Wronskian
det(d_{m_i} f_j) vanishes, the m_i running over admissible tuples.  On
truncated data a nonzero coefficient of such a determinant is a sound
certificate of independence; vanishing is only "up to precision".  The
decision procedure below scans tuples for a certificate and otherwise falls
back to exact Gaussian elimination on the coefficient matrix.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Sequence

from gmpy2 import mpq

from .arithfn import (
    ArithFn,
    Known,
    af_basis,
    af_convolve,
    af_ord,
    DEFAULT_PRECISION,
)
from .derivations import Basic, Log, LogFn, apply_log, apply_monomial
from .errors import NonAdmissibleTuple, PrecisionExhausted
from .fraction import FracElem, derive_power_form
from .ntheory import big_omega, divisor_table, factorize
from .scalar import ZERO, Rational, Value, scalar_log

log = logging.getLogger(__name__)

DEFAULT_TUPLE_BOUND = 16


# -- tuples ------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleTuple:
    """Row indices (m_1, ..., m_n) with Omega(m_i) <= i - 1."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(int(m) for m in self.entries)
        object.__setattr__(self, "entries", entries)
        check_admissible(entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def omega(self) -> tuple:
        return tuple(big_omega(m) for m in self.entries)

    def __str__(self):
        return "(" + ", ".join(map(str, self.entries)) + ")"


def check_admissible(entries: Sequence[int]) -> None:
    """Raise NonAdmissibleTuple naming the first violated constraint."""
    if not entries:
        raise NonAdmissibleTuple("empty tuple")
    for i, m in enumerate(entries, start=1):
        if m < 1:
            raise NonAdmissibleTuple(f"m_{i} = {m} is not a positive integer")
    if entries[0] != 1:
        raise NonAdmissibleTuple(f"m_1 must be 1 (got {entries[0]})")
    for i, m in enumerate(entries, start=1):
        k = big_omega(m)
        if k > i - 1:
            raise NonAdmissibleTuple(
                f"Ω({m}) = {k} > {i - 1} at position {i} (need Ω(m_{i}) <= {i - 1})"
            )


def enumerate_admissible(n: int, bound: int) -> list[AdmissibleTuple]:
    """All admissible tuples of length n with entries <= bound, in lex order."""
    if n < 1 or bound < 1:
        raise ValueError("need n >= 1 and bound >= 1")
    by_pos = [[m for m in range(1, bound + 1) if big_omega(m) <= i] for i in range(n)]
    return [AdmissibleTuple(t) for t in itertools.product(*by_pos)]


def is_divisor_closed(entries: Sequence[int]) -> bool:
    s = set(entries)
    return all(d in s for m in s for d in divisor_table(m)[m])


def enumerate_divisor_closed(n: int, bound: int) -> list[AdmissibleTuple]:
    """Admissible tuples of distinct entries whose entry set is closed under
    taking divisors (tuples with a repeated entry have equal rows and are
    left out)."""
    return [
        t
        for t in enumerate_admissible(n, bound)
        if len(set(t.entries)) == n and is_divisor_closed(t.entries)
    ]


def search_order(tuples) -> list[AdmissibleTuple]:
    """Ascending largest entry, then lexicographic."""
    return sorted(tuples, key=lambda t: (max(t.entries), t.entries))


def distinct_row_sets(tuples) -> list[AdmissibleTuple]:
    """Keep the first tuple for each set of distinct entries.

    Reordering rows only flips the sign of the determinant and a repeated
    row makes it vanish, so one representative per entry set decides
    whether any of them is nonzero.
    """
    seen = set()
    out = []
    for t in tuples:
        key = frozenset(t.entries)
        if len(key) != len(t.entries) or key in seen:
            continue
        seen.add(key)
        out.append(t)
    return out


# -- families and matrices ---------------------------------------------------


def _is_frac_family(family) -> bool:
    return any(isinstance(f, FracElem) for f in family)


def _as_fracs(family) -> list[FracElem]:
    return [f if isinstance(f, FracElem) else FracElem.embed(f) for f in family]


def family_precision(family) -> int:
    return min(
        (f.eff_precision if isinstance(f, FracElem) else f.precision) for f in family
    )


def truncate_family(family, N: int):
    out = []
    for f in family:
        if isinstance(f, FracElem):
            out.append(FracElem(f.num.truncate(N), f.den.truncate(N)))
        else:
            out.append(f.truncate(N))
    return out


@dataclass
class WronskianMatrix:
    """Entries (i, j) = row_ops[i] applied to f_j, all truncated to a common
    window.  For a family of fractions column j has been multiplied by
    den_j^(K+1), K the largest row order, and ``scale`` is the product of
    those factors (the determinant of the original matrix is det / scale).
    """

    rows: list
    row_ops: list
    min_precision: int
    scale: ArithFn | None = None

    def truncated(self) -> list[list[ArithFn]]:
        N = self.min_precision
        return [[e.truncate(N) for e in row] for row in self.rows]


class _RowCache:
    """Memoized entries d_m f_j (or their power-form numerators for fractions)."""

    def __init__(self, family, log_fn: LogFn = scalar_log):
        self.frac = _is_frac_family(family)
        self.log = log_fn
        if self.frac:
            fr = _as_fracs(family)
            self.nums = [f.num for f in fr]
            self.dens = [f.den for f in fr]
            self._pow: dict = {}
        else:
            self.fns = list(family)
        self._cache: dict = {}

    def precision_of(self, m: int) -> int:
        if self.frac:
            return min(min(a.precision, b.precision) for a, b in zip(self.nums, self.dens)) // m
        return min(f.precision for f in self.fns) // m

    def order(self, key) -> int:
        if key[0] == "m":
            return big_omega(key[1])
        return key[1]

    def entry(self, key, j: int):
        """key is ("m", m) for d_m or ("log", k) for d^k."""
        ck = (key, j)
        if ck in self._cache:
            return self._cache[ck]
        kind, arg = key
        if not self.frac:
            f = self.fns[j]
            if kind == "m":
                val = apply_monomial(arg, f)
            else:
                val = f
                for _ in range(arg):
                    val = apply_log(val, self.log)
        else:
            if kind == "m":
                ops = []
                for p, e in factorize(arg) if arg > 1 else ():
                    ops.extend(Basic(p) for _ in range(e))
            else:
                ops = [Log()] * arg
            val, _ = derive_power_form(ops, self.nums[j], self.dens[j], self.log)
        self._cache[ck] = val
        return val

    def den_power(self, j: int, k: int) -> ArithFn:
        ck = (j, k)
        if ck not in self._pow:
            g = self.dens[j]
            out = af_basis(1, g.precision)
            for _ in range(k):
                out = af_convolve(out, g)
            self._pow[ck] = out
        return self._pow[ck]

    def matrix(self, keys: list) -> WronskianMatrix:
        n = len(keys)
        for i, key in enumerate(keys, start=1):
            if key[0] == "m" and self.precision_of(key[1]) == 0:
                raise PrecisionExhausted(
                    f"row {i} (d[{key[1]}]) has no known coefficients at precision "
                    f"{self.precision_of(1)}"
                )
        if not self.frac:
            rows = [[self.entry(k, j) for j in range(n)] for k in keys]
            prec = min(e.precision for row in rows for e in row)
            return WronskianMatrix(rows, keys, prec)
        K = max(self.order(k) for k in keys)
        rows = []
        for key in keys:
            k = self.order(key)
            rows.append(
                [
                    af_convolve(self.entry(key, j), self.den_power(j, K - k))
                    if K > k
                    else self.entry(key, j)
                    for j in range(n)
                ]
            )
        scale = reduce(af_convolve, [self.den_power(j, K + 1) for j in range(n)])
        prec = min(e.precision for row in rows for e in row)
        return WronskianMatrix(rows, keys, prec, scale)


# -- determinants over the ring ---------------------------------------------


def det_arith(rows: list[list[ArithFn]]) -> ArithFn:
    """Determinant of a square matrix over the convolution ring.

    Division-free Laplace expansion with memoized minors: minors on the
    bottom k rows are built from those on the bottom k-1 rows, n*2^(n-1)
    convolutions in total.  Entries are first cut to the common window so
    that skipping zero entries cannot overstate the result's precision.
    """
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("det_arith needs a nonempty square matrix")
    N = min(e.precision for r in rows for e in r)
    M = [[e.truncate(N) for e in r] for r in rows]
    nz = [[not e.is_zero() for e in r] for r in M]
    zero = ArithFn._raw([ZERO] * N)
    # minors[mask] for the current bottom block; mask = set of columns used
    minors: dict[int, ArithFn | None] = {}
    last = n - 1
    for j in range(n):
        minors[1 << j] = M[last][j] if nz[last][j] else None
    for i in range(n - 2, -1, -1):
        size = n - i
        new: dict[int, ArithFn | None] = {}
        for cols in itertools.combinations(range(n), size):
            mask = 0
            for c in cols:
                mask |= 1 << c
            acc = None
            for t, c in enumerate(cols):
                if not nz[i][c]:
                    continue
                sub = minors.get(mask & ~(1 << c))
                if sub is None:
                    continue
                term = af_convolve(M[i][c], sub)
                if t % 2:
                    acc = term.__neg__() if acc is None else acc - term
                else:
                    acc = term if acc is None else acc + term
            new[mask] = None if acc is None or acc.is_zero() else acc
        minors = new
    out = minors[(1 << n) - 1]
    return zero if out is None else out


def _conv_at(funcs: list[ArithFn], n: int) -> Value:
    """(f_1 * ... * f_k)(n) by direct divisor recursion."""
    if len(funcs) == 1:
        return funcs[0](n)
    f0 = funcs[0]
    acc: Value = ZERO
    for d in divisor_table(n)[n]:
        a = f0(d)
        if a:
            b = _conv_at(funcs[1:], n // d)
            if b:
                acc = acc + a * b
    return acc


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, cyc = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                cyc += 1
            if cyc % 2 == 0:
                sign = -sign
    return sign


def det_coefficient_leibniz(rows: list[list[ArithFn]], n_index: int) -> Value:
    """Coefficient at n_index of the determinant, summed over permutations.

    An independent route used to re-verify certificates.
    """
    size = len(rows)
    acc: Value = ZERO
    for perm in itertools.permutations(range(size)):
        funcs = [rows[i][perm[i]] for i in range(size)]
        if any(f.is_zero() for f in funcs):
            continue
        v = _conv_at(funcs, n_index)
        if v:
            acc = acc + v if _perm_sign(perm) > 0 else acc - v
    return acc


# -- public Wronskian operations ---------------------------------------------


def _result(det: ArithFn, scale: ArithFn | None):
    return det if scale is None else FracElem(det, scale)


def generalized_wronskian(family, tuple_, log_fn: LogFn = scalar_log):
    """det(d_{m_i} f_j) for an admissible tuple; ArithFn, or FracElem when
    any member is a fraction."""
    family = list(family)
    t = tuple_ if isinstance(tuple_, AdmissibleTuple) else AdmissibleTuple(tuple(tuple_))
    if len(t) != len(family):
        raise ValueError(f"tuple length {len(t)} does not match family size {len(family)}")
    cache = _RowCache(family, log_fn)
    W = cache.matrix([("m", m) for m in t.entries])
    det = det_arith(W.rows)
    return _result(det, W.scale)


def wronskian_matrix(family, row_keys, log_fn: LogFn = scalar_log) -> WronskianMatrix:
    return _RowCache(list(family), log_fn).matrix(list(row_keys))


def log_wronskian(family, n: int | None = None, log_fn: LogFn = scalar_log):
    """Wronskian with respect to the log-derivation: det(d^(i-1) f_j)."""
    family = list(family)
    if n is not None and n != len(family):
        raise ValueError(f"size {n} does not match family of {len(family)}")
    cache = _RowCache(family, log_fn)
    W = cache.matrix([("log", k) for k in range(len(family))])
    return _result(det_arith(W.rows), W.scale)


def _numerator(x) -> ArithFn:
    return x.num if isinstance(x, FracElem) else x


# -- Gaussian elimination oracle ---------------------------------------------


@dataclass(frozen=True)
class FullRank:
    """Pivot columns (1-based indices) of the row-reduced family."""

    pivots: tuple


@dataclass(frozen=True)
class NullVector:
    coeffs: tuple


def _cleared(family) -> list[ArithFn]:
    """Members brought to a common denominator: f_j/g_j -> f_j * prod_{k!=j} g_k."""
    if not _is_frac_family(family):
        return list(family)
    fr = _as_fracs(family)
    out = []
    for j, f in enumerate(fr):
        acc = f.num
        for k, g in enumerate(fr):
            if k != j:
                acc = af_convolve(acc, g.den)
        out.append(acc)
    return out


def _div(a: Value, b: Value) -> Value:
    if isinstance(a, Rational) and isinstance(b, Rational):
        return a / b
    if isinstance(a, Rational):
        return b.__rtruediv__(a)
    return a / b


def normalize_null_vector(c: Sequence[Value]) -> tuple:
    """Integral with gcd 1 and first nonzero entry positive when rational;
    otherwise scaled so the first nonzero entry is 1."""
    c = list(c)
    first = next(x for x in c if x)
    if all(isinstance(x, Rational) for x in c):
        den = 1
        for x in c:
            d = int(x.denominator)
            den = den * d // gcd(den, d)
        ints = [int(x * den) for x in c]
        g = reduce(gcd, (abs(v) for v in ints if v), 0) or 1
        sgn = -1 if first < 0 else 1
        return tuple(mpq(v * sgn // g) for v in ints)
    return tuple(_div(x, first) if x else ZERO for x in c)


def gaussian_null_vector(family, precision: int | None = None):
    """Exact row reduction of the matrix (f_i(j)), i <= n, j <= precision.

    Each row is reduced against earlier pivot rows until its order is new,
    giving rows with strictly distinct orders (FullRank) or a vanishing row
    whose recorded combination is a null vector.
    """
    rows = _cleared(list(family))
    n = len(rows)
    if n == 0:
        raise ValueError("empty family")
    N = min(r.precision for r in rows)
    if precision is not None:
        N = min(N, precision)
    pivots: dict[int, tuple[list, list]] = {}
    for i, f in enumerate(rows):
        vec = list(f.values[:N])
        comb: list = [ZERO] * n
        comb[i] = mpq(1)
        while True:
            piv = next((k for k, v in enumerate(vec) if v), None)
            if piv is None:
                c = normalize_null_vector(comb)
                return NullVector(c)
            if piv not in pivots:
                pivots[piv] = (vec, comb)
                break
            pv, pc = pivots[piv]
            r = _div(vec[piv], pv[piv])
            vec = [a - r * b if b else a for a, b in zip(vec, pv)]
            comb = [a - r * b if b else a for a, b in zip(comb, pc)]
    return FullRank(tuple(sorted(k + 1 for k in pivots)))


def verify_null_vector(family, coeffs, precision: int | None = None) -> bool:
    rows = _cleared(list(family))
    if not any(coeffs):
        return False
    N = min(r.precision for r in rows)
    if precision is not None:
        N = min(N, precision)
    for n in range(N):
        s: Value = ZERO
        for c, r in zip(coeffs, rows):
            v = r.values[n]
            if c and v:
                s = s + c * v
        if s:
            return False
    return True


def square_rank_nonzero(matrix: list[list[Value]]) -> bool:
    """True if the square scalar matrix is nonsingular (plain elimination)."""
    A = [list(r) for r in matrix]
    n = len(A)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return False
        A[col], A[piv] = A[piv], A[col]
        for r in range(col + 1, n):
            if A[r][col]:
                f = _div(A[r][col], A[col][col])
                A[r] = [a - f * b if b else a for a, b in zip(A[r], A[col])]
    return True


def verify_pivots(family, pivots) -> bool:
    rows = _cleared(list(family))
    if len(pivots) != len(rows):
        return False
    return square_rank_nonzero([[r(p) for p in pivots] for r in rows])


# -- the decision procedure --------------------------------------------------


@dataclass
class DependenceConfig:
    precision: int = DEFAULT_PRECISION
    tuple_bound: int = DEFAULT_TUPLE_BOUND
    mode: str = "full"  # "full" or "walker"
    strict: bool = False  # exhausted tuple search -> Inconclusive
    log_fn: LogFn = field(default=scalar_log, repr=False)

    def __post_init__(self):
        if self.precision < 1 or self.tuple_bound < 1:
            raise ValueError("precision and tuple bound must be >= 1")
        if self.mode not in ("full", "walker"):
            raise ValueError(f"mode must be 'full' or 'walker', got {self.mode!r}")


@dataclass(frozen=True)
class GaussianPivots:
    pivots: tuple


@dataclass(frozen=True)
class Independent:
    certificate: AdmissibleTuple | GaussianPivots
    index: int | None
    value: Value | None
    precision: int
    tuples_checked: int


@dataclass(frozen=True)
class DependentUpToPrecision:
    null_vector: tuple
    precision: int
    tuples_checked: int


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    precision: int
    tuples_checked: int


DependenceVerdict = Independent | DependentUpToPrecision | Inconclusive


def candidate_tuples(n: int, bound: int, mode: str) -> list[AdmissibleTuple]:
    """Distinct-entry representatives in search order."""
    if mode == "walker":
        tuples = enumerate_divisor_closed(n, bound)
    else:
        tuples = enumerate_admissible(n, bound)
    return search_order(distinct_row_sets(tuples))


class CertificateError(AssertionError):
    """A certificate failed its independent re-verification."""


def scan_wronskians(family, config: DependenceConfig, stop_at_first: bool = True):
    """Evaluate generalized Wronskians in search order.

    Yields (tuple, determinant numerator) pairs; stops after the first
    nonzero one when ``stop_at_first``.
    """
    n = len(family)
    N = family_precision(family)
    cache = _RowCache(family, config.log_fn)
    for t in candidate_tuples(n, config.tuple_bound, config.mode):
        if N // max(t.entries) == 0:
            break
        W = cache.matrix([("m", m) for m in t.entries])
        det = det_arith(W.rows)
        yield t, det, W
        if stop_at_first and not det.is_zero():
            return


def test_dependence(family, config: DependenceConfig | None = None) -> DependenceVerdict:
    """Decide linear dependence of a family over the scalars.

    Certificates are re-verified by an independent computation before being
    returned; a failed re-verification raises CertificateError.
    """
    config = config or DependenceConfig()
    family = list(family)
    if not family:
        raise ValueError("empty family")
    N = min(config.precision, family_precision(family))
    family = truncate_family(family, N)
    checked = 0
    for t, det, W in scan_wronskians(family, config):
        checked += 1
        o = af_ord(det)
        if isinstance(o, Known):
            value = det(o.n)
            rows = W.truncated()
            if len(rows) <= 6:
                again = det_coefficient_leibniz(rows, o.n)
            else:
                again = det_arith([list(c) for c in zip(*rows)])(o.n)
            if again != value or not again:
                raise CertificateError(f"determinant coefficient for {t} did not re-verify")
            return Independent(t, o.n, value, N, checked)
    g = gaussian_null_vector(family, N)
    if isinstance(g, NullVector):
        if not verify_null_vector(family, g.coeffs, N):
            raise CertificateError(f"null vector {g.coeffs} does not annihilate the family")
        return DependentUpToPrecision(g.coeffs, N, checked)
    if not verify_pivots(family, g.pivots):
        raise CertificateError(f"pivot columns {g.pivots} are not of full rank")
    if config.strict:
        return Inconclusive(
            f"no nonzero generalized Wronskian with entries <= {config.tuple_bound} "
            f"at precision {N}; elimination finds pivots {g.pivots}",
            N,
            checked,
        )
    log.info("tuple search exhausted; independence certified by elimination pivots %s", g.pivots)
    return Independent(GaussianPivots(g.pivots), None, None, N, checked)


test_dependence.__test__ = False


@dataclass
class AllToLogReport:
    all_generalized_vanish: bool
    log_wronskian_vanishes: bool
    first_nonzero_tuple: AdmissibleTuple | None
    tuples_checked: int
    precision: int

    @property
    def implication_holds(self) -> bool:
        return (not self.all_generalized_vanish) or self.log_wronskian_vanishes


def check_all_to_log(
    family, config: DependenceConfig | None = None, exhaustive: bool = False
) -> AllToLogReport:
    """Evaluate the generalized Wronskians within bounds and the
    log-Wronskian, reporting whether "all vanish => log-Wronskian vanishes"
    holds in the window.

    With ``exhaustive`` every admissible tuple is evaluated, including row
    permutations and repeated rows; otherwise one tuple per entry set.
    """
    config = config or DependenceConfig()
    family = list(family)
    N = min(config.precision, family_precision(family))
    family = truncate_family(family, N)
    first = None
    checked = 0
    if exhaustive:
        cache = _RowCache(family, config.log_fn)
        base = (
            enumerate_divisor_closed(len(family), config.tuple_bound)
            if config.mode == "walker"
            else enumerate_admissible(len(family), config.tuple_bound)
        )
        for t in search_order(base):
            if N // max(t.entries) == 0:
                break
            det = det_arith(cache.matrix([("m", m) for m in t.entries]).rows)
            checked += 1
            if first is None and not det.is_zero():
                first = t
    else:
        for t, det, _ in scan_wronskians(family, config, stop_at_first=False):
            checked += 1
            if first is None and not det.is_zero():
                first = t
    lw = _numerator(log_wronskian(family, log_fn=config.log_fn))
    return AllToLogReport(first is None, lw.is_zero(), first, checked, N)


def verdict_to_dict(v: DependenceVerdict, mode: str) -> dict:
    """Report JSON for a verdict."""
    if isinstance(v, Independent):
        if isinstance(v.certificate, GaussianPivots):
            cert = {"kind": "gaussian-pivots", "pivots": list(v.certificate.pivots)}
        else:
            cert = {
                "kind": "wronskian",
                "tuple": list(v.certificate.entries),
                "index": v.index,
                "value": str(v.value),
            }
        name = "independent"
    elif isinstance(v, DependentUpToPrecision):
        cert = {"nullVector": [str(c) for c in v.null_vector]}
        name = "dependent-up-to-precision"
    else:
        cert = {"reason": v.reason}
        name = "inconclusive"
    return {
        "verdict": name,
        "certificate": cert,
        "precision": v.precision,
        "tuplesChecked": v.tuples_checked,
        "mode": mode,
    }
