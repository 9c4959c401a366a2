"""Seeded random generators for the property and verification suites."""

from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .arithfn import ArithFn
from .fraction import FracElem
from .scalar import ZERO
from .wronskian import FullRank, gaussian_null_vector


def random_rational(rng: random.Random, num: int = 9, den: int = 4):
    """Nonzero rational with |numerator| <= num and denominator <= den."""
    while True:
        a = rng.randint(-num, num)
        if a:
            return mpq(a, rng.randint(1, den))


def random_arithfn(
    rng: random.Random,
    precision: int,
    nonzeros: int | None = None,
    lo: int = 1,
    hi: int | None = None,
    num: int = 9,
    den: int = 4,
) -> ArithFn:
    """Random function with ``nonzeros`` nonzero values at indices in [lo, hi]."""
    hi = precision if hi is None else min(hi, precision)
    if nonzeros is None:
        nonzeros = rng.randint(1, max(1, (hi - lo + 1) // 2))
    nonzeros = min(nonzeros, hi - lo + 1)
    vals = [ZERO] * precision
    for n in rng.sample(range(lo, hi + 1), nonzeros):
        vals[n - 1] = random_rational(rng, num, den)
    return ArithFn._raw(vals)


def random_with_ord(rng: random.Random, precision: int, ord_: int, extra: int = 4) -> ArithFn:
    """Random function whose first nonzero value sits at ``ord_``."""
    vals = [ZERO] * precision
    vals[ord_ - 1] = random_rational(rng)
    if ord_ < precision:
        for n in rng.sample(range(ord_ + 1, precision + 1), min(extra, precision - ord_)):
            vals[n - 1] = random_rational(rng)
    return ArithFn._raw(vals)


def random_unit(rng: random.Random, precision: int, nonzeros: int = 6) -> ArithFn:
    return random_with_ord(rng, precision, 1, nonzeros)


def random_fraction(rng: random.Random, precision: int) -> FracElem:
    """Fraction whose denominator has a small visible order."""
    den = random_with_ord(rng, precision, rng.choice([1, 1, 2, 3]), 3)
    num = random_arithfn(rng, precision, rng.randint(1, 6))
    return FracElem(num, den)


@dataclass
class PlantedFamily:
    members: list
    coefficients: list  # members[i] = sum_k coefficients[i][k] * bases[k]
    bases: list


def planted_family(
    rng: random.Random, n: int, precision: int, support_hi: int | None = None
) -> PlantedFamily:
    """n members spanned by fewer than n random bases, so a rational relation
    among them is guaranteed."""
    if n < 2:
        raise ValueError("a planted relation needs n >= 2")
    r = rng.randint(1, n - 1)
    hi = support_hi or precision
    bases = [random_arithfn(rng, precision, rng.randint(1, 6), 1, hi) for _ in range(r)]
    coeffs = []
    for _ in range(n):
        row = [mpq(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(r)]
        coeffs.append(row)
    members = []
    for row in coeffs:
        acc = ArithFn._raw([ZERO] * precision)
        for c, b in zip(row, bases):
            if c:
                acc = acc + b.scale(c)
        members.append(acc)
    return PlantedFamily(members, coeffs, bases)


def independent_family(
    rng: random.Random, n: int, precision: int, support_hi: int = 6
) -> list[ArithFn]:
    """n finitely supported members (support inside 1..support_hi) certified
    independent by exact elimination."""
    while True:
        fam = [random_arithfn(rng, precision, rng.randint(1, 4), 1, support_hi) for _ in range(n)]
        if isinstance(gaussian_null_vector(fam, precision), FullRank):
            return fam


def mixed_family(rng: random.Random, n: int, precision: int) -> list[ArithFn]:
    """Unconstrained random family; dependence is whatever it turns out to be."""
    kind = rng.random()
    if kind < 0.3 and n >= 2:
        return planted_family(rng, n, precision, 16).members
    hi = rng.choice([8, 16, 32])
    return [random_arithfn(rng, precision, rng.randint(1, 3), 1, hi) for _ in range(n)]
