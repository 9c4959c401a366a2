import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from arithwron.arithfn import ArithFn, af_basis, af_zero
from arithwron.derivations import Basic, Log, Monomial, OmegaWeighted
from arithwron.errors import UncertifiedNonzero
from arithwron.fraction import (
    FracElem,
    InKernelConstant,
    NonConstantKernelElement,
    NotInKernel,
    frac_derive,
    kernel_probe,
    kernel_probe_log,
)
from arithwron.scalar import symbol

from conftest import arithfns, nonzero_rationals

N = 64
L = {p: symbol(p) for p in (2, 3, 5, 7)}


def e(n, prec=N):
    return af_basis(n, prec)


def frac(a, b):
    return FracElem(e(a), e(b))


def test_arithmetic_examples():
    assert frac(2, 1) * frac(3, 1) == frac(6, 1)
    assert frac(2, 3) / frac(2, 3) == frac(1, 1)
    assert frac(2, 4).norm() == 2
    assert frac(2, 3) + frac(2, 3) == FracElem(e(2).scale(2), e(3))


def test_zero_denominator_rejected():
    with pytest.raises(UncertifiedNonzero):
        FracElem(e(1), af_zero(N))
    with pytest.raises(UncertifiedNonzero):
        frac(1, 1) / FracElem(af_zero(N))


@given(arithfns(precision=24), arithfns(precision=24), nonzero_rationals)
def test_cross_multiplication_equality(f, g, c):
    g = g + ArithFn.from_terms({1: c}, 24) - ArithFn.from_terms({1: g(1)}, 24)
    a = FracElem(f * g, g * g)
    assert a == FracElem(f, g)
    assert a - FracElem(f, g) == FracElem(af_zero(24))


@pytest.mark.parametrize("p,q", [(2, 3), (3, 2), (2, 5), (5, 7), (3, 7)])
def test_omega_kills_prime_ratio(p, q):
    W = max(64, p * q, q * q)
    a = FracElem(e(p, W), e(q, W))
    assert frac_derive(OmegaWeighted(), a).is_zero()


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (2, 7)])
def test_log_derivative_of_prime_ratio(p, q):
    a = frac(p, q)
    d = frac_derive(Log(), a)
    assert d == a * (L[p] - L[q])
    assert not d.is_zero()


@pytest.mark.parametrize("op", [Log(), OmegaWeighted(), Basic(2), Monomial(6)])
@given(c=nonzero_rationals)
def test_constants_in_every_kernel(op, c):
    g = ArithFn.from_terms({1: 2, 2: -1, 3: mpq(1, 2)}, N)
    assert frac_derive(op, FracElem(g.scale(c), g)).is_zero()


def test_quotient_rule_single_step():
    f = ArithFn.from_terms({2: 1, 3: 4}, N)
    g = ArithFn.from_terms({1: 1, 2: 1}, N)
    d = frac_derive(Log(), FracElem(f, g))
    from arithwron.derivations import apply_log

    expected = FracElem(apply_log(f) * g - f * apply_log(g), g * g)
    assert d == expected


def test_composite_matches_iterated():
    a = FracElem(ArithFn.from_terms({4: 1, 6: 2}, N), ArithFn.from_terms({1: 1, 3: 1}, N))
    once = frac_derive(Basic(2), frac_derive(Basic(3), a))
    assert frac_derive(Monomial(6), a) == once


def test_probe_examples():
    assert kernel_probe_log(frac(1, 1)) == InKernelConstant(1)
    assert kernel_probe_log(FracElem(e(2).scale(3), e(2))) == InKernelConstant(3)
    assert isinstance(kernel_probe_log(frac(2, 3)), NotInKernel)
    # the Omega derivation does not detect the non-constant e_2/e_3
    W = 64
    r = kernel_probe(OmegaWeighted(), FracElem(e(2, W), e(3, W)))
    assert r == NonConstantKernelElement(2, 3)


@given(st.lists(nonzero_rationals, min_size=1, max_size=3))
def test_probe_finds_symbolic_constant(cs):
    c = sum((x * L[p] for x, p in zip(cs, (2, 3, 5))), mpq(0)) + 1
    g = ArithFn.from_terms({1: 1, 4: -2, 9: 3}, N)
    r = kernel_probe_log(FracElem(g.scale(c), g))
    assert r == InKernelConstant(c)
