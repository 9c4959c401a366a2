import itertools
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from arithwron.arithfn import ArithFn, af_basis, af_zero
from arithwron.corpus import independent_family, planted_family
from arithwron.derivations import apply_log, apply_monomial
from arithwron.errors import NonAdmissibleTuple
from arithwron.fraction import FracElem
from arithwron.ntheory import big_omega
from arithwron.scalar import ZERO, symbol
from arithwron.wronskian import (
    AdmissibleTuple,
    DependenceConfig,
    DependentUpToPrecision,
    FullRank,
    GaussianPivots,
    Inconclusive,
    Independent,
    NullVector,
    check_all_to_log,
    det_arith,
    enumerate_admissible,
    enumerate_divisor_closed,
    gaussian_null_vector,
    generalized_wronskian,
    log_wronskian,
    search_order,
    test_dependence as decide,
    verdict_to_dict,
    verify_null_vector,
)

from conftest import arithfns, nonzero_rationals

L2, L3 = symbol(2), symbol(3)


def e(n, prec=64):
    return af_basis(n, prec)


def leibniz_det(rows):
    """Permutation expansion, entries truncated to a common window."""
    n = len(rows)
    N = min(x.precision for r in rows for x in r)
    rows = [[x.truncate(N) for x in r] for r in rows]
    acc = af_zero(N)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        acc = acc - term if inv % 2 else acc + term
    return acc


def wronskian_oracle(family, tuple_):
    return leibniz_det([[apply_monomial(m, f) for f in family] for m in tuple_])


# -- tuples ------------------------------------------------------------------


def test_enumeration_examples():
    assert [t.entries for t in enumerate_admissible(1, 7)] == [(1,)]
    assert [t.entries for t in enumerate_admissible(2, 5)] == [(1, 1), (1, 2), (1, 3), (1, 5)]
    third = {t.entries[2] for t in enumerate_admissible(3, 4)}
    assert third == {1, 2, 3, 4}
    assert [t.entries for t in enumerate_divisor_closed(1, 9)] == [(1,)]


def test_divisor_closed_shapes():
    shapes = {t.entries for t in enumerate_divisor_closed(3, 9)}
    assert (1, 2, 6) not in shapes
    for a, b, c in shapes:
        assert a == 1 and big_omega(b) == 1
        assert c == b * b or (big_omega(c) == 1 and c != b)
    assert {(1, 2, 4), (1, 3, 9), (1, 2, 3), (1, 3, 2)} <= shapes


@given(st.integers(1, 4), st.integers(1, 12))
def test_enumeration_matches_definition(n, B):
    got = {t.entries for t in enumerate_admissible(n, B)}
    brute = {
        t
        for t in itertools.product(range(1, B + 1), repeat=n)
        if all(big_omega(m) <= i for i, m in enumerate(t))
    }
    assert got == brute


def test_search_order():
    ts = search_order(enumerate_admissible(2, 5))
    assert [t.entries for t in ts] == [(1, 1), (1, 2), (1, 3), (1, 5)]


def test_admissibility_messages():
    with pytest.raises(NonAdmissibleTuple, match="m_1 must be 1"):
        AdmissibleTuple((2, 1))
    with pytest.raises(NonAdmissibleTuple, match=r"Ω\(6\) = 2 > 1"):
        AdmissibleTuple((1, 6))


# -- determinants ------------------------------------------------------------


def test_wronskian_examples():
    assert generalized_wronskian([e(1), e(2)], (1, 2)) == e(1, 32)
    f = ArithFn.from_terms({1: 1, 2: 3, 6: -2}, 64)
    for t in enumerate_admissible(2, 7):
        assert generalized_wronskian([f, f.scale(mpq(5, 2))], t).is_zero()
        assert generalized_wronskian([f, f], t).is_zero()
    c = e(1).scale(mpq(-7, 3))
    assert generalized_wronskian([c], (1,)) == c


def test_three_basis_elements():
    fam = [e(1, 32), e(2, 32), e(3, 32)]
    assert any(not generalized_wronskian(fam, t).is_zero() for t in enumerate_divisor_closed(3, 9))
    assert log_wronskian(fam) == e(6, 32).scale(L2 * L3 * (L3 - L2))


@given(st.lists(arithfns(precision=36), min_size=2, max_size=3), st.data())
def test_matches_permutation_expansion(family, data):
    t = data.draw(st.sampled_from(enumerate_admissible(len(family), 4)))
    assert generalized_wronskian(family, t) == wronskian_oracle(family, t.entries)


@given(arithfns(precision=30), arithfns(precision=30), arithfns(precision=30), nonzero_rationals)
def test_multilinear_and_antisymmetric(f, g, h, c):
    t = (1, 2)
    w = lambda a, b: generalized_wronskian([a, b], t)  # noqa: E731
    assert w(f + h.scale(c), g) == w(f, g) + w(h, g).scale(c)
    assert w(g, f) == w(f, g).scale(-1)


def test_det_arith_small_cases():
    a, b = ArithFn.from_terms({1: 2, 3: 1}, 20), ArithFn.from_terms({2: -1}, 20)
    assert det_arith([[a]]) == a
    assert det_arith([[a, b], [b, a]]) == a * a - b * b
    rng = random.Random(7)
    for n in (3, 4):
        rows = [[ArithFn.from_terms({rng.randint(1, 6): rng.randint(-3, 3)}, 24) for _ in range(n)] for _ in range(n)]
        assert det_arith(rows) == leibniz_det(rows)


def test_log_wronskian_matches_expansion():
    fam = [ArithFn.from_terms({1: 1, 2: 2}, 40), ArithFn.from_terms({3: 1, 4: -1}, 40)]
    rows = [fam, [apply_log(f) for f in fam]]
    assert log_wronskian(fam) == leibniz_det(rows)


def test_fraction_family():
    a = FracElem(e(2), e(1) + e(3))
    b = FracElem(e(1), e(1) + e(2))
    w = generalized_wronskian([a, b], (1, 2))
    assert isinstance(w, FracElem) and not w.is_zero()
    # proportional fractions: every Wronskian vanishes
    c = FracElem(e(2).scale(3), e(1) + e(3))
    for t in enumerate_admissible(2, 5):
        assert generalized_wronskian([a, c], t).is_zero()
    v = decide([a, c])
    assert isinstance(v, DependentUpToPrecision) and v.null_vector == (3, -1)


# -- elimination oracle -----------------------------------------------------


def test_gaussian_examples():
    assert gaussian_null_vector([e(2), e(2).scale(3)]) == NullVector((3, -1))
    fam = [e(1) + e(2), e(2) + e(3), e(1) + e(2).scale(2) + e(3)]
    assert gaussian_null_vector(fam) == NullVector((1, 1, -1))
    assert gaussian_null_vector([e(1), e(2), e(4)]) == FullRank((1, 2, 4))
    assert gaussian_null_vector([e(1), af_zero(64), e(3)]) == NullVector((0, 1, 0))


def test_symbolic_null_vector():
    fam = [e(2).scale(L2), e(2).scale(L3)]
    g = gaussian_null_vector(fam)
    assert isinstance(g, NullVector) and verify_null_vector(fam, g.coeffs)


@pytest.mark.parametrize("seed", range(10))
def test_planted_relations_found(seed):
    pf = planted_family(random.Random(seed), 3, 48)
    g = gaussian_null_vector(pf.members)
    assert isinstance(g, NullVector) and verify_null_vector(pf.members, g.coeffs)
    assert check_all_to_log(pf.members, DependenceConfig(precision=48, tuple_bound=8)).all_generalized_vanish


# -- decision procedure ------------------------------------------------------


def test_decide_examples():
    v = decide([e(2), e(2).scale(3)])
    assert isinstance(v, DependentUpToPrecision) and v.null_vector == (3, -1)
    v = decide([e(1), e(2)])
    assert isinstance(v, Independent) and v.certificate == AdmissibleTuple((1, 2))
    fam = [e(1) + e(2), e(2) + e(3), e(1) + e(2).scale(2) + e(3)]
    assert decide(fam).null_vector == (1, 1, -1)


def test_all_to_log_examples():
    r = check_all_to_log([e(2), e(2).scale(3)])
    assert r.all_generalized_vanish and r.log_wronskian_vanishes
    r = check_all_to_log([e(1), e(2)])
    assert not r.all_generalized_vanish and r.implication_holds
    r = check_all_to_log([e(1)])
    assert r.first_nonzero_tuple == AdmissibleTuple((1,))
    assert log_wronskian([e(1)]) == e(1)


def test_exhausted_search():
    fam = [e(9), e(12)]
    v = decide(fam)
    assert isinstance(v.certificate, GaussianPivots) and v.certificate.pivots == (9, 12)
    strict = decide(fam, DependenceConfig(strict=True))
    assert isinstance(strict, Inconclusive)
    assert verdict_to_dict(strict, "full")["verdict"] == "inconclusive"


def test_certificate_is_minimal_in_search_order():
    fam = independent_family(random.Random(3), 3, 64)
    v = decide(fam)
    assert isinstance(v.certificate, AdmissibleTuple)
    for t in search_order(enumerate_admissible(3, 16)):
        if t == v.certificate:
            break
        assert generalized_wronskian(fam, t).is_zero()
    w = wronskian_oracle(fam, v.certificate.entries)
    assert w(v.index) == v.value
    assert all(w(n) == ZERO for n in range(1, v.index))


def test_walker_mode_tuples():
    fam = [e(1), e(2), e(3)]
    v = decide(fam, DependenceConfig(mode="walker"))
    assert isinstance(v, Independent)
    assert v.certificate in enumerate_divisor_closed(3, 16)


def test_report_shape():
    d = verdict_to_dict(decide([e(1), e(2)]), "full")
    assert d == {
        "verdict": "independent",
        "certificate": {"kind": "wronskian", "tuple": [1, 2], "index": 1, "value": "1"},
        "precision": 64,
        "tuplesChecked": 1,
        "mode": "full",
    }
