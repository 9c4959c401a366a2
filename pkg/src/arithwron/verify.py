"""Property suites run by ``arithwron verify`` and by the acceptance tests.

Each check draws a seeded corpus, compares library results against an
independent route where one exists, and returns a :class:`CheckResult`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .arithfn import (
    ArithFn,
    Known,
    PowerSeriesPoly,
    af_basis,
    af_convolve,
    af_invert,
    af_norm,
    af_ord,
    from_power_series,
)
from .corpus import (
    independent_family,
    mixed_family,
    planted_family,
    random_arithfn,
    random_rational,
    random_with_ord,
)
from .derivations import (
    Log,
    OmegaWeighted,
    apply_basic,
    apply_log,
    apply_omega,
    commutator_apply,
    partial_sum_log,
)
from .errors import NonUnit
from .fraction import (
    FracElem,
    InKernelConstant,
    NonConstantKernelElement,
    NotInKernel,
    frac_derive,
    kernel_probe,
    kernel_probe_log,
)
from .ntheory import factorize, nth_prime, primes_up_to
from .scalar import ZERO, scalar_log, symbol
from .wronskian import (
    AdmissibleTuple,
    DependenceConfig,
    FullRank,
    Independent,
    NullVector,
    check_all_to_log,
    gaussian_null_vector,
    generalized_wronskian,
    log_wronskian,
    scan_wronskians,
    test_dependence,
    verify_null_vector,
)

DEFAULT_SEED = 20240611


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seed: int | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        ok = self.cases - len(self.failures)
        seed = f" seed={self.seed}" if self.seed is not None else ""
        extra = f" ({'; '.join(self.notes)})" if self.notes else ""
        return f"{status} {self.name}: {ok}/{self.cases}{seed}{extra}"


# -- ring ---------------------------------------------------------------------


def check_ring(seed: int = DEFAULT_SEED, count: int = 500, precision: int = 64) -> CheckResult:
    res = CheckResult("ring", seed=seed)
    rng = random.Random(seed)
    e1 = af_basis(1, precision)
    for k in range(count):
        res.cases += 1
        of, og = rng.randint(1, 8), rng.randint(1, 8)
        f = random_with_ord(rng, precision, of, rng.randint(0, 12))
        g = random_with_ord(rng, precision, og, rng.randint(0, 12))
        h = random_arithfn(rng, precision, rng.randint(1, 10))
        tag = f"case {k}"
        fg = af_convolve(f, g)
        # ord multiplicativity and the boundary value
        if of * og <= precision:
            if af_ord(fg) != Known(of * og):
                res.fail(f"{tag}: ord(f*g) = {af_ord(fg)} != {of * og}")
            elif fg(of * og) != f(of) * g(og):
                res.fail(f"{tag}: (f*g)(ord f ord g) != f(ord f) g(ord g)")
            if fg.is_zero():
                res.fail(f"{tag}: zero divisor in window")
        # ultrametric inequality, including forced cancellation at equal orders
        g2 = g if rng.random() < 0.5 else (g - f.scale(g(og) / f(of)) if of == og else g)
        s = f + g2
        nf, ng, ns = af_norm(f), af_norm(g2), af_norm(s)
        if nf is not None and ng is not None and ns is not None and ns > max(nf, ng):
            res.fail(f"{tag}: ultrametric violated {ns} > max({nf}, {ng})")
        if af_convolve(f, g) != af_convolve(g, f):
            res.fail(f"{tag}: convolution not commutative")
        if af_convolve(af_convolve(f, g), h) != af_convolve(f, af_convolve(g, h)):
            res.fail(f"{tag}: convolution not associative")
        if af_convolve(f, g + h) != af_convolve(f, g) + af_convolve(f, h):
            res.fail(f"{tag}: convolution not distributive")
        if af_convolve(e1, f) != f:
            res.fail(f"{tag}: e_1 is not the identity")
        # invertible iff f(1) != 0
        for x in (f, g):
            if x(1):
                if af_convolve(x, af_invert(x)) != e1:
                    res.fail(f"{tag}: x * x^-1 != e_1")
            else:
                try:
                    af_invert(x)
                    res.fail(f"{tag}: non-unit inverted")
                except NonUnit:
                    pass
    return res


# -- derivations ----------------------------------------------------------------


def ps_partial(ps: PowerSeriesPoly, i: int) -> PowerSeriesPoly:
    """d/dX_i of a polynomial, straight from the exponent vectors."""
    out = {}
    for exps, c in ps.terms.items():
        a = exps[i - 1]
        if a:
            e = list(exps)
            e[i - 1] -= 1
            out[tuple(e)] = c * a
    return PowerSeriesPoly(ps.num_vars, out)


def check_derivations(
    seed: int = DEFAULT_SEED, count: int = 200, oracle_count: int = 100, precision: int = 64
) -> CheckResult:
    res = CheckResult("derivations", seed=seed)
    rng = random.Random(seed)
    small_primes = primes_up_to(13)
    ops = [(f"d_{p}", (lambda p: lambda f: apply_basic(p, f))(p)) for p in small_primes]
    ops += [("dlog", apply_log), ("dOmega", apply_omega)]
    for k in range(count):
        res.cases += 1
        f = random_arithfn(rng, precision, rng.randint(1, 20))
        g = random_arithfn(rng, precision, rng.randint(1, 20))
        fg = af_convolve(f, g)
        for name, D in ops:
            lhs = D(fg)
            rhs = af_convolve(f, D(g)) + af_convolve(g, D(f))
            if lhs != rhs:
                res.fail(f"case {k}: Leibniz fails for {name}")
            if D(f + g) != D(f) + D(g):
                res.fail(f"case {k}: additivity fails for {name}")
        # unit criterion |d f| == |f| iff f(1) == 0, and kernel of d on A
        df = apply_log(f)
        if (af_norm(df) == af_norm(f)) != (not f(1)):
            res.fail(f"case {k}: unit criterion fails")
        if df.is_zero() != (f.support() == [1]):
            res.fail(f"case {k}: kernel of dlog on A is not the constants")
    for k in range(oracle_count):
        res.cases += 1
        m = rng.randint(1, 4)
        terms = {}
        for _ in range(rng.randint(1, 8)):
            exps = tuple(rng.randint(0, 3) for _ in range(m))
            terms[exps] = random_rational(rng)
        ps = PowerSeriesPoly(m, terms)
        f = from_power_series(ps, precision)
        i = rng.randint(1, m)
        p = nth_prime(i)
        if apply_basic(p, f) != from_power_series(ps_partial(ps, i), precision // p):
            res.fail(f"oracle case {k}: d_{p} disagrees with d/dX_{i}")
    return res


# -- partial sums, commutator, kernels --------------------------------------


def check_partial_sums(seed: int = DEFAULT_SEED, count: int = 100, precision: int = 64) -> CheckResult:
    """sum_{p | n} log(p) (e_p * d_p f)(n) == log(n) f(n) for all n <= precision,
    plus the finite form for partial sums over p <= P on P-smooth indices."""
    res = CheckResult("partial-sums", seed=seed)
    rng = random.Random(seed)
    for k in range(count):
        res.cases += 1
        f = random_arithfn(rng, precision)
        target = apply_log(f)
        s = partial_sum_log(precision, f)
        if s.precision != precision:
            res.fail(f"case {k}: partial sum lost precision ({s.precision})")
        for n in range(1, precision + 1):
            if s(n) != target(n):
                res.fail(f"case {k}: mismatch at n={n}: {s(n)} != {target(n)}")
                break
        P = rng.choice([2, 3, 5, 7, 11])
        sp = partial_sum_log(P, f)
        allowed = set(primes_up_to(P))
        for n in range(1, precision + 1):
            if all(p in allowed for p, _ in factorize(n)) and sp(n) != target(n):
                res.fail(f"case {k}: s_{P} disagrees at {P}-smooth n={n}")
                break
    return res


def check_commutator(seed: int = DEFAULT_SEED, count: int = 50, max_m: int = 12) -> CheckResult:
    """[d_m, d] = log(m) d_m on random f at precision 60*m."""
    res = CheckResult("commutator", seed=seed)
    rng = random.Random(seed)
    for m in range(1, max_m + 1):
        N = 60 * m
        for k in range(count):
            res.cases += 1
            f = random_arithfn(rng, N, rng.randint(1, 120))
            left, right = commutator_apply(m, f)
            if left != right or left.precision != N // m:
                res.fail(f"m={m} case {k}: commutator identity fails")
    return res


def check_log_kernel(seed: int = DEFAULT_SEED, count: int = 50, pairs: int = 10) -> CheckResult:
    """Kernel of dlog on fractions is the constants; dOmega's is larger."""
    res = CheckResult("log-kernel", seed=seed)
    rng = random.Random(seed)
    N = 64
    for k in range(count):
        res.cases += 1
        g = random_with_ord(rng, N, rng.choice([1, 1, 2, 3, 4, 6]), rng.randint(0, 8))
        c = random_rational(rng)
        if k % 5 == 4:
            c = c * symbol(2) + symbol(3)  # constants of the log-extension too
        a = FracElem(g.scale(c), g)
        r = kernel_probe_log(a)
        if not (isinstance(r, InKernelConstant) and r.value == c):
            res.fail(f"case {k}: constant {c} probed as {r}")
    plist = primes_up_to(31)
    chosen = []
    for p in plist:
        for q in plist:
            if p != q and len(chosen) < pairs:
                chosen.append((p, q))
    for p, q in chosen:
        res.cases += 1
        W = max(64, p * q, q * q)
        a = FracElem(af_basis(p, W), af_basis(q, W))
        r = kernel_probe_log(a)
        if not isinstance(r, NotInKernel):
            res.fail(f"e_{p}/e_{q}: log probe gave {r}")
        d = frac_derive(OmegaWeighted(), a)
        if not d.is_zero():
            res.fail(f"e_{p}/e_{q}: dOmega derivative is not zero")
        ro = kernel_probe(OmegaWeighted(), a)
        if not isinstance(ro, NonConstantKernelElement):
            res.fail(f"e_{p}/e_{q}: dOmega probe gave {ro}")
        expect = FracElem(a.num.scale(scalar_log(p) - scalar_log(q)), a.den)
        if frac_derive(Log(), a) != expect:
            res.fail(f"e_{p}/e_{q}: dlog derivative is not (L_p - L_q) e_p/e_q")
    return res


# -- dependence ---------------------------------------------------------------


def planted_corpus(seed: int, count: int = 100, precision: int = 64):
    rng = random.Random(seed)
    return [planted_family(rng, rng.randint(2, 4), precision) for _ in range(count)]


def independent_corpus(seed: int, count: int = 100, precision: int = 64):
    rng = random.Random(seed)
    return [independent_family(rng, rng.randint(1, 4), precision) for _ in range(count)]


def walker_corpus(seed: int, count: int = 50, precision: int = 64):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        if k % 2:
            out.append(planted_family(rng, 3, precision, rng.choice([12, 32, 64])).members)
        else:
            out.append(independent_family(rng, 3, precision))
    return out


def check_planted_dependence(
    seed: int = DEFAULT_SEED, count: int = 100, precision: int = 64, tuple_bound: int = 16
) -> CheckResult:
    """Planted relations: every generalized Wronskian and the log-Wronskian
    vanish in the window, and elimination finds a planted relation."""
    res = CheckResult("planted-dependence", seed=seed)
    cfg = DependenceConfig(precision=precision, tuple_bound=tuple_bound)
    total = 0
    for k, pf in enumerate(planted_corpus(seed, count, precision)):
        res.cases += 1
        rep = check_all_to_log(pf.members, cfg, exhaustive=True)
        total += rep.tuples_checked
        if not rep.all_generalized_vanish:
            res.fail(f"family {k}: generalized Wronskian {rep.first_nonzero_tuple} nonzero")
        if not rep.log_wronskian_vanishes:
            res.fail(f"family {k}: log-Wronskian does not vanish")
        g = gaussian_null_vector(pf.members, precision)
        if not isinstance(g, NullVector) or not verify_null_vector(pf.members, g.coeffs, precision):
            res.fail(f"family {k}: no verified null vector ({g})")
            continue
        if isinstance(gaussian_null_vector(pf.bases, precision), FullRank):
            # bases independent: the relation must kill the coefficient matrix
            for col in range(len(pf.bases)):
                if sum((c * row[col] for c, row in zip(g.coeffs, pf.coefficients)), ZERO):
                    res.fail(f"family {k}: null vector is not a planted relation")
                    break
    res.notes.append(f"{total} determinants")
    return res


def check_independent_certificates(
    seed: int = DEFAULT_SEED, count: int = 100, precision: int = 64, tuple_bound: int = 16
) -> CheckResult:
    """Independent families get a Wronskian certificate within the bound."""
    res = CheckResult("independence-certificates", seed=seed)
    cfg = DependenceConfig(precision=precision, tuple_bound=tuple_bound)
    for k, fam in enumerate(independent_corpus(seed, count, precision)):
        res.cases += 1
        v = test_dependence(fam, cfg)
        if not isinstance(v, Independent) or not isinstance(v.certificate, AdmissibleTuple):
            res.fail(f"family {k}: expected a Wronskian certificate, got {v}")
            continue
        w = generalized_wronskian(fam, v.certificate)
        if w(v.index) != v.value or not v.value:
            res.fail(f"family {k}: certificate does not re-verify")
        if any(w(n) for n in range(1, v.index)):
            res.fail(f"family {k}: certificate index is not the first nonzero")
    return res


def agreement_corpus(seed: int, precision: int = 64):
    fams = [pf.members for pf in planted_corpus(seed, 100, precision)]
    fams += independent_corpus(seed + 1, 100, precision)
    fams += walker_corpus(seed + 2, 50, precision)
    rng = random.Random(seed + 3)
    fams += [mixed_family(rng, rng.randint(1, 4), precision) for _ in range(60)]
    return fams


def check_oracle_agreement(seed: int = DEFAULT_SEED, precision: int = 64, tuple_bound: int = 16) -> CheckResult:
    """A nonzero Wronskian coefficient and a verified null vector never
    occur together."""
    res = CheckResult("oracle-agreement", seed=seed)
    cfg = DependenceConfig(precision=precision, tuple_bound=tuple_bound)
    blind = 0
    for k, fam in enumerate(agreement_corpus(seed, precision)):
        res.cases += 1
        nonzero = None
        for t, det, _ in scan_wronskians(fam, cfg):
            if not det.is_zero():
                nonzero = t
        g = gaussian_null_vector(fam, precision)
        dependent = isinstance(g, NullVector) and verify_null_vector(fam, g.coeffs, precision)
        if nonzero is not None and dependent:
            res.fail(f"family {k}: Wronskian {nonzero} nonzero but null vector {g.coeffs}")
        if nonzero is None and not dependent:
            blind += 1
        v = test_dependence(fam, cfg)
        if isinstance(v, Independent) == dependent:
            res.fail(f"family {k}: verdict {type(v).__name__} contradicts elimination")
    res.notes.append(f"{blind} independent families without an in-window Wronskian certificate")
    return res


def check_walker(seed: int = DEFAULT_SEED, count: int = 50, precision: int = 64, tuple_bound: int = 16) -> CheckResult:
    """n = 3: all divisor-closed Wronskians vanish iff elimination finds a relation."""
    res = CheckResult("walker", seed=seed)
    cfg = DependenceConfig(precision=precision, tuple_bound=tuple_bound, mode="walker")
    dep = 0
    for k, fam in enumerate(walker_corpus(seed, count, precision)):
        res.cases += 1
        vanish = all(det.is_zero() for _, det, _ in scan_wronskians(fam, cfg, stop_at_first=False))
        g = gaussian_null_vector(fam, precision)
        dependent = isinstance(g, NullVector)
        dep += dependent
        if vanish != dependent:
            res.fail(f"family {k}: divisor-closed vanishing={vanish} but dependent={dependent}")
    res.notes.append(f"{dep} dependent, {res.cases - dep} independent")
    return res


def vandermonde_log_wronskian(indices, precision: int = 64) -> ArithFn:
    """log-Wronskian of (e_a, e_b, ...) from the Vandermonde factorization:
    prod_{i<j} (log b_j - log b_i) * e_{prod b}."""
    coeff = mpq(1)
    idx = list(indices)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            coeff = (scalar_log(idx[j]) - scalar_log(idx[i])) * coeff
    prod = 1
    for b in idx:
        prod *= b
    return af_basis(prod, precision).scale(coeff)


def check_log_wronskian_value(precision: int = 64) -> CheckResult:
    res = CheckResult("log-wronskian-value")
    res.cases += 1
    fam = [af_basis(n, precision) for n in (1, 2, 3)]
    direct = log_wronskian(fam)
    L2, L3 = symbol(2), symbol(3)
    stated = af_basis(6, precision).scale(L2 * L3 * (L3 - L2))
    if direct != stated:
        res.fail(f"direct determinant {direct!r} != L2*L3*(L3-L2) e_6")
    if vandermonde_log_wronskian((1, 2, 3), precision) != stated:
        res.fail("Vandermonde factorization disagrees with L2*L3*(L3-L2) e_6")
    return res


SUITES = {
    "ring": [check_ring],
    "derivations": [check_derivations],
    "lemmas": [check_partial_sums, check_commutator, check_log_kernel],
    "theorem": [check_planted_dependence, check_independent_certificates, check_oracle_agreement, check_log_wronskian_value],
    "walker": [check_walker],
}


def run_suite(name: str, seed: int = DEFAULT_SEED, precision: int = 64, tuple_bound: int = 16) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        for check in SUITES[n]:
            kwargs = {}
            code = check.__code__.co_varnames[: check.__code__.co_argcount]
            if "seed" in code:
                kwargs["seed"] = seed
            if "precision" in code and check not in (check_commutator,):
                kwargs["precision"] = precision
            if "tuple_bound" in code:
                kwargs["tuple_bound"] = tuple_bound
            out.append(check(**kwargs))
    return out
