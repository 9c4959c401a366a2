"""JSON forms of arithmetic functions, power series, fractions and families."""

from __future__ import annotations

import json
import logging
from typing import Any

from .arithfn import ArithFn, PowerSeriesPoly, from_power_series
from .errors import ArithWronError, ScalarParseError
from .fraction import FracElem
from .scalar import Scalar, Value, parse_scalar

log = logging.getLogger(__name__)

FIELDS = ("rational", "log-extension")


class SchemaError(ArithWronError, ValueError):
    """Input that does not match the documented JSON schemas.  ``path`` locates
    the offending node, e.g. ``members[1].terms[0].n``."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path or '<root>'}: {msg}")
        self.path = path


def _coeff_out(c: Value) -> str:
    return str(c)


def _coeff_in(raw, path: str, allow_symbols: bool = True) -> Value:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise SchemaError(path, f"coefficient must be a string like \"3/2\", got {raw!r}")
    try:
        v = parse_scalar(str(raw))
    except ScalarParseError as exc:
        raise SchemaError(path, str(exc)) from None
    if isinstance(v, Scalar) and not allow_symbols:
        raise SchemaError(path, f"symbolic coefficient {raw!r} in a rational family")
    return v


def _int_field(obj: dict, key: str, path: str, minimum: int = 1) -> int:
    if key not in obj:
        raise SchemaError(path, f"missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise SchemaError(f"{path}.{key}" if path else key, f"expected an integer >= {minimum}, got {v!r}")
    return v


def _list_field(obj: dict, key: str, path: str) -> list:
    v = obj.get(key)
    if not isinstance(v, list):
        raise SchemaError(path, f"field {key!r} must be a list")
    return v


def _dot(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


# -- ArithFn -----------------------------------------------------------------


def arithfn_to_json(f: ArithFn) -> dict:
    return {
        "precision": f.precision,
        "terms": [{"n": n, "coeff": _coeff_out(c)} for n, c in f.terms().items()],
    }


def arithfn_from_json(obj: Any, path: str = "", allow_symbols: bool = True) -> ArithFn:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    N = _int_field(obj, "precision", path)
    terms = {}
    for i, t in enumerate(_list_field(obj, "terms", path)):
        tp = f"{_dot(path, 'terms')}[{i}]"
        if not isinstance(t, dict):
            raise SchemaError(tp, "expected an object")
        n = _int_field(t, "n", tp)
        if n > N:
            raise SchemaError(f"{tp}.n", f"index {n} exceeds precision {N}")
        if n in terms:
            raise SchemaError(f"{tp}.n", f"duplicate index {n}")
        if "coeff" not in t:
            raise SchemaError(tp, "missing field 'coeff'")
        terms[n] = _coeff_in(t["coeff"], f"{tp}.coeff", allow_symbols)
    return ArithFn.from_terms(terms, N)


# -- PowerSeriesPoly ---------------------------------------------------------


def powerseries_to_json(ps: PowerSeriesPoly) -> dict:
    return {
        "vars": ps.num_vars,
        "terms": [
            {"exps": list(e), "coeff": _coeff_out(c)} for e, c in sorted(ps.terms.items())
        ],
    }


def powerseries_from_json(obj: Any, path: str = "", allow_symbols: bool = True) -> PowerSeriesPoly:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    m = _int_field(obj, "vars", path)
    terms = {}
    for i, t in enumerate(_list_field(obj, "terms", path)):
        tp = f"{_dot(path, 'terms')}[{i}]"
        if not isinstance(t, dict):
            raise SchemaError(tp, "expected an object")
        exps = t.get("exps")
        if (
            not isinstance(exps, list)
            or len(exps) != m
            or any(isinstance(e, bool) or not isinstance(e, int) or e < 0 for e in exps)
        ):
            raise SchemaError(f"{tp}.exps", f"expected {m} non-negative integers, got {exps!r}")
        if tuple(exps) in terms:
            raise SchemaError(f"{tp}.exps", f"duplicate exponent vector {exps}")
        if "coeff" not in t:
            raise SchemaError(tp, "missing field 'coeff'")
        terms[tuple(exps)] = _coeff_in(t["coeff"], f"{tp}.coeff", allow_symbols)
    return PowerSeriesPoly(m, terms)


# -- FracElem ----------------------------------------------------------------


def frac_to_json(a: FracElem) -> dict:
    return {"num": arithfn_to_json(a.num), "den": arithfn_to_json(a.den)}


def frac_from_json(obj: Any, path: str = "", allow_symbols: bool = True) -> FracElem:
    if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
        raise SchemaError(path, "expected an object with 'num' and 'den'")
    num = arithfn_from_json(obj["num"], _dot(path, "num"), allow_symbols)
    den = arithfn_from_json(obj["den"], _dot(path, "den"), allow_symbols)
    if den.is_zero():
        raise SchemaError(_dot(path, "den"), f"denominator vanishes up to precision {den.precision}")
    return FracElem(num, den)


# -- members and families ----------------------------------------------------


def member_from_json(obj: Any, path: str, precision: int, allow_symbols: bool = True):
    """ArithFn, FracElem or (converted) PowerSeriesPoly record.

    Power series carry no precision of their own and are converted at
    ``precision``.
    """
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if "num" in obj:
        return frac_from_json(obj, path, allow_symbols)
    if "vars" in obj:
        return from_power_series(powerseries_from_json(obj, path, allow_symbols), precision)
    if "precision" in obj:
        return arithfn_from_json(obj, path, allow_symbols)
    raise SchemaError(path, "not an ArithFn, FracElem or PowerSeriesPoly record")


def _member_precision(m) -> int:
    return m.eff_precision if isinstance(m, FracElem) else m.precision


def family_from_json(obj: Any, precision: int) -> list:
    """Parse a family file; mismatched precisions are cut to the common
    minimum with a warning."""
    if not isinstance(obj, dict):
        raise SchemaError("", "expected an object with 'members'")
    field = obj.get("field", "rational")
    if field not in FIELDS:
        raise SchemaError("field", f"unknown field {field!r}; expected one of {FIELDS}")
    members_raw = _list_field(obj, "members", "")
    if not members_raw:
        raise SchemaError("members", "empty family")
    allow = field != "rational"
    members = [
        member_from_json(m, f"members[{i}]", precision, allow) for i, m in enumerate(members_raw)
    ]
    precs = {_member_precision(m) for m in members}
    N = min(precs | {precision})
    if len(precs) > 1:
        log.warning("members have precisions %s; truncating to %d", sorted(precs), N)
    if N < max(precs):
        members = [
            FracElem(m.num.truncate(N), m.den.truncate(N)) if isinstance(m, FracElem) else m.truncate(N)
            for m in members
        ]
    return members


def family_to_json(members, field: str = "rational") -> dict:
    out = []
    for m in members:
        if isinstance(m, FracElem):
            out.append(frac_to_json(m))
        elif isinstance(m, PowerSeriesPoly):
            out.append(powerseries_to_json(m))
        else:
            out.append(arithfn_to_json(m))
    return {"field": field, "members": out}


def loads(text: str) -> Any:
    """json.loads with the error position folded into the message."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False)
