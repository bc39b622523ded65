"""JSON documents for the command-line front end.

Every document is a plain dict of str, int, bool, list and dict values so
that it validates against the schemas shipped in ``twistq/schemas``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, List, Optional, Sequence

from .cartan import CartanData
from .classify import A22Factorization, ClassifyReport
from .expr import format_monomial
from .lweight import GenMonomial, LWeight, RationalFactored
from .qchar import QCharacter
from .relcheck import CheckResult, DeltaSupport, SuiteReport
from .scalar import Scalar, SpectralParam, format_param

SCHEMA_VERSION = 1


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def param_doc(a: SpectralParam, L: int, mult: Optional[int] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"eps": a.eps(L) if (a.turn * L).denominator == 1 else None,
                           "qexp": f"{a.q2}/2", "uexp": a.uexp}
    if a.scale != 1:
        doc["scale"] = frac_str(a.scale)
    doc["text"] = format_param(a)
    if mult is not None:
        doc["mult"] = mult
    return doc


def component_doc(node: int, f: RationalFactored, L: int) -> Dict[str, Any]:
    return {"node": node, "constant": format_param(f.constant), "degree": f.degree(),
            "factors": [param_doc(a, L, m) for a, m in f.factors]}


def lweight_doc(x: LWeight) -> Dict[str, Any]:
    cd = x.cd
    return {"type": x.ctype,
            "components": [component_doc(i, c, cd.L) for i, c in zip(cd.I0, x.comps)]}


def monomial_doc(m: GenMonomial) -> Dict[str, Any]:
    from .cartan import cartan_data
    L = cartan_data(m.ctype).L
    return {"type": m.ctype, "expr": format_monomial(m),
            "letters": [{"gen": k, "node": i, "param": param_doc(a, L), "exp": e}
                        for (k, i, a), e in m.letters],
            "gamma": [format_param(g) for g in m.gamma]}


def weight_doc(w: Sequence[SpectralParam]) -> List[str]:
    return [format_param(a) for a in w]


def scalar_doc(s: Scalar) -> str:
    return str(s)


def cartan_doc(cd: CartanData) -> Dict[str, Any]:
    return {
        "type": cd.token,
        "family": cd.ttype.family,
        "n": cd.ttype.n,
        "M": cd.M,
        "I": list(cd.I),
        "I0": list(cd.I0),
        "sigma": {str(i): cd.sigma[i] for i in cd.I},
        "C": [[cd.c(i, j) for j in cd.I] for i in cd.I],
        "Csigma": [list(r) for r in cd.Csigma],
        "d": [frac_str(x) for x in cd.d],
        "N": [cd.N[i] for i in cd.I0],
        "iota": [cd.iota[i] for i in cd.I0],
        "marks": list(cd.marks),
        "zeta_order": cd.L,
        "finite_type": cd.finite_type,
    }


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, Fraction):
        return frac_str(v)
    if isinstance(v, SpectralParam):
        return format_param(v)
    if isinstance(v, GenMonomial):
        return monomial_doc(v)
    if isinstance(v, LWeight):
        return lweight_doc(v)
    if isinstance(v, A22Factorization):
        return a22_doc(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def report_doc(r: ClassifyReport, command: str) -> Dict[str, Any]:
    return {"command": command, "verdict": r.verdict, "certificate": _jsonable(r.certificate),
            "notes": r.notes, "extra": _jsonable(r.extra)}


def a22_doc(f: A22Factorization) -> Dict[str, Any]:
    return {"gamma": format_param(f.gamma),
            "pairs": [{"a": format_param(p.a), "b": format_param(p.b), "kind": p.kind,
                       "T": p.T} for p in f.pairs],
            "plus": [format_param(c) for c in f.plus],
            "search_nodes": f.nodes}


def qchar_doc(c: QCharacter) -> Dict[str, Any]:
    terms = sorted(c.terms.items(), key=lambda kv: (kv[1].grade, str(kv[0])))
    return {"type": c.ctype, "depth": c.depth, "exact": c.depth is None,
            "leading": lweight_doc(c.leading),
            "terms": [{"lweight": lweight_doc(x), "multiplicity": t.mult, "grade": t.grade,
                       "a_certificate": format_monomial(t.cert) if t.cert is not None else None}
                      for x, t in terms]}


def check_doc(r: CheckResult) -> Dict[str, Any]:
    return {"name": r.name, "type": r.ctype, "passed": r.passed, "details": r.details,
            "witness": _jsonable(r.witness)}


def suite_doc(s: SuiteReport) -> Dict[str, Any]:
    return {"passed": s.passed, "warnings": list(s.warnings),
            "results": [check_doc(r) for r in s.results]}


def delta_doc(d: DeltaSupport, L: int) -> Dict[str, Any]:
    return {"component": d.component, "window": d.window, "certified": d.certified,
            "notes": d.notes,
            "coefficients": {str(k): scalar_doc(v) for k, v in sorted(d.coefficients.items())},
            "poles": [param_doc(a, L, m) for a, m in sorted(d.poles.items())]}


def load_schema(name: str) -> Dict[str, Any]:
    text = resources.files("twistq").joinpath("schemas", f"{name}.json").read_text("utf-8")
    return json.loads(text)


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
