"""q-characters: finite N-combinations of l-weight classes.

Each term carries a multiplicity, a grade (the number of A^-1 letters that
separate it from the leading class, or the placeholder grade of a weight
series) and, when available, the A-monomial certificate.  A depth of
``EXACT`` (None) marks a finite series; otherwise every term of grade above
the depth has been discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cartan import CartanData, alpha_bar, cartan_data
from .classify import A22Factorization, A22Pair, factor_a22
from .lweight import GenMonomial, LWeight, NotFactorable, gen_A, gen_Psi, lw_factor
from .scalar import SpectralParam

EXACT = None


@dataclass(frozen=True)
class Term:
    mult: int
    grade: int
    cert: Optional[GenMonomial]


def _min_depth(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class QCharacter:
    __slots__ = ("ctype", "terms", "leading", "depth")

    def __init__(self, ctype: str, terms: Mapping[LWeight, Term], leading: LWeight,
                 depth: Optional[int] = EXACT):
        self.ctype = ctype
        self.terms: Dict[LWeight, Term] = dict(terms)
        self.leading = leading
        self.depth = depth

    def __len__(self) -> int:
        return len(self.terms)

    def multiplicity(self, x: LWeight) -> int:
        t = self.terms.get(x)
        return t.mult if t else 0

    def as_multiset(self) -> Dict[LWeight, int]:
        return {x: t.mult for x, t in self.terms.items()}

    def truncate(self, depth: Optional[int]) -> "QCharacter":
        if depth is None:
            return self
        if self.depth is None and all(t.grade <= depth for t in self.terms.values()):
            return self  # nothing dropped, still exact
        return QCharacter(self.ctype, {x: t for x, t in self.terms.items() if t.grade <= depth},
                          self.leading, _min_depth(self.depth, depth))

    def __add__(self, other: "QCharacter") -> "QCharacter":
        if self.ctype != other.ctype:
            raise TypeError("q-characters of different types")
        terms = dict(self.terms)
        for x, t in other.terms.items():
            if x in terms:
                s = terms[x]
                terms[x] = Term(s.mult + t.mult, min(s.grade, t.grade), s.cert or t.cert)
            else:
                terms[x] = t
        return QCharacter(self.ctype, terms, self.leading, _min_depth(self.depth, other.depth))

    def __mul__(self, other: "QCharacter") -> "QCharacter":
        return qc_mul(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QCharacter) and self.ctype == other.ctype
                and self.as_multiset() == other.as_multiset() and self.depth == other.depth)

    def __repr__(self) -> str:
        d = "exact" if self.depth is None else f"depth {self.depth}"
        return f"QCharacter({self.ctype}, {len(self.terms)} terms, {d})"


def qc_class(x: LWeight) -> QCharacter:
    return QCharacter(x.ctype, {x: Term(1, 0, GenMonomial(x.ctype))}, x, EXACT)


def qc_one(cd: CartanData) -> QCharacter:
    return qc_class(LWeight.one(cd))


def qc_mul(c1: QCharacter, c2: QCharacter) -> QCharacter:
    """Convolution product; the depth of the result is the smaller depth."""
    if c1.ctype != c2.ctype:
        raise TypeError("q-characters of different types")
    depth = _min_depth(c1.depth, c2.depth)
    terms: Dict[LWeight, Term] = {}
    for x, s in c1.terms.items():
        for y, t in c2.terms.items():
            g = s.grade + t.grade
            if depth is not None and g > depth:
                continue
            xy = x * y
            m = s.mult * t.mult
            cert = s.cert * t.cert if s.cert is not None and t.cert is not None else None
            if xy in terms:
                u = terms[xy]
                terms[xy] = Term(u.mult + m, min(u.grade, g), u.cert or cert)
            else:
                terms[xy] = Term(m, g, cert)
    return QCharacter(c1.ctype, terms, c1.leading * c2.leading, depth)


def qc_product(chars: Iterable[QCharacter], cd: CartanData) -> QCharacter:
    out = qc_one(cd)
    for c in chars:
        out = qc_mul(out, c)
    return out


def nakajima_certificate(x: LWeight, y: LWeight) -> Optional[GenMonomial]:
    """The A-monomial y/x when it has nonnegative exponents and no constant, else None."""
    if x.ctype != y.ctype:
        raise TypeError("l-weights of different types")
    r = y / x
    try:
        m = lw_factor(r, ("A",))
    except NotFactorable:
        return None
    if any(e < 0 for _, e in m.letters) or any(not g.is_one() for g in m.gamma):
        return None
    return m


def nakajima_le(x: LWeight, y: LWeight) -> bool:
    """x precedes y: y x^-1 is a monomial in the A_{i,a} with nonnegative exponents."""
    return nakajima_certificate(x, y) is not None


def cone_check(c: QCharacter) -> List[LWeight]:
    """Terms failing nakajima_le(term, leading); empty when the cone statement holds."""
    return [x for x in c.terms if not nakajima_le(x, c.leading)]


# explicit A2(2) series

def _string(c: SpectralParam, m: int) -> List[SpectralParam]:
    """Parameters c, c q^-2, ..., c q^(-2m+2)."""
    return [c.shift(-4 * t) for t in range(m)]


def _negstring(c: SpectralParam, k: int) -> List[SpectralParam]:
    """Parameters -c q, -c q^-1, ..., -c q^(-2k+3)."""
    return [c.neg().shift(2 - 4 * t) for t in range(k)]


def _a22_factor(c: SpectralParam, leading: LWeight, mmax: Optional[int], depth: Optional[int]
                ) -> QCharacter:
    """leading * (1 + sum_m string(m) + sum_{k<=m} string(m) negstring(k))."""
    cd = cartan_data("A2-2")
    inv_cache: Dict[SpectralParam, LWeight] = {}

    def Ainv(a: SpectralParam) -> LWeight:
        if a not in inv_cache:
            inv_cache[a] = gen_A(cd, 1, a).inv()
        return inv_cache[a]

    def add(params: List[SpectralParam]) -> None:
        x = leading
        for a in params:
            x = x * Ainv(a)
        cert = GenMonomial(cd.token, [(("A", 1, a), -1) for a in params])
        g = len(params)
        if x in terms:
            t = terms[x]
            terms[x] = Term(t.mult + 1, t.grade, t.cert)
        else:
            terms[x] = Term(1, g, cert)

    terms: Dict[LWeight, Term] = {}
    add([])
    top = mmax if mmax is not None else depth
    assert top is not None
    for m in range(1, top + 1):
        if depth is not None and m > depth:
            break
        s = _string(c, m)
        add(s)
        for k in range(1, m + 1):
            if depth is not None and m + k > depth:
                break
            add(s + _negstring(c, k))
    return QCharacter(cd.token, terms, leading, depth)


def _a22_check_param(c: SpectralParam) -> None:
    if c.scale != 1 or c.uexp or c.turn not in (0, Fraction(1, 2)) or c.q2 % 2:
        raise ValueError(f"parameter {c} is not in +-q^Z")


def qc_a22_neg_prefundamental(c: SpectralParam, depth: int) -> QCharacter:
    """[P_c]^-1 times the A-string series, truncated at `depth` letters."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    _a22_check_param(c)
    cd = cartan_data("A2-2")
    return _a22_factor(c, gen_Psi(cd, 1, c).inv(), None, depth)


def qc_a22_kr(b: SpectralParam, T: int) -> QCharacter:
    """Exact series of [P_{b q^-2T} P_b^-1]: m <= T, k <= m."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    _a22_check_param(b)
    cd = cartan_data("A2-2")
    leading = gen_Psi(cd, 1, b.shift(-4 * T)) * gen_Psi(cd, 1, b).inv()
    return _a22_factor(b, leading, T, EXACT)


def qc_a22_pair(p: A22Pair, depth: int) -> QCharacter:
    if p.kind == "F":
        assert p.T is not None
        return qc_a22_kr(p.b, p.T)
    cd = cartan_data("A2-2")
    leading = gen_Psi(cd, 1, p.a) * gen_Psi(cd, 1, p.b).inv()
    return _a22_factor(p.b, leading, None, depth)


class ConeViolation(AssertionError):
    pass


def qc_a22_simple(x: LWeight, depth: int, check_cone: bool = True
                  ) -> Tuple[QCharacter, A22Factorization]:
    """q-character of L(x) in A2(2) as the product over a factor_a22 certificate."""
    fac = factor_a22(x)
    cd = cartan_data("A2-2")
    parts = [qc_class(LWeight.constant(cd, (fac.gamma,)))]
    parts.extend(qc_a22_pair(p, depth) for p in fac.pairs)
    parts.extend(qc_class(gen_Psi(cd, 1, c)) for c in fac.plus)
    out = qc_product(parts, cd).truncate(depth)
    if out.leading != x:
        raise ConeViolation("leading class differs from the input l-weight")
    if check_cone:
        bad = cone_check(out)
        if bad:
            raise ConeViolation(f"{len(bad)} terms outside the Nakajima cone of the leading class")
    return out, fac


class UnsupportedQCharacter(ValueError):
    pass


def qc_simple(x: LWeight, depth: int) -> QCharacter:
    """Closed-form q-character of L(x) where one is available.

    Type A2-2 uses the explicit series; elsewhere only l-weights with
    polynomial components (one-dimensional simple modules) are supported.
    """
    if x.ctype == "A2-2":
        return qc_a22_simple(x, depth)[0]
    if all(c.is_polynomial() for c in x.comps):
        return qc_class(x)
    raise UnsupportedQCharacter(
        f"no closed q-character formula for non-polynomial l-weights of type {x.ctype}")


def qc_project_weights(c: QCharacter) -> Dict[Tuple[SpectralParam, ...], int]:
    out: Dict[Tuple[SpectralParam, ...], int] = {}
    for x, t in c.terms.items():
        w = tuple(comp.constant for comp in x.comps)
        out[w] = out.get(w, 0) + t.mult
    return out


def weight_mul(a: Mapping[Tuple[SpectralParam, ...], int], b: Mapping[Tuple[SpectralParam, ...], int]
               ) -> Dict[Tuple[SpectralParam, ...], int]:
    out: Dict[Tuple[SpectralParam, ...], int] = {}
    for x, m in a.items():
        for y, n in b.items():
            w = tuple(p * r for p, r in zip(x, y))
            out[w] = out.get(w, 0) + m * n
    return out


# restriction identity

def placeholder_chi(cd: CartanData, i: int, depth: int) -> QCharacter:
    """sum_{r <= depth} [alpha_bar_i^-r] with grade r.  A smoke-test input only."""
    cd.check_index(i)
    ab = alpha_bar(cd, i)
    terms: Dict[LWeight, Term] = {}
    for r in range(depth + 1):
        w = LWeight.constant(cd, [a ** (-r) for a in ab])
        terms[w] = Term(1, r, None)
    return QCharacter(cd.token, terms, LWeight.one(cd), depth)


def qc_pow(c: QCharacter, n: int, cd: CartanData) -> QCharacter:
    out = qc_one(cd)
    for _ in range(n):
        out = qc_mul(out, c)
    return out


def borel_qchar(simple: QCharacter, mu: Sequence[int], chi: Mapping[int, QCharacter],
                depth: int) -> QCharacter:
    """simple * prod_i chi_i^(alpha_i(mu)/iota_i), truncated at `depth`."""
    cd = cartan_data(simple.ctype)
    if len(mu) != len(cd.I0):
        raise ValueError(f"coweight needs {len(cd.I0)} coordinates")
    out = simple.truncate(depth)
    for i, m in zip(cd.I0, mu):
        if m % cd.iota[i]:
            raise ValueError(f"iota_{i} = {cd.iota[i]} does not divide alpha_{i}(mu) = {m}")
        e = m // cd.iota[i]
        if e < 0:
            raise ValueError(f"alpha_{i}(mu) = {m} < 0: the identity is stated for dominant mu")
        if e == 0:
            continue
        if i not in chi:
            raise ValueError(f"missing chi_{i} input")
        ci = chi[i]
        if ci.multiplicity(LWeight.one(cd)) != 1:
            raise ValueError(f"chi_{i} must have constant term 1")
        out = qc_mul(out, qc_pow(ci.truncate(depth), e, cd)).truncate(depth)
    return out
