"""l-weights as I0-tuples of factored rational functions in z.

A component is ``constant * prod (1 - a z)^mult``.  Generators Y, Yt, P (the
positive prefundamental Psi) and A are built in factored form, so products
and inverses are exact multiset arithmetic on the factors.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cartan import CartanData, cartan_data
from .scalar import ONE, Scalar, SpectralParam, param_product

KINDS = ("Y", "Yt", "P", "A")
KIND_ALIASES = {"Psi": "P", "Ytilde": "Yt"}


class NotFactorable(ValueError):
    """No monomial over the requested dictionary reproduces the l-weight."""

    def __init__(self, message: str, component: Optional[int] = None,
                 factor: Optional[SpectralParam] = None):
        super().__init__(message)
        self.component = component
        self.factor = factor


class TypeMismatch(TypeError):
    pass


class RationalFactored:
    """``constant * prod (1 - a z)^mult`` with distinct a and nonzero mult."""

    __slots__ = ("constant", "factors", "_hash")

    def __init__(self, constant: SpectralParam = ONE,
                 factors: Mapping[SpectralParam, int] | Iterable[Tuple[SpectralParam, int]] = ()):
        items = factors.items() if isinstance(factors, Mapping) else factors
        acc: Dict[SpectralParam, int] = {}
        for a, m in items:
            acc[a] = acc.get(a, 0) + m
        self.constant = constant
        self.factors: Tuple[Tuple[SpectralParam, int], ...] = tuple(
            sorted((a, m) for a, m in acc.items() if m))
        self._hash: Optional[int] = None

    @classmethod
    def _from_clean(cls, constant: SpectralParam, acc: Dict[SpectralParam, int]) -> "RationalFactored":
        r = cls.__new__(cls)
        r.constant = constant
        r.factors = tuple(sorted(acc.items()))
        r._hash = None
        return r

    def as_dict(self) -> Dict[SpectralParam, int]:
        return dict(self.factors)

    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    def value0(self) -> SpectralParam:
        return self.constant

    def value_inf(self) -> SpectralParam:
        """Leading coefficient at z = infinity: constant * prod (-a)^mult."""
        return self.constant * param_product((a.neg(), m) for a, m in self.factors)

    def is_one(self) -> bool:
        return not self.factors and self.constant.is_one()

    def is_polynomial(self) -> bool:
        return all(m > 0 for _, m in self.factors)

    def __mul__(self, other: "RationalFactored") -> "RationalFactored":
        acc = dict(self.factors)
        for a, m in other.factors:
            v = acc.get(a, 0) + m
            if v:
                acc[a] = v
            else:
                del acc[a]
        return RationalFactored._from_clean(self.constant * other.constant, acc)

    def __pow__(self, n: int) -> "RationalFactored":
        if n == 0:
            return RationalFactored()
        return RationalFactored._from_clean(self.constant ** n, {a: m * n for a, m in self.factors})

    def inv(self) -> "RationalFactored":
        return self ** -1

    def map_params(self, f) -> "RationalFactored":
        return RationalFactored(self.constant, [(f(a), m) for a, m in self.factors])

    def subs_inverse(self) -> Tuple["RationalFactored", int]:
        """Rewrite f(1/z) as z^k * g(z); returns (g, k)."""
        acc = {a.inv(): m for a, m in self.factors}
        return RationalFactored._from_clean(self.value_inf(), acc), -self.degree()

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalFactored) and self.constant == other.constant
                and self.factors == other.factors)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.constant, self.factors))
        return self._hash

    def __repr__(self) -> str:
        return f"RationalFactored({self})"

    def __str__(self) -> str:
        parts = [] if self.constant.is_one() else [str(self.constant)]
        for a, m in self.factors:
            if a.turn == Fraction(1, 2):
                f = f"(1 + {a.neg()}*z)"
            else:
                f = f"(1 - {a}*z)"
            parts.append(f if m == 1 else f"{f}^{m}")
        return "*".join(parts) if parts else "1"


class LWeight:
    """An l-weight of a fixed twisted type: one RationalFactored per node of I0."""

    __slots__ = ("ctype", "comps", "_hash")

    def __init__(self, ctype: str, comps: Sequence[RationalFactored]):
        self.ctype = ctype
        self.comps: Tuple[RationalFactored, ...] = tuple(comps)
        self._hash: Optional[int] = None

    @property
    def cd(self) -> CartanData:
        return cartan_data(self.ctype)

    @classmethod
    def one(cls, cd: CartanData) -> "LWeight":
        return cls(cd.token, [RationalFactored()] * len(cd.I0))

    @classmethod
    def constant(cls, cd: CartanData, gamma: Sequence[SpectralParam]) -> "LWeight":
        if len(gamma) != len(cd.I0):
            raise ValueError(f"constant needs {len(cd.I0)} entries")
        return cls(cd.token, [RationalFactored(g) for g in gamma])

    def _check(self, other: "LWeight") -> None:
        if self.ctype != other.ctype:
            raise TypeMismatch(f"cannot combine l-weights of types {self.ctype} and {other.ctype}")

    def __mul__(self, other: "LWeight") -> "LWeight":
        self._check(other)
        return LWeight(self.ctype, [a * b for a, b in zip(self.comps, other.comps)])

    def __pow__(self, n: int) -> "LWeight":
        return LWeight(self.ctype, [a ** n for a in self.comps])

    def inv(self) -> "LWeight":
        return self ** -1

    def __truediv__(self, other: "LWeight") -> "LWeight":
        return self * other.inv()

    def is_one(self) -> bool:
        return all(c.is_one() for c in self.comps)

    def params(self) -> List[SpectralParam]:
        return [a for c in self.comps for a, _ in c.factors]

    def __eq__(self, other) -> bool:
        return isinstance(other, LWeight) and self.ctype == other.ctype and self.comps == other.comps

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctype, self.comps))
        return self._hash

    def __repr__(self) -> str:
        return f"LWeight({self.ctype}: {self})"

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.comps) + ")"


# generator monomials

Letter = Tuple[str, int, SpectralParam]
_KIND_ORDER = {k: n for n, k in enumerate(KINDS)}


def canonical_param(cd: CartanData, kind: str, i: int, a: SpectralParam) -> SpectralParam:
    """Representative of a under the roots of unity the generator cannot see."""
    if kind == "P":
        period = Fraction(1, cd.iota[i])
    elif cd.is_fixed(i):
        period = Fraction(1, cd.M)
    else:
        return a
    return SpectralParam(a.turn % period, a.q2, a.uexp, a.scale)


class GenMonomial:
    """gamma * prod gen^exp over letters (kind, i, a), kinds Y, Yt, P, A."""

    __slots__ = ("ctype", "letters", "gamma", "_hash")

    def __init__(self, ctype: str, letters: Mapping[Letter, int] | Iterable[Tuple[Letter, int]] = (),
                 gamma: Optional[Sequence[SpectralParam]] = None):
        cd = cartan_data(ctype)
        items = letters.items() if isinstance(letters, Mapping) else letters
        acc: Dict[Letter, int] = {}
        for (kind, i, a), e in items:
            kind = KIND_ALIASES.get(kind, kind)
            if kind not in KINDS:
                raise ValueError(f"unknown generator kind {kind!r}")
            cd.check_index(i)
            key = (kind, i, canonical_param(cd, kind, i, a))
            acc[key] = acc.get(key, 0) + e
        self.ctype = cd.token
        self.letters: Tuple[Tuple[Letter, int], ...] = tuple(sorted(
            ((k, e) for k, e in acc.items() if e),
            key=lambda t: (_KIND_ORDER[t[0][0]], t[0][1], t[0][2])))
        if gamma is None:
            gamma = (ONE,) * len(cd.I0)
        if len(gamma) != len(cd.I0):
            raise ValueError(f"constant needs {len(cd.I0)} entries, got {len(gamma)}")
        self.gamma: Tuple[SpectralParam, ...] = tuple(gamma)
        self._hash: Optional[int] = None

    def exponent(self, kind: str, i: int, a: SpectralParam) -> int:
        cd = cartan_data(self.ctype)
        key = (kind, i, canonical_param(cd, kind, i, a))
        return dict(self.letters).get(key, 0)

    def kinds(self) -> set:
        return {k for (k, _, _), _ in self.letters}

    def n_letters(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "GenMonomial") -> "GenMonomial":
        if self.ctype != other.ctype:
            raise TypeMismatch("generator monomials of different types")
        return GenMonomial(self.ctype, list(self.letters) + list(other.letters),
                           [a * b for a, b in zip(self.gamma, other.gamma)])

    def __pow__(self, n: int) -> "GenMonomial":
        return GenMonomial(self.ctype, [(k, e * n) for k, e in self.letters],
                           [g ** n for g in self.gamma])

    def __eq__(self, other) -> bool:
        return (isinstance(other, GenMonomial) and self.ctype == other.ctype
                and self.letters == other.letters and self.gamma == other.gamma)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctype, self.letters, self.gamma))
        return self._hash

    def __repr__(self) -> str:
        from .expr import format_monomial
        return f"GenMonomial({self.ctype}: {format_monomial(self)})"


# generators

def _component(cd: CartanData, i: int, f: RationalFactored) -> LWeight:
    comps = [RationalFactored()] * len(cd.I0)
    comps[cd.I0.index(i)] = f
    return LWeight(cd.token, comps)


def _orbit(cd: CartanData, a: SpectralParam, order: int) -> List[SpectralParam]:
    return [a.rotate(Fraction(s, order)) for s in range(order)]


@lru_cache(maxsize=None)
def _gen_Y(token: str, i: int, a: SpectralParam, tilde: bool) -> LWeight:
    cd = cartan_data(token)
    cd.check_index(i)
    if cd.is_fixed(i):
        M = cd.M
        acc: Dict[SpectralParam, int] = {}
        for b in _orbit(cd, a, M):
            acc[b.shift(-2)] = 1
            acc[b.shift(2)] = -1
        const = SpectralParam.make(0, 2 * M)
    else:
        acc = {a.shift(-2): 1, a.shift(2): -1}
        const = SpectralParam.make(0, 2)
    return _component(cd, i, RationalFactored(ONE if tilde else const, acc))


def gen_Y(cd: CartanData, i: int, a: SpectralParam) -> LWeight:
    return _gen_Y(cd.token, i, canonical_param(cd, "Y", i, a), False)


def gen_Ytilde(cd: CartanData, i: int, a: SpectralParam) -> LWeight:
    return _gen_Y(cd.token, i, canonical_param(cd, "Yt", i, a), True)


@lru_cache(maxsize=None)
def _gen_Psi(token: str, i: int, a: SpectralParam) -> LWeight:
    cd = cartan_data(token)
    cd.check_index(i)
    return _component(cd, i, RationalFactored(ONE, {b: 1 for b in _orbit(cd, a, cd.iota[i])}))


def gen_Psi(cd: CartanData, i: int, a: SpectralParam) -> LWeight:
    return _gen_Psi(cd.token, i, canonical_param(cd, "P", i, a))


def A_letters(cd: CartanData, i: int, a: SpectralParam) -> List[Tuple[Letter, int]]:
    """A_{i,a} written as a product of Y letters, per the case C_{i,sigma(i)}."""
    cd.check_index(i)
    out: List[Tuple[Letter, int]] = [(("Y", i, a.shift(2)), 1), (("Y", i, a.shift(-2)), 1)]
    case = cd.c_sigma_case(i)
    if case == 2:
        for j in cd.neighbors(i):
            if cd.is_fixed(j):
                out.append((("Y", j, a), -1))
            else:
                out.extend((("Y", j, b), -1) for b in _orbit(cd, a, cd.M))
    elif case == 0:
        out.extend((("Y", j, a), -1) for j in cd.neighbors(i))
    else:
        out.append((("Y", i, a.neg()), -1))
        out.extend((("Y", j, a), -1) for j in cd.neighbors(i))
    return out


@lru_cache(maxsize=None)
def _gen_A(token: str, i: int, a: SpectralParam) -> LWeight:
    cd = cartan_data(token)
    out = LWeight.one(cd)
    for (_, j, b), e in A_letters(cd, i, a):
        out = out * (gen_Y(cd, j, b) ** e)
    return out


def gen_A(cd: CartanData, i: int, a: SpectralParam) -> LWeight:
    return _gen_A(cd.token, i, canonical_param(cd, "A", i, a))


_GEN = {"Y": gen_Y, "Yt": gen_Ytilde, "P": gen_Psi, "A": gen_A}


def gen(cd: CartanData, kind: str, i: int, a: SpectralParam) -> LWeight:
    kind = KIND_ALIASES.get(kind, kind)
    return _GEN[kind](cd, i, a)


def lw_mul(x: LWeight, y: LWeight) -> LWeight:
    return x * y


def lw_inv(x: LWeight) -> LWeight:
    return x.inv()


def lw_eval(m: GenMonomial) -> LWeight:
    cd = cartan_data(m.ctype)
    out = LWeight.constant(cd, m.gamma)
    for (kind, i, a), e in m.letters:
        out = out * (gen(cd, kind, i, a) ** e)
    return out


def lw_degree(x: LWeight) -> Tuple[int, ...]:
    return tuple(c.degree() for c in x.comps)


def lw_value0(x: LWeight) -> Tuple[SpectralParam, ...]:
    return tuple(c.value0() for c in x.comps)


def lw_value_inf(x: LWeight) -> Tuple[SpectralParam, ...]:
    return tuple(c.value_inf() for c in x.comps)


# expansions

def _series_mul(a: Dict[int, Scalar], b: Dict[int, Scalar], order: int) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            if k > order:
                continue
            v = out[k] + x * y if k in out else x * y
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def _binomial_series(a: Scalar, m: int, order: int, L: int) -> Dict[int, Scalar]:
    """(1 - a w)^m truncated at w^order."""
    out: Dict[int, Scalar] = {0: Scalar.one(L)}
    power = Scalar.one(L)
    for k in range(1, order + 1):
        power = power * a
        if m >= 0:
            if k > m:
                break
            c = comb(m, k) * (-1) ** k
        else:
            c = comb(-m + k - 1, k)
        out[k] = power * c
    return out


def factored_series(f: RationalFactored, order: int, L: int) -> Dict[int, Scalar]:
    """Taylor coefficients of f at 0, exponents 0..order."""
    out: Dict[int, Scalar] = {0: f.constant.to_scalar(L)}
    for a, m in f.factors:
        out = _series_mul(out, _binomial_series(a.to_scalar(L), m, order, L), order)
    return out


def lw_expand(x: LWeight, i: int, at: str = "zero", order: int = 6) -> Dict[int, Scalar]:
    """Expansion of component i as {exponent of z: coefficient}.

    At zero the exponents run over 0..order.  At infinity the series starts at
    z^deg and runs down to z^-order (or through order+1 terms if deg < -order).
    Zero coefficients are omitted.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    cd = x.cd
    cd.check_index(i)
    f = x.comps[cd.I0.index(i)]
    L = cd.L
    if at == "zero":
        return factored_series(f, order, L)
    if at not in ("inf", "infinity"):
        raise ValueError(f"expansion point must be zero or infinity, got {at!r}")
    g, _ = f.subs_inverse()
    deg = f.degree()
    depth = deg + order if deg >= -order else order
    w = factored_series(g, depth, L)
    return {deg - k: v for k, v in w.items()}


# factorization

def _on_grid(cd: CartanData, a: SpectralParam) -> bool:
    return a.on_grid(cd.L)


def _grid_check(x: LWeight) -> None:
    cd = x.cd
    for ci, c in enumerate(x.comps):
        for a, _ in list(c.factors) + [(c.constant, 0)]:
            if not _on_grid(cd, a):
                raise NotFactorable(f"parameter {a} lies off the supported grid",
                                    cd.I0[ci], a)


def _gamma_for(x: LWeight, letters: List[Tuple[Letter, int]]) -> Tuple[SpectralParam, ...]:
    core = lw_eval(GenMonomial(x.ctype, letters))
    return tuple(a.constant * b.constant.inv() for a, b in zip(x.comps, core.comps))


def _factor_A(x: LWeight) -> List[Tuple[Letter, int]]:
    """Top-down peeling over A generators, or NotFactorable."""
    cd = x.cd
    comps = [c.as_dict() for c in x.comps]
    params = [a for c in comps for a in c]
    if not params:
        return []
    floor = min(a.q2 for a in params)
    exps: Dict[Tuple[int, SpectralParam], int] = defaultdict(int)
    while True:
        top = None
        for ci, c in enumerate(comps):
            for a, m in c.items():
                key = (a.q2, -ci, a)
                if top is None or key > top[0]:
                    top = (key, ci, a, m)
        if top is None:
            break
        _, ci, p, m = top
        i = cd.I0[ci]
        a = canonical_param(cd, "A", i, p.shift(-4))
        if a.q2 - 4 < floor:
            raise NotFactorable(f"factor {p} at node {i} is not the top of an A generator "
                                "whose lower factors are present", i, p)
        e = -m
        for cj, f in enumerate(gen_A(cd, i, a).comps):
            c = comps[cj]
            for b, mm in f.factors:
                v = c.get(b, 0) - e * mm
                if v:
                    c[b] = v
                else:
                    c.pop(b, None)
        exps[(i, a)] += e
        if p in comps[ci]:
            raise NotFactorable(f"factor {p} at node {i} breaks the root-of-unity orbit "
                                "structure of A", i, p)
    return [(("A", i, a), e) for (i, a), e in exps.items() if e]


def _orbit_reduce(cd: CartanData, i: int, c: RationalFactored) -> Dict[SpectralParam, int]:
    """Collapse factors at a fixed node onto orbit representatives."""
    if not cd.is_fixed(i):
        return c.as_dict()
    M = cd.M
    d = c.as_dict()
    out: Dict[SpectralParam, int] = {}
    for a, m in d.items():
        rep = canonical_param(cd, "Y", i, a)
        if rep in out:
            continue
        for b in _orbit(cd, rep, M):
            if d.get(b, 0) != m:
                raise NotFactorable(f"factors at fixed node {i} are not uniform on the "
                                    f"orbit of {rep}", i, a)
        out[rep] = m
    return out


def _chain_factor(cd: CartanData, i: int, c: RationalFactored, use_y: bool, use_p: bool
                  ) -> List[Tuple[Letter, int]]:
    reps = _orbit_reduce(cd, i, c)
    if use_p and not use_y:
        return [(("P", i, a), m) for a, m in reps.items()]
    chains: Dict[Tuple, Dict[int, int]] = defaultdict(dict)
    for a, m in reps.items():
        chains[(a.turn, a.scale, a.uexp, a.q2 % 4)][a.q2] = m
    out: List[Tuple[Letter, int]] = []
    for (turn, scale, uexp, _), pos in chains.items():
        lo, hi = min(pos), max(pos)
        levels = list(range(lo, hi + 1, 4))
        S, s = [], 0
        for p in levels:
            s += pos.get(p, 0)
            S.append(s)
        def at(p: int) -> SpectralParam:
            return SpectralParam(turn, p, uexp, scale)
        if not use_p:
            if S[-1] != 0:
                raise NotFactorable(f"chain through {at(lo)} at node {i} has nonzero degree "
                                    "and no prefundamental generator is allowed", i, at(hi))
            out.extend((("Y", i, at(p + 2)), e) for p, e in zip(levels, S) if e)
            continue
        F = [0] * len(S)
        run = S[-1]
        for k in range(len(S) - 1, -1, -1):
            run = min(run, S[k])
            F[k] = run
        prev = 0
        for k, p in enumerate(levels):
            e = S[k] - F[k]
            if e:
                out.append((("Y", i, at(p + 2)), e))
            if F[k] != prev:
                out.append((("P", i, at(p)), F[k] - prev))
            prev = F[k]
    return out


def lw_factor(x: LWeight, dictionary: Iterable[str] = ("Y", "P")) -> GenMonomial:
    """Canonical generator monomial gamma * prod gen^e equal to x.

    With A in the dictionary a pure A-factorization is tried first (it is
    forced by the triangular shape of the A generators).  Otherwise, or if
    that fails, each component is factored chain by chain over Y and P: on a
    chain a q^(2Z) the prefix sums of the multiplicities give the Y
    exponents and their running minima from the top give the P exponents.
    """
    kinds = {KIND_ALIASES.get(k, k) for k in dictionary}
    bad = kinds - set(KINDS)
    if bad:
        raise ValueError(f"unknown generator kinds {sorted(bad)}")
    if not kinds:
        raise ValueError("empty dictionary")
    _grid_check(x)
    cd = x.cd
    letters: Optional[List[Tuple[Letter, int]]] = None
    err: Optional[NotFactorable] = None
    if "A" in kinds:
        try:
            letters = _factor_A(x)
        except NotFactorable as exc:
            err = exc
    use_y = bool(kinds & {"Y", "Yt"})
    use_p = "P" in kinds
    if letters is None and (use_y or use_p):
        ykind = "Y" if "Y" in kinds else "Yt"
        letters = []
        for ci, c in enumerate(x.comps):
            part = _chain_factor(cd, cd.I0[ci], c, use_y, use_p)
            letters.extend(((ykind if k == "Y" else k, i, a), e) for (k, i, a), e in part)
    if letters is None:
        assert err is not None
        raise err
    return GenMonomial(x.ctype, letters, _gamma_for(x, letters))


# shifts and the deformed coproduct

def shift_lweight(x: LWeight, mu_prime: Sequence[int], a: SpectralParam) -> LWeight:
    """Multiply component i by (1 - (a z)^iota_i)^(n_i) with n_i = -alpha_i(mu')/iota_i."""
    cd = x.cd
    if len(mu_prime) != len(cd.I0):
        raise ValueError(f"coweight needs {len(cd.I0)} coordinates")
    out = x
    for i, m in zip(cd.I0, mu_prime):
        if m > 0:
            raise ValueError(f"-mu' must be dominant: alpha_{i}(mu') = {m} > 0")
        if m % cd.iota[i]:
            raise ValueError(f"iota_{i} = {cd.iota[i]} does not divide alpha_{i}(mu') = {m}")
        n = -m // cd.iota[i]
        if n:
            out = out * (gen_Psi(cd, i, a) ** n)
    return out


def coproduct_hw(x: LWeight, y: LWeight) -> LWeight:
    """Highest l-weight x_i(z) y_i(zu) of the deformed tensor product."""
    if x.ctype != y.ctype:
        raise TypeMismatch("coproduct of l-weights of different types")
    ys = LWeight(y.ctype, [c.map_params(lambda a: a.with_u(a.uexp + 1)) for c in y.comps])
    return x * ys


def specialize_u1(x: LWeight) -> LWeight:
    return LWeight(x.ctype, [
        RationalFactored(c.constant.with_u(0), [(a.with_u(0), m) for a, m in c.factors])
        for c in x.comps])
