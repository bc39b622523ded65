"""Exact coefficients: Laurent polynomials in q^(1/2) and u over a cyclotomic field.

A :class:`Scalar` lives in Q(zeta_L)[q^(+-1/2), u^(+-1)].  Internally the
q-exponent is stored doubled (``q2``) so that every key is an integer.
Cyclotomic coefficients are coordinate tuples over the basis
1, zeta, ..., zeta^(phi(L)-1), reduced modulo the L-th cyclotomic polynomial.

A :class:`SpectralParam` is a monomial unit ``scale * zeta^(turn) * q^(q2/2) * u^uexp``
where ``turn`` is a rational number of full turns.  Storing the root of unity
as a turn fraction makes parameter equality independent of the ambient L.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, NamedTuple, Tuple, Union

Coords = Tuple[Fraction, ...]
Number = Union[int, Fraction]


class UnsupportedInverse(ArithmeticError):
    """Raised when inverting a Scalar that is not a monomial unit."""


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Integer coefficients (low degree first) of the n-th cyclotomic polynomial."""
    # x^n - 1 divided by every Phi_d with d | n, d < n
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d:
            continue
        den = cyclotomic_poly(d)
        out = [0] * (len(num) - len(den) + 1)
        rem = list(num)
        for k in range(len(out) - 1, -1, -1):
            c = rem[k + len(den) - 1]  # den is monic
            out[k] = c
            for t, b in enumerate(den):
                rem[k + t] -= c * b
        assert not any(rem), "cyclotomic division left a remainder"
        num = out
    return tuple(num)


def phi(L: int) -> int:
    return len(cyclotomic_poly(L)) - 1


@lru_cache(maxsize=None)
def power_table(L: int) -> Tuple[Coords, ...]:
    """Reduced coordinates of zeta_L^n for n = 0..L-1."""
    f = cyclotomic_poly(L)
    deg = len(f) - 1
    table = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(L):
        table.append(tuple(cur))
        # multiply by zeta: shift up and reduce the overflow coefficient
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for t in range(deg):
                cur[t] -= top * f[t]
    return tuple(table)


def _coords_mul(L: int, a: Coords, b: Coords) -> Coords:
    if len(a) == 1:
        x = a[0]
        return tuple(x * y for y in b)
    if len(b) == 1:
        y = b[0]
        return tuple(x * y for x in a)
    table = power_table(L)
    out = [Fraction(0)] * len(a)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            row = table[(i + j) % L]
            xy = x * y
            for k, r in enumerate(row):
                if r:
                    out[k] += xy * r
    return tuple(out)


def _coords_inv(L: int, a: Coords) -> Coords:
    """Inverse in the field Q(zeta_L) by solving the multiplication matrix."""
    n = len(a)
    if not any(a):
        raise UnsupportedInverse("zero has no inverse")
    unit = [Fraction(1)] + [Fraction(0)] * (n - 1)
    basis = [tuple(Fraction(int(t == k)) for t in range(n)) for k in range(n)]
    # column k is a * zeta^k
    cols = [_coords_mul(L, a, e) for e in basis]
    rows = [[cols[k][r] for k in range(n)] + [unit[r]] for r in range(n)]
    sol = solve_linear(rows)
    return tuple(sol)


def solve_linear(aug: list) -> list:
    """Gauss-Jordan elimination over Fractions on an augmented square system."""
    n = len(aug)
    m = [list(map(Fraction, row)) for row in aug]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def _promote(coords: Coords, L_from: int, L_to: int) -> Coords:
    if L_from == L_to:
        return coords
    step = L_to // L_from
    table = power_table(L_to)
    out = [Fraction(0)] * phi(L_to)
    for k, c in enumerate(coords):
        if c:
            for t, r in enumerate(table[(k * step) % L_to]):
                if r:
                    out[t] += c * r
    return tuple(out)


class Scalar:
    """Element of Q(zeta_L)[q^(+-1/2), u^(+-1)] in canonical form."""

    __slots__ = ("L", "terms", "_hash")

    def __init__(self, terms: Dict[Tuple[int, int], Coords] | None = None, L: int = 2):
        self.L = L
        self.terms: Dict[Tuple[int, int], Coords] = {}
        if terms:
            for k, v in terms.items():
                if any(v):
                    self.terms[k] = tuple(Fraction(x) for x in v)
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c: Number, L: int = 2) -> "Scalar":
        n = phi(L)
        return cls({(0, 0): (Fraction(c),) + (Fraction(0),) * (n - 1)}, L)

    @classmethod
    def zero(cls, L: int = 2) -> "Scalar":
        return cls({}, L)

    @classmethod
    def one(cls, L: int = 2) -> "Scalar":
        return cls.const(1, L)

    @classmethod
    def q(cls, r: Number = 1, L: int = 2) -> "Scalar":
        """The monomial q^r for r in (1/2)Z."""
        q2 = Fraction(r) * 2
        if q2.denominator != 1:
            raise ValueError(f"q-exponent {r} is not in (1/2)Z")
        return cls.monomial(int(q2), 0, Fraction(0), 1, L)

    @classmethod
    def zeta(cls, k: int = 1, L: int = 2) -> "Scalar":
        return cls.monomial(0, 0, Fraction(k, L), 1, L)

    @classmethod
    def monomial(cls, q2: int, u: int, turn: Fraction, scale: Number, L: int) -> "Scalar":
        turn = Fraction(turn)
        L = lcm(L, turn.denominator)
        k = turn * L
        row = power_table(L)[int(k) % L]
        s = Fraction(scale)
        return cls({(q2, u): tuple(s * r for r in row)}, L)

    # structure
    def _lift(self, L: int) -> Dict[Tuple[int, int], Coords]:
        if L == self.L:
            return self.terms
        return {k: _promote(v, self.L, L) for k, v in self.terms.items()}

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar.const(other, self.L)
        if isinstance(other, SpectralParam):
            return other.to_scalar(self.L)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        L = lcm(self.L, other.L)
        out = dict(self._lift(L))
        for k, v in other._lift(L).items():
            if k in out:
                s = tuple(x + y for x, y in zip(out[k], v))
                if any(s):
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return _raw(out, L)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return _raw({k: tuple(-x for x in v) for k, v in self.terms.items()}, self.L)

    def __sub__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        L = lcm(self.L, other.L)
        a = self._lift(L)
        b = other._lift(L)
        out: Dict[Tuple[int, int], Coords] = {}
        for (q1, u1), x in a.items():
            for (q2, u2), y in b.items():
                key = (q1 + q2, u1 + u2)
                xy = _coords_mul(L, x, y)
                if key in out:
                    s = tuple(p + r for p, r in zip(out[key], xy))
                    if any(s):
                        out[key] = s
                    else:
                        del out[key]
                elif any(xy):
                    out[key] = xy
        return _raw(out, L)

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inv(self) -> "Scalar":
        """Inverse of a single-term unit; anything else raises UnsupportedInverse."""
        if len(self.terms) != 1:
            raise UnsupportedInverse(f"cannot invert non-monomial scalar {self}")
        ((q2, u), c), = self.terms.items()
        return _raw({(-q2, -u): _coords_inv(self.L, c)}, self.L)

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inv() ** (-n)
        out = Scalar.one(self.L)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other) -> "Scalar":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def _canon(self) -> Tuple:
        # normalize to the smallest L that holds every coordinate, for equality across L
        return tuple(sorted(self._lift(6 if 6 % self.L == 0 else self.L).items()))

    def __eq__(self, other) -> bool:
        other = self._coerce(other) if not isinstance(other, Scalar) else other
        if other is NotImplemented:
            return NotImplemented
        if self.L == other.L:
            return self.terms == other.terms
        L = lcm(self.L, other.L)
        return self._lift(L) == other._lift(L)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._canon())
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (q2, u), c in sorted(self.terms.items()):
            cs = _coords_str(c, self.L)
            mono = []
            if u:
                mono.append(f"u^{u}")
            if q2:
                mono.append(f"q^{_half_str(q2)}")
            if mono:
                parts.append(("" if cs == "1" else "-" if cs == "-1" else cs + "*") + "*".join(mono))
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")


def _raw(terms: Dict[Tuple[int, int], Coords], L: int) -> Scalar:
    s = Scalar.__new__(Scalar)
    s.L = L
    s.terms = terms
    s._hash = None
    return s


def _half_str(q2: int) -> str:
    if q2 % 2 == 0:
        return str(q2 // 2)
    return f"({q2}/2)"


def _coords_str(c: Coords, L: int) -> str:
    items = [(k, x) for k, x in enumerate(c) if x]
    if len(items) == 1 and items[0][0] == 0:
        return str(items[0][1])
    out = []
    for k, x in items:
        z = "" if k == 0 else (f"z{L}" if k == 1 else f"z{L}^{k}")
        if not z:
            out.append(str(x))
        elif x == 1:
            out.append(z)
        elif x == -1:
            out.append("-" + z)
        else:
            out.append(f"{x}*{z}")
    return "(" + " + ".join(out).replace("+ -", "- ") + ")"


class SpectralParam(NamedTuple):
    """Monomial unit scale * zeta^turn * q^(q2/2) * u^uexp.

    ``turn`` is a Fraction in [0, 1) counting full turns, so that zeta_L^k has
    turn k/L.  ``scale`` is a positive rational, 1 for every parameter on the
    supported grid.  The same type serves for the constants of l-weights.
    """

    turn: Fraction
    q2: int
    uexp: int = 0
    scale: Fraction = Fraction(1)

    @staticmethod
    def make(turn: Number = 0, q2: int = 0, uexp: int = 0, scale: Number = 1) -> "SpectralParam":
        scale = Fraction(scale)
        turn = Fraction(turn)
        if scale == 0:
            raise ValueError("spectral parameter must be nonzero")
        if scale < 0:
            scale = -scale
            turn += Fraction(1, 2)
        return SpectralParam(turn % 1, int(q2), int(uexp), scale)

    @staticmethod
    def q_power(r: Number, sign: int = 1) -> "SpectralParam":
        q2 = Fraction(r) * 2
        if q2.denominator != 1:
            raise ValueError(f"q-exponent {r} is not in (1/2)Z")
        return SpectralParam.make(Fraction(0) if sign > 0 else Fraction(1, 2), int(q2))

    @property
    def qexp(self) -> Fraction:
        return Fraction(self.q2, 2)

    def eps(self, L: int) -> int:
        """Exponent k with zeta_L^k equal to the root-of-unity part."""
        k = self.turn * L
        if k.denominator != 1:
            raise ValueError(f"root of unity of turn {self.turn} is not an L={L}-th root")
        return int(k)

    def on_grid(self, L: int) -> bool:
        return self.scale == 1 and (self.turn * L).denominator == 1

    def __mul__(self, other: "SpectralParam") -> "SpectralParam":  # type: ignore[override]
        return SpectralParam((self.turn + other.turn) % 1, self.q2 + other.q2,
                             self.uexp + other.uexp, self.scale * other.scale)

    def inv(self) -> "SpectralParam":
        return SpectralParam((-self.turn) % 1, -self.q2, -self.uexp, 1 / self.scale)

    def __pow__(self, n: int) -> "SpectralParam":
        return SpectralParam((self.turn * n) % 1, self.q2 * n, self.uexp * n,
                             self.scale ** n)

    def shift(self, q2: int) -> "SpectralParam":
        """Multiply by q^(q2/2)."""
        return SpectralParam(self.turn, self.q2 + q2, self.uexp, self.scale)

    def rotate(self, turn: Number) -> "SpectralParam":
        return SpectralParam((self.turn + Fraction(turn)) % 1, self.q2, self.uexp, self.scale)

    def neg(self) -> "SpectralParam":
        return self.rotate(Fraction(1, 2))

    def with_u(self, uexp: int) -> "SpectralParam":
        return SpectralParam(self.turn, self.q2, uexp, self.scale)

    def is_one(self) -> bool:
        return self.turn == 0 and self.q2 == 0 and self.uexp == 0 and self.scale == 1

    def to_scalar(self, L: int | None = None) -> Scalar:
        if L is None:
            L = lcm(2, self.turn.denominator)
        return Scalar.monomial(self.q2, self.uexp, self.turn, self.scale, L)

    def __repr__(self) -> str:
        return f"SpectralParam({self})"

    def __str__(self) -> str:
        return format_param(self)


ONE = SpectralParam(Fraction(0), 0, 0, Fraction(1))


def param_product(params: Iterable[Tuple[SpectralParam, int]]) -> SpectralParam:
    out = ONE
    for p, m in params:
        out = out * (p ** m)
    return out


def format_param(p: SpectralParam) -> str:
    """Canonical text form, e.g. ``q^3``, ``-q^(3/2)``, ``z3*q^-1``, ``u^1*q^2``."""
    parts = []
    sign = ""
    if p.scale != 1:
        parts.append(str(p.scale))
    t = p.turn
    if t == Fraction(1, 2):
        sign = "-"
    elif t != 0:
        parts.append(f"z{t.denominator}" if t.numerator == 1 else f"z{t.denominator}^{t.numerator}")
    if p.uexp:
        parts.append(f"u^{p.uexp}")
    parts.append("q^" + _half_str(p.q2))
    return sign + "*".join(parts)
