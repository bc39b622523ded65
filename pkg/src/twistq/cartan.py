"""Static data for the six twisted affine families.

Nodes of the simply-laced algebra g are numbered 1..|I|; nodes of the folded
affine diagram are numbered 0..n with 0 the affine node, and the finite part
1..n coincides with the orbit representatives I0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .scalar import Scalar, SpectralParam, lcm, solve_linear

Matrix = Tuple[Tuple[int, ...], ...]
Poly2 = Dict[Tuple[int, int], Scalar]

FAMILIES = ("A-even", "A-odd", "D", "E6", "D4-triple")


class InadmissibleType(ValueError):
    pass


@dataclass(frozen=True)
class TwistedType:
    family: str
    n: int
    M: int

    def __post_init__(self) -> None:
        ok = (
            (self.family == "A-even" and self.n >= 1 and self.M == 2)
            or (self.family == "A-odd" and self.n >= 3 and self.M == 2)
            or (self.family == "D" and self.n >= 2 and self.M == 2)
            or (self.family == "E6" and self.n == 4 and self.M == 2)
            or (self.family == "D4-triple" and self.n == 2 and self.M == 3)
        )
        if not ok:
            raise InadmissibleType(
                f"no twisted affine type with family={self.family!r}, n={self.n}, M={self.M}")

    @property
    def token(self) -> str:
        if self.family == "A-even":
            return f"A{2 * self.n}-2"
        if self.family == "A-odd":
            return f"A{2 * self.n - 1}-2"
        if self.family == "D":
            return f"D{self.n + 1}-2"
        if self.family == "E6":
            return "E6-2"
        return "D4-3"

    def __str__(self) -> str:
        return self.token


_TOKEN = re.compile(r"^([ADE])(\d+)-([23])$")


def parse_type(token: str) -> TwistedType:
    """Read a CLI type token such as ``A4-2`` or ``D4-3``."""
    m = _TOKEN.match(token.strip())
    if not m:
        raise InadmissibleType(f"malformed type token {token!r}")
    letter, rank, M = m.group(1), int(m.group(2)), int(m.group(3))
    if M == 3:
        if (letter, rank) != ("D", 4):
            raise InadmissibleType(f"only D4 admits a twist of order 3, got {token!r}")
        return TwistedType("D4-triple", 2, 3)
    if letter == "A":
        if rank % 2 == 0:
            return TwistedType("A-even", rank // 2, 2)
        return TwistedType("A-odd", (rank + 1) // 2, 2)
    if letter == "D":
        return TwistedType("D", rank - 1, 2)
    if rank != 6:
        raise InadmissibleType(f"E{rank} has no order-2 diagram automorphism")
    return TwistedType("E6", 4, 2)


# Minimal ranks of each family, used by the check suites.
MINIMAL_TOKENS = ("A2-2", "A4-2", "A5-2", "D3-2", "E6-2", "D4-3")


@dataclass(frozen=True, eq=False)
class CartanData:
    ttype: TwistedType
    I: Tuple[int, ...]
    I0: Tuple[int, ...]
    sigma: Dict[int, int]
    C: Dict[Tuple[int, int], int]
    Csigma: Matrix
    d: Tuple[Fraction, ...]
    N: Dict[int, int]
    iota: Dict[int, int]
    marks: Tuple[int, ...]
    zeta_order: int
    finite_type: str = field(default="")

    @property
    def M(self) -> int:
        return self.ttype.M

    @property
    def L(self) -> int:
        return self.zeta_order

    @property
    def token(self) -> str:
        return self.ttype.token

    def c(self, i: int, j: int) -> int:
        return self.C.get((i, j), 0)

    def is_fixed(self, i: int) -> bool:
        return self.sigma[i] == i

    def sigma_pow(self, i: int, s: int) -> int:
        for _ in range(s % self.M):
            i = self.sigma[i]
        return i

    def c_sigma_case(self, i: int) -> int:
        """C_{i, sigma(i)}, which selects the case split in Y, A and P formulas."""
        return self.c(i, self.sigma[i])

    def neighbors(self, i: int) -> List[int]:
        """j in I0 with C_{i,j} = -1."""
        return [j for j in self.I0 if self.c(i, j) == -1]

    def check_index(self, i: int) -> None:
        if i not in self.I0:
            raise IndexError(f"node {i} is not in I0 = {list(self.I0)} for {self.token}")


def _simply_laced(size: int, edges: Sequence[Tuple[int, int]]) -> Dict[Tuple[int, int], int]:
    C = {(i, i): 2 for i in range(1, size + 1)}
    for a, b in edges:
        C[(a, b)] = C[(b, a)] = -1
    return C


def _affine(n: int, simple: Sequence[Tuple[int, int]],
            double: Sequence[Tuple[int, int, int, int]]) -> Matrix:
    m = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        m[i][i] = 2
    for a, b in simple:
        m[a][b] = m[b][a] = -1
    for a, b, cab, cba in double:
        m[a][b] = cab
        m[b][a] = cba
    return tuple(tuple(r) for r in m)


def _family_data(t: TwistedType):
    """Return (|I|, edges of g, sigma, I0, Csigma, d, finite type name)."""
    n = t.n
    h = Fraction(1, 2)
    if t.family == "A-even":
        size = 2 * n
        edges = [(k, k + 1) for k in range(1, size)]
        sigma = {i: size + 1 - i for i in range(1, size + 1)}
        if n == 1:
            cs = ((2, -1), (-4, 2))
            d = (Fraction(2), h)
            fin = "A1"
        else:
            cs = _affine(n, [(k, k + 1) for k in range(1, n - 1)],
                         [(0, 1, -1, -2), (n - 1, n, -1, -2)])
            d = (Fraction(2),) + (Fraction(1),) * (n - 1) + (h,)
            fin = f"B{n}"
    elif t.family == "A-odd":
        size = 2 * n - 1
        edges = [(k, k + 1) for k in range(1, size)]
        sigma = {i: 2 * n - i for i in range(1, size + 1)}
        cs = _affine(n, [(0, 2)] + [(k, k + 1) for k in range(1, n - 1)],
                     [(n - 1, n, -2, -1)])
        d = (Fraction(1),) * n + (Fraction(2),)
        fin = f"C{n}"
    elif t.family == "D":
        size = n + 1
        edges = [(k, k + 1) for k in range(1, n - 1)] + [(n - 1, n), (n - 1, n + 1)]
        sigma = {i: i for i in range(1, size + 1)}
        sigma[n], sigma[n + 1] = n + 1, n
        cs = _affine(n, [(k, k + 1) for k in range(1, n - 1)],
                     [(0, 1, -2, -1), (n - 1, n, -1, -2)])
        d = (Fraction(1),) + (Fraction(2),) * (n - 1) + (Fraction(1),)
        fin = f"B{n}"
    elif t.family == "E6":
        size = 6
        edges = [(1, 2), (2, 3), (3, 5), (5, 6), (3, 4)]
        sigma = {1: 6, 6: 1, 2: 5, 5: 2, 3: 3, 4: 4}
        cs = _affine(4, [(0, 1), (1, 2), (3, 4)], [(2, 3, -2, -1)])
        d = (Fraction(1),) * 3 + (Fraction(2),) * 2
        fin = "F4"
    else:
        size = 4
        edges = [(1, 2), (2, 3), (2, 4)]
        sigma = {1: 3, 3: 4, 4: 1, 2: 2}
        cs = _affine(2, [(0, 1)], [(1, 2, -3, -1)])
        d = (Fraction(1), Fraction(1), Fraction(3))
        fin = "G2"
    I0 = tuple(range(1, n + 1))
    return size, edges, sigma, I0, cs, d, fin


def solve_marks(cs: Matrix, d: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Solve sum_i a_i d_i Csigma_ij = 0 for j >= 1 with a_0 = 1."""
    n = len(cs) - 1
    rows = []
    for j in range(1, n + 1):
        rows.append([d[i] * cs[i][j] for i in range(1, n + 1)] + [-d[0] * cs[0][j]])
    return (Fraction(1),) + tuple(solve_linear(rows))


def finite_cartan(name: str) -> Matrix:
    """Finite Cartan matrix in the node order used for the finite part of Csigma."""
    kind, rank = name[0], int(name[1:])
    m = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        m[i][i] = 2
    for i in range(rank - 1):
        m[i][i + 1] = m[i + 1][i] = -1
    if kind == "B" and rank >= 2:
        m[rank - 1][rank - 2] = -2
    elif kind == "C":
        m[rank - 2][rank - 1] = -2
    elif kind == "F":
        m[1][2] = -2
    elif kind == "G":
        m[0][1] = -3
    return tuple(tuple(r) for r in m)


class StructureError(AssertionError):
    pass


def validate(cd: CartanData) -> None:
    """Raise StructureError if any structural invariant fails."""
    cs, d, a = cd.Csigma, cd.d, cd.marks
    k = len(cs)
    for i in range(k):
        for j in range(k):
            if d[i] * cs[i][j] != d[j] * cs[j][i]:
                raise StructureError(f"diag(d)Csigma not symmetric at ({i},{j})")
    for j in range(k):
        if sum(a[i] * d[i] * cs[i][j] for i in range(k)) != 0:
            raise StructureError(f"marks relation fails in column {j}")
    for i in cd.I:
        for j in cd.I:
            if cd.c(i, j) != cd.c(cd.sigma[i], cd.sigma[j]):
                raise StructureError(f"sigma is not a diagram automorphism at ({i},{j})")
    for i in cd.I0:
        if any(cd.sigma_pow(i, s) < i for s in range(cd.M)):
            raise StructureError(f"node {i} is not the minimum of its orbit")
        if cd.N[i] != cd.iota[i]:
            raise StructureError(f"N_{i} != iota_{i}")
        for j in cd.I0:
            # k_i x_j^+ weight, read two ways
            if sum(cd.c(i, cd.sigma_pow(j, s)) for s in range(cd.M)) != d[i] * cs[i][j]:
                raise StructureError(f"sigma-sum of C differs from d_i Csigma at ({i},{j})")
    fin = tuple(tuple(r[1:]) for r in cs[1:])
    if fin != finite_cartan(cd.finite_type):
        raise StructureError(f"finite part is not of type {cd.finite_type}")


@lru_cache(maxsize=None)
def cartan_data(t: TwistedType | str) -> CartanData:
    """Fully populated, validated Cartan data for an admissible twisted type."""
    if isinstance(t, str):
        t = parse_type(t)
    size, edges, sigma, I0, cs, d, fin = _family_data(t)
    marks = solve_marks(cs, d)
    if any(m.denominator != 1 or m <= 0 for m in marks):
        raise StructureError(f"marks {marks} are not positive integers for {t}")
    iota = {i: (t.M if sigma[i] == i else 1) for i in I0}
    cd = CartanData(
        ttype=t,
        I=tuple(range(1, size + 1)),
        I0=I0,
        sigma=sigma,
        C=_simply_laced(size, edges),
        Csigma=cs,
        d=d,
        N=dict(iota),
        iota=iota,
        marks=tuple(int(m) for m in marks),
        zeta_order=lcm(2, t.M),
        finite_type=fin,
    )
    validate(cd)
    return cd


def sigma_orbit(cd: CartanData, i: int) -> Tuple[int, ...]:
    """The orbit of i under sigma, representative first."""
    if i not in cd.I:
        raise IndexError(f"node {i} is not a node of g for {cd.token}")
    orbit = []
    j = i
    while j not in orbit:
        orbit.append(j)
        j = cd.sigma[j]
    rep = min(orbit)
    k = orbit.index(rep)
    return tuple(orbit[k:] + orbit[:k])


def pairing(cd: CartanData, mu: Sequence[int], i: int) -> int:
    """alpha_i(mu) for mu given in the basis of fundamental coweights."""
    cd.check_index(i)
    if len(mu) != len(cd.I0):
        raise ValueError(f"coweight needs {len(cd.I0)} coordinates, got {len(mu)}")
    return int(mu[i - 1])


def q_bracket(n: int, L: int = 2) -> Scalar:
    """Symmetric quantum integer [n]_q."""
    out = Scalar.zero(L)
    sign = 1 if n >= 0 else -1
    for k in range(abs(n)):
        out = out + Scalar.q(abs(n) - 1 - 2 * k, L)
    return out if sign > 0 else -out


def d_ij(cd: CartanData, i: int, j: int) -> Fraction:
    c = cd.c_sigma_case(i)
    if c == 2:
        return Fraction(1, 2)
    if c == 0:
        return Fraction(1, 2) if cd.is_fixed(j) else Fraction(1, 2 * cd.M)
    return Fraction(1, 8)


def poly2_mul(a: Poly2, b: Poly2) -> Poly2:
    out: Poly2 = {}
    for (a1, a2), x in a.items():
        for (b1, b2), y in b.items():
            k = (a1 + b1, a2 + b2)
            v = out[k] + x * y if k in out else x * y
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def poly2_sub(a: Poly2, b: Poly2) -> Poly2:
    out = dict(a)
    for k, y in b.items():
        v = out[k] - y if k in out else -y
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def poly2_divmod(num: Poly2, den: Poly2) -> Tuple[Poly2, Poly2]:
    """Divide by a polynomial whose top u1-term is a monomial unit."""
    top = max(e1 for e1, _ in den)
    lead = [(k, v) for k, v in den.items() if k[0] == top]
    if len(lead) != 1 or not lead[0][1].is_monomial():
        raise ValueError("divisor needs a single monomial-unit leading u1 term")
    (l1, l2), lc = lead[0]
    lc_inv = lc.inv()
    quo: Poly2 = {}
    rem = dict(num)
    while True:
        cands = [k for k in rem if k[0] >= top and k[1] >= l2]
        if not cands:
            break
        k = max(cands)
        t = {(k[0] - l1, k[1] - l2): rem[k] * lc_inv}
        quo = poly2_sub(quo, {kk: -v for kk, v in t.items()})
        rem = poly2_sub(rem, poly2_mul(t, den))
    return quo, rem


class DivisionRemainder(AssertionError):
    pass


def pij_polynomial(cd: CartanData, i: int, j: int, sign: int) -> Poly2:
    """P_{i,j}^{+-}(u1, u2) as a map (e1, e2) -> Scalar."""
    cd.check_index(i)
    cd.check_index(j)
    L, M = cd.L, cd.M
    c = cd.c_sigma_case(i)
    one = {(0, 0): Scalar.one(L)}
    if c == 2 or (c == 0 and not cd.is_fixed(j)):
        return one
    s = 1 if sign > 0 else -1
    if c == -1:
        return {(1, 0): Scalar.q(s, L), (0, 1): Scalar.one(L)}
    num = {(M, 0): Scalar.q(2 * M * s, L), (0, M): Scalar.const(-1, L)}
    den = {(1, 0): Scalar.q(2 * s, L), (0, 1): Scalar.const(-1, L)}
    quo, rem = poly2_divmod(num, den)
    if rem:
        raise DivisionRemainder(f"P_{i},{j} quotient left remainder {rem}")
    return quo


def poly2_str(p: Poly2) -> str:
    if not p:
        return "0"
    parts = []
    for (e1, e2), c in sorted(p.items(), reverse=True):
        mono = "*".join(x for x in (
            f"u1^{e1}" if e1 else "", f"u2^{e2}" if e2 else "") if x)
        cs = str(c)
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"({cs})*{mono}")
    return " + ".join(parts)


def alpha_bar(cd: CartanData, i: int) -> Tuple[SpectralParam, ...]:
    """The weight alpha_bar_i as a tuple over I0: component j is q^(d_i Csigma_ij)."""
    out = []
    for j in cd.I0:
        e = cd.d[i] * cd.Csigma[i][j] * 2
        out.append(SpectralParam.make(0, int(e)))
    return tuple(out)
