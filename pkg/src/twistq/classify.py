"""Classification predicates: shift lattices, l-weight classes, dominance,
the weight order, and the factorization used for A2(2) simple modules.

Every predicate returns a :class:`ClassifyReport` whose certificate can be
re-checked independently of the code that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .cartan import CartanData, cartan_data, pairing
from .lweight import (LWeight, NotFactorable, RationalFactored, gen_Psi, lw_degree,
                      lw_eval, lw_factor)
from .scalar import ONE, SpectralParam, solve_linear


@dataclass
class ClassifyReport:
    subject: Any
    verdict: bool
    certificate: Any = None
    notes: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict


class OutOfScope(ValueError):
    pass


def _check_mu(cd: CartanData, mu: Sequence[int]) -> Tuple[int, ...]:
    if len(mu) != len(cd.I0):
        raise ValueError(f"coweight needs {len(cd.I0)} coordinates for {cd.token}, got {len(mu)}")
    return tuple(int(m) for m in mu)


def in_Lambda(cd: CartanData, mu: Sequence[int]) -> ClassifyReport:
    """M divides alpha_i(mu) at every sigma-fixed node."""
    mu = _check_mu(cd, mu)
    for i in cd.I0:
        if cd.is_fixed(i) and pairing(cd, mu, i) % cd.M:
            return ClassifyReport(mu, False, i,
                                  f"alpha_{i}(mu) = {mu[i - 1]} is not divisible by M = {cd.M} "
                                  f"at the fixed node {i}")
    return ClassifyReport(mu, True, None, "divisible at every fixed node")


def is_dominant_coweight(cd: CartanData, mu: Sequence[int]) -> ClassifyReport:
    lam = in_Lambda(cd, mu)
    if not lam.verdict:
        return ClassifyReport(lam.subject, False, lam.certificate, lam.notes)
    for i in cd.I0:
        if pairing(cd, lam.subject, i) < 0:
            return ClassifyReport(lam.subject, False, i, f"alpha_{i}(mu) < 0")
    return ClassifyReport(lam.subject, True, None, "in Lambda and nonnegative")


class NotInLambda(ValueError):
    def __init__(self, message: str, node: int):
        super().__init__(message)
        self.node = node


def mu_of(x: LWeight) -> Tuple[int, ...]:
    """The coweight whose pairings are the component degrees; must lie in Lambda."""
    mu = lw_degree(x)
    rep = in_Lambda(x.cd, mu)
    if not rep.verdict:
        raise NotInLambda(f"degree vector {mu} is not in Lambda: {rep.notes}", rep.certificate)
    return mu


def mu_report(x: LWeight) -> ClassifyReport:
    mu = lw_degree(x)
    rep = in_Lambda(x.cd, mu)
    return ClassifyReport(x, rep.verdict, mu if rep.verdict else rep.certificate, rep.notes,
                          {"degree": mu})


def in_r_mu(x: LWeight, mu: Sequence[int]) -> ClassifyReport:
    cd = x.cd
    mu = _check_mu(cd, mu)
    deg = lw_degree(x)
    for i, d, m in zip(cd.I0, deg, mu):
        if d != m:
            return ClassifyReport(x, False, i, f"deg at node {i} is {d}, alpha_{i}(mu) = {m}",
                                  {"degree": deg})
    lam = in_Lambda(cd, mu)
    if not lam.verdict:
        return ClassifyReport(x, False, lam.certificate, lam.notes, {"degree": deg})
    return ClassifyReport(x, True, mu, "degree vector matches mu", {"degree": deg})


def _in_q_integer_grid(x: LWeight) -> bool:
    return all(a.turn == 0 and a.scale == 1 and a.uexp == 0 and a.q2 % 2 == 0
               for a in x.params())


def is_dominant_lweight(x: LWeight) -> ClassifyReport:
    """Dominance via the canonical Y/P factorization; also reports finite-dimensionality."""
    cd = x.cd
    try:
        m = lw_factor(x, ("Y", "P"))
    except NotFactorable as exc:
        if exc.factor is not None and not exc.factor.on_grid(cd.L):
            raise OutOfScope(str(exc)) from None
        return ClassifyReport(x, False, {"node": exc.component, "factor": exc.factor}, str(exc),
                              {"finite_dimensional": False})
    neg = [(k, e) for k, e in m.letters if e < 0]
    verdict = not neg
    notes = ("monomial in Y, P and a constant with nonnegative exponents" if verdict
             else f"negative exponent on {neg[0][0][0]}[{neg[0][0][1]},{neg[0][0][2]}]")
    extra: Dict[str, Any] = {}
    if cd.ttype.family == "A-even":
        if _in_q_integer_grid(x):
            extra["finite_dimensional"] = verdict
            extra["scope"] = "within O+^sh"
        else:
            extra["finite_dimensional"] = None
            extra["scope"] = "out of proven scope"
    else:
        extra["finite_dimensional"] = verdict
    if verdict:
        extra["mu"] = mu_of(x)
    return ClassifyReport(x, verdict, m, notes, extra)


# weight order on t* tuples of monomial units

def _weight_ratio(cd: CartanData, w1: Sequence[SpectralParam], w2: Sequence[SpectralParam]
                  ) -> List[Fraction]:
    if len(w1) != len(cd.I0) or len(w2) != len(cd.I0):
        raise ValueError(f"weights need {len(cd.I0)} entries")
    out = []
    for a, b in zip(w1, w2):
        r = b * a.inv()
        if r.turn != 0 or r.scale != 1 or r.uexp != 0:
            raise OutOfScope(f"weight ratio {r} has a nontrivial root-of-unity or scalar part")
        out.append(Fraction(r.q2, 2))
    return out


def solve_root_coords(cd: CartanData, exps: Sequence[Fraction]) -> List[Fraction]:
    """n with exps_j = sum_i n_i d_i Csigma_ij, i.e. ratio = prod alpha_bar_i^(n_i)."""
    n = len(cd.I0)
    rows = [[cd.d[i] * cd.Csigma[i][j] for i in cd.I0] + [Fraction(exps[j - 1])]
            for j in cd.I0]
    assert len(rows) == n
    return solve_linear(rows)


def leq_weight(cd: CartanData, w1: Sequence[SpectralParam], w2: Sequence[SpectralParam]
               ) -> ClassifyReport:
    """w1 <= w2 iff w2/w1 is a nonnegative integer monomial in the alpha_bar_i."""
    n = solve_root_coords(cd, _weight_ratio(cd, w1, w2))
    ok = all(v.denominator == 1 and v >= 0 for v in n)
    notes = "nonnegative integer root coordinates" if ok else "root coordinates not in N^I0"
    return ClassifyReport((tuple(w1), tuple(w2)), ok, tuple(n), notes)


def height(cd: CartanData, ratio: Sequence[SpectralParam]) -> int:
    rep = leq_weight(cd, (ONE,) * len(cd.I0), ratio)
    if not rep.verdict:
        raise ValueError("ratio is not in the positive root cone")
    return int(sum(rep.certificate))


# A2(2) factorization

@dataclass(frozen=True)
class A22Pair:
    a: SpectralParam
    b: SpectralParam
    kind: str  # "F" when a lies in b q^(-2N), else "J"
    T: Optional[int]


@dataclass(frozen=True)
class A22Factorization:
    gamma: SpectralParam
    pairs: Tuple[A22Pair, ...]
    plus: Tuple[SpectralParam, ...]
    nodes: int = 0

    def product(self) -> LWeight:
        cd = cartan_data("A2-2")
        out = LWeight.constant(cd, (self.gamma,))
        for p in self.pairs:
            out = out * gen_Psi(cd, 1, p.a) * gen_Psi(cd, 1, p.b).inv()
        for c in self.plus:
            out = out * gen_Psi(cd, 1, c)
        return out


class A22FactorError(ValueError):
    pass


def in_progression_below(c: SpectralParam, b: SpectralParam) -> bool:
    """c in b q^(-2N)."""
    return (c.turn == b.turn and c.scale == b.scale and c.uexp == b.uexp
            and c.q2 <= b.q2 and (b.q2 - c.q2) % 4 == 0)


def make_pair(a: SpectralParam, b: SpectralParam) -> A22Pair:
    if in_progression_below(a, b):
        return A22Pair(a, b, "F", (b.q2 - a.q2) // 4)
    return A22Pair(a, b, "J", None)


def violates_leftover(c: SpectralParam, pair: A22Pair) -> bool:
    if not in_progression_below(c, pair.b):
        return False
    if pair.kind == "J":
        return True
    return c.q2 > pair.a.q2


def check_leftover_condition(fac: A22Factorization) -> Optional[Tuple[SpectralParam, A22Pair]]:
    """First (c, pair) violating the condition, or None."""
    for c in fac.plus:
        for p in fac.pairs:
            if violates_leftover(c, p):
                return c, p
    return None


def factor_a22(x: LWeight, budget: int = 10 ** 4) -> A22Factorization:
    """Split x = gamma * prod (P_a/P_b) * prod P_c subject to the leftover-zero condition.

    Poles are processed from the bottom up and each is matched first to the
    nearest unmatched zero below it on its own q^2-chain; this reproduces the
    usual bracket matching and succeeds at the first leaf for dominant input.
    Other assignments are explored by backtracking within the node budget.
    """
    cd = x.cd
    if cd.token != "A2-2":
        raise ValueError("factor_a22 applies to type A2-2 only")
    (comp,) = x.comps
    for a, _ in comp.factors:
        if a.scale != 1 or a.uexp or a.turn not in (0, Fraction(1, 2)) or a.q2 % 2:
            raise OutOfScope(f"parameter {a} is not in +-q^Z")
    if comp.degree() < 0:
        raise A22FactorError(f"degree {comp.degree()} < 0: more poles than zeros")
    zeros: Dict[SpectralParam, int] = {a: m for a, m in comp.factors if m > 0}
    poles: List[SpectralParam] = sorted(
        (a for a, m in comp.factors if m < 0 for _ in range(-m)), key=lambda a: (a.q2, a.turn))
    nodes = 0
    chosen: List[A22Pair] = []

    def candidates(b: SpectralParam) -> List[SpectralParam]:
        avail = [z for z, k in zeros.items() if k > 0]
        same = sorted((z for z in avail if in_progression_below(z, b)), key=lambda z: -z.q2)
        rest = sorted((z for z in avail if not in_progression_below(z, b)),
                      key=lambda z: (-z.q2, z.turn))
        return same + rest

    def leaf_ok() -> bool:
        for c, k in zeros.items():
            if k > 0 and any(violates_leftover(c, p) for p in chosen):
                return False
        return True

    def search(k: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise A22FactorError(f"no certificate found within {budget} search nodes")
        if k == len(poles):
            return leaf_ok()
        b = poles[k]
        for z in candidates(b):
            zeros[z] -= 1
            chosen.append(make_pair(z, b))
            if search(k + 1):
                return True
            chosen.pop()
            zeros[z] += 1
        return False

    if not search(0):
        raise A22FactorError("no assignment of zeros to poles satisfies the leftover condition")
    plus = tuple(sorted((z for z, k in zeros.items() for _ in range(k)),
                        key=lambda a: (a.q2, a.turn)))
    return A22Factorization(comp.constant, tuple(chosen), plus, nodes)
