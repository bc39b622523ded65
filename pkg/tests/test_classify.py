import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gens import monomials
from twistq.cartan import MINIMAL_TOKENS, alpha_bar, cartan_data
from twistq.classify import (A22FactorError, NotInLambda, OutOfScope, check_leftover_condition,
                             factor_a22, height, in_Lambda, in_r_mu, is_dominant_coweight,
                             is_dominant_lweight, leq_weight, mu_of)
from twistq.lweight import (GenMonomial, LWeight, RationalFactored, gen_A, gen_Psi, gen_Y,
                            gen_Ytilde, lw_eval)
from twistq.scalar import ONE, SpectralParam

A22 = cartan_data("A2-2")
qp = SpectralParam.q_power


def test_lambda_examples():
    cd = cartan_data("A5-2")
    assert not in_Lambda(cd, (0, 0, 1)).verdict
    assert in_Lambda(cd, (0, 0, 2)).verdict and is_dominant_coweight(cd, (0, 0, 2)).verdict
    cd = cartan_data("A4-2")
    assert not any(cd.is_fixed(i) for i in cd.I0)
    assert in_Lambda(cd, (1, -1)).verdict
    assert not is_dominant_coweight(cd, (1, -1)).verdict


def test_mu_examples():
    assert mu_of(gen_Psi(A22, 1, qp(1))) == (1,)
    for token in MINIMAL_TOKENS:
        cd = cartan_data(token)
        for i in cd.I0:
            assert mu_of(gen_Y(cd, i, qp(2))) == (0,) * len(cd.I0)
    cd = cartan_data("A5-2")
    b = qp(3)
    pole = LWeight(cd.token, [RationalFactored(), RationalFactored(),
                              RationalFactored(ONE, [(b, -1)])])
    x = gen_Psi(cd, 3, qp(1)) * pole
    with pytest.raises(NotInLambda):
        mu_of(x)
    assert not in_r_mu(x, (0, 0, 1)).verdict


def test_dominance_examples():
    x = gen_Ytilde(A22, 1, qp(1)) * gen_Psi(A22, 1, qp(3))
    rep = is_dominant_lweight(x)
    assert rep.verdict and lw_eval(rep.certificate) == x
    assert rep.extra["scope"] == "within O+^sh"
    assert not is_dominant_lweight(gen_A(A22, 1, qp(1)).inv()).verdict
    g = LWeight.constant(A22, (qp(5),))
    assert is_dominant_lweight(g).verdict


def test_dominance_out_of_grid_is_reported():
    off = LWeight(A22.token, [RationalFactored(ONE, [(SpectralParam.make(0, 0, 0, 3), -1)])])
    with pytest.raises(OutOfScope):
        is_dominant_lweight(off)


def test_non_a_even_reports_finite_dimensionality():
    cd = cartan_data("D4-3")
    rep = is_dominant_lweight(gen_Y(cd, 2, qp(1)) * gen_Psi(cd, 1, qp(0)))
    assert rep.verdict and rep.extra["finite_dimensional"] is True and "scope" not in rep.extra


@given(monomials())
def test_r_mu_and_dominance_invariants(m):
    x = lw_eval(m)
    try:
        mu = mu_of(x)
    except NotInLambda:
        return
    assert in_r_mu(x, mu).verdict
    try:
        rep = is_dominant_lweight(x)
    except OutOfScope:
        return
    if rep.verdict:
        assert is_dominant_coweight(x.cd, mu).verdict


def test_leq_weight_examples():
    w = (qp(2),)
    rep = leq_weight(A22, w, w)
    assert rep.verdict and height(A22, (ONE,)) == 0
    (ab,) = alpha_bar(A22, 1)
    assert ab == qp(1)
    assert leq_weight(A22, (ONE,), (ab,)).verdict and height(A22, (ab,)) == 1
    assert not leq_weight(A22, (ONE,), (qp(Fraction(1, 2)),)).verdict
    assert not leq_weight(A22, (ab,), (ONE,)).verdict


@st.composite
def root_lattice_weights(draw, token):
    cd = cartan_data(token)
    n = [draw(st.integers(-2, 3)) for _ in cd.I0]
    w = [ONE] * len(cd.I0)
    for k, i in zip(n, cd.I0):
        w = [a * b ** k for a, b in zip(w, alpha_bar(cd, i))]
    return tuple(w)


@pytest.mark.parametrize("token", MINIMAL_TOKENS)
@given(data=st.data())
def test_leq_weight_partial_order(token, data):
    cd = cartan_data(token)
    a, b, c = (data.draw(root_lattice_weights(token)) for _ in range(3))
    assert leq_weight(cd, a, a).verdict
    if leq_weight(cd, a, b).verdict and leq_weight(cd, b, a).verdict:
        assert a == b
    if leq_weight(cd, a, b).verdict and leq_weight(cd, b, c).verdict:
        assert leq_weight(cd, a, c).verdict


def _pair_lweight(a, b):
    return gen_Psi(A22, 1, a) * gen_Psi(A22, 1, b).inv()


def test_factor_a22_examples():
    fac = factor_a22(_pair_lweight(qp(4), ONE))
    assert [(p.kind, p.T) for p in fac.pairs] == [("J", None)]
    fac = factor_a22(_pair_lweight(qp(-2), ONE))
    assert [(p.kind, p.T) for p in fac.pairs] == [("F", 1)]
    c = qp(3).neg()
    fac = factor_a22(gen_Psi(A22, 1, c))
    assert fac.pairs == () and fac.plus == (c,)
    with pytest.raises(A22FactorError):
        factor_a22(gen_Psi(A22, 1, c).inv())


def _in_b_q_minus_2N(c, b, bound=64):
    return any(c == b.shift(-4 * t) for t in range(bound))


def violates_independently(c, pair):
    if pair.kind == "J":
        return _in_b_q_minus_2N(c, pair.b)
    # {b, b q^-2, ..., a q^2}
    return any(c == pair.b.shift(-4 * t) for t in range(pair.T))


def random_dominant_a22(rng):
    letters = []
    for _ in range(rng.randint(1, 6)):
        a = qp(rng.randint(-5, 5), sign=rng.choice([1, -1]))
        letters.append(((rng.choice(["Y", "P"]), 1, a), rng.randint(1, 2)))
    return lw_eval(GenMonomial("A2-2", letters, (qp(rng.randint(-3, 3)),)))


@given(st.integers(0, 2 ** 32 - 1))
def test_factor_a22_certificates(seed):
    x = random_dominant_a22(random.Random(seed))
    fac = factor_a22(x)
    assert fac.product() == x
    assert check_leftover_condition(fac) is None
    for c in fac.plus:
        for p in fac.pairs:
            assert not violates_independently(c, p)
        assert c.turn in (0, Fraction(1, 2))
    for p in fac.pairs:
        assert (p.kind == "F") == _in_b_q_minus_2N(p.a, p.b)
