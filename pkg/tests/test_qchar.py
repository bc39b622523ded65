import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from test_classify import random_dominant_a22
from twistq.cartan import cartan_data
from twistq.lweight import LWeight, gen_A, gen_Psi, gen_Y, gen_Ytilde, lw_degree
from twistq.qchar import (EXACT, QCharacter, Term, UnsupportedQCharacter, borel_qchar,
                          cone_check, nakajima_certificate, nakajima_le, placeholder_chi,
                          qc_a22_kr, qc_a22_neg_prefundamental, qc_a22_simple, qc_class,
                          qc_mul, qc_one, qc_project_weights, qc_simple, weight_mul)
from twistq.scalar import ONE, SpectralParam

A22 = cartan_data("A2-2")
qp = SpectralParam.q_power


def Ainv(a):
    return gen_A(A22, 1, a).inv()


def displayed_terms(c, mmax, depth):
    """Enumerate the displayed A2(2) string sums directly (no library series code)."""
    out = [(LWeight.one(A22), 0)]
    for m in range(1, mmax + 1):
        base = LWeight.one(A22)
        for t in range(m):
            base = base * Ainv(c.shift(-4 * t))
        if m <= depth:
            out.append((base, m))
        for k in range(1, m + 1):
            extra = base
            for s in range(k):
                extra = extra * Ainv(c.neg().shift(2 - 4 * s))
            if m + k <= depth:
                out.append((extra, m + k))
    return out


def test_ring_examples():
    psi = qc_class(gen_Psi(A22, 1, qp(1)))
    assert qc_mul(psi, qc_one(A22)) == psi
    a, b, c = (gen_Psi(A22, 1, qp(k)) for k in (1, 2, 3))
    s = qc_class(a) + qc_class(b)
    prod = qc_mul(s, qc_class(c))
    assert prod.as_multiset() == {a * c: 1, b * c: 1}
    # merging: (a + a) * c has multiplicity 2 at a*c
    assert qc_mul(qc_class(a) + qc_class(a), qc_class(c)).multiplicity(a * c) == 2
    assert lw_degree(prod.leading) == (2,)


def test_nakajima_examples():
    psi = gen_Psi(A22, 1, qp(2))
    x = psi * gen_A(A22, 1, qp(1)).inv()
    assert nakajima_le(x, psi)
    cert = nakajima_certificate(x, psi)
    assert cert.letters == ((("A", 1, qp(1)), 1),)
    assert nakajima_le(psi, psi)
    assert not nakajima_le(psi * gen_A(A22, 1, qp(1)), psi)


def test_neg_prefundamental_small_depths():
    c = qp(1)
    d0 = qc_a22_neg_prefundamental(c, 0)
    assert d0.as_multiset() == {gen_Psi(A22, 1, c).inv(): 1}
    d1 = qc_a22_neg_prefundamental(c, 1)
    lead = gen_Psi(A22, 1, c).inv()
    assert d1.as_multiset() == {lead: 1, lead * Ainv(c): 1}


@pytest.mark.parametrize("depth", range(0, 7))
def test_neg_prefundamental_matches_display(depth):
    c = qp(-1)
    lead = gen_Psi(A22, 1, c).inv()
    expected = Counter(lead * t for t, _ in displayed_terms(c, depth, depth))
    got = qc_a22_neg_prefundamental(c, depth)
    assert got.as_multiset() == dict(expected)
    count = 1 + depth + sum(1 for m in range(1, depth + 1) for k in range(1, m + 1) if m + k <= depth)
    assert sum(got.as_multiset().values()) == count


@pytest.mark.parametrize("T", range(0, 7))
def test_kr_matches_display(T):
    b = qp(2)
    lead = gen_Psi(A22, 1, b.shift(-4 * T)) * gen_Psi(A22, 1, b).inv()
    expected = Counter(lead * t for t, _ in displayed_terms(b, T, 10 ** 6))
    got = qc_a22_kr(b, T)
    assert got.depth is EXACT
    assert got.as_multiset() == dict(expected)
    assert len(got) == 1 + T + T * (T + 1) // 2
    assert not cone_check(got)


def test_simple_examples():
    x = gen_Psi(A22, 1, qp(-2)) * gen_Psi(A22, 1, ONE).inv()
    c, fac = qc_a22_simple(x, 6)
    assert c == qc_a22_kr(ONE, 1) and len(c) == 3
    one_dim = qc_simple(gen_Psi(A22, 1, qp(3)), 6)
    assert len(one_dim) == 1


def test_non_a22_support_is_limited():
    cd = cartan_data("D4-3")
    assert len(qc_simple(gen_Psi(cd, 2, qp(1)), 4)) == 1
    with pytest.raises(UnsupportedQCharacter):
        qc_simple(gen_Psi(cd, 2, qp(1)).inv(), 4)


@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 4))
def test_simple_cone_on_random_dominant(seed, depth):
    x = random_dominant_a22(random.Random(seed))
    c, _ = qc_a22_simple(x, depth)
    assert c.leading == x and c.multiplicity(x) == 1
    for term in c.terms:
        assert nakajima_le(term, x)


def _small_dominant(rng):
    x = LWeight.one(A22)
    for _ in range(rng.randint(1, 3)):
        a = qp(rng.randint(-3, 3), sign=rng.choice([1, -1]))
        x = x * (gen_Psi(A22, 1, a) if rng.random() < 0.5 else gen_Y(A22, 1, a))
    return x


def _random_char(rng, depth):
    x = _small_dominant(rng)
    if rng.random() < 0.5:
        x = x * gen_Psi(A22, 1, qp(rng.randint(-3, 3))).inv()
    try:
        return qc_simple(x, depth)
    except ValueError:
        return qc_a22_neg_prefundamental(qp(rng.randint(-3, 3)), depth)


@given(st.integers(0, 2 ** 32 - 1))
def test_ring_laws(seed):
    rng = random.Random(seed)
    a, b, c = (_random_char(rng, 3) for _ in range(3))
    assert qc_mul(a, b) == qc_mul(b, a)
    assert qc_mul(qc_mul(a, b), c) == qc_mul(a, qc_mul(b, c))
    assert qc_mul(a, qc_one(A22)) == a
    assert lw_degree(qc_mul(a, b).leading) == tuple(
        s + t for s, t in zip(lw_degree(a.leading), lw_degree(b.leading)))


@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 4))
def test_depth_monotonicity(seed, depth):
    rng = random.Random(seed)
    c = qp(rng.randint(-4, 4), sign=rng.choice([1, -1]))
    assert qc_a22_neg_prefundamental(c, depth + 1).truncate(depth) == \
        qc_a22_neg_prefundamental(c, depth)
    x, y = (_random_char(random.Random(seed + k), depth + 1) for k in (1, 2))
    x0, y0 = (_random_char(random.Random(seed + k), depth) for k in (1, 2))
    assert qc_mul(x, y).truncate(depth) == qc_mul(x0, y0).truncate(depth)


def test_weight_projection_examples():
    assert qc_project_weights(qc_class(gen_Psi(A22, 1, qp(2)))) == {(ONE,): 1}
    assert qc_project_weights(qc_class(gen_Ytilde(A22, 1, qp(2)))) == {(ONE,): 1}


@given(st.integers(0, 2 ** 32 - 1))
def test_weight_projection_is_multiplicative(seed):
    rng = random.Random(seed)
    # exact characters, so that no truncation interferes
    a, b = (qc_simple(_small_dominant(rng), 10 ** 3) for _ in range(2))
    assert a.depth is EXACT and b.depth is EXACT
    assert qc_project_weights(qc_mul(a, b)) == weight_mul(qc_project_weights(a),
                                                          qc_project_weights(b))


def test_borel_examples():
    simple = qc_a22_kr(qp(1), 2)
    assert borel_qchar(simple, (0,), {}, 6) == simple.truncate(6)
    psi = gen_Psi(A22, 1, qp(1))
    t = LWeight.constant(A22, (qp(-1),))
    toy = QCharacter("A2-2", {LWeight.one(A22): Term(1, 0, None), t: Term(1, 1, None)},
                     LWeight.one(A22), 6)
    out = borel_qchar(qc_class(psi), (A22.iota[1],), {1: toy}, 6)
    assert out.as_multiset() == {psi: 1, psi * t: 1}


@pytest.mark.parametrize("token", ["A2-2", "D4-3", "A5-2"])
@pytest.mark.parametrize("depth", [4, 5, 6, 7, 8])
def test_borel_depth_stability(token, depth):
    cd = cartan_data(token)
    rng = random.Random(depth)
    x = LWeight.one(cd)
    for _ in range(rng.randint(0, 3)):
        x = x * gen_Psi(cd, rng.choice(cd.I0), qp(rng.randint(-3, 3)))
    simple = qc_simple(x, depth + 1)
    mu = tuple(cd.iota[i] * rng.randint(0, 2) for i in cd.I0)
    hi = {i: placeholder_chi(cd, i, depth + 1) for i in cd.I0}
    lo = {i: placeholder_chi(cd, i, depth) for i in cd.I0}
    assert borel_qchar(simple, mu, hi, depth + 1).truncate(depth) == \
        borel_qchar(simple, mu, lo, depth)
    zero = borel_qchar(simple, (0,) * len(cd.I0), lo, depth)
    assert zero == simple.truncate(depth)


def test_borel_rejects_bad_mu():
    cd = cartan_data("A5-2")
    chi = {i: placeholder_chi(cd, i, 3) for i in cd.I0}
    with pytest.raises(ValueError):
        borel_qchar(qc_one(cd), (0, 0, 1), chi, 3)
    with pytest.raises(ValueError):
        borel_qchar(qc_one(cd), (-1, 0, 0), chi, 3)
