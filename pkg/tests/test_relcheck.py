import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gens import random_lweight
from oracle import S, param_value
from twistq.cartan import MINIMAL_TOKENS, cartan_data, pij_polynomial
from twistq.lweight import LWeight, RationalFactored, gen_A, gen_Psi, gen_Y, gen_Ytilde
from twistq.relcheck import (CHECKS, RelationShape, UnknownCheck, check_relation_shape,
                             check_rho_u_homogeneity, check_structural, delta_vanishes,
                             is_polynomial_lweight, one_dim_exists, phi_delta_difference,
                             relation_catalog, run_suite)
from twistq.scalar import ONE, Scalar, SpectralParam

A22 = cartan_data("A2-2")
qp = SpectralParam.q_power


def _value(s: Scalar) -> Fraction:
    out = Fraction(0)
    for (q2, _), coords in s.terms.items():
        assert all(c == 0 for c in coords[1:])
        out += coords[0] * S ** q2
    return out


@pytest.mark.parametrize("token", MINIMAL_TOKENS)
def test_structural_passes(token):
    assert check_structural(cartan_data(token)).passed


def test_structural_mutation_gives_witness():
    cd = cartan_data("A2-2")
    bad = dataclasses.replace(cd, Csigma=((2, -1), (-3, 2)))
    res = check_structural(bad)
    assert not res.passed and res.witness == (0, 1)
    assert cd.marks == (1, 2)


def test_delta_examples():
    a = qp(1)
    x = gen_Psi(A22, 1, a)
    assert phi_delta_difference(x, 1, 6).is_empty()
    ds = phi_delta_difference(x.inv(), 1, 6)
    # formal delta(az): coefficient a^m at z^m for every |m| <= 6
    av = param_value(a)
    assert {k: _value(v) for k, v in ds.coefficients.items()} == {m: av ** m for m in range(-6, 7)}
    assert ds.certified and ds.poles == {a: 1}
    y = phi_delta_difference(gen_Y(A22, 1, a), 1, 12)
    assert y.certified and set(y.poles) == {a.shift(2)}


@pytest.mark.parametrize("token", MINIMAL_TOKENS)
def test_generators_supported_on_poles(token):
    cd = cartan_data(token)
    for i in cd.I0:
        for g in (gen_Y, gen_Ytilde, gen_A):
            x = g(cd, i, qp(1))
            for j in cd.I0:
                ds = phi_delta_difference(x, j, 12)
                assert ds.certified
                assert set(ds.poles) == {a for a, m in x.comps[cd.I0.index(j)].factors if m < 0}


def test_one_dim_examples():
    a = qp(2)
    assert one_dim_exists(gen_Psi(A22, 1, a))[0]
    ok, reason = one_dim_exists(gen_Psi(A22, 1, a).inv())
    assert not ok and "pole" in reason
    assert one_dim_exists(LWeight.constant(A22, (qp(3),)))[0]


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(MINIMAL_TOKENS))
def test_one_dim_routes_agree(seed, token):
    x = random_lweight(random.Random(seed), token)
    assert one_dim_exists(x)[0] == is_polynomial_lweight(x)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(MINIMAL_TOKENS))
def test_specialized_window_matches_symbolic(seed, token):
    x = random_lweight(random.Random(seed), token, max_letters=3)
    symbolic = all(phi_delta_difference(x, i, 8).is_empty() for i in x.cd.I0)
    assert delta_vanishes(x, 8) == symbolic


def test_specialization_collision_falls_back():
    # 2 * q^0 and q^(1/2) coincide at q^(1/2) = 2
    f = RationalFactored(ONE, [(SpectralParam.make(0, 0, 0, 2), 1), (qp(Fraction(1, 2)), -1)])
    x = LWeight("A2-2", [f])
    assert not delta_vanishes(x, 6)


def test_rho_examples():
    cat = relation_catalog(A22)
    xx = [r for r in cat if r.ident.startswith("xx")]
    for r in xx:
        degs = {sum(k) for k in r.lhs} | {sum(k) for k in r.rhs}
        assert degs == {A22.M}
    cd = cartan_data("A5-2")
    p = pij_polynomial(cd, 1, 3, 1)
    assert {e1 + e2 for e1, e2 in p} == {1}
    assert {e1 + e2 for e1, e2 in pij_polynomial(cd, 3, 3, 1)} == {0}


def test_rho_detects_inhomogeneous_shape():
    one = Scalar.one()
    bad = RelationShape("bad", ("u1", "u2"), (-1, -1), {(1, 0): one, (0, 0): one},
                        {(1, 0): one})
    assert check_relation_shape(bad) is not None


@pytest.mark.parametrize("token", MINIMAL_TOKENS)
def test_rho_passes(token):
    assert check_rho_u_homogeneity(cartan_data(token)).passed


def test_suite_defaults_and_edge_cases():
    rep = run_suite(sorted(CHECKS))
    assert rep.passed and len(rep.results) == len(CHECKS) * len(MINIMAL_TOKENS)
    with pytest.warns(UserWarning):
        empty = run_suite([])
    assert empty.passed and empty.warnings
    with pytest.raises(UnknownCheck):
        run_suite(["nope"])


def test_suite_isolates_bad_d_vector():
    cd = cartan_data("A4-2")
    bad = dataclasses.replace(cd, d=(Fraction(2), Fraction(1), Fraction(1)))
    rep = run_suite(["structural", "g"], [bad, "A2-2"])
    fails = rep.failures()
    assert [(r.name, r.ctype) for r in fails] == [("structural", "A4-2")]
