import random

import pytest

from dmforms.carlitz import (AdditivePoly, carlitz_phi, torsion_exponential,
                             t_sub_a, goss_table, goss_table_for_prime,
                             goss_mod_T_closed_form, multinomial_mod_p)
from dmforms.ffield import Fq
from dmforms.polyring import (PolyA, PrimePoly, RatField, RatK,
                              monic_irreducibles, monic_polys, parse_poly,
                              reduce_at_theta)

F2 = Fq(2)
F3 = Fq(3)


def test_carlitz_phi_base():
    phi_T = carlitz_phi(parse_poly(F2, "T"))
    assert [str(c) for c in phi_T.coeffs] == ["T", "1"]
    phi_1 = carlitz_phi(PolyA.one(F3))
    assert [str(c) for c in phi_1.coeffs] == ["1"]
    phi_T2 = carlitz_phi(parse_poly(F2, "T^2"))
    assert [str(c) for c in phi_T2.coeffs] == ["T^2", "T^2+T", "1"]
    with pytest.raises(ValueError):
        carlitz_phi(PolyA.zero(F2))


def test_carlitz_phi_structure():
    for field in (F2, F3):
        for text in ("T^2+T+1", "T^3+T"):
            a = parse_poly(field, text)
            phi = carlitz_phi(a)
            assert phi.coeffs[0] == a            # c_0 = a
            assert phi.coeffs[a.degree] == PolyA.constant(a.lead())


def test_phi_multiplicativity_random():
    rng = random.Random(5)
    for field in (F2, F3):
        for _ in range(8):
            a = PolyA.from_codes(field, tuple(rng.randrange(field.q)
                                              for _ in range(rng.randrange(1, 4)))
                                 + (1,))
            b = PolyA.from_codes(field, tuple(rng.randrange(field.q)
                                              for _ in range(rng.randrange(1, 4)))
                                 + (1,))
            phi_ab = carlitz_phi(a * b)
            assert phi_ab == carlitz_phi(a).compose(carlitz_phi(b))
            assert phi_ab == carlitz_phi(b).compose(carlitz_phi(a))


def test_torsion_exponential():
    e = torsion_exponential(PrimePoly.parse(F2, "T+1"))
    assert [str(c) for c in e.coeffs] == ["1", "1/(T+1)"]
    for text in ("T^2+T+1", "T^3+T+1"):
        ee = torsion_exponential(PrimePoly.parse(F2, text))
        assert ee.coeffs[0] == RatK.one(F2)


def test_torsion_exponential_mod_T():
    # reductions of the coefficients: (1, alpha_1/alpha_0, ..., 1/alpha_0)
    pp = PrimePoly.parse(F2, "T^2+T+1")
    e = torsion_exponential(pp)
    red = [reduce_at_theta(c, F2.zero) for c in e.coeffs]
    assert [c.code for c in red] == [1, 1, 1]
    pp3 = PrimePoly.parse(F3, "T^2+1")
    e3 = torsion_exponential(pp3)
    red3 = [reduce_at_theta(c, F3.zero) for c in e3.coeffs]
    inv_a0 = pp3.residue.inv()
    assert red3 == [a * inv_a0 for a in pp3.alpha]


def test_t_sub_a():
    assert t_sub_a(PolyA.one(F2), 5) == __import__('dmforms').TSeries.t(
        RatField(F2), 5)
    ta = t_sub_a(parse_poly(F2, "T"), 4)
    assert [str(c) for c in ta.coeffs] == ["0", "0", "1", "T", "T^2"]
    with pytest.raises(ValueError):
        t_sub_a(parse_poly(F3, "2*T"), 4)


@pytest.mark.parametrize("field", [F2, F3])
def test_t_sub_a_integrality_and_leading(field):
    N = 40
    for d in range(0, 4):
        for a in monic_polys(field, d):
            ta = t_sub_a(a, N)
            Q = field.q ** d
            assert all(c.is_integral() for c in ta.coeffs)
            if Q <= N:
                assert ta.coeffs[Q] == RatK.one(field)
                assert all(not ta.coeffs[i] for i in range(Q))


def test_t_sub_a_against_naive_inverse():
    # cross-check the sparse recurrence against the generic series inverse
    from dmforms.tseries import TSeries
    base = RatField(F3)
    for text in ("T", "T^2+1", "T^2+T+2"):
        a = parse_poly(F3, text)
        N = 30
        phi = carlitz_phi(a)
        Q = F3.q ** a.degree
        unit_coeffs = [RatK.zero(F3)] * (N - Q + 1)
        for i, c in enumerate(phi.coeffs):
            off = Q - F3.q ** i
            if off <= N - Q:
                unit_coeffs[off] = RatK.from_poly(c)
        unit = TSeries(base, unit_coeffs, N - Q)
        expected = unit.inv().shift(Q)
        assert t_sub_a(a, N) == expected


def test_goss_table_small():
    for field, prime_text in ((F2, "T^2+T+1"), (F3, "T^2+1")):
        pp = PrimePoly.parse(field, prime_text)
        table = goss_table_for_prime(pp, 3 * field.q)
        q = field.q
        base = RatField(field)
        for n in range(1, q + 1):
            cs = table.coeffs(n)
            assert cs[n] == base.one and all(c.is_zero() for c in cs[:n])
        # G_{q+1} = X^{q+1} + alpha_1 X^2
        cs = table.coeffs(q + 1)
        alpha1 = torsion_exponential(pp).coeffs[1]
        assert cs[q + 1] == base.one
        assert cs[2] == base.element(alpha1)
        assert all(c.is_zero() for i, c in enumerate(cs)
                   if i not in (2, q + 1))


def test_goss_table_trivial_lattice():
    # all alpha_i = 0 for i >= 1 degenerates to G_n = X^n
    lattice = AdditivePoly(F3, [RatK.one(F3)])
    table = goss_table(lattice, 12)
    base = RatField(F3)
    for n in range(1, 12):
        cs = table.coeffs(n)
        assert cs[n] == base.one and sum(not c.is_zero() for c in cs) == 1


def test_goss_monic_degree_and_zero_constant():
    pp = PrimePoly.parse(F2, "T^3+T+1")
    table = goss_table_for_prime(pp, 40)
    base = RatField(F2)
    for n in range(1, 41):
        cs = table.coeffs(n)
        assert len(cs) == n + 1 and cs[n] == base.one
        assert cs[0].is_zero()


def test_goss_requires_normalized_lattice():
    pp = PrimePoly.parse(F2, "T+1")
    phi = carlitz_phi(pp.poly)
    with pytest.raises(ValueError):
        goss_table(phi, 5)  # c_0 = prime, not 1


def test_multinomial_mod_p():
    assert multinomial_mod_p(3, [1, 1, 1], 3) == 0      # 3! = 6 = 0 mod 3
    assert multinomial_mod_p(2, [1, 1], 2) == 0
    assert multinomial_mod_p(4, [2, 2], 3) == 6 % 3
    assert multinomial_mod_p(4, [2, 2], 5) == 6 % 5
    assert multinomial_mod_p(0, [0], 7) == 1


def test_goss_closed_form_anchors():
    for field in (F2, F3):
        q, d = field.q, 2
        for pp in monic_irreducibles(field, d, exclude_T=True):
            inv_a0 = pp.residue.inv()
            # X^2-coefficient at n = q^i + 1 is alpha_i / alpha_0
            for i in range(1, d + 1):
                cs = goss_mod_T_closed_form(pp, q ** i + 1)
                assert cs[2] == pp.alpha[i] * inv_a0
            # n <= q gives the monomial X^n
            for n in range(1, q + 1):
                cs = goss_mod_T_closed_form(pp, n)
                assert cs[n] == field.one
                assert sum(1 for c in cs if c) == 1
            # no X^2-term away from n = q^i + 1 in the window (q+1, q^d+1]
            for n in range(q + 1, q ** d + 2):
                if any(n == q ** i + 1 for i in range(1, d + 1)):
                    continue
                cs = goss_mod_T_closed_form(pp, n)
                assert not cs[2]


@pytest.mark.parametrize("field", [F2, F3])
def test_goss_recursion_matches_closed_form_mod_T(field):
    # two independent routes to G_n mod T, for all primes of degree <= 3
    for d in (1, 2, 3):
        for pp in monic_irreducibles(field, d, exclude_T=True):
            table = goss_table_for_prime(pp, 50)
            for n in range(1, 51):
                via_table = [reduce_at_theta(c, field.zero)
                             for c in table.coeffs(n)]
                closed = goss_mod_T_closed_form(pp, n)
                assert via_table == closed, (str(pp.poly), n)


@pytest.mark.parametrize("field", [F2, F3])
def test_goss_order_bound(field):
    q = field.q
    for d in (1, 2):
        for pp in monic_irreducibles(field, d, exclude_T=True):
            table = goss_table_for_prime(pp, 60)
            for n in range(1, 61):
                assert table.order(n) >= (n - 1) / q ** d + 1


def test_additive_poly_at_series():
    from dmforms.tseries import TSeries
    base = RatField(F2)
    pp = PrimePoly.parse(F2, "T+1")
    phi = carlitz_phi(pp.poly)
    t = TSeries.t(base, 6)
    val = phi.at_series(t)   # phi(t) = (T+1) t + t^2
    assert str(val.coeffs[1]) == "T+1"
    assert val.coeffs[2] == base.one
