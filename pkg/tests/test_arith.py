import random

import pytest
from hypothesis import given, strategies as st

from u11.arith import (
    LocalRing, Mat2, PrimeCtx, VPoly, field_mat, is_irreducible_mod_p, is_prime,
    p_digits, smallest_irreducible, vpoly_mat,
)
from u11.errors import DomainError, RingMismatchError, UnitError
from u11.verify import test_rings as rings_for

PRIMES = [q for q in range(2, 32) if is_prime(q)]


@pytest.mark.parametrize("x,p,digits", [(20, 7, (6, 2)), (0, 7, (0, 0)), (19, 5, (4, 3))])
def test_p_digits_examples(x, p, digits):
    assert p_digits(x, p) == digits


@pytest.mark.parametrize("x", [-1, 48, 100])
def test_p_digits_out_of_range(x):
    with pytest.raises(DomainError):
        p_digits(x, 7)


@given(st.sampled_from(PRIMES), st.data())
def test_p_digits_roundtrip(p, data):
    x = data.draw(st.integers(0, p * p - 2))
    a0, a1 = p_digits(x, p)
    assert 0 <= a0 < p and 0 <= a1 < p and a0 + p * a1 == x


def test_unit_examples(ram9):
    assert not ram9.is_unit(ram9.gen)
    Z9 = LocalRing(3, 2, (0, 1))
    assert Z9.inverse(Z9.elem(2)) == Z9.elem(5)
    for R in (ram9, Z9):
        assert R.is_unit(R.one) and R.inverse(R.one) == R.one


def test_inverse_of_nonunit_raises(ram9):
    with pytest.raises(UnitError):
        ram9.inverse(ram9.elem(3))


def test_non_local_modulus_rejected():
    # x^2 - 1 = (x-1)(x+1) mod 3
    with pytest.raises(DomainError):
        LocalRing(3, 1, (-1, 0, 1))


def test_ring_structure(ram9):
    assert ram9.ramification == 2 and ram9.residue_degree == 1
    assert ram9.max_ideal_gen == ram9.gen
    gr = LocalRing.galois_ring(5, 2, 2)
    assert gr.ramification == 1 and gr.residue_degree == 2 and gr.max_ideal_gen == gr.elem(5)
    assert LocalRing.from_descriptor(gr.descriptor()) == gr


def test_auto_modulus():
    # ordered by (c0, c1): over F_5, x^2+1 splits and x^2+x+1 has discriminant 2
    assert PrimeCtx(3, 2).modulus == (1, 0, 1)
    assert smallest_irreducible(5, 2) == (1, 1, 1)
    assert PrimeCtx(5, 2).modulus == (1, 1, 1)
    with pytest.raises(DomainError):
        PrimeCtx(3, 2, (2, 0, 1))  # x^2 + 2 = (x-1)(x+1)


def test_irreducibility_oracle():
    # compare with root counting for quadratics and cubics over F_5
    p = 5
    for c in range(p**3):
        poly = [c % p, (c // p) % p, c // p**2, 1]
        has_root = any(sum(a * x**i for i, a in enumerate(poly)) % p == 0 for x in range(p))
        assert is_irreducible_mod_p(poly, p) == (not has_root)


@pytest.mark.parametrize("p", [3, 5])
def test_inverse_matches_search(p):
    for R in rings_for(p):
        if R.size > 10**4:
            continue
        elems = list(R.elements())
        for x in elems:
            found = [y for y in elems if R.mul(x, y) == R.one]
            assert R.is_unit(x) == bool(found)
            if found:
                assert found == [R.inverse(x)]


@pytest.mark.parametrize("p", [3, 5])
def test_ring_axioms_sampled(p):
    rng = random.Random(p)
    for R in rings_for(p):
        for _ in range(1000):
            x, y, z = (R.random_elem(rng) for _ in range(3))
            assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
            assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))
            assert R.is_unit(R.mul(x, y)) == (R.is_unit(x) and R.is_unit(y))


@given(st.lists(st.integers(0, 80), min_size=2, max_size=2), st.lists(st.integers(0, 80), min_size=2, max_size=2))
def test_field_operators(a, b):
    F = PrimeCtx(3, 2)
    x, y = F.elem(a), F.elem(b)
    assert x + y - y == x
    assert (x * y) == (y * x)
    if not y.is_zero():
        assert (x / y) * y == x
    assert x ** (F.q - 1) == (0 if x.is_zero() else 1)


def test_field_tables_consistent(F9):
    T = F9.tables
    for i in range(F9.q):
        for j in range(F9.q):
            x, y = F9.from_code(i), F9.from_code(j)
            assert F9.from_code(int(T["mul"][i, j])) == x * y
            assert F9.from_code(int(T["add"][i, j])) == x + y


def test_mat2_examples(ram9):
    Z9 = LocalRing(3, 2, (0, 1))
    v, vp = VPoly.v(Z9), VPoly.v_plus_p(Z9)
    one, zero = VPoly.const(Z9, 1), VPoly(Z9)
    assert Mat2(vp, zero, zero, one).det() == v + 3

    w = VPoly.const(ram9, ram9.gen)
    vr = VPoly.v(ram9)
    A = Mat2(w, VPoly.const(ram9, 1), vr, -w)
    assert A.adjugate() == Mat2(-w, -VPoly.const(ram9, 1), -vr, w)
    assert A.det() == -(vr + 3)


def _rand_poly(R, rng):
    return VPoly(R, tuple(R.random_elem(rng) for _ in range(rng.randrange(4))))


@pytest.mark.parametrize("p", [3, 5])
def test_adjugate_identity(p):
    rng = random.Random(7 * p)
    for R in rings_for(p):
        for _ in range(1000 // 5):
            A = Mat2(*(_rand_poly(R, rng) for _ in range(4)))
            d, z = A.det(), VPoly(R)
            assert A.adjugate() @ A == Mat2(d, z, z, d) == A @ A.adjugate()


def test_vpoly_exact_division():
    R = LocalRing(5, 2, (0, 1))
    vp = VPoly.v_plus_p(R)
    f = VPoly(R, ((3,), (7,), (11,)))
    q, r = (f * vp).divmod_monic(vp)
    assert q == f and r.is_zero()


def test_mixed_rings_rejected(ram9):
    Z9 = LocalRing(3, 2, (0, 1))
    with pytest.raises(RingMismatchError):
        Mat2(VPoly.v(Z9), VPoly.v(ram9), VPoly(Z9), VPoly(Z9))
    with pytest.raises(RingMismatchError):
        VPoly.v(Z9) + VPoly.v(ram9)
    with pytest.raises(RingMismatchError):
        PrimeCtx(3).one + PrimeCtx(5).one


def test_helpers(F3, ram9):
    assert field_mat(F3, [[1, 2], [0, 1]]).det() == 1
    A = vpoly_mat(ram9, [[[[0, 1]], 1], [[[0], [1]], [[0, -1]]]])
    assert A.a == VPoly.const(ram9, ram9.gen)
