import random

import pytest
from hypothesis import given, strategies as st

from u11.arith import LocalRing, Mat2, VPoly, vpoly_mat
from u11.errors import HeightError, NotGaugeError, SolvabilityError
from u11.kisin import (
    GaugeMatrix, Shape, check_polarisation, det_height, det_height_check, detect_shape,
    explicit_defring, gauge_matrix, polarisation_partner, reduce_to_residue, sample_gauge,
    validate_gauge, w_admissible,
)
from u11.verify import test_rings as rings_for

F3 = LocalRing(3, 1, (0, 1))
Z9 = LocalRing(3, 2, (0, 1))
RAM9 = LocalRing(3, 2, (-3, 0, 1))


def w_example():
    # [[w, 1], [v, -w]]
    return vpoly_mat(RAM9, [[[[0, 1]], 1], [[[0], [1]], [[0, -1]]]])


def test_detect_shape_examples():
    assert detect_shape(vpoly_mat(F3, [[[0, 2], 0], [0, 1]])) is Shape.T
    assert detect_shape(vpoly_mat(F3, [[1, 0], [0, [0, 1]]])) is Shape.TPRIME
    assert detect_shape(w_example()) is Shape.W


def test_detect_shape_rejects():
    with pytest.raises(NotGaugeError):
        detect_shape(vpoly_mat(F3, [[1, 0], [0, 1]]))
    # (2,1) entry has a constant term
    with pytest.raises(NotGaugeError):
        detect_shape(vpoly_mat(Z9, [[[3, 1], 0], [[1, 1], 1]]))
    # (1,1) entry v+1 is not a multiple of v+3
    with pytest.raises(NotGaugeError):
        detect_shape(vpoly_mat(Z9, [[[1, 1], 0], [0, 1]]))


def test_validate_gauge_examples():
    assert validate_gauge(w_example(), Shape.W, RAM9)
    assert validate_gauge(vpoly_mat(Z9, [[1, 0], [0, [3, 1]]]), "t'", Z9)
    assert not validate_gauge(vpoly_mat(F3, [[[0, 1], 0], [0, 1]]), Shape.W, F3)
    assert not validate_gauge(w_example(), Shape.W, Z9)


def test_w_relation_is_checked():
    # w * w = 3 != -3
    A = vpoly_mat(RAM9, [[[[0, 1]], 1], [[[0], [1]], [[0, 1]]]])
    assert not validate_gauge(A, Shape.W)


def test_det_height_examples():
    A = vpoly_mat(Z9, [[[3, 1], 0], [0, 1]])
    assert det_height(A) == Z9.one
    assert det_height(w_example()) == RAM9.elem(-1)
    assert not det_height_check(vpoly_mat(Z9, [[1, 0], [0, 1]]))


def test_partner_examples():
    D = vpoly_mat(Z9, [[[3, 1], 0], [0, 1]])
    assert polarisation_partner(D) == D
    assert check_polarisation(D, D)
    A1 = w_example()
    A0 = polarisation_partner(A1)
    assert A0 == vpoly_mat(RAM9, [[[[0, -1]], 1], [[[0], [1]], [[0, 1]]]])
    assert check_polarisation(A0, A1) and detect_shape(A0) is Shape.W
    assert polarisation_partner(A0) == A1
    I = vpoly_mat(Z9, [[1, 0], [0, 1]])
    assert not check_polarisation(I, I)
    with pytest.raises(HeightError):
        polarisation_partner(I)


def test_partner_matches_inverse_formula():
    # over a field with v specialised, (v+p) s A^-T s equals the closed form
    R = LocalRing(5, 1, (0, 1))
    rng = random.Random(3)
    for shape in (Shape.T, Shape.TPRIME):
        for _ in range(50):
            A = sample_gauge(shape, R, rng).matrix
            A0 = polarisation_partner(A)
            s = Mat2(VPoly(R), VPoly.const(R, 1), VPoly.const(R, 1), VPoly(R))
            vp = VPoly.v_plus_p(R)
            # A0 s A^T s = (v+p) I and A s A0^T s = (v+p) I
            I = Mat2(vp, VPoly(R), VPoly(R), vp)
            assert A0 @ s @ A.transpose() @ s == I
            assert A @ s @ A0.transpose() @ s == I


@pytest.mark.parametrize("p", [3, 5])
def test_gauge_invariants_sampled(p):
    rng = random.Random(p)
    for R in rings_for(p):
        for shape in Shape:
            if shape is Shape.W and not w_admissible(R):
                continue
            for _ in range(200):
                g = sample_gauge(shape, R, rng)
                A = g.matrix
                assert validate_gauge(A, shape, R)
                assert [s for s in Shape if validate_gauge(A, s)] == [shape]
                assert detect_shape(A) is shape
                assert det_height_check(A)
                A0 = polarisation_partner(A)
                assert check_polarisation(A0, A) and detect_shape(A0) is shape
                assert polarisation_partner(A0) == A
                assert validate_gauge(reduce_to_residue(A), shape)
                assert GaugeMatrix.from_matrix(A).coeffs == g.coeffs


@pytest.mark.parametrize("p", [3, 5])
def test_w_solvability(p):
    for R in (LocalRing(p, 2, (0, 1)), LocalRing.galois_ring(p, 2, 2)):
        with pytest.raises(SolvabilityError):
            sample_gauge(Shape.W, R, 0)
    assert w_admissible(LocalRing(p, 2, (-p, 0, 1)))
    assert w_admissible(LocalRing(p, 1, (0, 1)))


def test_w_admissible_oracle_valuation():
    # over Z/9 every nonunit is 3*x, so c11*c22 is 0 and never -3*unit
    nonunits = [x for x in range(9) if x % 3 == 0]
    assert all((x * y) % 9 == 0 for x in nonunits for y in nonunits)
    assert not w_admissible(Z9)


def test_sample_over_residue_field():
    R = LocalRing(5, 1, (0, 1))
    g = sample_gauge(Shape.T, R, 11)
    A = g.matrix
    assert A.b.is_zero() and A.c.coeff(0) == R.zero
    # over k the height element v+p is v
    assert A.det() == VPoly.v(R) * VPoly.const(R, det_height(A))
    w = sample_gauge(Shape.W, R, 1).matrix
    assert w.a.is_zero() and w.d.is_zero()


def test_sampling_is_seeded():
    assert sample_gauge(Shape.W, RAM9, 5) == sample_gauge(Shape.W, RAM9, 5)


def test_reduction_collapses():
    A = reduce_to_residue(w_example())
    k = RAM9.residue_field()
    assert A.a.is_zero() and A.d.is_zero()
    assert A.c == VPoly.v(k)
    D = reduce_to_residue(vpoly_mat(Z9, [[[3, 1], 0], [0, 1]]))
    assert D.a == VPoly.v(Z9.residue_field())


def test_explicit_defring_table():
    w = explicit_defring("w").to_json()
    assert w["relations"] == ["c11*c22 + p"] and len(w["gens"]) == 4
    assert [g["kind"] for g in w["gens"]] == ["maximal-ideal", "maximal-ideal", "unit", "unit"]
    t = explicit_defring(Shape.T).to_json()
    assert len(t["gens"]) == 3 and t["relations"] == []
    assert [(g["name"], g["kind"]) for g in t["gens"]] == [
        ("c21", "unrestricted"), ("c11_star", "unit"), ("c22_star", "unit")]
    tp = explicit_defring("t'").to_json()
    assert [(g["name"], g["kind"]) for g in tp["gens"]] == [
        ("c12", "unrestricted"), ("c11_star", "unit"), ("c22_star", "unit")]
    for shape in Shape:
        rec = explicit_defring(shape)
        assert rec.to_json()["extra"] == [2, 4]
        assert rec.to_json()["galois_iso_note"] == {"left_extra_vars": 2, "right_extra_vars": 4}
        assert rec.presentation.dimension == 3
        assert rec.to_json()["metadata"] == {
            "hodge_type": "(1,0,1)", "multiplier": "cyclotomic", "potentially_crystalline": True}
        assert "S1, S2" in rec.note


def test_gauge_serialisation():
    g = GaugeMatrix.from_matrix(w_example())
    js = g.to_json()
    assert js["ring"] == {"p": 3, "m": 2, "modulus": [6, 0, 1]}
    assert js["shape"] == "w"
    assert js["coeffs"] == {"c11": [0, 1], "c12*": [1, 0], "c21*": [1, 0], "c22": [0, 8]}


@given(st.integers(0, 10**6), st.sampled_from(list(Shape)))
def test_gauge_matrix_roundtrip(seed, shape):
    g = sample_gauge(shape, RAM9, seed)
    assert gauge_matrix(RAM9, shape, g.coeffs) == g.matrix
    assert GaugeMatrix.from_matrix(g.matrix, shape) == g
