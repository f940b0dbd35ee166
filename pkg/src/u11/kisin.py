"""Rank-2 Kisin modules with descent data, in gauge coordinates.

A module is represented only by one partial Frobenius matrix (or a pair of
them, when polarised) over ``R[v]``, in one of three normal forms:

    t   [[(v+p) c11*, 0      ], [v c21,  c22*      ]]
    t'  [[c11*,       c12    ], [0,      (v+p) c22*]]
    w   [[c11,        c12*   ], [v c21*, c22       ]]   c11 c22 = -p c12* c21*

Starred coefficients are units; in shape w the diagonal entries lie in the
maximal ideal.  The polarisation relation is used in its cleared form
``A0 s A1^T s = (v+p) I``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .arith import LocalRing, Mat2, VPoly, swap_matrix
from .errors import HeightError, NotGaugeError, SolvabilityError
from .reps import RingPresentation


class Shape(str, Enum):
    T = "t"
    TPRIME = "t'"
    W = "w"


def _const(x: VPoly):
    """The constant value of x, or None if x has positive degree."""
    return x.coeff(0) if x.is_const() else None


def _times_v(x: VPoly):
    """y with x = v*y for a constant y, else None."""
    R = x.ring
    if x.degree > 1 or x.coeff(0) != R.zero:
        return None
    return x.coeff(1)


def _times_v_plus_p(x: VPoly):
    """y with x = (v+p)*y for a constant y, else None."""
    q, rem = x.divmod_monic(VPoly.v_plus_p(x.ring))
    if not rem.is_zero() or not q.is_const():
        return None
    return q.coeff(0)


def _extract(A: Mat2, shape: Shape) -> dict | None:
    """Named coefficients if A has the given gauge form, otherwise None."""
    R = A.parent
    a, b, c, d = A.entries()
    if shape is Shape.T:
        c11, c21, c22 = _times_v_plus_p(a), _times_v(c), _const(d)
        if None in (c11, c21, c22) or not b.is_zero():
            return None
        if not (R.is_unit(c11) and R.is_unit(c22)):
            return None
        return {"c11*": c11, "c21": c21, "c22*": c22}
    if shape is Shape.TPRIME:
        c11, c12, c22 = _const(a), _const(b), _times_v_plus_p(d)
        if None in (c11, c12, c22) or not c.is_zero():
            return None
        if not (R.is_unit(c11) and R.is_unit(c22)):
            return None
        return {"c11*": c11, "c12": c12, "c22*": c22}
    c11, c12, c21, c22 = _const(a), _const(b), _times_v(c), _const(d)
    if None in (c11, c12, c21, c22):
        return None
    if not (R.is_unit(c12) and R.is_unit(c21)) or R.is_unit(c11) or R.is_unit(c22):
        return None
    rhs = R.mul(R.neg(R.elem(R.p)), R.mul(c12, c21))
    if R.mul(c11, c22) != rhs:
        return None
    return {"c11": c11, "c12*": c12, "c21*": c21, "c22": c22}


def validate_gauge(A: Mat2, shape: Shape | str, R: LocalRing | None = None) -> bool:
    if R is not None and A.parent != R:
        return False
    return _extract(A, Shape(shape)) is not None


def detect_shape(A: Mat2) -> Shape:
    hits = [s for s in Shape if _extract(A, s) is not None]
    if not hits:
        raise NotGaugeError("matrix matches no gauge pattern")
    # the three patterns are mutually exclusive
    assert len(hits) == 1, hits
    return hits[0]


def det_height(A: Mat2):
    """The unit u with det(A) = u (v+p), or None."""
    R = A.parent
    u = _times_v_plus_p(A.det())
    if u is None or not R.is_unit(u):
        return None
    return u


def det_height_check(A: Mat2) -> bool:
    return det_height(A) is not None


def _s(R: LocalRing) -> Mat2:
    return swap_matrix(VPoly(R), VPoly.const(R, 1))


def polarisation_partner(A1: Mat2) -> Mat2:
    """A0 = u^-1 s adj(A1)^T s, i.e. (v+p) s A1^-T s with det A1 = u (v+p)."""
    R = A1.parent
    u = det_height(A1)
    if u is None:
        raise HeightError("determinant is not a unit multiple of (v + p)")
    s = _s(R)
    return (s @ A1.adjugate().transpose() @ s).scale(VPoly.const(R, R.inverse(u)))


def check_polarisation(A0: Mat2, A1: Mat2) -> bool:
    R = A1.parent
    if A0.parent != R:
        return False
    s = _s(R)
    vp = VPoly.v_plus_p(R)
    return A0 @ s @ A1.transpose() @ s == Mat2(vp, VPoly(R), VPoly(R), vp)


def reduce_to_residue(A: Mat2) -> Mat2:
    """Entrywise image over the residue field k of R."""
    R = A.parent
    k = R.residue_field()
    return A.map(lambda x: x.map_coeffs(k, R.residue))


@dataclass(frozen=True)
class GaugeMatrix:
    ring: LocalRing
    matrix: Mat2
    shape: Shape
    coeffs: dict = field(compare=False, hash=False)

    @classmethod
    def from_matrix(cls, A: Mat2, shape: Shape | str | None = None) -> GaugeMatrix:
        shape = detect_shape(A) if shape is None else Shape(shape)
        coeffs = _extract(A, shape)
        if coeffs is None:
            raise NotGaugeError(f"matrix is not in gauge form for shape {shape.value}")
        return cls(A.parent, A, shape, coeffs)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor(),
            "shape": self.shape.value,
            "entries": [[x.to_json() for x in row] for row in self.matrix.rows()],
            "coeffs": {k: list(v) for k, v in sorted(self.coeffs.items())},
        }


@lru_cache(maxsize=None)
def _w_diagonals(R: LocalRing) -> tuple:
    """All (c11, c22, e) in m x m x R^x with c11 c22 = -p e."""
    mp = R.neg(R.elem(R.p))
    by_value: dict = {}
    for x in R.elements():
        if R.is_unit(x):
            by_value.setdefault(R.mul(mp, x), []).append(x)
    out = []
    for x in R.max_ideal:
        for y in R.max_ideal:
            for e in by_value.get(R.mul(x, y), ()):
                out.append((x, y, e))
    return tuple(out)


def w_admissible(R: LocalRing) -> bool:
    return bool(_w_diagonals(R))


def gauge_matrix(R: LocalRing, shape: Shape | str, coeffs: dict) -> Mat2:
    """Assemble the matrix of the given shape from named coefficients."""
    shape = Shape(shape)
    C = lambda x: VPoly.const(R, x)  # noqa: E731
    v, vp, zero = VPoly.v(R), VPoly.v_plus_p(R), VPoly(R)
    if shape is Shape.T:
        return Mat2(vp * C(coeffs["c11*"]), zero, v * C(coeffs["c21"]), C(coeffs["c22*"]))
    if shape is Shape.TPRIME:
        return Mat2(C(coeffs["c11*"]), C(coeffs["c12"]), zero, vp * C(coeffs["c22*"]))
    return Mat2(C(coeffs["c11"]), C(coeffs["c12*"]), v * C(coeffs["c21*"]), C(coeffs["c22"]))


def sample_gauge(shape: Shape | str, R: LocalRing, seed=None) -> GaugeMatrix:
    """Random gauge matrix of the given shape; ``seed`` may be an int or a Random."""
    shape = Shape(shape)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if shape is Shape.T:
        coeffs = {"c11*": R.random_unit(rng), "c21": R.random_elem(rng), "c22*": R.random_unit(rng)}
    elif shape is Shape.TPRIME:
        coeffs = {"c11*": R.random_unit(rng), "c12": R.random_elem(rng), "c22*": R.random_unit(rng)}
    else:
        diag = _w_diagonals(R)
        if not diag:
            raise SolvabilityError(
                f"no c11, c22 in the maximal ideal with c11*c22 = -p*unit over {R.descriptor()}"
            )
        c11, c22, e = rng.choice(diag)
        c12 = R.random_unit(rng)
        coeffs = {"c11": c11, "c12*": c12, "c21*": R.mul(e, R.inverse(c12)), "c22": c22}
    return GaugeMatrix(R, gauge_matrix(R, shape, coeffs), shape, coeffs)


# ---------------------------------------------------------------------------
# explicit deformation rings

_TABLE = {
    Shape.T: ((("c21", "unrestricted"), ("c11_star", "unit"), ("c22_star", "unit")), ()),
    Shape.TPRIME: ((("c12", "unrestricted"), ("c11_star", "unit"), ("c22_star", "unit")), ()),
    Shape.W: (
        (("c11", "maximal-ideal"), ("c22", "maximal-ideal"),
         ("c12_star", "unit"), ("c21_star", "unit")),
        ("c11*c22 + p",),
    ),
}

OPEN_PROBLEM_NOTE = (
    "Only R^tau_rhobar[[S1,S2]] is identified; a presentation of R^tau_rhobar "
    "itself, without the variables S1, S2, is an open problem."
)


@dataclass(frozen=True)
class DefRingRecord:
    shape: Shape
    presentation: RingPresentation
    left_extra_vars: int = 2
    right_extra_vars: int = 4
    hodge_type: str = "(1,0,1)"
    multiplier: str = "cyclotomic"
    potentially_crystalline: bool = True
    note: str = OPEN_PROBLEM_NOTE

    def to_json(self) -> dict:
        out = {"shape": self.shape.value}
        out.update(self.presentation.to_json())
        out["galois_iso_note"] = {
            "left_extra_vars": self.left_extra_vars,
            "right_extra_vars": self.right_extra_vars,
        }
        out["metadata"] = {
            "hodge_type": self.hodge_type,
            "multiplier": self.multiplier,
            "potentially_crystalline": self.potentially_crystalline,
        }
        out["note"] = self.note
        return out


def explicit_defring(shape: Shape | str) -> DefRingRecord:
    shape = Shape(shape)
    gens, rels = _TABLE[shape]
    return DefRingRecord(shape, RingPresentation("O", gens, rels, (2, 4)))
