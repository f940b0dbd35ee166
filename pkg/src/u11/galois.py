"""Tame Langlands and C-parameters for U(1,1) as finite exponent data.

A tamely ramified parameter is recorded by its values on two generators: a
Frobenius ``phi`` and a tame inertia generator ``sigma`` whose image is a
diagonal matrix of Teichmuller characters ``zeta^e`` with e mod p^2-1.  In
the coordinates ``GL2 x Gm`` of the C-group, Frobenius acts by

    (G, t)  |->  (t * det(G)^-1 * G, t)

and the tame relation reads ``phi sigma phi^-1 = sigma^p``.  All exponents are
plain ints reduced mod ``N = p^2 - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .arith import FieldElem, Mat2, PrimeCtx, field_mat, p_digits
from .errors import CapacityError, DomainError, RingMismatchError
from .reps import PacketIndex, Semisimple, packet

BRUTE_FORCE_BOUND = 10**7
W_LABELS = ("1", "s0")


def require_odd(ctx: PrimeCtx):
    if ctx.p == 2:
        raise DomainError("the C-group needs p odd")


def _diag(ctx: PrimeCtx, x, y) -> Mat2:
    return Mat2(ctx.elem(x), ctx.zero, ctx.zero, ctx.elem(y))


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class LParam:
    """Langlands parameter psi_{r,lambda}."""

    r: int
    lam: FieldElem

    def __post_init__(self):
        require_odd(self.lam.ctx)
        if self.lam.is_zero():
            raise DomainError("lambda must be nonzero")
        object.__setattr__(self, "r", self.r % self.lam.ctx.N)

    def to_json(self):
        return {"r": self.r, "lambda": self.lam.to_json()}


def lparam_equiv(P1: LParam, P2: LParam) -> bool:
    p, N = P1.lam.ctx.p, P1.lam.ctx.N
    if (P1.r, P1.lam) == (P2.r, P2.lam):
        return True
    return P2.r == (-p * P1.r) % N and P2.lam == P1.lam.inverse()


@dataclass(frozen=True)
class CParamNS:
    """Non-supercuspidal C-parameter psi~_{r,lambda}.

    Everything besides (r, lambda) is derived on access.
    """

    r: int
    lam: FieldElem

    def __post_init__(self):
        require_odd(self.lam.ctx)
        if self.lam.is_zero():
            raise DomainError("lambda must be nonzero")
        object.__setattr__(self, "r", self.r % self.lam.ctx.N)

    @property
    def ctx(self) -> PrimeCtx:
        return self.lam.ctx

    @property
    def inertia_pair(self) -> tuple[int, int]:
        p, N = self.ctx.p, self.ctx.N
        return (p + 1 + self.r) % N, (-p * self.r) % N

    @property
    def inertia_gl2_exponents(self) -> tuple[int, int]:
        return tuple(sorted(self.inertia_pair))

    @property
    def inertia_gm_exponent(self) -> int:
        return (self.ctx.p + 1) % self.ctx.N

    @property
    def frob_gl2(self) -> Mat2:
        return _diag(self.ctx, 1, self.lam)

    @property
    def frob_gm(self) -> FieldElem:
        return self.ctx.one

    def to_json(self):
        return {"r": self.r, "lambda": self.lam.to_json()}


def all_cparams(ctx: PrimeCtx) -> Iterator[CParamNS]:
    for r in range(ctx.N):
        for lam in ctx.nonzero():
            yield CParamNS(r, lam)


@dataclass(frozen=True)
class TameCParam:
    """A general tame C-parameter, used as input to brute-force conjugacy."""

    frob_gl2: Mat2
    frob_gm: FieldElem
    inertia: tuple[int, int]
    inertia_gm: int

    def __post_init__(self):
        ctx = self.frob_gm.ctx
        if self.frob_gl2.parent != ctx:
            raise RingMismatchError("Frobenius matrix and Gm value over different fields")
        N = ctx.N
        e = tuple(x % N for x in self.inertia)
        c = self.inertia_gm % N
        object.__setattr__(self, "inertia", e)
        object.__setattr__(self, "inertia_gm", c)
        if self.frob_gl2.det().is_zero() or self.frob_gm.is_zero():
            raise DomainError("Frobenius image must be invertible")
        if not tame_relation_holds(self):
            raise DomainError(f"tame relation fails for inertia {e}, gm {c}")

    @property
    def ctx(self) -> PrimeCtx:
        return self.frob_gm.ctx


def tame_relation_holds(P: TameCParam) -> bool:
    # phi sigma phi^-1 = sigma^p, written entrywise: A D = D' A with
    # D' = zeta^(p e_i + e1 + e2 - c); the Gm part forces (p-1) c = 0
    ctx = P.frob_gm.ctx
    p, N = ctx.p, ctx.N
    e, c = P.inertia, P.inertia_gm
    if (p - 1) * c % N:
        return False
    A = P.frob_gl2.rows()
    for i, j in product(range(2), repeat=2):
        if not A[i][j].is_zero() and e[j] != (p * e[i] + e[0] + e[1] - c) % N:
            return False
    return True


def lift(P: CParamNS) -> TameCParam:
    return TameCParam(P.frob_gl2, P.frob_gm, P.inertia_pair, P.inertia_gm_exponent)


def _conjugators(ctx: PrimeCtx, e: tuple[int, int], f: tuple[int, int]):
    """Vectorised codes (a, b, c, d) of all g in GL2 with g diag(e) g^-1 = diag(f)."""
    import numpy as np

    q = ctx.q
    allowed = [e[0] == f[0], e[1] == f[0], e[0] == f[1], e[1] == f[1]]
    ranges = [np.arange(q) if ok else np.zeros(1, dtype=np.int64) for ok in allowed]
    grids = np.meshgrid(*ranges, indexing="ij")
    a, b, c, d = (g.ravel() for g in grids)
    T = ctx.tables
    det = T["add"][T["mul"][a, d], T["neg"][T["mul"][b, c]]]
    keep = det != 0
    return a[keep], b[keep], c[keep], d[keep], det[keep]


def cparam_equiv_bruteforce(P1: TameCParam, P2: TameCParam, want_witness: bool = False):
    """Decide conjugacy under GL2 x Gm by enumerating conjugators.

    (g, t) sends the inertia image D to g D g^-1 and the Frobenius component
    A to t^-1 det(g) g A g^-1.  Returns a bool, or the first witness
    ``(g_codes, t_code)`` (None if there is none) when ``want_witness`` is set.
    """
    import numpy as np

    ctx = P1.ctx
    if P2.ctx != ctx:
        raise RingMismatchError("parameters over different fields")
    if ctx.p ** (4 * ctx.f) > BRUTE_FORCE_BOUND:
        raise CapacityError(f"GL2(F_{ctx.q}) too large for brute force")
    miss = None if want_witness else False
    # invariants preserved by every conjugator
    if sorted(P1.inertia) != sorted(P2.inertia) or P1.inertia_gm != P2.inertia_gm:
        return miss
    if P1.frob_gm != P2.frob_gm:
        return miss
    a, b, c, d, det = _conjugators(ctx, P1.inertia, P2.inertia)
    if a.size == 0:
        return miss
    T = ctx.tables
    add, mul = T["add"], T["mul"]
    A = [ctx.code(x) for x in P1.frob_gl2.entries()]
    B = [ctx.code(x) for x in P2.frob_gl2.entries()]
    # det(g) g A versus t B g, entrywise
    gA = [
        add[mul[a, A[0]], mul[b, A[2]]], add[mul[a, A[1]], mul[b, A[3]]],
        add[mul[c, A[0]], mul[d, A[2]]], add[mul[c, A[1]], mul[d, A[3]]],
    ]
    lhs = [mul[det, x] for x in gA]
    Bg = [
        add[mul[B[0], a], mul[B[1], c]], add[mul[B[0], b], mul[B[1], d]],
        add[mul[B[2], a], mul[B[3], c]], add[mul[B[2], b], mul[B[3], d]],
    ]
    for t in range(1, ctx.q):
        ok = np.ones(a.shape, dtype=bool)
        for x, y in zip(lhs, Bg):
            ok &= x == mul[t, y]
        if ok.any():
            if not want_witness:
                return True
            i = int(np.argmax(ok))
            return (int(a[i]), int(b[i]), int(c[i]), int(d[i])), t
    return miss


def cparam_equiv_fast(P1: CParamNS, P2: CParamNS) -> bool:
    """Closed-form conjugacy test: identity or r -> -pr-(p+1), lambda -> lambda^-1."""
    p, N = P1.ctx.p, P1.ctx.N
    if (P1.r, P1.lam) == (P2.r, P2.lam):
        return True
    return P2.r == (-p * P1.r - (p + 1)) % N and P2.lam == P1.lam.inverse()


def cparam_partner(P: CParamNS) -> CParamNS:
    p = P.ctx.p
    return CParamNS(-p * P.r - (p + 1), P.lam.inverse())


def literal_partner_discrepancies(ctx: PrimeCtx) -> list[dict]:
    """Pairs (r, -pr) whose C-parameters are NOT conjugate although their L-parameters are.

    Reading the C-parameter classes as ``(r, lambda) ~ (-pr, lambda^-1)``
    disagrees with conjugacy whenever the inertia multisets differ.
    """
    out = []
    lam = ctx.one
    for r in range(ctx.N):
        P, Q = CParamNS(r, lam), CParamNS(-ctx.p * r, lam)
        if P.r != Q.r and not cparam_equiv_fast(P, Q):
            out.append({"r": P.r, "r_literal": Q.r, "inertia": list(P.inertia_gl2_exponents),
                        "inertia_literal": list(Q.inertia_gl2_exponents)})
    return out


# ---------------------------------------------------------------------------
# inertial types


@dataclass(frozen=True)
class CInertialType:
    gl2_exponents: tuple[int, int]
    gm_exponent: int

    @classmethod
    def make(cls, ctx: PrimeCtx, e1: int, e2: int, gm: int) -> CInertialType:
        N = ctx.N
        return cls(tuple(sorted((e1 % N, e2 % N))), gm % N)

    def to_json(self):
        return {"exponents": list(self.gl2_exponents), "gm": self.gm_exponent}


def c_inertia(P: CParamNS) -> CInertialType:
    e1, e2 = P.inertia_pair
    return CInertialType.make(P.ctx, e1, e2, P.inertia_gm_exponent)


def tau_w(w: str, a: int, b: int, ctx: PrimeCtx) -> CInertialType:
    p = ctx.p
    if w == "1":
        return CInertialType.make(ctx, a + 1 + p * (1 - b), b - p * a, p + 1)
    if w == "s0":
        return CInertialType.make(ctx, a + 1 - p * a, b + p * (1 - b), p + 1)
    raise DomainError(f"unknown Weyl label {w!r}")


def n_generic_witness(P: CParamNS, n: int, w: str | None = None):
    """First ``(w, a, b)`` with c_inertia(P) = tau_w(a, b) and n < a-b+1 < p-n.

    ``a`` runs over [-(p^2-2), p^2-2] by increasing |a| (negative first), then
    w = 1 before s0, then c = a-b+1 ascending.  ``w`` restricts the search.
    """
    ctx = P.ctx
    p = ctx.p
    if n < 0:
        raise DomainError("n must be nonnegative")
    target = c_inertia(P)
    labels = W_LABELS if w is None else (w,)
    bound = p * p - 2
    for a in sorted(range(-bound, bound + 1), key=lambda x: (abs(x), x)):
        for lab in labels:
            for c in range(n + 1, p - n):
                b = a + 1 - c
                if tau_w(lab, a, b, ctx) == target:
                    return lab, a, b
    return None


def weyl_triviality_check(ctx: PrimeCtx, n: int) -> list[dict]:
    """Parameters that are n-generic but admit no witness with w = 1."""
    require_odd(ctx)
    out = []
    for r in range(ctx.N):
        P = CParamNS(r, ctx.one)
        wit = n_generic_witness(P, n)
        if wit is not None and n_generic_witness(P, n, w="1") is None:
            out.append({"r": r, "n": n, "witness": list(wit)})
    return out


@dataclass(frozen=True)
class PSInertialType:
    """tau_{a,b} = omega~^a + omega~^b; exponents mod p^2-1."""

    a: int
    b: int
    ctx: PrimeCtx

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.ctx.N)
        object.__setattr__(self, "b", self.b % self.ctx.N)

    @property
    def is_principal(self) -> bool:
        return self.a != self.b

    def dual(self) -> PSInertialType:
        return PSInertialType(-self.a, -self.b, self.ctx)

    def frob_twist(self) -> PSInertialType:
        p = self.ctx.p
        return PSInertialType(p * self.a, p * self.b, self.ctx)

    def multiset(self) -> tuple[int, int]:
        return tuple(sorted((self.a, self.b)))

    def is_ftsd(self) -> bool:
        return self.frob_twist().multiset() == self.dual().multiset()

    def to_json(self):
        return {"exponents": [self.a, self.b]}


def ftsd_two_family(a: int, b: int, ctx: PrimeCtx) -> bool:
    """Both exponents multiples of p-1, or b = -pa (equivalently a = -pb)."""
    p, N = ctx.p, ctx.N
    if a % (p - 1) == 0 and b % (p - 1) == 0:
        return True
    return (b + p * a) % N == 0 or (a + p * b) % N == 0


def _neg_digits(a: int, b: int, ctx: PrimeCtx):
    N = ctx.N
    return p_digits((-a) % N, ctx.p), p_digits((-b) % N, ctx.p)


def ps_is_n_generic(a: int, b: int, n: int, ctx: PrimeCtx) -> bool:
    p = ctx.p
    da, db = _neg_digits(a, b, ctx)
    return all(n < abs(x - y) < p - n for x, y in zip(da, db))


@dataclass(frozen=True)
class Orientation:
    w0: str
    w1: str

    def to_json(self):
        return [self.w0, self.w1]


def orientation(a: int, b: int, ctx: PrimeCtx, require_generic: bool = False) -> Orientation:
    """Embedding-wise choice of the character with the larger twisted value.

    Raises DomainError on a tie, and for any type that is not 2-generic
    when ``require_generic`` is set.  For 2-generic types ties cannot occur.
    """
    if require_generic and not ps_is_n_generic(a, b, 2, ctx):
        raise DomainError(f"type ({a}, {b}) is not 2-generic; orientation undefined")
    p = ctx.p
    (a0, a1), (b0, b1) = _neg_digits(a, b, ctx)
    vals = [(a0 + p * a1, b0 + p * b1), (a1 + p * a0, b1 + p * b0)]
    ws = []
    for x, y in vals:
        if x == y:
            raise DomainError(f"orientation of ({a}, {b}) is not unique: tie {x} = {y}")
        ws.append("id" if x > y else "s")
    return Orientation(*ws)


# ---------------------------------------------------------------------------
# correspondence


def param_for_packet(idx: PacketIndex, ctx: PrimeCtx) -> CParamNS:
    require_odd(ctx)
    idx.validate(ctx)
    return CParamNS((idx.r - 1) + (1 - ctx.p) * idx.k, idx.lam)


def packets_for_param(P: CParamNS) -> list[PacketIndex]:
    ctx = P.ctx
    p, N = ctx.p, ctx.N
    return [
        PacketIndex(r, P.lam, k)
        for k in range(p + 1)
        for r in range(p)
        if ((r - 1) + (1 - p) * k) % N == P.r
    ]


def packet_of_param(P: CParamNS) -> Semisimple | None:
    fiber = packets_for_param(P)
    return packet(fiber[0], P.ctx) if fiber else None


def correspondence_violations(ctx: PrimeCtx) -> list[dict]:
    """Fibers with unequal packets, and conjugate parameters with unequal packets."""
    out = []
    for P in all_cparams(ctx):
        fiber = packets_for_param(P)
        packs = [packet(i, ctx) for i in fiber]
        if not fiber:
            out.append({"kind": "empty-fiber", "param": P.to_json()})
            continue
        if any(x != packs[0] for x in packs[1:]):
            out.append({"kind": "fiber", "param": P.to_json(),
                        "indices": [i.to_json() for i in fiber]})
        Q = cparam_partner(P)
        if packet_of_param(Q) != packs[0]:
            out.append({"kind": "equivalent", "param": P.to_json(), "partner": Q.to_json()})
    return out


# ---------------------------------------------------------------------------
# base change and polarisation


@dataclass(frozen=True)
class BaseChange:
    """Restriction of a C-parameter to the unramified quadratic extension."""

    frob2_gl2: Mat2
    inertia_exponents: tuple[int, int]
    multiplier_frob: FieldElem
    multiplier_inertia: int

    @property
    def ctx(self) -> PrimeCtx:
        return self.multiplier_frob.ctx

    def to_json(self):
        return {
            "frob2_gl2": self.frob2_gl2.to_json(),
            "inertia_exponents": list(self.inertia_exponents),
            "multiplier": {"frob": self.multiplier_frob.to_json(),
                           "inertia_exponent": self.multiplier_inertia},
        }


def _frob_action(G: Mat2, t: FieldElem) -> Mat2:
    return G.scale(t / G.det())


def base_change(P: CParamNS) -> BaseChange:
    A, t = P.frob_gl2, P.frob_gm
    # (A, t) Frob (A, t) Frob = (A * Frob(A, t), t^2) Frob^2
    F = A @ _frob_action(A, t)
    return BaseChange(F, P.inertia_pair, P.ctx.one, P.inertia_gm_exponent)


def cyclotomic_theta(ctx: PrimeCtx) -> tuple[FieldElem, int]:
    """theta(phi) and the inertia exponent of the cyclotomic multiplier."""
    return ctx.one, (ctx.p + 1) % ctx.N


def frob_inverse_gl2(P: CParamNS) -> Mat2:
    """GL2 component of psi~(phi^-1)."""
    A, t = P.frob_gl2, P.frob_gm
    inv = A.adjugate().scale(A.det().inverse())
    return _frob_action(inv, t.inverse())


def polarisation_of(P: CParamNS) -> Mat2:
    """alpha = [[0, -1], [1, 0]] * B^-1 with B the GL2 part of psi~(phi^-1)."""
    ctx = P.ctx
    B = frob_inverse_gl2(P)
    J = field_mat(ctx, [[0, -1], [1, 0]])
    return J @ B.adjugate().scale(B.det().inverse())


def verify_polarisation(rho2: BaseChange, theta, alpha: Mat2) -> bool:
    """Check that alpha is a polarisation of rho2 compatible with theta.

    On inertia alpha must intertwine the exponents p*e_j (Frobenius twist)
    with c - e_i (dual twisted by theta); at phi^2 it must intertwine F with
    theta(phi)^2 F^-T; and the composite in the definition must be
    -theta(phi^-1), which on matrices reads  alpha F^-1 = -theta(phi)^-1 alpha^T.
    """
    ctx = rho2.ctx
    theta_frob, c = theta
    if alpha.parent != ctx or theta_frob.ctx != ctx:
        raise RingMismatchError("polarisation data over different fields")
    p, N = ctx.p, ctx.N
    if alpha.det().is_zero():
        return False
    e = rho2.inertia_exponents
    rows = alpha.rows()
    for i, j in product(range(2), repeat=2):
        if not rows[i][j].is_zero() and (c - e[i] - p * e[j]) % N:
            return False
    F = rho2.frob2_gl2
    Finv = F.adjugate().scale(F.det().inverse())
    if alpha @ F != Finv.transpose().scale(theta_frob * theta_frob) @ alpha:
        return False
    return alpha @ Finv == alpha.transpose().scale(-theta_frob.inverse())
