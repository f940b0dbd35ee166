"""Exhaustive and sampled property batteries, grouped into suites.

Every property is a top-level function ``prop(cfg) -> (checked, failures)``
so that suites can be farmed out to worker processes.  ``cfg`` is a plain
dict with keys ``p, f, modulus, n_list, samples, seed``.
"""
from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from itertools import product

from . import galois as G
from . import kisin as K
from . import reps as Rp
from .arith import LocalRing, Mat2, PrimeCtx, VPoly, is_prime, p_digits
from .errors import CapacityError, SolvabilityError, UnitError

MAX_FAILURES = 5
BRUTE_FORCE_MAX_Q = 9


def _ctx(cfg) -> PrimeCtx:
    mod = cfg.get("modulus")
    return PrimeCtx(cfg["p"], cfg.get("f", 1), None if mod in (None, "auto") else tuple(mod))


def _rng(cfg, salt: str) -> random.Random:
    return random.Random(f"{cfg.get('seed', 0)}:{salt}")


def test_rings(p: int) -> list[LocalRing]:
    """F_p, F_{p^2}, Z/p^2, GR(p^2, 2) and (Z/p^2)[w]/(w^2 - p)."""
    return [
        LocalRing(p, 1, (0, 1)),
        LocalRing.galois_ring(p, 1, 2),
        LocalRing(p, 2, (0, 1)),
        LocalRing.galois_ring(p, 2, 2),
        LocalRing(p, 2, (-p, 0, 1)),
    ]


def _fail(failures, item):
    if len(failures) < MAX_FAILURES:
        failures.append(item)


# ---------------------------------------------------------------------------
# arith


def prop_ring_axioms(cfg):
    checked, bad = 0, []
    rng = _rng(cfg, "ring")
    for R in test_rings(cfg["p"]):
        for _ in range(cfg["samples"]):
            x, y, z = (R.random_elem(rng) for _ in range(3))
            checked += 1
            ok = R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
            ok &= R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))
            ok &= R.is_unit(R.mul(x, y)) == (R.is_unit(x) and R.is_unit(y))
            if not ok:
                _fail(bad, {"ring": R.descriptor(), "x": x, "y": y, "z": z})
    return checked, bad


def prop_p_digits_roundtrip(cfg):
    checked, bad = 0, []
    for p in (q for q in range(2, 32) if is_prime(q)):
        for x in range(p * p - 1):
            a0, a1 = p_digits(x, p)
            checked += 1
            if a0 + p * a1 != x or not (0 <= a0 < p and 0 <= a1 < p):
                _fail(bad, {"p": p, "x": x})
    return checked, bad


def _random_vmat(R, rng):
    def poly():
        return VPoly(R, tuple(R.random_elem(rng) for _ in range(rng.randrange(4))))

    return Mat2(poly(), poly(), poly(), poly())


def prop_adjugate(cfg):
    checked, bad = 0, []
    rng = _rng(cfg, "adj")
    for R in test_rings(cfg["p"]):
        for _ in range(cfg["samples"]):
            A = _random_vmat(R, rng)
            d, z = A.det(), VPoly(R)
            dI = Mat2(d, z, z, d)
            checked += 1
            if A.adjugate() @ A != dI or A @ A.adjugate() != dI:
                _fail(bad, {"ring": R.descriptor(), "matrix": A.to_json()})
    return checked, bad


def prop_inverse_bruteforce(cfg):
    checked, bad = 0, []
    for R in test_rings(cfg["p"]):
        if R.size > 10**4:
            continue
        elems = list(R.elements())
        for x in elems:
            found = next((y for y in elems if R.mul(x, y) == R.one), None)
            checked += 1
            try:
                inv = R.inverse(x)
            except UnitError:
                inv = None
            if inv != found or R.is_unit(x) != (found is not None):
                _fail(bad, {"ring": R.descriptor(), "x": x, "inverse": inv, "oracle": found})
    return checked, bad


# ---------------------------------------------------------------------------
# reps


def _tchars(ctx):
    for r in range(ctx.N):
        for lam in ctx.nonzero():
            yield Rp.TChar(r, lam)


def prop_extension_roundtrip(cfg):
    ctx = _ctx(cfg)
    checked, bad, count = 0, [], 0
    for chi in _tchars(ctx):
        k = Rp.extends_to_G(chi)
        checked += 1
        if k is not None:
            count += 1
            if Rp.restrict_det_char(k, ctx) != chi:
                _fail(bad, chi.to_json())
        reducible = isinstance(Rp.induced_structure(chi), Rp.ReducibleLength2)
        if reducible != (k is not None):
            _fail(bad, chi.to_json())
    if count != ctx.p + 1:
        _fail(bad, {"extension_count": count, "expected": ctx.p + 1})
    return checked, bad


def prop_twist_action(cfg):
    ctx = _ctx(cfg)
    p = ctx.p
    checked, bad = 0, []
    for F in Rp.classify_all(ctx):
        if Rp.twist_factor(F, 0, ctx) != F:
            _fail(bad, {"factor": F.to_json(), "k": 0})
        for k, k2 in product(range(p + 1), repeat=2):
            checked += 1
            lhs = Rp.twist_factor(Rp.twist_factor(F, k, ctx), k2, ctx)
            if lhs != Rp.twist_factor(F, k + k2, ctx):
                _fail(bad, {"factor": F.to_json(), "k": k, "k2": k2})
    return checked, bad


def prop_pi_ss_size(cfg):
    ctx = _ctx(cfg)
    checked, bad = 0, []
    for lam in ctx.nonzero():
        for r in range(ctx.p):
            checked += 1
            boundary = lam == 1 and r in (0, ctx.p - 1)
            if len(Rp.pi_ss(r, lam, ctx)) != (2 if boundary else 1):
                _fail(bad, {"r": r, "lambda": lam.to_json()})
    return checked, bad


def prop_packet_symmetry(cfg):
    ctx = _ctx(cfg)
    p = ctx.p
    checked, bad = 0, []
    for idx in Rp.packet_indices(ctx):
        other = Rp.PacketIndex(p - 1 - idx.r, idx.lam.inverse(), (idx.k + idx.r + 1) % (p + 1))
        checked += 1
        if Rp.packet(idx, ctx) != Rp.packet(other, ctx):
            _fail(bad, idx.to_json())
    return checked, bad


def prop_hss_equivalence(cfg):
    ctx = _ctx(cfg)
    checked, bad = 0, []
    for chi in _tchars(ctx):
        checked += 1
        iso = Rp.hss_induction_status(chi) is Rp.DeformStatus.ISOMORPHISM
        if iso != Rp.hss_norm_oracle(chi):
            _fail(bad, chi.to_json())
    return checked, bad


def prop_classification(cfg):
    ctx = _ctx(cfg)
    labels = Rp.classify_all(ctx)
    kinds = Counter(type(F).__name__ for F in labels)
    got = (kinds["Character"], kinds["Special"], kinds["PrincipalSeries"])
    bad = []
    if got != Rp.expected_class_count(ctx):
        bad.append({"counts": list(got), "expected": list(Rp.expected_class_count(ctx))})
    if len(set(labels)) != len(labels):
        bad.append({"duplicates": len(labels) - len(set(labels))})
    return len(labels), bad


# ---------------------------------------------------------------------------
# galois


def prop_packet_param_inertia(cfg):
    ctx = _ctx(cfg)
    p, N = ctx.p, ctx.N
    checked, bad = 0, []
    for idx in Rp.packet_indices(ctx):
        rt = (idx.r - 1) + (1 - p) * idx.k
        expect = tuple(sorted(((p + 1 + rt) % N, (-p * rt) % N)))
        checked += 1
        if G.c_inertia(G.param_for_packet(idx, ctx)).gl2_exponents != expect:
            _fail(bad, idx.to_json())
    return checked, bad


def prop_lparam_classes(cfg):
    ctx = _ctx(cfg)
    params = [G.LParam(r, lam) for r in range(ctx.N) for lam in ctx.nonzero()]
    checked, bad = 0, []
    for P in params:
        cls = [Q for Q in params if G.lparam_equiv(P, Q)]
        checked += 1
        if not G.lparam_equiv(P, P) or len(cls) not in (1, 2):
            _fail(bad, {"param": P.to_json(), "class_size": len(cls)})
        for Q in cls:
            if not G.lparam_equiv(Q, P):
                _fail(bad, {"asymmetric": [P.to_json(), Q.to_json()]})
            for S in params:
                if G.lparam_equiv(Q, S) and not G.lparam_equiv(P, S):
                    _fail(bad, {"intransitive": [P.to_json(), Q.to_json(), S.to_json()]})
    return checked, bad


def prop_equiv_oracle(cfg):
    ctx = _ctx(cfg)
    if ctx.q > cfg.get("brute_max_q", BRUTE_FORCE_MAX_Q):
        return 0, []
    params = list(G.all_cparams(ctx))
    lifts = [G.lift(P) for P in params]
    checked, bad = 0, []
    for (P, LP), (Q, LQ) in product(zip(params, lifts), repeat=2):
        checked += 1
        if G.cparam_equiv_fast(P, Q) != G.cparam_equiv_bruteforce(LP, LQ):
            _fail(bad, {"P": P.to_json(), "Q": Q.to_json()})
    return checked, bad


def prop_weyl(cfg):
    ctx = _ctx(cfg)
    checked, bad = 0, []
    for n in cfg.get("n_list", (0, 1, 2)):
        checked += ctx.N
        for v in G.weyl_triviality_check(ctx, n):
            _fail(bad, v)
    return checked, bad


def prop_type_involutions(cfg):
    ctx = _ctx(cfg)
    checked, bad = 0, []
    for a, b in product(range(ctx.N), repeat=2):
        T = G.PSInertialType(a, b, ctx)
        checked += 1
        if T.dual().dual() != T or T.frob_twist().frob_twist() != T:
            _fail(bad, [a, b])
    return checked, bad


def prop_ftsd(cfg):
    ctx = _ctx(cfg)
    checked, bad = 0, []
    for a, b in product(range(ctx.N), repeat=2):
        checked += 1
        if G.PSInertialType(a, b, ctx).is_ftsd() != G.ftsd_two_family(a, b, ctx):
            _fail(bad, [a, b])
    return checked, bad


def prop_orientation(cfg):
    ctx = _ctx(cfg)
    p = ctx.p
    checked, bad = 0, []
    for a, b in product(range(ctx.N), repeat=2):
        if not G.ps_is_n_generic(a, b, 2, ctx):
            continue
        checked += 1
        o = G.orientation(a, b, ctx, require_generic=True)
        (a0, a1), (b0, b1) = p_digits((-a) % ctx.N, p), p_digits((-b) % ctx.N, p)
        vals = [(a0 + p * a1, b0 + p * b1), (a1 + p * a0, b1 + p * b0)]
        # exactly one choice per embedding satisfies the weak inequality
        for w, (x, y) in zip((o.w0, o.w1), vals):
            choices = [c for c in ("id", "s") if (x >= y if c == "id" else y >= x)]
            if x == y or choices != [w]:
                _fail(bad, {"a": a, "b": b, "orientation": o.to_json()})
    return checked, bad


def prop_polarisation(cfg):
    ctx = _ctx(cfg)
    theta = G.cyclotomic_theta(ctx)
    checked, bad = 0, []
    for P in G.all_cparams(ctx):
        checked += 1
        if not G.verify_polarisation(G.base_change(P), theta, G.polarisation_of(P)):
            _fail(bad, P.to_json())
    return checked, bad


# ---------------------------------------------------------------------------
# correspondence


def prop_correspondence(cfg):
    ctx = _ctx(cfg)
    vs = G.correspondence_violations(ctx)
    return ctx.N * (ctx.q - 1), vs[:MAX_FAILURES]


# ---------------------------------------------------------------------------
# kisin


def prop_kisin_gauge(cfg):
    checked, bad = 0, []
    rng = _rng(cfg, "kisin")
    for R in test_rings(cfg["p"]):
        for shape in K.Shape:
            if shape is K.Shape.W and not K.w_admissible(R):
                continue
            for _ in range(cfg["samples"]):
                A = K.sample_gauge(shape, R, rng).matrix
                checked += 1
                problems = []
                if not K.det_height_check(A):
                    problems.append("height")
                if K.detect_shape(A) is not shape:
                    problems.append("detect")
                if sum(K.validate_gauge(A, s) for s in K.Shape) != 1:
                    problems.append("exclusive")
                A0 = K.polarisation_partner(A)
                if not K.check_polarisation(A0, A) or K.detect_shape(A0) is not shape:
                    problems.append("partner")
                if K.polarisation_partner(A0) != A:
                    problems.append("involution")
                if not K.validate_gauge(K.reduce_to_residue(A), shape):
                    problems.append("reduction")
                if problems:
                    _fail(bad, {"ring": R.descriptor(), "shape": shape.value,
                                "problems": problems, "matrix": A.to_json()})
    return checked, bad


def prop_kisin_w_solvability(cfg):
    """Shape w has no points over unramified rings of length 2 (Z/p^2, GR(p^2,2))."""
    p = cfg["p"]
    checked, bad = 0, []
    for R in (LocalRing(p, 2, (0, 1)), LocalRing.galois_ring(p, 2, 2)):
        checked += 1
        try:
            K.sample_gauge(K.Shape.W, R, 0)
        except SolvabilityError:
            continue
        bad.append({"ring": R.descriptor(), "expected": "SolvabilityError"})
    for R in (LocalRing(p, 2, (-p, 0, 1)),):
        checked += 1
        if not K.w_admissible(R):
            bad.append({"ring": R.descriptor(), "expected": "admissible"})
    return checked, bad


def prop_defring_table(cfg):
    expected = {
        "t": ([("c21", "unrestricted"), ("c11_star", "unit"), ("c22_star", "unit")], []),
        "t'": ([("c12", "unrestricted"), ("c11_star", "unit"), ("c22_star", "unit")], []),
        "w": ([("c11", "maximal-ideal"), ("c22", "maximal-ideal"),
               ("c12_star", "unit"), ("c21_star", "unit")], ["c11*c22 + p"]),
    }
    bad = []
    for shape, (gens, rels) in expected.items():
        rec = K.explicit_defring(shape)
        pres = rec.presentation
        ok = [list(g) for g in pres.gens] == [list(g) for g in gens]
        ok &= list(pres.relations) == rels and tuple(pres.extra) == (2, 4)
        ok &= (rec.left_extra_vars, rec.right_extra_vars) == (2, 4)
        ok &= pres.dimension == 3
        if not ok:
            bad.append(rec.to_json())
    return 3, bad


SUITES = {
    "arith": [prop_ring_axioms, prop_p_digits_roundtrip, prop_adjugate, prop_inverse_bruteforce],
    "reps": [prop_extension_roundtrip, prop_twist_action, prop_pi_ss_size, prop_packet_symmetry,
             prop_hss_equivalence, prop_classification],
    "galois": [prop_packet_param_inertia, prop_lparam_classes, prop_equiv_oracle, prop_weyl,
               prop_type_involutions, prop_ftsd, prop_orientation, prop_polarisation],
    "correspondence": [prop_correspondence],
    "kisin": [prop_kisin_gauge, prop_kisin_w_solvability, prop_defring_table],
}
SUITES["all"] = [f for name in ("arith", "reps", "galois", "correspondence", "kisin") for f in SUITES[name]]


def _run_one(args):
    fn, cfg = args
    checked, failures = fn(cfg)
    return {"property": fn.__name__[len("prop_"):], "checked": checked,
            "passed": not failures, "counterexamples": failures}


def run_suite(name: str, cfg: dict, jobs: int = 1) -> tuple[list[dict], dict]:
    """Run every property of a suite; returns (property records, info)."""
    tasks = [(fn, cfg) for fn in SUITES[name]]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_run_one, tasks))
    else:
        records = [_run_one(t) for t in tasks]
    info = {}
    if name in ("galois", "all"):
        ctx = _ctx(cfg)
        info["literal_cparam_reading_mismatches"] = G.literal_partner_discrepancies(ctx)
        if ctx.q > cfg.get("brute_max_q", BRUTE_FORCE_MAX_Q):
            info["equiv_oracle"] = f"skipped: field size {ctx.q} above brute-force limit"
        if not any(G.ps_is_n_generic(a, b, 2, ctx) for a, b in product(range(ctx.N), repeat=2)):
            info["orientation"] = "vacuous: no 2-generic types for this p"
    if name in ("kisin", "all"):
        info["w_admissible"] = {str(R.descriptor()): K.w_admissible(R) for R in test_rings(cfg["p"])}
    return records, info
