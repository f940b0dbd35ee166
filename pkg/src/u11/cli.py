"""Command-line front end: ``u11 <command> [options]``.

Every command prints a report ``{command, config, results, violations}``.
Exit codes: 0 ok, 1 violations found, 2 usage error, 3 domain error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import galois as G
from . import kisin as K
from . import reps as Rp
from . import verify as V
from .arith import LocalRing, PrimeCtx
from .errors import DomainError, U11Error

COMMANDS = (
    "classify", "packet", "correspond", "param-equiv", "generic", "orientation",
    "ftsd", "shape", "polarise", "defring", "verify",
)


class UsageError(Exception):
    pass


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="u11", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("suite", nargs="?", choices=sorted(V.SUITES), help="suite for `verify`")
    ap.add_argument("--p", type=int)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--m", type=int, default=1, help="nilpotency exponent of the Kisin ring")
    ap.add_argument("--modulus", default="auto", help="modulus of F_{p^f}: 'auto' or c0,c1,...")
    ap.add_argument("--ring-modulus", type=_int_list, help="modulus of the Kisin ring (default: GR(p^m, f))")
    ap.add_argument("--r", type=int)
    lam = ap.add_mutually_exclusive_group()
    lam.add_argument("--lambda", dest="lam", type=_int_list)
    lam.add_argument("--lambda-index", type=int)
    ap.add_argument("--r2", type=int)
    ap.add_argument("--lambda2", type=_int_list)
    ap.add_argument("--k", type=int, default=0)
    ap.add_argument("--n", type=int)
    ap.add_argument("--a", type=int)
    ap.add_argument("--b", type=int)
    ap.add_argument("--shape", choices=[s.value for s in K.Shape])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--output", choices=("json", "text"), default="json")
    ap.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    return ap


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _ctx(args) -> PrimeCtx:
    _need(args, "p")
    mod = None if args.modulus == "auto" else tuple(_int_list(args.modulus))
    return PrimeCtx(args.p, args.f, mod)


def _lambda(args, ctx: PrimeCtx, which: str = "lam"):
    if which == "lam2":
        return ctx.elem(args.lambda2) if args.lambda2 is not None else _lambda(args, ctx)
    if args.lambda_index is not None:
        return ctx.lambda_index(args.lambda_index)
    if args.lam is not None:
        x = ctx.elem(args.lam)
        if x.is_zero():
            raise DomainError("lambda must be nonzero")
        return x
    return ctx.one


def _kisin_ring(args) -> LocalRing:
    _need(args, "p")
    if args.ring_modulus:
        return LocalRing(args.p, args.m, tuple(args.ring_modulus))
    return LocalRing.galois_ring(args.p, args.m, args.f)


def _config(args) -> dict:
    cfg = {"p": args.p, "f": args.f, "modulus": args.modulus, "seed": args.seed}
    for key in ("m", "r", "k", "n", "a", "b", "shape", "r2", "samples"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if args.lam is not None:
        cfg["lambda"] = args.lam
    if args.lambda_index is not None:
        cfg["lambda_index"] = args.lambda_index
    if args.lambda2 is not None:
        cfg["lambda2"] = args.lambda2
    if args.ring_modulus:
        cfg["ring_modulus"] = args.ring_modulus
    if args.suite:
        cfg["suite"] = args.suite
    return cfg


# ---------------------------------------------------------------------------
# commands; each returns (results, violations)


def cmd_classify(args):
    ctx = _ctx(args)
    labels = Rp.classify_all(ctx)
    c, s, ps = Rp.expected_class_count(ctx)
    return {
        "total": len(labels),
        "counts": {"character": c, "special": s, "ps": ps},
        "labels": [F.to_json() for F in labels],
    }, []


def _packet_index(args, ctx):
    _need(args, "r")
    return Rp.PacketIndex(args.r, _lambda(args, ctx), args.k).validate(ctx)


def cmd_packet(args):
    ctx = _ctx(args)
    idx = _packet_index(args, ctx)
    pk = Rp.packet(idx, ctx)
    mult = sorted(pk.multiplicities().items(), key=lambda kv: kv[0].key())
    return {
        "index": idx.to_json(),
        "packet": pk.to_json(),
        "multiplicities": [{"factor": F.to_json(), "count": n} for F, n in mult],
    }, []


def cmd_correspond(args):
    ctx = _ctx(args)
    idx = _packet_index(args, ctx)
    P = G.param_for_packet(idx, ctx)
    fiber = G.packets_for_param(P)
    packs = [Rp.packet(i, ctx) for i in fiber]
    viol = [] if all(x == packs[0] for x in packs) else [{"unequal_fiber": [i.to_json() for i in fiber]}]
    return {
        "index": idx.to_json(),
        "param": P.to_json(),
        "c_inertia": G.c_inertia(P).to_json(),
        "fiber": [i.to_json() for i in fiber],
        "packet": packs[0].to_json(),
    }, viol


def cmd_param_equiv(args):
    ctx = _ctx(args)
    _need(args, "r", "r2")
    lam1, lam2 = _lambda(args, ctx), _lambda(args, ctx, "lam2")
    P, Q = G.CParamNS(args.r, lam1), G.CParamNS(args.r2, lam2)
    out = {
        "params": [P.to_json(), Q.to_json()],
        "lparam_equiv": G.lparam_equiv(G.LParam(args.r, lam1), G.LParam(args.r2, lam2)),
        "cparam_equiv_fast": G.cparam_equiv_fast(P, Q),
        "c_inertia": [G.c_inertia(P).to_json(), G.c_inertia(Q).to_json()],
    }
    viol = []
    if ctx.p ** (4 * ctx.f) <= G.BRUTE_FORCE_BOUND:
        brute = G.cparam_equiv_bruteforce(G.lift(P), G.lift(Q))
        out["cparam_equiv_bruteforce"] = brute
        if brute != out["cparam_equiv_fast"]:
            viol.append({"disagreement": out["params"]})
    return out, viol


def cmd_generic(args):
    ctx = _ctx(args)
    _need(args, "n")
    if args.a is not None or args.b is not None:
        _need(args, "a", "b")
        return {"type": [args.a, args.b], "n": args.n,
                "n_generic": G.ps_is_n_generic(args.a, args.b, args.n, ctx)}, []
    _need(args, "r")
    P = G.CParamNS(args.r, _lambda(args, ctx))
    wit = G.n_generic_witness(P, args.n)
    return {
        "param": P.to_json(),
        "n": args.n,
        "n_generic": wit is not None,
        "witness": None if wit is None else {"w": wit[0], "a": wit[1], "b": wit[2]},
    }, []


def cmd_orientation(args):
    ctx = _ctx(args)
    _need(args, "a", "b")
    return {"type": [args.a, args.b], "orientation": G.orientation(args.a, args.b, ctx).to_json()}, []


def cmd_ftsd(args):
    ctx = _ctx(args)
    _need(args, "a", "b")
    T = G.PSInertialType(args.a, args.b, ctx)
    return {
        "type": T.to_json(),
        "principal": T.is_principal,
        "dual": T.dual().to_json(),
        "frob_twist": T.frob_twist().to_json(),
        "is_ftsd": T.is_ftsd(),
    }, []


def cmd_shape(args):
    _need(args, "shape")
    R = _kisin_ring(args)
    g = K.sample_gauge(args.shape, R, args.seed)
    A0 = K.polarisation_partner(g.matrix)
    u = K.det_height(g.matrix)
    out = {
        "gauge": g.to_json(),
        "detected_shape": K.detect_shape(g.matrix).value,
        "det_unit": list(u),
        "partner": K.GaugeMatrix.from_matrix(A0).to_json(),
        "polarised": K.check_polarisation(A0, g.matrix),
        "reduction": [[x.to_json() for x in row] for row in K.reduce_to_residue(g.matrix).rows()],
    }
    viol = [] if out["polarised"] and out["detected_shape"] == args.shape else [{"shape": args.shape}]
    return out, viol


def cmd_polarise(args):
    ctx = _ctx(args)
    _need(args, "r")
    P = G.CParamNS(args.r, _lambda(args, ctx))
    bc = G.base_change(P)
    alpha = G.polarisation_of(P)
    ok = G.verify_polarisation(bc, G.cyclotomic_theta(ctx), alpha)
    return {"param": P.to_json(), "base_change": bc.to_json(),
            "alpha": alpha.to_json(), "verified": ok}, ([] if ok else [{"param": P.to_json()}])


def cmd_defring(args):
    _need(args, "shape")
    return K.explicit_defring(args.shape).to_json(), []


def cmd_verify(args):
    if args.suite is None:
        raise UsageError("verify requires a suite: " + ", ".join(sorted(V.SUITES)))
    ctx = _ctx(args)
    G.require_odd(ctx)
    cfg = {
        "p": ctx.p, "f": ctx.f, "modulus": list(ctx.modulus),
        "n_list": [args.n] if args.n is not None else [0, 1, 2],
        "samples": args.samples, "seed": args.seed,
    }
    records, info = V.run_suite(args.suite, cfg, jobs=args.jobs)
    viol = [{"property": r["property"], "counterexample": c} for r in records for c in r["counterexamples"]]
    return {"properties": records, "info": info}, viol


DISPATCH = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


def run(argv: list[str]) -> tuple[dict, int]:
    """Parse ``argv`` and execute; returns (report, exit code).

    argparse usage errors still raise SystemExit(2).
    """
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report = {"command": args.command, "config": _config(args)}
    try:
        results, violations = DISPATCH[args.command](args)
        code = 1 if violations else 0
        report.update(results=results, violations=violations)
    except UsageError as e:
        report.update(results=None, violations=[], error={"type": "UsageError", "message": str(e)})
        code = 2
    except U11Error as e:
        report.update(results=None, violations=[], error={"type": type(e).__name__, "message": str(e)})
        code = 3
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report, code


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        items = []
        for x in obj:
            if _flat(x):
                items.append(f"{pad}- {json.dumps(x)}")
            else:
                # mark where each nested item starts
                body = _text(x, indent + 1)
                items.append(pad + "- " + body[len(pad) + 2:])
        return "\n".join(items)
    return pad + json.dumps(obj)


def _flat(x) -> bool:
    if isinstance(x, dict):
        return all(not isinstance(v, (dict, list)) for v in x.values())
    if isinstance(x, list):
        return all(not isinstance(v, (dict, list)) or _flat(v) for v in x) and len(json.dumps(x)) < 80
    return True


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    output = "json"
    if "--output" in argv:
        i = argv.index("--output")
        if i + 1 < len(argv):
            output = argv[i + 1]
    report, code = run(argv)
    if output == "text":
        print(_text(report))
    else:
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
