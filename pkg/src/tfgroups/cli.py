"""Command-line front end.

Every verb prints one JSON document (sorted keys) to stdout, or writes it to
``--out``.  Exit status: 0 on success, 2 for invalid input, 1 for an
internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import linalg as la
from .groups import (
    GroupError,
    from_json,
    member,
    p_omega,
    to_json,
    contains_group,
    impurity_witness,
)
from .kclass import (
    EXPERIMENT_CAP,
    ObstructionCertificate,
    PrimeTuple,
    amalgamation_certificate,
    build_G_base,
    build_G_U,
    classify,
    closure_op,
    embed_block,
    gtype,
    gtype_equal,
    instability_report,
    is_pure,
    joint_embed,
    check_fact,
    verify_certificate,
)


class UsageError(GroupError):
    pass


def _parser_error(message):
    raise UsageError(message)


def load_group(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return from_json(data)
    except GroupError as exc:
        raise UsageError(f"{path}: {exc}") from None


def parse_vector(text: str, where: str = "vector") -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(la.to_fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{where}: cannot parse {text!r} as comma-separated rationals") from None


def parse_set(text: str, where: str) -> tuple:
    text = (text or "").strip().strip("{}")
    if not text:
        return ()
    try:
        return tuple(sorted({int(x) for x in text.split(",")}))
    except ValueError:
        raise UsageError(f"{where}: expected comma-separated indices, got {text!r}") from None


def _dim_check(v, G, where):
    if len(v) != G.ambient_dim:
        raise UsageError(f"{where}: length {len(v)} but the group has ambient_dim {G.ambient_dim}")


def vec_json(v):
    return [la.fraction_str(x) for x in v]


# --------------------------------------------------------------------------
# verbs


def cmd_build(args, primes):
    if args.family == "base":
        if args.u:
            raise UsageError("--u only applies to the U family")
        return to_json(build_G_base(args.n, primes))
    return to_json(build_G_U(args.n, parse_set(args.u, "--u"), primes))


def cmd_classify(args, primes):
    G = load_group(args.path)
    return {"inputs": {"group": args.path}, "results": classify(G, primes).to_json()}


def cmd_member(args, primes):
    G = load_group(args.path)
    v = parse_vector(args.vector)
    _dim_check(v, G, "vector")
    return {
        "inputs": {"group": args.path, "vector": vec_json(v)},
        "results": {"member": member(v, G)},
    }


def cmd_pomega(args, primes):
    G = load_group(args.path)
    return {
        "inputs": {"group": args.path, "prime": args.prime},
        "results": {"p_omega": to_json(p_omega(G, args.prime))},
    }


def cmd_pure(args, primes):
    H, G = load_group(args.sub), load_group(args.group)
    if H.ambient_dim != G.ambient_dim:
        raise UsageError("pure: the groups have different ambient dimensions")
    if not contains_group(H, G):
        raise UsageError("pure: the first group is not a subgroup of the second")
    bad = impurity_witness(H, G)
    results = {"pure": bad is None}
    if bad is not None:
        results["witness"] = {"vector": vec_json(bad.vector), "primes": list(bad.primes)}
    return {"inputs": {"sub": args.sub, "group": args.group}, "results": results}


def cmd_closure(args, primes):
    G = load_group(args.ambient)
    base = load_group(args.base) if args.base else None
    elems = [parse_vector(t, f"--elems[{i}]") for i, t in enumerate(args.elems.split(";")) if t.strip()] if args.elems else []
    for i, v in enumerate(elems):
        _dim_check(v, G, f"--elems[{i}]")
        if not member(v, G):
            raise UsageError(f"--elems[{i}]: {vec_json(v)} is not in the ambient group")
    trace = closure_op(elems, G, primes, base=base)
    return {
        "inputs": {"ambient": args.ambient, "base": args.base, "elems": [vec_json(v) for v in elems]},
        "results": trace.to_json(),
    }


def cmd_gtype_eq(args, primes):
    base = load_group(args.base)
    N1, N2 = load_group(args.ambient1), load_group(args.ambient2)
    b1, b2 = parse_vector(args.elem1, "--elem1"), parse_vector(args.elem2, "--elem2")
    _dim_check(b1, N1, "--elem1")
    _dim_check(b2, N2, "--elem2")
    t1, t2 = gtype(b1, base, N1, primes), gtype(b2, base, N2, primes)
    res = gtype_equal(t1, t2)
    return {
        "inputs": {
            "base": args.base, "ambient1": args.ambient1, "ambient2": args.ambient2,
            "elem1": vec_json(b1), "elem2": vec_json(b2),
        },
        "results": {
            "equal": res.equal,
            "reason": res.reason,
            "iso": res.iso.to_json() if res.iso else None,
            "type1": t1.to_json(),
            "type2": t2.to_json(),
        },
    }


def cmd_experiment(args, primes):
    kind = args.experiment
    if kind == "instability":
        cap = None if args.unsafe_n else EXPERIMENT_CAP
        if cap is not None and args.n > cap:
            raise UsageError(f"--n {args.n} exceeds the cap {cap}; pass --unsafe-n to override")
        rep = instability_report(args.n, primes, cap=cap)
        return {"inputs": {"n": args.n}, "results": rep.to_json()}
    if kind == "jep":
        G1, G2 = load_group(args.group1), load_group(args.group2)
        emb = joint_embed(G1, G2, primes)
        H = emb.H
        blocks = []
        for G, (off, width) in zip((G1, G2), emb.blocks):
            if width == 0:
                blocks.append({"offset": off, "width": 0, "pure": True})
                continue
            E = embed_block(G, off, H.ambient_dim)
            blocks.append({"offset": off, "width": width, "pure": contains_group(E, H) and is_pure(E, H)})
        return {
            "inputs": {"group1": args.group1, "group2": args.group2},
            "results": {
                "H": to_json(H),
                "rank": H.rank,
                "classification": classify(H, primes).to_json(),
                "blocks": blocks,
            },
        }
    if kind == "amalgamation":
        U, V = parse_set(args.u, "--u"), parse_set(args.v, "--v")
        if U == V:
            raise UsageError("amalgamation needs --u and --v to differ")
        for name, S in (("--u", U), ("--v", V)):
            if any(i < 0 or i >= args.n for i in S):
                raise UsageError(f"{name}: indices must lie in 0..{args.n - 1}")
        cert = amalgamation_certificate(args.n, U, V, primes)
        status = {f["id"]: check_fact(cert, f) for f in cert.facts}
        return {
            "inputs": {"n": args.n, "U": list(U), "V": list(V)},
            "results": {
                "certificate": cert.to_json(),
                "fact_status": status,
                "verified": verify_certificate(cert),
            },
        }
    if kind == "verify":
        try:
            data = json.loads(Path(args.path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"{args.path}: {exc}") from None
        # accept a bare certificate or a full amalgamation report
        if "results" in data:
            data = data["results"]["certificate"]
        try:
            cert = ObstructionCertificate.from_json(data)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"{args.path}: not a certificate ({exc})") from None
        status = {f.get("id"): _safe_check(cert, f) for f in cert.facts}
        return {"inputs": {"certificate": args.path}, "results": {"fact_status": status, "verified": verify_certificate(cert)}}
    raise UsageError(f"unknown experiment {kind!r}")


def _safe_check(cert, f):
    try:
        return check_fact(cert, f)
    except (KeyError, TypeError, ValueError):
        return False


VERBS = {
    "build": cmd_build,
    "classify": cmd_classify,
    "member": cmd_member,
    "pomega": cmd_pomega,
    "pure": cmd_pure,
    "closure": cmd_closure,
    "gtype-eq": cmd_gtype_eq,
    "experiment": cmd_experiment,
}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tfgroups", description="Decision procedures for prime-localized groups.")
    ap.add_argument("--primes", default="2,3,5,7", help="p1,p3,p4,p5 (default 2,3,5,7)")
    ap.add_argument("--seed", type=int, default=0, help="seed echoed into reports")
    ap.add_argument("--out", help="write the report to this file instead of stdout")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte determinism)")
    ap.add_argument("--unsafe-n", action="store_true", help="lift the experiment size cap")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("build", help="write a witness-family group")
    p.add_argument("family", choices=["base", "U"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", default="", help="subset U, e.g. 0,2")

    p = sub.add_parser("classify")
    p.add_argument("path")

    p = sub.add_parser("member")
    p.add_argument("path")
    p.add_argument("vector", help="comma-separated rationals, e.g. 1/2,0")

    p = sub.add_parser("pomega")
    p.add_argument("path")
    p.add_argument("prime", type=int)

    p = sub.add_parser("pure", help="is the first group pure in the second")
    p.add_argument("sub")
    p.add_argument("group")

    p = sub.add_parser("closure")
    p.add_argument("ambient")
    p.add_argument("--base")
    p.add_argument("--elems", default="", help="semicolon-separated vectors")

    p = sub.add_parser("gtype-eq")
    p.add_argument("--base", required=True)
    p.add_argument("--ambient1", required=True)
    p.add_argument("--elem1", required=True)
    p.add_argument("--ambient2", required=True)
    p.add_argument("--elem2", required=True)

    p = sub.add_parser("experiment")
    exp = p.add_subparsers(dest="experiment", required=True)
    e = exp.add_parser("instability")
    e.add_argument("--n", type=int, required=True)
    e = exp.add_parser("jep")
    e.add_argument("group1")
    e.add_argument("group2")
    e = exp.add_parser("amalgamation")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--u", default="")
    e.add_argument("--v", default="")
    e = exp.add_parser("verify", help="recheck an emitted amalgamation certificate")
    e.add_argument("path")

    for parser in [ap, *sub.choices.values(), *exp.choices.values()]:
        parser.error = _parser_error
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = make_parser().parse_args(argv)
        primes = PrimeTuple.parse(args.primes)
        start = time.perf_counter()
        body = VERBS[args.verb](args, primes)
        elapsed = time.perf_counter() - start
    except GroupError as exc:
        print(json.dumps({"error": str(exc), "status": "invalid_input"}, sort_keys=True), file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}", "status": "internal_error"}, sort_keys=True),
              file=sys.stderr)
        return 1
    if args.verb != "build":
        body = {"command": argv, "primes": primes.as_list(), "seed": args.seed, **body}
        if args.timing:
            body["timing_seconds"] = round(elapsed, 6)
    text = json.dumps(body, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
