"""Command-line front end.

Exit codes: 0 the analysis ran (whatever the verdicts), 2 invalid input,
3 the requested analysis is undefined (``-phi`` completely positive).
"""

import argparse
import hashlib
import json
import sys

from . import __version__
from .config import OptConfig, PptConfig
from .cones import ConeId, cone_norm, is_decomposable
from .errors import InvalidInput, NegativeOfCpMap, WitnessInapplicable
from .maps import GALLERY_NAMES, LinMap, choi_from_json, choi_to_json, gallery, transpose_compose
from .report import SCHEMA, analyze, from_pairs, vector_from_json, vector_to_json, verdict_to_json
from .schmidt import check_witness_preconditions, extend_witness, is_k_positive, objective
from .split import cp_split, verify_split
from .walkthrough import choi_map_walkthrough, uniform_product_vector

GALLERY_HELP = {
    "identity": "a -> a on B(C^dim)",
    "transpose": "a -> a^T on B(C^dim)",
    "trace": "a -> Tr(a) 1 on B(C^dim)",
    "choi3": "the Choi map on B(C^3)",
    "reduction": "Tr - param * id on B(C^dim)",
    "adv": "a -> V a V^*, V read from --matrix",
}


def _emit(data: dict) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _read_json(path: str, raw: bytes | None = None):
    try:
        return json.loads(_read_bytes(path) if raw is None else raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def load_map(args) -> tuple[LinMap, dict]:
    if args.choi:
        raw = _read_bytes(args.choi)
        phi = choi_from_json(_read_json(args.choi, raw))
        return phi, {"file": args.choi, "file_sha256": hashlib.sha256(raw).hexdigest()}
    name = args.gallery
    params = {}
    if name in ("identity", "transpose", "trace"):
        params["n"] = args.dim or 2
    elif name == "reduction":
        if args.param is None:
            raise InvalidInput("reduction needs --param")
        params = {"lam": args.param, "n": args.dim or 3}
    elif name == "adv":
        if not args.matrix:
            raise InvalidInput("adv needs --matrix")
        m = _read_json(args.matrix)
        params["V"] = from_pairs(m["entries"], (int(m["rows"]), int(m["cols"])))
    phi = gallery(name, **params)
    source = {"gallery": name}
    source.update({k: v for k, v in params.items() if k != "V"})
    return phi, source


def _configs(args) -> tuple[OptConfig, PptConfig]:
    opt = OptConfig(restarts=args.restarts, max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    return opt, PptConfig()


def _fmt(v: dict) -> str:
    return f"{v['kind']:<13} value={v['value']:.10g}  {v['detail']}"


def cmd_analyze(args) -> int:
    phi, source = load_map(args)
    opt, ppt = _configs(args)
    report = analyze(phi, source, opt, ppt, timings=args.timings)
    if args.json:
        _emit(report)
        return 0
    print(f"map: {source}  dims: {phi.dim_k} x {phi.dim_h}  seed: {opt.seed}")
    if not report["self_adjoint"]:
        print("map is not self-adjoint; split-dependent tests skipped")
        return 0
    split = report["split"]
    if split["exists"]:
        print(f"split: c = {split['c']:.12g}, residual = {split['residual']:.3g}")
    else:
        print(f"split: undefined ({split['reason']})")
    verdicts = report["verdicts"]
    print(f"  completely positive : {_fmt(verdicts['completely_positive'])}")
    for k, v in verdicts["k_positive"].items():
        print(f"  {k}-positive{'':<10}: {_fmt(v)}")
    print(f"  decomposable        : {_fmt(verdicts['decomposable'])}")
    return 0


def cmd_split(args) -> int:
    phi, source = load_map(args)
    s = cp_split(phi)
    out = {
        "schema": SCHEMA,
        "map": source,
        "c": s.c,
        "residual": verify_split(s),
        "phi_cp": choi_to_json(s.phi_cp),
    }
    if args.json:
        _emit(out)
    else:
        print(f"c = {s.c:.17g}")
        print(f"verify_split residual = {out['residual']:.3g}")
        print("phi_cp Choi matrix:")
        print(json.dumps(out["phi_cp"]))
    return 0


def cmd_kpos(args) -> int:
    phi, source = load_map(args)
    opt, _ = _configs(args)
    v = is_k_positive(phi, args.k, opt)
    scale = "choi"
    try:
        cp_split(phi)
        scale = "choi_cp"
    except NegativeOfCpMap:
        pass
    out = {"schema": SCHEMA, "map": source, "k": args.k, "seed": opt.seed, "verdict": verdict_to_json(v, scale)}
    if args.json:
        _emit(out)
    else:
        print(f"{args.k}-positive: {_fmt(out['verdict'])}")
    return 0


def cmd_witness(args) -> int:
    phi, source = load_map(args)
    if args.copositive:
        phi = transpose_compose(phi)
    if args.vector:
        y = vector_from_json(_read_json(args.vector))
    else:
        if phi.dim_k != phi.dim_h:
            raise InvalidInput("default witness vector needs dim_k == dim_h; pass --vector")
        y = uniform_product_vector(phi.dim_k)
    check = check_witness_preconditions(phi, y)
    out = {
        "schema": SCHEMA,
        "map": dict(source, copositive=bool(args.copositive)),
        "start": vector_to_json(y),
        "preconditions": {
            "ok": check.ok,
            "reasons": check.reasons,
            "overlap": check.overlap,
            "off_span_residual": check.residual,
        },
    }
    if check.ok:
        A = cp_split(phi).phi_cp.choi
        try:
            z = extend_witness(A, y)
            out["witness"] = vector_to_json(z)
            out["value"] = objective(A, z)
            out["conclusion"] = f"not {y.k + 1}-positive"
        except WitnessInapplicable as exc:
            out["extension_error"] = str(exc)
    if args.json:
        _emit(out)
    else:
        pre = out["preconditions"]
        print(f"<y, C y> = {pre['overlap']:.3g}, off-span residual = {pre['off_span_residual']:.6g}")
        if not check.ok:
            print("preconditions fail: " + "; ".join(check.reasons))
        elif "value" in out:
            print(f"extended witness: <z, C_cp z> = {out['value']:.12g} > 1 => {out['conclusion']}")
        else:
            print(f"extension failed: {out['extension_error']}")
    return 0


def cmd_decomposable(args) -> int:
    phi, source = load_map(args)
    opt, ppt = _configs(args)
    v = is_decomposable(phi, ppt, opt=opt)
    try:
        cp_split(phi)
        scale = "choi_cp"
    except NegativeOfCpMap:
        scale = "choi"
    out = {"schema": SCHEMA, "map": source, "verdict": verdict_to_json(v, scale)}
    if args.json:
        _emit(out)
    else:
        print(f"decomposable: {_fmt(out['verdict'])}")
    return 0


def cmd_norm(args) -> int:
    phi, source = load_map(args)
    opt, ppt = _configs(args)
    cone = ConeId.parse(args.cone)
    value = cone_norm(phi, cone, opt, ppt_cfg=ppt)
    method = {
        "CompletelyPositive": "exact: largest absolute eigenvalue of the Choi matrix",
        "Positive": "lower bound: see-saw over product vectors",
        "KPositive": "lower bound: see-saw over Schmidt-rank-k vectors",
        "Decomposable": "lower bound: ADMM over PPT states",
    }[cone.tag]
    out = {"schema": SCHEMA, "map": source, "cone": str(cone), "norm": value, "method": method, "seed": opt.seed}
    if args.json:
        _emit(out)
    else:
        print(f"norm[{cone}] = {value:.12g}  ({method})")
    return 0


def cmd_paper_example(args) -> int:
    res = choi_map_walkthrough()
    if args.json:
        out = {"schema": SCHEMA, "ok": res["ok"], "checks": [[n, bool(p)] for n, p in res["checks"]]}
        for key in ("phi", "t_phi"):
            r = res[key]
            out[key] = {
                "overlap": r["overlap"],
                "image_norm": r["image_norm"],
                "witness_value": r["witness_value"],
                "witness": vector_to_json(r["witness"]),
            }
        out["conclusion"] = res["conclusion"]
        out["note"] = res["note"]
        _emit(out)
    else:
        for name, passed in res["checks"]:
            print(f"[{'PASS' if passed else 'FAIL'}] {name}")
        print(f"S(2) witness values: phi {res['phi']['witness_value']:.12g}, "
              f"t o phi {res['t_phi']['witness_value']:.12g}")
        print(f"conclusion: {res['conclusion']}")
        print(f"note: {res['note']}")
    return 0 if res["ok"] else 1


def cmd_gallery(args) -> int:
    for name in GALLERY_NAMES:
        print(f"{name:<10} {GALLERY_HELP[name]}")
    return 0


def _add_map_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gallery", choices=GALLERY_NAMES, help="named map")
    src.add_argument("--choi", metavar="PATH", help="Choi matrix JSON file")
    p.add_argument("--dim", type=int, help="matrix size for gallery maps")
    p.add_argument("--param", type=float, help="gallery parameter (reduction: lambda)")
    p.add_argument("--matrix", metavar="PATH", help="V for the adv map: {rows, cols, entries}")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _add_opt_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-11)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="posmaps", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="split and all cone tests")
    _add_map_args(p)
    _add_opt_args(p)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("split", help="c and phi_cp with c^-1 phi = Tr - phi_cp")
    _add_map_args(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("kpos", help="k-positivity verdict")
    _add_map_args(p)
    _add_opt_args(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_kpos)

    p = sub.add_parser("witness", help="extend a witness vector by one Schmidt term")
    _add_map_args(p)
    p.add_argument("--vector", metavar="PATH", help="starting Schmidt vector JSON (default: uniform x (x) x)")
    p.add_argument("--copositive", action="store_true", help="analyse t o phi instead of phi")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("decomposable", help="decomposability verdict via PPT states")
    _add_map_args(p)
    _add_opt_args(p)
    p.set_defaults(func=cmd_decomposable)

    p = sub.add_parser("norm", help="cone norm")
    _add_map_args(p)
    _add_opt_args(p)
    p.add_argument("--cone", required=True, help="positive | k<N> | cp | decomposable")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("paper-example", help="Choi map walkthrough")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_paper_example)

    p = sub.add_parser("gallery", help="list gallery maps")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NegativeOfCpMap:
        print("error: -phi is completely positive; split undefined", file=sys.stderr)
        return 3
    except (InvalidInput, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
