"""Command-line entry point.

Exit status: 0 on success, 1 when a verification finds violations (findings are
printed as JSON), 2 on usage errors and malformed input files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import game, harness, lab
from .fourier import BooleanFunction, kkl_sides
from .graph import hopcroft_karp
from .rng import check_seed, derive_seed, substream
from .rs import (ap_rs, behrend_ap_free, brute_force_ap_free, disjoint_blocks_rs, format_rs,
                 parse_rs, verify_rs)
from .textio import FormatError, LineReader


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    try:
        return check_seed(int(text, 0))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"seed must be an integer in [0, 2^64): {exc}") from None


def _kv(text: str) -> dict[str, str]:
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise argparse.ArgumentTypeError(f"expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _bits(text: str) -> list[int]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError("expected a bit string such as 0110")
    return [int(c) for c in text]


def _emit(rows, out: Path | None = None) -> None:
    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _load_instance(path: Path) -> game.GameInstance:
    return game.parse_instance(_read(path), str(path))


# -- commands ------------------------------------------------------------------------

def cmd_gen_rs(args) -> int:
    p = args.params
    try:
        if args.kind == "blocks":
            rs = disjoint_blocks_rs(int(p["r"]), int(p["t"]))
        else:
            k_max = int(p["kmax"])
            method = p.get("method", "behrend")
            s = brute_force_ap_free(k_max) if method == "brute" else behrend_ap_free(k_max)
            rs = ap_rs(int(p["m"]), s)
    except KeyError as exc:
        raise UsageError(f"--params lacks {exc.args[0]}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, format_rs(rs))
    return 0


def cmd_verify_rs(args) -> int:
    rs = parse_rs(_read(args.file), str(args.file))
    report = verify_rs(rs)
    _emit([{"file": str(args.file), "valid": report.valid, "n": rs.n, "r": rs.r, "t": rs.t,
            "findings": [f.as_dict() for f in report.findings]}])
    return 0 if report.valid else 1


def cmd_gen_instance(args) -> int:
    rs1 = parse_rs(_read(args.rs1), str(args.rs1))
    rs2 = parse_rs(_read(args.rs2), str(args.rs2))
    try:
        params = game.GameParams.from_rs(rs1, rs2, args.k, args.delta)
    except game.ParameterError as exc:
        raise UsageError(str(exc)) from None
    inst = game.sample_instance(params, rs1, rs2, args.seed)
    _write(args.out, game.format_instance(inst))
    if args.stream is not None:
        if args.order_seed is None:
            raise UsageError("--stream needs --order-seed")
        args.stream.write_text(game.format_stream(game.assemble_stream(inst, args.order_seed)))
    return 0


def cmd_verify_instance(args) -> int:
    f = game.read_instance_file(_read(args.file), str(args.file))
    report = game.verify_instance_file(f)
    _emit([{"file": str(args.file), "ok": report.ok, "violations": report.violations, **report.info}])
    return 0 if report.ok else 1


def cmd_run_alg(args) -> int:
    inst = _load_instance(args.instance)
    if args.alg == "clairvoyant" and args.passes != 2:
        raise UsageError("the clairvoyant baseline runs two passes")
    stream = game.assemble_stream(inst, args.order_seed)
    rep = harness.run_on_instance(args.alg, inst, stream, args.passes)
    row = {"instance": str(args.instance), "order_seed": args.order_seed, **rep.as_dict()}
    _emit([row], args.report)
    if args.report is not None:
        _emit([{k: row[k] for k in ("algorithm", "output_size", "optimum", "value", "cost_words")}])
    return 0


def cmd_eval(args) -> int:
    inst = _load_instance(args.instance)
    reader = LineReader(_read(args.answer), str(args.answer))
    edges = [tuple(reader.ints(line, 2, "edge")) for line in reader]
    _emit([{"instance": str(args.instance), "edges": len(edges),
            "value": game.evaluate_output(inst, edges)}])
    return 0


def cmd_params(args) -> int:
    try:
        row = {"alpha": args.alpha, "beta": args.beta,
               "ratio": game.rs_lower_bound_ratio(args.alpha, args.beta)}
        if args.big_n is not None:
            row["family_parameters"] = game.ratio_bound_parameters(args.big_n, args.alpha, args.beta, args.delta)
        if args.n is not None and args.r1 is not None:
            th = game.approx_threshold(args.n, args.r1, args.delta)
            row["threshold"] = {"n": args.n, "r1": args.r1, "delta": args.delta, "beta": th.beta,
                                "target": th.target, "identity_residual": th.identity_residual}
        if args.n1 is not None and args.k is not None:
            row["r2"] = game.required_r2(args.n1, args.k, args.delta)
    except (game.ParameterError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    _emit([row])
    return 0


def _support(spec: str, r_prime: int, seed: int | None) -> lab.SupportSet:
    if spec == "full":
        return lab.SupportSet.full(r_prime)
    if spec == "even":
        return lab.SupportSet.even_parity(r_prime)
    if spec == "single":
        return lab.SupportSet(r_prime, [0])
    if spec.startswith("missing:"):
        if seed is None:
            raise UsageError("a random support needs --seed")
        return lab.SupportSet.random_with_deficiency(r_prime, int(spec[8:]), substream(seed, "support"))
    raise UsageError(f"unknown support {spec!r}")


def cmd_bias_lab(args) -> int:
    rows = []
    if args.mode == "xor":
        if args.trend:
            rows.append(lab.bias_trend(args.missing, args.k, args.trend, _need_seed(args)))
        else:
            s = _support(args.support, args.r_prime, args.seed)
            mode = "sampled" if args.trials else "exact"
            res = lab.xor_bias(s, args.k, mode, args.trials or 0, args.seed)
            rows.append({"support": args.support, "seed": args.seed, **res.as_dict()})
    elif args.mode == "kkl":
        seed = _need_seed(args)
        for i in range(args.functions):
            rng = substream(seed, f"kkl/{i}")
            vals = rng.choice([-1.0, 1.0], size=1 << args.n) * (rng.random(1 << args.n) < args.density)
            f = BooleanFunction(args.n, vals)
            for gamma in args.gammas:
                out = kkl_sides(f, gamma)
                rows.append({"function": i, "seed": seed, "n": args.n, "support": f.support_size,
                             "gamma": gamma, "lhs": out.lhs, "rhs": out.rhs, "holds": out.holds})
    else:
        r, t = args.blocks
        host = disjoint_blocks_rs(r, t)
        encoder = lab.make_encoder(args.encoder, r, t, args.bits, args.seed)
        y1 = args.y1 or [0] * args.ell
        y2 = args.y2 or [1] * args.ell
        ex = lab.HidingExperiment(host, args.k, args.ell, encoder, y1, y2)
        base = {"r": r, "t": t, "k": args.k, "ell": args.ell, "encoder": args.encoder,
                "y1": "".join(map(str, y1)), "y2": "".join(map(str, y2))}
        if args.phi is not None:
            rows.append({**base, "phi": args.phi, "tvd": ex.tvd(args.phi)})
        else:
            rows.append({**base, **ex.campaign(args.trials or 100, _need_seed(args))})
    _emit(rows, args.out)
    return 0


def _need_seed(args) -> int:
    if args.seed is None:
        raise UsageError("this mode needs --seed")
    return args.seed


def cmd_report(args) -> int:
    from . import plotting

    rs1 = parse_rs(_read(args.rs1), str(args.rs1))
    rs2 = parse_rs(_read(args.rs2), str(args.rs2))
    try:
        params = game.GameParams.from_rs(rs1, rs2, args.k, args.delta)
    except game.ParameterError as exc:
        raise UsageError(str(exc)) from None
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    claim_rows, alg_rows = [], []
    for i in range(args.instances):
        seed = derive_seed(args.seed, f"instance/{i}")
        inst = game.sample_instance(params, rs1, rs2, seed)
        cert = game.certified_large_matching(inst)
        avoid = game.max_matching_avoiding_hidden(inst)
        claim_rows.append({"kind": "claims", "seed": seed, "n": inst.n,
                           "certified_matching": len(cert),
                           "certified_threshold": game.certified_threshold(params),
                           "avoiding_hidden_max": avoid.size, "avoiding_hidden_bound": avoid.bound,
                           "surviving_hidden": len(inst.surviving_hidden)})
        stream = game.assemble_stream(inst, derive_seed(seed, "order"))
        opt = len(hopcroft_karp(inst.union_graph))
        for name, passes in (("greedy", 1), ("twopass", 2), ("clairvoyant", 2)):
            rep = harness.run_on_instance(name, inst, stream, passes, opt)
            alg_rows.append({"kind": "run", "seed": seed, **rep.as_dict()})
    trend = lab.bias_trend(args.trend_missing, args.trend_k, list(range(6, 15, 2)), args.seed)
    th = game.approx_threshold(params.n, params.r1, params.delta)
    summary = {"kind": "summary", "params": params.as_dict(), "n": params.n, "seed": args.seed,
               "instances": args.instances, "beta": th.beta, "target": th.target,
               "ratio_0.5_1": game.rs_lower_bound_ratio(0.5, 1.0),
               "space_unit": "word = one stored edge or one scalar counter"}
    _emit([summary] + claim_rows + alg_rows + [{"kind": "bias_trend", **trend}], out / "report.jsonl")
    plotting.plot_ratios(alg_rows, out / "ratios.png")
    plotting.plot_claims(claim_rows, out / "claims.png")
    plotting.plot_bias_trend(trend, out / "bias_trend.png")
    plotting.plot_ratio_curve([0.25, 0.5, 1.0], out / "ratio_curve.png")
    _emit([{"report": str(out / "report.jsonl"),
            "figures": sorted(p.name for p in out.glob("*.png"))}])
    return 0


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hidden-matching", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-rs", help="write an RS graph")
    p.add_argument("--kind", choices=("blocks", "apfree"), required=True)
    p.add_argument("--params", type=_kv, required=True,
                   help="blocks: r=,t=   apfree: m=,kmax=[,method=behrend|brute]")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_gen_rs)

    p = sub.add_parser("verify-rs", help="check an RS graph file")
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_verify_rs)

    p = sub.add_parser("gen-instance", help="sample a Hidden-Matching instance")
    p.add_argument("--rs1", type=Path, required=True)
    p.add_argument("--rs2", type=Path, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--stream", type=Path, help="also write the shuffled edge stream here")
    p.add_argument("--order-seed", type=_seed)
    p.set_defaults(func=cmd_gen_instance)

    p = sub.add_parser("verify-instance", help="re-derive and check an instance file")
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_verify_instance)

    p = sub.add_parser("run-alg", help="run a streaming baseline on an instance")
    p.add_argument("--alg", choices=("greedy", "twopass", "clairvoyant"), required=True)
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--passes", type=int, choices=(1, 2), required=True)
    p.add_argument("--order-seed", type=_seed, required=True)
    p.add_argument("--report", type=Path)
    p.set_defaults(func=cmd_run_alg)

    p = sub.add_parser("eval", help="score an answer edge list against an instance")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--answer", type=Path, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("params", help="ratio bound and parameter calculators")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--N", dest="big_n", type=int, help="RS vertex count for the ratio-bound parameters")
    p.add_argument("--n", type=int, help="union vertex count for the threshold")
    p.add_argument("--r1", type=int)
    p.add_argument("--n1", type=int, help="with --k: both couplings of r2")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("bias-lab", help="parity bias, KKL, and hiding experiments")
    p.add_argument("--mode", choices=("xor", "kkl", "hiding"), required=True)
    p.add_argument("--seed", type=_seed)
    p.add_argument("--out", type=Path)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r-prime", type=int, default=10)
    p.add_argument("--support", default="full", help="full | even | single | missing:D")
    p.add_argument("--trials", type=int, help="sampled mode (xor) or campaign size (hiding)")
    p.add_argument("--trend", type=lambda s: [int(v) for v in s.split(",")],
                   help="comma-separated r' values for the fixed-deficiency trend")
    p.add_argument("--missing", type=int, default=4)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--functions", type=int, default=10)
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--gammas", type=lambda s: [float(v) for v in s.split(",")],
                   default=[g / 10 for g in range(1, 10)])
    p.add_argument("--blocks", type=lambda s: tuple(int(v) for v in s.split(",")), default=(4, 2),
                   help="host RS graph as disjoint blocks r,t")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--encoder", choices=lab.ENCODER_NAMES, default="constant")
    p.add_argument("--bits", type=int, default=1)
    p.add_argument("--y1", type=_bits)
    p.add_argument("--y2", type=_bits)
    p.add_argument("--phi", type=int)
    p.set_defaults(func=cmd_bias_lab)

    p = sub.add_parser("report", help="run a seeded campaign; write JSON lines and figures")
    p.add_argument("--rs1", type=Path, required=True)
    p.add_argument("--rs2", type=Path, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--trend-missing", type=int, default=4)
    p.add_argument("--trend-k", type=int, default=2)
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
