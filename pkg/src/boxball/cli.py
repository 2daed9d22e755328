"""Command-line front end.

Subcommands: evolve, solitons, decompose, reconstruct, sample, speeds,
track, render, selftest, run.  All inputs and outputs are the plain-text
formats of the library (configuration lines, the "slots v1" components
format, TSV tables, PBM/PGM rasters).  Exit codes: 0 success, 1 consistency
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import config as cfg_mod
from .config import (
    BoxBallError,
    apply_T,
    close_config,
    evolve,
    format_config,
    parse_config,
)
from .measures import (
    ComponentLaw,
    estimate_densities,
    sample_append_mix,
    sample_bernoulli,
    sample_hat_mu,
)
from .raster import OverlaySegment, build_raster, render
from .rebuild import reconstruct_config
from .slots import SlotComponents, components
from .solitons import identify_batch, identify_stream, pair_one_step
from .speeds import solve_explicit, track_trajectories


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_bytes(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(path).write_bytes(data)


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip() != ""]


def _sample_from_args(args) -> np.ndarray:
    seed = args.seed
    if args.sampler == "iid":
        if args.lam is None:
            raise BoxBallError("sampler=iid needs --lambda")
        return sample_bernoulli(args.lam, args.n, seed)
    if args.sampler == "append":
        if args.rho is None:
            raise BoxBallError("sampler=append needs --rho")
        return sample_append_mix(args.rho, args.n, args.mix_steps, seed)
    if args.sampler == "components":
        if args.alpha is None:
            raise BoxBallError("sampler=components needs --alpha")
        law = ComponentLaw.bernoulli(args.alpha)
        n_exc = max(args.n // 2, 1)
        return sample_hat_mu(law, n_exc, seed)
    raise BoxBallError(f"unknown sampler {args.sampler!r}")


def _speed_table_for(bits, rho=None, alpha=None, K=None):
    if rho is not None:
        return solve_explicit(rho=rho, K=K)
    if alpha is not None:
        return solve_explicit(alpha=alpha, K=K)
    est = estimate_densities(close_config(bits))
    Kmax = K if K is not None else max(est.max_size, 1)
    return solve_explicit(rho=est.rho_vector(Kmax), K=Kmax)


def cmd_evolve(args) -> int:
    bits = parse_config(_read_text(args.infile))
    out = evolve(bits, args.steps)
    _write_text(args.out, format_config(out) + "\n")
    return 0


def cmd_solitons(args) -> int:
    bits = parse_config(_read_text(args.infile))
    sols = identify_stream(bits) if args.algo == "stream" else identify_batch(bits)
    report = sols.report()
    _write_text(args.out, report + "\n" if report else "")
    return 0


def cmd_decompose(args) -> int:
    bits = close_config(parse_config(_read_text(args.infile)))
    anchor = 0
    if not cfg_mod.is_record(bits, 0):
        rec = cfg_mod.records(bits).positions
        if not len(rec):
            raise BoxBallError("no record in the window; cannot anchor")
        anchor = int(rec[0])
        bits = bits[anchor:]
    comp = components(bits, 0)
    _write_text(args.out, comp.to_text())
    return 0


def cmd_reconstruct(args) -> int:
    comp = SlotComponents.from_text(_read_text(args.infile))
    bits, _origin = reconstruct_config(comp, n_right=args.n)
    _write_text(args.out, format_config(bits) + "\n")
    return 0


def cmd_sample(args) -> int:
    bits = _sample_from_args(args)
    _write_text(args.out, format_config(bits) + "\n")
    return 0


def cmd_speeds(args) -> int:
    if (args.rho is None) == (args.alpha is None):
        raise BoxBallError("provide exactly one of --rho or --alpha")
    table = solve_explicit(rho=args.rho, alpha=args.alpha, K=args.K)
    _write_text(args.out, table.to_tsv())
    return 0


def cmd_track(args) -> int:
    bits = parse_config(_read_text(args.infile))
    traj = track_trajectories(bits, args.steps)
    _write_text(args.out, traj.to_tsv())
    return 0


def cmd_render(args) -> int:
    bits = parse_config(_read_text(args.infile))
    overlays = []
    if args.format == "pgm" and args.overlay_rho is not None:
        table = solve_explicit(rho=args.overlay_rho)
        traj_tags = [
            s for s in identify_stream(close_config(bits)).all() if s.size <= table.K
        ]
        seen: set[int] = set()
        for s in traj_tags:
            if s.size not in seen:
                seen.add(s.size)
                overlays.append(OverlaySegment(x0=s.leftmost, speed=table.v[s.size - 1]))
    raster = build_raster(bits, args.steps, overlays=overlays)
    _write_bytes(args.out, render(raster, fmt=args.format, stretch=args.stretch))
    return 0


DEFAULT_PARAMS = {
    "sampler": "iid",
    "seed": "0",
    "lambda": "",
    "rho": "",
    "alpha": "",
    "K": "",
    "n": "2000",
    "mixSteps": "50",
    "steps": "140",
    "format": "pbm",
    "stretch": "1",
}


def parse_params(text: str) -> dict[str, str]:
    params = dict(DEFAULT_PARAMS)
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise BoxBallError(f"params line {lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in params:
            raise BoxBallError(f"params line {lineno}: unknown key {key!r}")
        params[key] = value.strip()
    return params


def run(params: dict[str, str], out_dir: Path) -> None:
    """Run a full pipeline into a directory, reproducibly.

    Writes params.txt, init.cfg, final.cfg, speeds.tsv, trajectories.tsv and
    raster.pbm / raster.pgm; identical parameters give identical bytes.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = int(params["seed"])
    n = int(params["n"])
    steps = int(params["steps"])
    mix = int(params["mixSteps"])
    rho = _float_list(params["rho"]) if params["rho"] else None
    alpha = _float_list(params["alpha"]) if params["alpha"] else None
    K = int(params["K"]) if params["K"] else None

    sampler = params["sampler"]
    if sampler == "iid":
        lam = float(params["lambda"]) if params["lambda"] else 0.25
        params["lambda"] = repr(lam)
        init = sample_bernoulli(lam, n, seed)
    elif sampler == "append":
        if rho is None:
            raise BoxBallError("sampler=append needs rho=")
        init = sample_append_mix(rho, n, mix, seed)
    elif sampler == "components":
        if alpha is None:
            raise BoxBallError("sampler=components needs alpha=")
        init = sample_hat_mu(ComponentLaw.bernoulli(alpha), max(n // 2, 1), seed)
    else:
        raise BoxBallError(f"unknown sampler {sampler!r}")

    table = _speed_table_for(init, rho=rho, alpha=alpha, K=K)
    final = evolve(init, steps)
    traj = track_trajectories(init, steps)

    overlays = []
    seen: set[int] = set()
    for s in traj.solitons:
        if s.size not in seen and s.size <= table.K:
            seen.add(s.size)
            overlays.append(OverlaySegment(x0=float(s.x[0]), speed=float(table.v[s.size - 1])))
    raster = build_raster(init, steps, overlays=overlays)

    (out_dir / "params.txt").write_text(
        "".join(f"{k}={params[k]}\n" for k in sorted(params))
    )
    (out_dir / "init.cfg").write_text(format_config(init) + "\n")
    (out_dir / "final.cfg").write_text(format_config(final) + "\n")
    (out_dir / "speeds.tsv").write_text(table.to_tsv())
    (out_dir / "trajectories.tsv").write_text(traj.to_tsv())
    fmt = params["format"]
    (out_dir / f"raster.{fmt}").write_bytes(
        render(raster, fmt=fmt, stretch=int(params["stretch"]))
    )


def cmd_run(args) -> int:
    if args.params:
        params = parse_params(_read_text(args.params))
    else:
        params = parse_params("")
    for item in args.set or []:
        if "=" not in item:
            raise BoxBallError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        if key not in DEFAULT_PARAMS:
            raise BoxBallError(f"unknown parameter {key!r}")
        params[key] = value
    run(params, Path(args.out))
    return 0


def cmd_selftest(args) -> int:
    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        failures += 0 if ok else 1

    eta = parse_config("0010110000110100000")
    check("carrier example", format_config(apply_T(eta)) == "0001001100001011000")
    check(
        "carrier equals reflection",
        all(
            np.array_equal(
                cfg_mod.apply_T_carrier(b), apply_T(b)
            )
            for b in (
                sample_bernoulli(0.3, 500, s) for s in range(20)
            )
        ),
    )
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(200):
        bits = (rng.random(60) < 0.35).astype(np.int8)
        ok = ok and identify_stream(bits) == identify_batch(bits)
    check("stream equals batch", ok)
    ok = True
    for s in range(50):
        bits = close_config(sample_bernoulli(0.3, 200, 1000 + s))
        try:
            pair_one_step(identify_stream(bits), apply_T(bits))
        except BoxBallError:
            ok = False
    check("one-step pairing total", ok)
    ok = True
    for s in range(50):
        bits = np.concatenate([[0], sample_bernoulli(0.3, 120, 2000 + s)]).astype(np.int8)
        bits = close_config(bits)
        comp = components(bits, 0)
        n_exc = len(cfg_mod.excursions(bits)) - 1
        rebuilt, _ = reconstruct_config(comp, n_right=max(n_exc, 1))
        a, b = np.trim_zeros(bits, "b"), np.trim_zeros(rebuilt, "b")
        ok = ok and np.array_equal(a, b)
    check("decompose/rebuild round trip", ok)
    table = solve_explicit(rho=[0, 0, 0.1])
    check(
        "speed fixture",
        bool(
            np.allclose(table.v, [5 / 7, 5 / 3, 3.0])
            and abs(table.v0 - 1.8) < 1e-12
            and abs(table.h0 - 1.125) < 1e-12
        ),
    )
    print(f"{'OK' if not failures else 'FAILED'}: {6 - failures}/6 checks passed")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxball", description="Box-ball system toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, infile=True):
        if infile:
            p.add_argument("--in", dest="infile", default=None, help="input file (default stdin)")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("evolve", help="apply the update repeatedly to a configuration")
    p.add_argument("--steps", type=int, default=1)
    add_io(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("solitons", help="emit the soliton report")
    p.add_argument("--algo", choices=["stream", "batch"], default="stream")
    add_io(p)
    p.set_defaults(func=cmd_solitons)

    p = sub.add_parser("decompose", help="emit components in the slots v1 format")
    add_io(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="rebuild a configuration from slots v1 input")
    p.add_argument("--n", type=int, default=None, help="number of excursions (default: consume all entries)")
    add_io(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("sample", help="write a sampled configuration")
    p.add_argument("--sampler", choices=["iid", "components", "append"], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--rho", type=_float_list, default=None)
    p.add_argument("--alpha", type=_float_list, default=None)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--mix-steps", dest="mix_steps", type=int, default=50)
    add_io(p, infile=False)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("speeds", help="solve the speed systems and emit the table")
    p.add_argument("--rho", type=_float_list, default=None)
    p.add_argument("--alpha", type=_float_list, default=None)
    p.add_argument("--K", type=int, default=None)
    add_io(p, infile=False)
    p.set_defaults(func=cmd_speeds)

    p = sub.add_parser("track", help="track solitons and emit trajectories TSV")
    p.add_argument("--steps", type=int, default=20)
    add_io(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("render", help="render a space-time raster")
    p.add_argument("--steps", type=int, default=140)
    p.add_argument("--format", choices=["pbm", "pgm"], default="pbm")
    p.add_argument("--stretch", type=int, default=1)
    p.add_argument("--overlay-rho", dest="overlay_rho", type=_float_list, default=None)
    add_io(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("selftest", help="run the condensed invariant suite")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("run", help="run a full pipeline into a directory")
    p.add_argument("--params", default=None, help="key=value parameter file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--out", required=True, help="run directory")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoxBallError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
