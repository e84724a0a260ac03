"""Command line: strip-forge {pack,validate,gen,bench,render,mold}.

Output is key=value lines on stdout. Exit codes: 0 success, 1 bad input,
2 infeasible or beyond limits.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from ..baselines import Infeasible, ffdh, nfdh, steinberg, upper_bound_pack
from ..core import lower_bound, validate_packing
from ..solver.dp import CapExceeded
from ..solver.oracle import LimitExceeded, OracleLimits, exact_oracle
from ..solver.structured import Exhaustive, Heuristic, Hint, solve_structured
from . import io
from .bench import ratio_str
from .io import FormatError

log = logging.getLogger("strip_forge")

ALGOS = ("nfdh", "ffdh", "steinberg", "structured", "exact")
MODES = ("heuristic", "exhaustive", "hint")


class Unsolvable(Exception):
    """Infeasible input or a search beyond its limits (exit 2)."""


def _emit(**kv):
    for k, v in kv.items():
        print(f"{k}={v}")


def run_algo(name, instance, eps=Fraction(1), hint=None, mode="heuristic", rotations=False, height=None):
    """Packing produced by algorithm ``name``; raises Unsolvable."""
    if rotations and name != "exact":
        raise Unsolvable("--rotations is only supported by the exact algorithm")
    if name == "nfdh":
        return nfdh(instance)
    if name == "ffdh":
        return ffdh(instance)
    if name == "steinberg":
        H = height if height is not None else upper_bound_pack(instance)[1]
        res = steinberg(instance, H)
        if isinstance(res, Infeasible):
            raise Unsolvable(str(res))
        return res
    if name == "exact":
        try:
            return exact_oracle(instance, OracleLimits(), allow_rotation=rotations)[1]
        except LimitExceeded as e:
            raise Unsolvable(f"limits: {e}") from e
    if name == "structured":
        if hint is not None:
            m = Hint(hint)
        elif mode == "hint":
            raise Unsolvable("--mode hint needs --hint")
        else:
            m = Exhaustive() if mode == "exhaustive" else Heuristic()
        try:
            return solve_structured(instance, eps, m).packing
        except CapExceeded as e:
            raise Unsolvable(f"limits: {e}") from e
    raise ValueError(f"unknown algorithm {name!r}")


# ---- commands -------------------------------------------------------------------

def cmd_pack(a):
    inst = io.load(a.input, "strip-v1")
    hint = io.load(a.hint, "hint-v1") if a.hint else None
    pk = run_algo(a.algo, inst, a.epsilon, hint, a.mode, a.rotations, a.height)
    rep = validate_packing(inst, pk, allow_rotation=a.rotations)
    if not rep.ok:
        raise RuntimeError(f"internal error, invalid packing: {rep}")
    lb = lower_bound(inst)
    if a.out:
        io.write(a.out, io.packing_to_dict(pk))
    if a.svg:
        from .render import render_svg
        Path(a.svg).write_text(render_svg(inst, pk, a.scale))
    _emit(algo=a.algo, height=pk.height, lower_bound=lb, ratio=ratio_str(pk.height, lb))
    return 0


def cmd_validate(a):
    inst = io.load(a.instance, "strip-v1")
    pk = io.load(a.packing, "pack-v1")
    rep = validate_packing(inst, pk, allow_rotation=a.rotations)
    for v in rep:
        _emit(violation=v)
    _emit(ok=str(rep.ok).lower(), violations=len(rep))
    return 0 if rep.ok else 2


def cmd_gen(a):
    from .gen import generate

    files = generate(a.profile, a.seed, n=a.n, width=a.width, hmax=a.hmax, T=a.T)
    target = {"instance": a.out, "packing": a.packing_out, "hint": a.hint_out}
    for key, doc in files.items():
        path = target[key]
        if path:
            io.write(path, doc)
        elif key == "instance":
            sys.stdout.write(io.dumps(doc))
    if a.out:
        _emit(profile=a.profile, seed=a.seed, n=len(files["instance"]["items"]), width=files["instance"]["width"])
    return 0


def cmd_bench(a):
    from .bench import bench

    algos = [s.strip() for s in a.algos.split(",") if s.strip()]
    for x in algos:
        if x not in ALGOS:
            raise FormatError(f"unknown algorithm {x!r}")
    text = bench(a.dir, algos, timeout=a.timeout, eps=a.epsilon, timing=not a.no_timing)
    if a.csv:
        Path(a.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_render(a):
    from ..classify import find_delta_mu, Params
    from .render import render_svg

    inst = io.load(a.instance, "strip-v1")
    pk = io.load(a.packing, "pack-v1")
    params = None
    if a.classes:
        T = max(1, lower_bound(inst))
        eps = Fraction(a.epsilon)
        try:
            dm = find_delta_mu(inst, eps, T, f_exponent=2)
            params = Params(eps, dm.delta, dm.mu, T, f_exponent=2)
        except Exception as e:  # coloring is cosmetic
            log.warning("no class colors: %s", e)
    svg = render_svg(inst, pk, a.scale, params)
    if a.out:
        Path(a.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def cmd_mold(a):
    from ..solver.moldable import moldable_estimate, moldable_oracle

    m, jobs = io.load(a.input, "mold-v1")
    est = moldable_estimate(jobs, m)
    _emit(machines=m, jobs=len(jobs), tau=est.tau, upper=2 * est.tau)
    if a.exact:
        try:
            opt = moldable_oracle(jobs, m)
        except LimitExceeded as e:
            raise Unsolvable(f"limits: {e}") from e
        _emit(opt=opt[0] if isinstance(opt, tuple) else opt)
    return 0


# ---- parser -------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="strip-forge", description="Strip packing tools.")
    ap.add_argument("--verbose", "-v", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("pack", help="pack an instance")
    p.add_argument("input")
    p.add_argument("--algo", choices=ALGOS, default="nfdh")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    p.add_argument("--hint")
    p.add_argument("--mode", choices=MODES, default="heuristic")
    p.add_argument("--rotations", action="store_true")
    p.add_argument("--height", type=int, help="target box height for steinberg")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--scale", type=int, default=10)
    p.set_defaults(fn=cmd_pack)

    p = sub.add_parser("validate", help="check a packing against an instance")
    p.add_argument("instance")
    p.add_argument("packing")
    p.add_argument("--rotations", action="store_true")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--profile", choices=("uniform", "tall-heavy", "grid", "structured"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--width", type=int)
    p.add_argument("--hmax", type=int)
    p.add_argument("--T", type=int, default=64)
    p.add_argument("--out")
    p.add_argument("--packing-out")
    p.add_argument("--hint-out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="run algorithms over a directory of instances")
    p.add_argument("--dir", required=True)
    p.add_argument("--algos", default="nfdh,ffdh")
    p.add_argument("--timeout", type=float, default=60.0, help="seconds per (instance, algo)")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    p.add_argument("--csv")
    p.add_argument("--no-timing", action="store_true", help="leave the millis column empty")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("render", help="draw a packing as SVG")
    p.add_argument("instance")
    p.add_argument("packing")
    p.add_argument("--scale", type=int, default=10)
    p.add_argument("--classes", action="store_true", help="color items by class")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1, 4))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("mold", help="estimate a moldable schedule")
    p.add_argument("input")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(fn=cmd_mold)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    logging.basicConfig(level=logging.DEBUG if a.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    try:
        return a.fn(a)
    except (FormatError, FileNotFoundError, ValueError) as e:
        _emit(error=str(e).replace("\n", " "))
        return 1
    except Unsolvable as e:
        _emit(error=str(e).replace("\n", " "))
        return 2


if __name__ == "__main__":
    sys.exit(main())
