"""Command-line entry points: simulation, verification, grid tooling, serving."""

from __future__ import annotations

import json
import math
import os
import sys

import click

from .baselines import BREAKER_BASELINES, MAKER_BASELINES
from .board import Owner, PointSet, Rule
from .breaker import OneRoundDoubleBreaker, PerturbedPolygonBreaker
from .engine import GameConfig, GameTrace, run_match, verify_trace
from .geom import Point
from .maker import MAKER_STRATEGIES, round_bound
from .oracle import count_k_holes
from .rationals import to_q
from .strips import is_k_strip


def _parse_bias(text: str):
    try:
        left, right = text.split(":")
        return to_q(left), to_q(right)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError("bias must look like '1:2' or '1:3/2'")


def _parse_strategy(name: str, side: str, t: int):
    base, _, argstr = name.partition(":")
    kwargs = {}
    for item in filter(None, argstr.split(",")):
        key, _, val = item.partition("=")
        kwargs[key.strip()] = val.strip()
    if side == "maker":
        if base in MAKER_STRATEGIES:
            return MAKER_STRATEGIES[base](t=int(kwargs.get("t", t)))
        if base in MAKER_BASELINES:
            return MAKER_BASELINES[base]()
    else:
        if base == "perturbed-polygon":
            return PerturbedPolygonBreaker(lam=int(kwargs.get("lambda", 6)))
        if base == "one-round-double":
            return OneRoundDoubleBreaker()
        if base in BREAKER_BASELINES:
            return BREAKER_BASELINES[base]()
    raise click.UsageError("unknown %s strategy %r" % (side, base))


def _parse_seeds(text: str):
    if ".." in text:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    return [int(s) for s in text.split(",")]


def _trace_dir(explicit):
    return explicit or os.environ.get("HOLEGAMES_TRACE_DIR") or "."


@click.group()
def main():
    """Exact-arithmetic Maker-Breaker empty-polygon games."""


@main.command()
@click.option("--variant", type=click.Choice(["mono", "bichrom"]), default="mono")
@click.option("--k", type=int, default=3)
@click.option("--bias", default="1:1", help="speeds, e.g. 1:2 or 1:3/2")
@click.option("--maker", default="random")
@click.option("--breaker", default="random")
@click.option("--seeds", default="0..9")
@click.option("--t", type=int, default=1, help="parallel strips to build")
@click.option("--max-points", type=int, default=200)
@click.option("--theorem-mode", is_flag=True, help="disable win detection; run to Maker's declaration")
@click.option("--trace-dir", default=None)
def simulate(variant, k, bias, maker, breaker, seeds, t, max_points, theorem_mode, trace_dir):
    """Run matches over a seed range; write traces and a summary table."""
    ms, bs = _parse_bias(bias)
    rule = Rule.MONOCHROMATIC if variant == "mono" else Rule.BICHROMATIC
    outdir = _trace_dir(trace_dir)
    os.makedirs(outdir, exist_ok=True)
    failures = 0
    rows = []
    for seed in _parse_seeds(seeds):
        config = GameConfig(
            variant=rule,
            k=k,
            maker_speed=ms,
            breaker_speed=bs,
            max_points=max_points,
            seed=seed,
            detect_win=not theorem_mode,
        )
        mk = _parse_strategy(maker, "maker", t)
        bk = _parse_strategy(breaker, "breaker", t)
        trace = run_match(mk, bk, config, stop_when_maker_done=theorem_mode)
        path = os.path.join(outdir, "trace-%s-k%d-%04d.json" % (variant, k, seed))
        trace.dump(path)
        state = trace.final_state
        rounds = state.placed[Owner.MAKER]
        row = {"seed": seed, "status": trace.status, "rounds": rounds, "trace": path}
        if trace.annotations.get("error"):
            failures += 1
            row["error"] = trace.annotations["error"]
        if theorem_mode and getattr(mk, "finished", False) and hasattr(mk, "result"):
            bound = round_bound(k, t, bs / ms) if maker.startswith("strips") else None
            strips_ok = all(
                is_k_strip(list(s.points), mk.v, mk.board_at_finish)
                for s in mk.result.strips
            )
            row["strips"] = len(mk.result.strips)
            row["strips_ok"] = strips_ok
            if bound is not None:
                row["bound"] = str(bound)
                if mk.rounds_at_finish > math.ceil(bound):
                    failures += 1
                    row["error"] = "round bound exceeded"
            if not strips_ok:
                failures += 1
                row["error"] = "strip verification failed"
        rows.append(row)
        click.echo(json.dumps(row))
    click.echo("simulated %d games, %d failures" % (len(rows), failures))
    sys.exit(1 if failures else 0)


@main.command()
@click.argument("trace_file", type=click.Path(exists=True))
def verify(trace_file):
    """Replay a trace and re-verify statuses and digests."""
    trace = GameTrace.load(trace_file)
    ok, divergent = verify_trace(trace)
    if ok:
        click.echo("trace verifies")
        sys.exit(0)
    click.echo("divergence at turn %s" % divergent)
    sys.exit(1)


@main.command("count-holes")
@click.option("--k", type=int, required=True)
@click.option("--rule", type=click.Choice(["mono", "bichrom"]), default="mono")
@click.argument("points_file", type=click.Path(exists=True))
def count_holes(k, rule, points_file):
    """Exact k-hole count of a point-set file (JSON: [[num/den, num/den], ...]
    or labeled {"points": [...], "owners": [...]})."""
    with open(points_file) as f:
        data = json.load(f)
    board = PointSet()
    if isinstance(data, dict):
        for (x, y), owner in zip(data["points"], data["owners"]):
            board.add(Point(x, y), Owner(owner))
    else:
        for x, y in data:
            board.add(Point(x, y), Owner.MAKER)
    rl = Rule.MONOCHROMATIC if rule == "mono" else Rule.BICHROMATIC
    click.echo(str(count_k_holes(board, k, rl)))


@main.group()
def grid():
    """One-round grid construction tooling."""


@grid.command("build")
@click.option("--t", type=int, default=3)
@click.option("--d", type=int, default=3)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), required=True)
@click.option("--svg", type=click.Path(), default=None)
def grid_build(t, d, seed, out, svg):
    from .grid import GridConfig, build_grid_pointset, save_config

    cfg = GridConfig(t=t, d=d, seed=seed)
    g = build_grid_pointset(cfg)
    save_config(cfg, out)
    click.echo(
        "built %d points, %d lines, gamma=%s" % (len(g.bent), len(g.lines), cfg.gamma)
    )
    if svg:
        from .svgout import render_grid

        render_grid(g, svg)
        click.echo("wrote %s" % svg)


@grid.command("verify")
@click.argument("config_file", type=click.Path(exists=True))
def grid_verify(config_file):
    from .grid import build_grid_pointset, load_config, verify_no_colorful_triple

    cfg = load_config(config_file)
    g = build_grid_pointset(cfg)
    ok = verify_no_colorful_triple(g)
    click.echo("no-colorful-triple-intersection: %s" % ok)
    sys.exit(0 if ok else 1)


@grid.command("extract")
@click.argument("config_file", type=click.Path(exists=True))
@click.option("--k", type=int, required=True)
@click.option("--blockers", type=click.Path(exists=True), default=None)
def grid_extract(config_file, k, blockers):
    from .grid import ProofObligationReport, build_grid_pointset, extract_k_hole, load_config

    cfg = load_config(config_file)
    g = build_grid_pointset(cfg)
    B = []
    if blockers:
        with open(blockers) as f:
            B = [Point(x, y) for x, y in json.load(f)]
    out = extract_k_hole(g, B, k)
    if isinstance(out, ProofObligationReport):
        click.echo(json.dumps(out.__dict__, default=str))
        sys.exit(0)
    from .rationals import fmt_q

    click.echo(json.dumps([[fmt_q(p.x), fmt_q(p.y)] for p in out]))


@main.command()
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
def serve(port, host):
    """Start the interactive play service (HTTP + SSE)."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=host, port=port)


@main.command("render-svg")
@click.argument("trace_file", type=click.Path(exists=True))
@click.argument("out", type=click.Path())
def render_svg(trace_file, out):
    """Render a trace's final board to SVG (holes highlighted)."""
    from .svgout import render_trace

    trace = GameTrace.load(trace_file)
    render_trace(trace, out)
    click.echo("wrote %s" % out)


if __name__ == "__main__":
    main()
