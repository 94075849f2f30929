#!/usr/bin/env python3
"""
Command Dispatch
Maps 'body info', 'points', 'ft', 'disc', 'verify ...' and 'experiment ...'
onto the engines; JSON/CSV goes to stdout and, with --out, to files next to
a run manifest
"""

import argparse
import asyncio
import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from config import Config
from src.cli.cache import load_spectrum
from src.cli.config_format import (body_snippet, body_spec_from, body_spec_from_snippet, generator_spec_from,
                                   load_experiment_config, parse_inline)
from src.cli.manifest import RunManifest
from src.cli.output import to_csv, to_json
from src.discrepancy import (DilationAverager, LambdaRange, TruncationPolicy, cassels_check, mc_discrepancy,
                             parseval_discrepancy)
from src.errors import ConfigError, DomainError
from src.experiments import ExperimentRunner, chord_asymptotics, lemma_g_scan
from src.fourier import (check_annulus, check_bilateral, check_chord_majorant, check_podkorytov,
                         check_ray_lower, check_tail, normalize_profile, ray_spectrum, semicircle, tent)
from src.geometry import Direction, holder_estimate, make_body, min_chord_scan, two_chord_scan
from src.pointsets import PointSet, draw_seed, generate, grid, read_points, write_points

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so dispatch owns the exit code"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class RunContext:
    """Where a command writes its files, plus the manifest that lists them"""

    def __init__(self, settings: Config, argv: List[str], out: Optional[str]):
        self.settings = settings
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S-%f")
        self.out_dir = Path(out) if out else settings.OUTPUT_DIR / f"{'-'.join(argv[:2])}-{stamp}"
        self.manifest = RunManifest(version=settings.VERSION, command=list(argv))

    def store(self, name: str, text: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_text(text, encoding="utf-8")
        self.manifest.record(path)
        return path

    def emit(self, name: str, text: str) -> None:
        """Print to stdout and keep a copy in the run directory"""
        sys.stdout.write(text)
        self.store(name, text)

    def close(self) -> None:
        self.manifest.write(self.out_dir)


def _seed(args, ctx: RunContext) -> int:
    """--seed or a freshly drawn one, printed so the run can be replayed"""
    seed = args.seed if getattr(args, "seed", None) is not None else draw_seed()
    if getattr(args, "seed", None) is None:
        print(f"seed: {seed}", file=sys.stderr)
    ctx.manifest.seed = seed
    return seed


def _points(text: str, seed: Optional[int]) -> PointSet:
    """Inline generator spec or a point file"""
    if "=" in text:
        spec = generator_spec_from(text)
        if spec.randomized and spec.seed is None:
            spec = spec.with_seed(seed)
        return generate(spec)
    path = Path(text)
    if not path.exists():
        raise ConfigError(f"point file {text} does not exist")
    return read_points(path)


def _body(text: str, settings: Config):
    """Inline 'kind=...,...' spec or a 'body { ... }' block"""
    spec = body_spec_from_snippet(text) if "{" in text else body_spec_from(text)
    return make_body(spec, max_circumradius=settings.MAX_CIRCUMRADIUS)


def _profile(args, settings: Config):
    if args.body:
        return normalize_profile(_body(args.body, settings), Direction(args.theta), nodes=settings.PROFILE_NODES)
    return {"tent": tent, "semicircle": semicircle}[args.profile]()


def _floats(text: Optional[str]) -> Optional[np.ndarray]:
    if text is None:
        return None
    return np.array([float(v) for v in text.replace(";", ",").split(",") if v.strip()])


# Handlers return the report; a report with "pass": false gives exit code 1

def cmd_body_info(args, ctx: RunContext) -> Dict[str, Any]:
    body = _body(args.spec, ctx.settings)
    row = {
        "label": body.spec.label(),
        "kind": body.spec.kind,
        "area": body.area,
        "circumradius": body.circumradius,
        "min_width": body.min_width,
        "scale": body.scale,
        "is_polygon": body.is_polygon,
        "has_flats": body.has_flats,
        "has_corners": body.has_corners,
        "digest": body.spec.digest(),
    }
    for k in range(8):
        row[f"A_{k}"], row[f"B_{k}"] = body.support_interval(Direction(k * np.pi / 4.0))
    ctx.manifest.config = {"spec": body.spec.model_dump(mode="json")}
    ctx.emit("body.csv", to_csv([row], list(row)))
    ctx.store("body.cfg", body_snippet(body.spec) + "\n")
    return row


def cmd_points(args, ctx: RunContext) -> Dict[str, Any]:
    if args.read:
        points = read_points(args.read)
    else:
        spec = generator_spec_from(args.gen)
        if spec.randomized:
            spec = spec.with_seed(spec.seed if spec.seed is not None else _seed(args, ctx))
        points = generate(spec)
        ctx.manifest.config = {"generator": spec.model_dump(mode="json")}
    ctx.out_dir.mkdir(parents=True, exist_ok=True)
    path = write_points(ctx.out_dir / "points.csv", points)
    ctx.manifest.record(path)
    sys.stdout.write(path.read_text(encoding="utf-8"))
    return points.describe()


def cmd_ft(args, ctx: RunContext) -> Dict[str, Any]:
    body = _body(args.spec, ctx.settings)
    direction = Direction(args.theta)
    oversample = args.oversample or ctx.settings.SPECTRUM_OVERSAMPLE
    start = time.perf_counter()
    if args.cache:
        spectrum = load_spectrum(body, direction, args.rho_max, ctx.settings.CACHE_DIR, oversample)
    else:
        spectrum = ray_spectrum(body, direction, args.rho_max, oversample=oversample)
    ctx.manifest.timings["spectrum"] = time.perf_counter() - start
    rows = [{"rho": r, "re": v.real, "im": v.imag, "abs": abs(v), "method": spectrum.method}
            for r, v in zip(spectrum.rho_values, spectrum.ft_values)]
    ctx.manifest.config = {"spec": body.spec.model_dump(mode="json"), "theta": direction.theta,
                           "rho_max": args.rho_max, "oversample": oversample}
    ctx.emit("ft.csv", to_csv(rows, ["rho", "re", "im", "abs", "method"]))
    return {"rows": len(rows), "method": spectrum.method}


def cmd_disc(args, ctx: RunContext) -> Dict[str, Any]:
    body = _body(args.body, ctx.settings)
    lam = LambdaRange.parse(args.lam)
    seed = _seed(args, ctx)
    points = _points(args.points, seed)
    if args.engine == "mc":
        samples = args.samples or ctx.settings.MC_SAMPLES
        estimate = mc_discrepancy(body, points, lam, samples=samples, seed=seed, rotate=args.rotate,
                                  block_size=ctx.settings.MC_BLOCK_SIZE, threads=ctx.settings.THREADS)
    else:
        policy = TruncationPolicy(**parse_inline(args.policy)) if args.policy else TruncationPolicy(
            initial_radius=ctx.settings.POLICY_INITIAL_RADIUS, growth=ctx.settings.POLICY_GROWTH,
            eps_rel=ctx.settings.POLICY_EPS_REL, window=ctx.settings.POLICY_WINDOW,
            max_radius=ctx.settings.POLICY_MAX_RADIUS)
        averager = DilationAverager(body, lam, oversample=ctx.settings.PARSEVAL_OVERSAMPLE,
                                    threads=ctx.settings.THREADS)
        estimate = parseval_discrepancy(body, points, lam, policy, averager=averager,
                                        progress=ctx.settings.SHOW_PROGRESS)
    report = estimate.to_dict()
    report["config"].update(points=points.describe())
    ctx.manifest.config = report["config"]
    ctx.emit("disc.json", to_json(report))
    return report


def cmd_verify(args, ctx: RunContext) -> Dict[str, Any]:
    check = args.check
    settings = ctx.settings
    ceiling = args.ceiling if args.ceiling is not None else settings.TEST_CEILING
    window = args.ceiling if args.ceiling is not None else settings.CHORD_RATIO_WINDOW
    if check == "podkorytov":
        report = check_podkorytov(_profile(args, settings), _floats(args.grid), slack=settings.PODKORYTOV_SLACK)
    elif check == "bilateral":
        report = check_bilateral(_profile(args, settings), _floats(args.grid), ceiling=ceiling)
    elif check == "tail":
        report = check_tail(_profile(args, settings), _floats(args.grid), ceiling=ceiling,
                            omega_points=settings.OMEGA2_GRID_POINTS)
    elif check == "annulus":
        report = check_annulus(_profile(args, settings), _floats(args.grid), ceiling=ceiling)
    elif check == "raylower":
        body = _body(args.body, ctx.settings)
        report = check_ray_lower(body, Direction(args.theta), args.sigma, _floats(args.grid))
    elif check == "majorant":
        body = _body(args.body, ctx.settings)
        report = check_chord_majorant(body, Direction(args.theta), _floats(args.grid),
                                      slack=settings.PODKORYTOV_SLACK)
    elif check == "chords":
        report = chord_asymptotics(args.sigma, delta_grid=_floats(args.grid), ceiling=window)
    elif check == "twochord":
        report = two_chord_scan(_body(args.body, ctx.settings), args.sigma, delta_grid=_floats(args.grid))
    elif check == "minchord":
        report = min_chord_scan(_body(args.body, ctx.settings), delta_grid=_floats(args.grid))
    elif check == "equivalence":
        body = _body(args.body, ctx.settings)
        report = holder_estimate(body, _floats(args.grid))
        target = args.alpha if args.alpha is not None else (1.0 if body.spec.kind == "disk" else
                                                            1.0 / body.spec.sigma - 1.0)
        report.update(target=target, tolerance=args.tolerance,
                      **{"pass": bool(abs(report["alpha_hat"] - target) <= args.tolerance)})
    elif check == "lemma-g":
        report = lemma_g_scan(args.sigma, _floats(args.grid), ceiling=window)
    else:
        report = _cassels(args, ctx)
    ctx.manifest.config = {"check": check, "argv": ctx.manifest.command}
    ctx.emit(f"verify_{check}.json", to_json(report))
    return report


def _cassels(args, ctx: RunContext) -> Dict[str, Any]:
    """One point set, or --runs random sets with N spread over [n, n_max]"""
    r_u = args.r_u if args.r_u is not None else ctx.settings.CASSELS_RU
    c3 = args.c3 if args.c3 is not None else ctx.settings.CASSELS_C3
    if args.grid_shape:
        K, L = (int(v) for v in args.grid_shape.split(","))
        points = [grid(K, L)]
    else:
        seed = _seed(args, ctx)
        rng = np.random.Generator(np.random.Philox(seed))
        sizes = [args.n] if args.runs == 1 else rng.integers(args.n, args.n_max + 1, size=args.runs)
        points = [generate(generator_spec_from(f"kind=uniform,n={int(n)}").with_seed(int(rng.integers(2 ** 63))))
                  for n in sizes]
    results = [cassels_check(p, c3 * np.sqrt(p.N), r_u) for p in points]
    if len(results) == 1:
        return results[0]
    failures = sum(1 for r in results if not r["pass"])
    return {"check": "cassels", "runs": len(results), "failures": failures, "results": results,
            "pass": failures == 0}


def cmd_experiment(args, ctx: RunContext) -> Dict[str, Any]:
    config = load_experiment_config(args.config, defaults={"tolerance": ctx.settings.SLOPE_TOLERANCE,
                                                           "slope_floor": ctx.settings.ENVELOPE_SLOPE_FLOOR})
    if config.kind != args.kind:
        raise ConfigError(f"config {args.config} describes a {config.kind} sweep, not {args.kind}")
    runner = ExperimentRunner(config, threads=ctx.settings.THREADS, progress=ctx.settings.SHOW_PROGRESS,
                              oversample=ctx.settings.PARSEVAL_OVERSAMPLE)
    if config.seed is None:
        print(f"seed: {runner.config.seed}", file=sys.stderr)
    if not asyncio.run(runner.initialize()):
        raise ConfigError(f"experiment {config.name} could not be initialized")
    report = asyncio.run(runner.run())
    ctx.manifest.config = runner.config.model_dump(mode="json")
    ctx.manifest.seed = runner.config.seed
    for path in runner.write_outputs(report, ctx.out_dir):
        ctx.manifest.record(path)
    sys.stdout.write(to_json({k: v for k, v in report.items() if k != "rows"}))
    return report


def build_parser() -> _Parser:
    parser = _Parser(prog="disclab", description="L2 discrepancy laboratory for planar convex bodies")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--out", help="directory for outputs and manifest.json")
        return p

    body = sub.add_parser("body")
    body_sub = body.add_subparsers(dest="action", parser_class=_Parser)
    info = common(body_sub.add_parser("info"))
    info.add_argument("--spec", required=True)
    info.set_defaults(handler=cmd_body_info)

    points = common(sub.add_parser("points"))
    source = points.add_mutually_exclusive_group(required=True)
    source.add_argument("--gen", help="inline generator spec, e.g. kind=uniform,n=100")
    source.add_argument("--read", help="point file to re-emit")
    points.add_argument("--seed", type=int)
    points.set_defaults(handler=cmd_points)

    ft = common(sub.add_parser("ft"))
    ft.add_argument("--spec", required=True)
    ft.add_argument("--theta", type=float, default=0.0)
    ft.add_argument("--rho-max", type=float, default=64.0)
    ft.add_argument("--oversample", type=int)
    ft.add_argument("--cache", action="store_true")
    ft.set_defaults(handler=cmd_ft)

    disc = common(sub.add_parser("disc"))
    disc.add_argument("--body", required=True)
    disc.add_argument("--points", required=True, help="inline generator spec or point file")
    disc.add_argument("--lambda", dest="lam", default="0:1")
    disc.add_argument("--engine", choices=["mc", "parseval"], default="parseval")
    disc.add_argument("--samples", type=int)
    disc.add_argument("--seed", type=int)
    disc.add_argument("--policy", help="inline truncation policy, e.g. max_radius=64,eps_rel=1e-4")
    disc.add_argument("--rotate", action="store_true", help="also average over rotations (mc only)")
    disc.set_defaults(handler=cmd_disc)

    verify = common(sub.add_parser("verify"))
    verify.add_argument("check", choices=["podkorytov", "bilateral", "tail", "annulus", "raylower", "majorant",
                                          "chords", "twochord", "minchord", "cassels", "equivalence", "lemma-g"])
    verify.add_argument("--profile", choices=["tent", "semicircle"], default="tent")
    verify.add_argument("--body", help="inline body spec")
    verify.add_argument("--theta", type=float, default=np.pi / 2)
    verify.add_argument("--sigma", type=float, default=0.75)
    verify.add_argument("--alpha", type=float)
    verify.add_argument("--tolerance", type=float, default=0.1)
    verify.add_argument("--grid", help="comma-separated grid overriding the default")
    verify.add_argument("--ceiling", type=float)
    verify.add_argument("--n", type=int, default=100)
    verify.add_argument("--n-max", type=int, default=1000)
    verify.add_argument("--runs", type=int, default=1)
    verify.add_argument("--grid-shape", help="K,L for a grid point set")
    verify.add_argument("--c3", type=float)
    verify.add_argument("--r-u", type=float)
    verify.add_argument("--seed", type=int)
    verify.set_defaults(handler=cmd_verify)

    experiment = common(sub.add_parser("experiment"))
    experiment.add_argument("kind", choices=["scaling", "envelope", "budget"])
    experiment.add_argument("--config", required=True)
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def _needs_body(args) -> Optional[str]:
    if getattr(args, "command", None) == "verify":
        if args.check in ("raylower", "majorant", "twochord", "minchord", "equivalence") and not args.body:
            return f"verify {args.check} needs --body"
        if args.check == "equivalence" and args.alpha is None and args.body and "disk" not in args.body \
                and "sigma" not in args.body:
            return "verify equivalence needs --alpha for bodies without sigma"
    return None


def dispatch(argv: List[str], settings: Optional[Config] = None) -> int:
    """Run one command; 0 success, 1 a report check failed, 2 usage or configuration error"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler: Optional[Callable] = getattr(args, "handler", None)
        if handler is None:
            raise UsageError(parser.format_usage().strip())
        problem = _needs_body(args)
        if problem:
            raise UsageError(problem)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr, end="")
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    settings = settings or Config()
    ctx = RunContext(settings, argv, args.out)
    try:
        report = handler(args, ctx)
    except (ConfigError, ValidationError, DomainError) as e:
        logger.error(f"{' '.join(argv[:2])}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        ctx.close()

    passed = report.get("pass", True) if isinstance(report, dict) else True
    return EXIT_OK if passed else EXIT_FAILED
