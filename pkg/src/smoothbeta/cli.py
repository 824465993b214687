"""Command-line interface.

Subcommands: ``infer-static``, ``infer-dynamic``, ``classify`` (single-point
inference on a dataset file), ``exp-static``, ``exp-dynamic``, ``exp-rehab``,
``exp-classify`` (experiment sweeps writing CSV), ``bench-runtime``.

Every output CSV gets a ``.meta.json`` sidecar with the full configuration,
and identical (command, config, seed) produce byte-identical outputs. Wall
clock timings are therefore opt-in (``--timing``) for the experiment
commands; ``bench-runtime`` always measures, it has no other payload.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure
(``--self-check`` disagreement with the quadrature oracle).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .betamix import BetaParams
from .classification import NO_PRIOR, classify, informative_prior
from .datafiles import (
    DataFormatError,
    load_dynamic_dataset,
    load_static_dataset,
    write_bench_csv,
    write_curve_csv,
    write_excess_csv,
    write_reconstruction_csv,
    write_sidecar,
)
from .dynamic import exact_posterior_moments, posterior_csbp
from .harness import (
    DEFAULT_SEED,
    ErrorCurve,
    FatigueChainConfig,
    bench_runtime,
    fit_loglog_slope,
    query_grid,
    rehab_simulation,
    run_classification,
    run_convergence,
    sample_dynamic,
    sample_static,
    static_moments_grid,
    dynamic_moments_grid,
    synth_1d,
    synth_2d,
)
from .neighbors import delta_schedule
from .static import posterior_static

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

SELF_CHECK_ATOL = 1e-8


class _UsageError(Exception):
    pass


class _NumericalError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep usage failures as exit code 1
        raise _UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise _UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _parse_prior(text: str) -> BetaParams:
    vals = _floats(text)
    if len(vals) != 2:
        raise _UsageError(f"prior must be two numbers 'alpha,beta', got {text!r}")
    try:
        return BetaParams(vals[0], vals[1])
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _out_path(args, name: str) -> str:
    out_dir = args.out_dir or os.environ.get("SMOOTHBETA_OUT_DIR") or "."
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _sidecar_payload(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return {"command": args.command, "version": __version__, "config": cfg}


def _resolve_delta(args, t: int, dim: int) -> float:
    if args.delta is not None:
        if not 0.0 < args.delta <= 1.0:
            raise _UsageError(f"--delta must lie in (0, 1], got {args.delta}")
        return args.delta
    return delta_schedule(max(t, 1), dim, args.lipschitz)


def _target(dim: int):
    if dim == 1:
        return synth_1d()
    if dim == 2:
        return synth_2d()
    raise _UsageError(f"--dim must be 1 or 2, got {dim}")


def _cmd_infer_static(args) -> int:
    data = load_static_dataset(args.data)
    prior = _parse_prior(args.prior)
    post = posterior_static(data, _floats(args.query), _resolve_delta(args, len(data), data.dim), prior)
    print(f"alpha={post.alpha!r} beta={post.beta!r} mean={post.mean!r}")
    return EXIT_OK


def _cmd_infer_dynamic(args) -> int:
    data = load_dynamic_dataset(args.data)
    prior = _parse_prior(args.prior)
    q = _floats(args.query)
    delta = _resolve_delta(args, len(data), data.dim)
    mix = posterior_csbp(data, q, delta, prior)
    print(f"mean={mix.mean!r} variance={mix.variance!r} components={len(mix)}")
    if args.self_check:
        ids = data.index.query(q, delta)
        if ids.size:
            a_bar = float(np.mean(data.A[ids]))
            b_bar = float(np.mean(data.B[ids]))
            m1, m2 = exact_posterior_moments(data.s[ids], a_bar, b_bar, prior)
        else:
            m1, m2 = prior.mean, prior.moment2
        if abs(mix.mean - m1) > SELF_CHECK_ATOL or abs(mix.moment2 - m2) > SELF_CHECK_ATOL:
            raise _NumericalError(
                f"self-check failed: mixture moments ({mix.mean!r}, {mix.moment2!r}) "
                f"vs quadrature ({m1!r}, {m2!r})"
            )
        print(f"self-check ok: quadrature agrees within {SELF_CHECK_ATOL}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    data = load_static_dataset(args.data)
    if args.no_prior:
        prior = NO_PRIOR
    elif args.prior_mean is not None or args.prior_var is not None:
        if args.prior_mean is None or args.prior_var is None:
            raise _UsageError("--prior-mean and --prior-var must be given together")
        try:
            prior = informative_prior(args.prior_mean, args.prior_var)
        except ValueError as exc:
            raise _UsageError(str(exc)) from exc
    else:
        prior = _parse_prior(args.prior)
    post = posterior_static(data, _floats(args.query), _resolve_delta(args, len(data), data.dim), prior)
    print(f"label={classify(post)} mean={post.mean!r}")
    return EXIT_OK


def _run_sweep(args, setting: str) -> int:
    f = _target(args.dim)
    t_grid = [int(v) for v in _floats(args.t_grid)]
    kwargs = dict(
        setting=setting,
        reps=args.reps,
        query_grid_size=args.query_grid,
        lipschitz=args.lipschitz,
        seed=args.seed,
        measure_runtime=args.timing,
    )
    if args.delta is not None:
        kwargs.update(delta_mode="fixed", fixed_delta=args.delta)
    if setting == "dynamic":
        kwargs.update(b_sampler=args.b_const, noise_sd=args.noise_sd)
    curve = run_convergence(f, t_grid, **kwargs)
    out = _out_path(args, args.out)
    write_curve_csv(out, curve)
    write_sidecar(out, _sidecar_payload(args))
    print(f"wrote {out}")
    if len(t_grid) >= 3:
        print(f"log-log slope: {fit_loglog_slope(curve)!r}")

    if args.reconstruct:
        t = t_grid[-1]
        rng = np.random.default_rng([args.seed, args.reps])
        qs = query_grid(f.dim, args.query_grid)
        if setting == "static":
            data = sample_static(f, t, rng)
            delta = args.delta if args.delta is not None else delta_schedule(t, f.dim, args.lipschitz or f.lipschitz_hint or 1.0)
            m1, m2 = static_moments_grid(data, qs, delta)
        else:
            data = sample_dynamic(f, t, rng, b_sampler=args.b_const, noise_sd=args.noise_sd)
            shrink = max(1.0 - float(np.mean(data.B)), 1.0 / t)
            delta = args.delta if args.delta is not None else delta_schedule(t, f.dim, args.lipschitz or f.lipschitz_hint or 1.0, shrink)
            m1, m2 = dynamic_moments_grid(data, qs, delta)
        rec = os.path.splitext(out)[0] + "_reconstruction.csv"
        write_reconstruction_csv(rec, qs, m1, m2 - m1**2, f(qs))
        write_sidecar(rec, _sidecar_payload(args))
        print(f"wrote {rec}")
    return EXIT_OK


def _cmd_exp_static(args) -> int:
    return _run_sweep(args, "static")


def _cmd_exp_dynamic(args) -> int:
    return _run_sweep(args, "dynamic")


def _cmd_exp_rehab(args) -> int:
    try:
        cfg = FatigueChainConfig(
            levels=args.levels,
            p_step=args.p_step,
            sessions=args.sessions,
            exercises=args.exercises,
            b_levels=tuple(_floats(args.b_levels)),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    total = cfg.sessions * cfg.exercises
    if args.t_eval is not None:
        t_eval = [int(v) for v in _floats(args.t_eval)]
    else:
        t_eval = sorted({max(total // 10, 1), max(total // 4, 1), max(total // 2, 1), total})
    report = rehab_simulation(cfg, args.seed, t_eval=t_eval, query_grid_size=args.query_grid or 101)

    base = _out_path(args, f"{args.out_prefix}_base.csv")
    write_reconstruction_csv(base, report.x_grid, report.base_mean, report.base_var, report.base_true)
    write_sidecar(base, _sidecar_payload(args))
    rested = _out_path(args, f"{args.out_prefix}_rested.csv")
    b0sq = (1.0 - float(cfg.b_levels[0])) ** 2
    write_reconstruction_csv(rested, report.x_grid, report.rested_mean, b0sq * report.base_var, report.rested_true)
    write_sidecar(rested, _sidecar_payload(args))
    err = _out_path(args, f"{args.out_prefix}_error.csv")
    curve = ErrorCurve(
        report.error_t,
        report.error_l2,
        np.full(report.error_t.size, np.nan),
        np.full(report.error_t.size, np.nan),
        reps=1,
        seed=args.seed,
    )
    write_curve_csv(err, curve)
    write_sidecar(err, _sidecar_payload(args))
    print(f"wrote {base}")
    print(f"wrote {rested}")
    print(f"wrote {err}")
    print(f"experiments={total} rested_l2_final={float(report.error_l2[-1])!r}")
    return EXIT_OK


def _cmd_exp_classify(args) -> int:
    f = _target(args.dim)
    t_grid = [int(v) for v in _floats(args.t_grid)]
    try:
        excess = run_classification(
            f,
            t_grid,
            reps=args.reps,
            prior_mode=args.prior_mode,
            v_frac=args.v_frac,
            query_grid_size=args.query_grid,
            lipschitz=args.lipschitz,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    out = _out_path(args, args.out)
    write_excess_csv(out, t_grid, excess)
    write_sidecar(out, _sidecar_payload(args))
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_bench_runtime(args) -> int:
    f = _target(args.dim)
    t_grid = [int(v) for v in _floats(args.t_grid)]
    rows = bench_runtime(f, t_grid, n_queries=args.queries, lipschitz=args.lipschitz, seed=args.seed)
    out = _out_path(args, args.out)
    write_bench_csv(out, rows)
    write_sidecar(out, _sidecar_payload(args))
    print(f"wrote {out}")
    if len(rows) >= 2:
        t, ms = zip(*rows)
        slope = float(np.polyfit(np.log(t), np.log(ms), 1)[0])
        print(f"per-query time slope: {slope!r}")
    return EXIT_OK


def _add_common(sp, out_default: str | None = None):
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
    sp.add_argument("--out-dir", default=None, help="output directory (or $SMOOTHBETA_OUT_DIR)")
    sp.add_argument("--config", default=None, help="flat key=value file applied as defaults")
    if out_default is not None:
        sp.add_argument("--out", default=out_default, help="output CSV name")


def _add_infer_common(sp):
    sp.add_argument("--data", required=True, help="dataset file (delimited or JSON lines)")
    sp.add_argument("--query", required=True, help="query coordinates, comma separated")
    sp.add_argument("--prior", default="1,1", help="prior 'alpha,beta' (default uniform)")
    sp.add_argument("--delta", type=float, default=None, help="fixed kernel half-width")
    sp.add_argument("--lipschitz", type=float, default=1.0, help="schedule constant when --delta absent")


def _add_sweep_common(sp, out_default: str):
    _add_common(sp, out_default)
    sp.add_argument("--dim", type=int, default=1, choices=(1, 2))
    sp.add_argument("--t-grid", default="100,1000,10000", help="sample counts, comma separated")
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--query-grid", type=int, default=None, help="grid points per axis")
    sp.add_argument("--delta", type=float, default=None, help="fixed kernel width (ablation mode)")
    sp.add_argument("--lipschitz", type=float, default=None, help="schedule constant (default: target hint)")
    sp.add_argument("--timing", action="store_true", help="record wall-clock per-query time (breaks byte determinism)")
    sp.add_argument("--reconstruct", action="store_true", help="also dump the posterior over the grid at the final t")


def build_parser() -> _Parser:
    p = _Parser(prog="smoothbeta", description="Beta-process inference and experiments")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("infer-static", help="posterior at a point from plain Bernoulli data")
    _add_infer_common(sp)
    _add_common(sp)
    sp.set_defaults(func=_cmd_infer_static)

    sp = sub.add_parser("infer-dynamic", help="mixture posterior at a point from contextual data")
    _add_infer_common(sp)
    _add_common(sp)
    sp.add_argument("--self-check", action="store_true", help="cross-check moments against the quadrature oracle")
    sp.set_defaults(func=_cmd_infer_dynamic)

    sp = sub.add_parser("classify", help="label a point from plain Bernoulli data")
    _add_infer_common(sp)
    _add_common(sp)
    sp.add_argument("--no-prior", action="store_true", help="majority vote (near-zero pseudo-counts)")
    sp.add_argument("--prior-mean", type=float, default=None, help="informative prior mean")
    sp.add_argument("--prior-var", type=float, default=None, help="informative prior variance")
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("exp-static", help="convergence sweep, plain observations")
    _add_sweep_common(sp, "curve_static.csv")
    sp.set_defaults(func=_cmd_exp_static)

    sp = sub.add_parser("exp-dynamic", help="convergence sweep, contextual observations")
    _add_sweep_common(sp, "curve_dynamic.csv")
    sp.add_argument("--b-const", type=float, default=None, help="constant lift B (default: uniform on [0,1])")
    sp.add_argument("--noise-sd", type=float, default=0.0, help="sd of the zero-mean noise on B")
    sp.set_defaults(func=_cmd_exp_dynamic)

    sp = sub.add_parser("exp-rehab", help="rehabilitation fatigue case study")
    _add_common(sp)
    sp.add_argument("--sessions", type=int, default=40)
    sp.add_argument("--exercises", type=int, default=20)
    sp.add_argument("--levels", type=int, default=5)
    sp.add_argument("--p-step", type=float, default=0.1)
    sp.add_argument("--b-levels", default="0.5,0.4,0.3,0.2,0.1,0.0")
    sp.add_argument("--t-eval", default=None, help="prefix sizes for the error curve")
    sp.add_argument("--query-grid", type=int, default=None)
    sp.add_argument("--out-prefix", default="rehab")
    sp.set_defaults(func=_cmd_exp_rehab)

    sp = sub.add_parser("exp-classify", help="excess classification risk sweep")
    _add_sweep_common(sp, "excess_risk.csv")
    sp.add_argument("--prior-mode", default="uniform", choices=("uniform", "none", "informative"))
    sp.add_argument("--v-frac", type=float, default=0.25, help="informative prior variance as a fraction of m(1-m)")
    sp.set_defaults(func=_cmd_exp_classify)

    sp = sub.add_parser("bench-runtime", help="per-query inference time versus dataset size")
    _add_common(sp, "bench_runtime.csv")
    sp.add_argument("--dim", type=int, default=1, choices=(1, 2))
    sp.add_argument("--t-grid", default="1000,10000,100000,1000000")
    sp.add_argument("--queries", type=int, default=200)
    sp.add_argument("--lipschitz", type=float, default=None)
    sp.set_defaults(func=_cmd_bench_runtime)

    return p


def _expand_config(argv: list[str]) -> list[str]:
    """Splice ``--config FILE`` key=value pairs in as defaults (before user flags)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise _UsageError("--config requires a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    sub_pos = next((k for k, tok in enumerate(rest) if not tok.startswith("-")), None)
    if sub_pos is None:
        raise _UsageError("--config requires a subcommand")
    tokens: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise _UsageError(f"{path} line {lineno}: expected key=value")
                key, _, val = line.partition("=")
                key = key.strip().replace("_", "-")
                val = val.strip()
                if val.lower() in ("true", "yes"):
                    tokens.append(f"--{key}")
                elif val.lower() in ("false", "no"):
                    pass
                else:
                    tokens.extend([f"--{key}", val])
    except OSError as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}") from exc
    return rest[: sub_pos + 1] + tokens + rest[sub_pos + 1 :]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
