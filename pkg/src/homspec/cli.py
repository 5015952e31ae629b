"""Batch experiment runner: subcommands dims, quad, spectrum, nystrom-check,
verify and lemmas, plus `run` for config-file driven sweeps.

Reports are CSV (always with a header row) and JSON (one object per check,
UTF-8, newline-terminated); a PNG figure is rendered next to each report
unless --no-figures is given.  Floats are written in shortest round-trip
form, files are written atomically, and no arithmetic happens CLI-side
beyond formatting, so identical invocations produce byte-identical reports.
The HOMSPEC_OUT environment variable overrides the output directory.

Exit status: 0 if every verdict passed, 1 on any failed verdict, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import analysis, figures, nystrom, operators
from .geometry import (
    GeometryParams,
    SpaceKind,
    cumulative_dim,
    dimension_sequence,
    laplace_eigenvalue,
    space_params,
)
from .jacobi import JacobiParams, gauss_jacobi

SPACE_NAMES = {kind.value: kind for kind in SpaceKind}

_COMMANDS = ("dims", "quad", "spectrum", "nystrom-check", "verify", "lemmas")


@dataclass(frozen=True)
class ExperimentConfig:
    """One validated subcommand invocation (fail-fast: constructed only
    after all referenced parameters pass the module preconditions)."""

    command: str
    options: dict
    out_dir: str
    render_figures: bool = True
    seed: int = 0
    label: str = ""


def _fmt(value) -> str:
    """Shortest round-trip formatting for report cells."""
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(cell) for cell in row) for row in rows]
    _write_atomic(path, "\n".join(lines) + "\n")


def _write_json(path: Path, obj: dict) -> None:
    _write_atomic(path, json.dumps(obj, indent=2) + "\n")


def _resolve_space(opts) -> GeometryParams:
    name = opts["space"]
    if name not in SPACE_NAMES:
        raise ValueError(
            f"unknown space {name!r}; choose from {sorted(SPACE_NAMES)}"
        )
    return space_params(SPACE_NAMES[name], opts["m"])


def _num_tag(x) -> str:
    return _fmt(x).replace("-", "m")


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (all_verdicts_passed, verify_rows)


def _run_dims(cfg: ExperimentConfig, out: Path):
    opts = cfg.options
    params = _resolve_space(opts)
    n_max = opts["n_max"]
    dims = dimension_sequence(params, n_max)
    rows = []
    taus = []
    running = 0
    for n, d in enumerate(dims.values):
        running += d
        odd_rp = params.kind is SpaceKind.REAL_PROJECTIVE and n % 2 == 1
        tau = None if odd_rp else cumulative_dim(params, n)
        taus.append(running)
        rows.append(
            [params.kind.value, params.m, n, d, tau, laplace_eigenvalue(params, n)]
        )
    stem = f"dims_{params.kind.value}_m{params.m}"
    _write_csv(out / f"{stem}.csv", ["space", "m", "n", "d_n", "tau_n", "lambda_n"], rows)
    if cfg.render_figures:
        figures.dims_figure(
            out / f"{stem}.png", str(params), list(range(n_max + 1)), dims.values, taus
        )
    return True, []


def _run_quad(cfg: ExperimentConfig, out: Path):
    opts = cfg.options
    if opts.get("space") is not None:
        params = _resolve_space(opts)
        jp = JacobiParams(float(params.alpha), float(params.beta))
        label = f"{params.kind.value}_m{params.m}"
    else:
        if opts.get("alpha") is None or opts.get("beta") is None:
            raise ValueError("quad needs either --space/--m or --alpha/--beta")
        jp = JacobiParams(opts["alpha"], opts["beta"])
        label = f"a{_num_tag(jp.alpha)}_b{_num_tag(jp.beta)}"
    rule = gauss_jacobi(jp, opts["nodes"])
    rows = [[i, x, w] for i, (x, w) in enumerate(zip(rule.nodes, rule.weights))]
    stem = f"quad_{label}_n{len(rule)}"
    _write_csv(out / f"{stem}.csv", ["index", "node", "weight"], rows)
    if cfg.render_figures:
        figures.quad_figure(
            out / f"{stem}.png",
            f"alpha={jp.alpha}, beta={jp.beta}, N={len(rule)}",
            rule.nodes,
            rule.weights,
        )
    return True, []


def _family_kwargs(opts) -> dict:
    return {
        "gamma": opts.get("gamma"),
        "q": opts.get("q"),
        "z": opts.get("z"),
    }


def _family_tag(opts) -> str:
    fam = opts["coeff_family"] if "coeff_family" in opts else opts["family"]
    for key in ("gamma", "q", "z"):
        if opts.get(key) is not None:
            return f"{fam}{_num_tag(opts[key])}"
    return fam


def _run_spectrum(cfg: ExperimentConfig, out: Path):
    opts = cfg.options
    params = _resolve_space(opts)
    count = opts["count"]
    r = opts.get("r") or 0
    n_max = operators.degrees_for_count(params, count)
    kernel = operators.make_kernel(
        params, opts["coeff_family"], n_max, **_family_kwargs(opts)
    )
    if r:
        kernel = operators.apply_lb(kernel, r)
    spec = operators.zonal_spectrum(kernel, count)
    rows = [
        [i + 1, int(spec.degrees[i]), float(spec.values[i])] for i in range(len(spec))
    ]
    stem = (
        f"spectrum_{params.kind.value}_m{params.m}_{_family_tag(opts)}"
        f"_c{count}_r{r}"
    )
    _write_csv(out / f"{stem}.csv", ["index", "degree", "value"], rows)
    if cfg.render_figures:
        figures.spectrum_figure(
            out / f"{stem}.png",
            f"{params} {_family_tag(opts)} r={r}",
            spec.values,
        )
    return True, []


def _run_nystrom_check(cfg: ExperimentConfig, out: Path):
    opts = cfg.options
    family = opts["family"]
    param = opts["param"]
    try:
        n_polar, n_azimuthal = (int(part) for part in opts["grid"].lower().split("x"))
    except ValueError:
        raise ValueError(f"grid must look like 24x48, got {opts['grid']!r}")
    top_k = opts["top_k"]
    tol = opts.get("tol") or 1e-5
    params = space_params(SpaceKind.SPHERE, 2)
    fam_kw = {"algebraic": "gamma", "geometric": "q", "genfun": "z"}.get(family)
    if fam_kw is None:
        raise ValueError(
            f"unknown family {family!r}; choose from {operators.COEFFICIENT_FAMILIES}"
        )
    kwargs = {fam_kw: param}
    n_max = operators.degrees_for_count(params, top_k) + 4
    kernel = operators.make_kernel(params, family, n_max, **kwargs)
    profile = operators.family_profile(params, family, n_max, **kwargs)
    analytic = operators.zonal_spectrum(kernel, top_k)
    numeric = nystrom.nystrom_spectrum(profile, n_polar, n_azimuthal, top_k)
    err = nystrom.compare_spectra(analytic, numeric, top_k)
    passed = err <= tol
    stem = f"nystrom_{family}{_num_tag(param)}_{n_polar}x{n_azimuthal}"
    _write_json(
        out / f"{stem}.json",
        {
            "grid": f"{n_polar}x{n_azimuthal}",
            "top_k": top_k,
            "max_rel_error": err,
            "pass": passed,
            "family": family,
            "param": param,
            "tol": tol,
        },
    )
    if cfg.render_figures:
        figures.nystrom_figure(
            out / f"{stem}.png",
            f"{family} {param}, grid {n_polar}x{n_azimuthal}",
            analytic.values,
            numeric.values,
        )
    return passed, []


def _run_verify(cfg: ExperimentConfig, out: Path):
    opts = cfg.options
    params = _resolve_space(opts)
    report = analysis.verify_theorem(
        opts["theorem"],
        params,
        r=opts["r"],
        gamma=opts["gamma"],
        count=opts["count"],
        p=opts.get("p"),
        tail_fraction=opts.get("tail") or analysis.DEFAULT_TAIL_FRACTION,
    )
    meta = report.metadata
    obj = {
        "theorem": meta["theorem"],
        "space": meta["space"],
        "m": meta["m"],
        "r": meta["r"],
        "p": meta["p"],
        "gamma": meta["gamma"],
        "count": meta["count"],
        "tail_fraction": meta["tail_fraction"],
        "fitted_slope": report.fitted_slope,
        "intercept": report.intercept,
        "residual_rms": report.residual_rms,
        "theorem_exponent": report.theoretical_exponent,
        "constructed_exponent": meta["constructed_exponent"],
        "margin": report.margin,
        "slack": meta["slack"],
        "verdict": "pass" if report.verdict else "fail",
    }
    ptag = f"_p{_num_tag(opts['p'])}" if opts.get("p") is not None else ""
    stem = (
        f"verify_t{opts['theorem'].replace('.', '')}_{params.kind.value}"
        f"_m{params.m}_r{opts['r']}{ptag}_g{_num_tag(opts['gamma'])}"
        f"_c{opts['count']}"
    )
    _write_json(out / f"{stem}.json", obj)
    if cfg.render_figures:
        kernel = operators.make_kernel(
            params,
            "algebraic",
            operators.degrees_for_count(params, opts["count"]),
            gamma=opts["gamma"],
        )
        spec = operators.zonal_spectrum(kernel, opts["count"])
        figures.decay_figure(
            out / f"{stem}.png",
            f"theorem {opts['theorem']} on {params}: gamma={opts['gamma']}, r={opts['r']}",
            spec.values,
            report.fitted_slope,
            report.intercept,
            report.theoretical_exponent,
        )
    row = [
        meta["theorem"],
        meta["space"],
        meta["m"],
        meta["r"],
        meta["p"],
        meta["gamma"],
        report.fitted_slope,
        report.theoretical_exponent,
        report.verdict,
    ]
    return report.verdict, [row]


def _run_lemmas(cfg: ExperimentConfig, out: Path):
    opts = cfg.options
    params = _resolve_space(opts)
    reports = analysis.check_counting_lemmas(params, opts["n_max"])
    all_ok = True
    for rep in reports:
        all_ok &= rep.verdict
        _write_json(
            out / f"lemmas_{params.kind.value}_m{params.m}_{rep.lemma_id}.json",
            {
                "lemma": rep.lemma_id,
                "inequality": rep.inequality,
                "space": params.kind.value,
                "m": params.m,
                "n_range": list(rep.n_range),
                "minimal_delta": rep.minimal_delta,
                "violations": list(rep.violations),
                "verdict": "pass" if rep.verdict else "fail",
            },
        )
    if cfg.render_figures:
        figures.lemmas_figure(
            out / f"lemmas_{params.kind.value}_m{params.m}.png", str(params), reports
        )
    return all_ok, []


_HANDLERS = {
    "dims": _run_dims,
    "quad": _run_quad,
    "spectrum": _run_spectrum,
    "nystrom-check": _run_nystrom_check,
    "verify": _run_verify,
    "lemmas": _run_lemmas,
}

_VERIFY_SUMMARY_HEADER = [
    "theorem", "space", "m", "r", "p", "gamma",
    "fitted_slope", "theorem_exponent", "verdict",
]


def run(config: ExperimentConfig) -> tuple[bool, list[list]]:
    """Execute one validated configuration; returns (passed, verify rows)."""
    out = Path(os.environ.get("HOMSPEC_OUT") or config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _HANDLERS[config.command](config, out)


def _run_cell(config: ExperimentConfig) -> tuple[bool, list[list], str]:
    try:
        ok, rows = run(config)
        return ok, rows, ""
    except Exception as exc:  # collected and reported by the parent
        return False, [], f"[{config.label or config.command}] {exc}"


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homspec",
        description="spectral diagnostics for zonal integral operators "
        "on compact two-point homogeneous spaces",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument(
        "--no-figures", action="store_true", help="skip PNG figure rendering"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="dimension/eigenvalue table")
    p.add_argument("--space", required=True, choices=sorted(SPACE_NAMES))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("quad", parents=[common], help="Gauss-Jacobi nodes/weights")
    p.add_argument("--space", choices=sorted(SPACE_NAMES))
    p.add_argument("--m", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--nodes", type=int, required=True)

    p = sub.add_parser("spectrum", parents=[common], help="zonal operator spectrum")
    p.add_argument("--space", required=True, choices=sorted(SPACE_NAMES))
    p.add_argument("--m", type=int, required=True)
    p.add_argument(
        "--coeff-family", required=True, choices=operators.COEFFICIENT_FAMILIES
    )
    p.add_argument("--gamma", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--r", type=int, default=0,
                   help="apply the r-th Laplace-Beltrami derivative first")

    p = sub.add_parser(
        "nystrom-check", parents=[common],
        help="cross-check analytic spectra against quadrature discretization",
    )
    p.add_argument("--family", required=True, choices=operators.COEFFICIENT_FAMILIES)
    p.add_argument("--param", type=float, required=True,
                   help="family parameter (gamma, q or z)")
    p.add_argument("--grid", required=True, help="polar x azimuthal, e.g. 24x48")
    p.add_argument("--top-k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-5)

    p = sub.add_parser("verify", parents=[common], help="theorem slope dominance")
    p.add_argument("--theorem", required=True, choices=analysis.THEOREMS)
    p.add_argument("--space", required=True, choices=sorted(SPACE_NAMES))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--tail", type=float, default=analysis.DEFAULT_TAIL_FRACTION)

    p = sub.add_parser("lemmas", parents=[common], help="counting-lemma scans")
    p.add_argument("--space", required=True, choices=sorted(SPACE_NAMES))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("run", parents=[common], help="run all cells of a config file")
    p.add_argument("config", help="INI file; each section is one subcommand cell")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for independent cells")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    opts = {
        k: v
        for k, v in vars(args).items()
        if k not in {"command", "out", "no_figures", "config", "jobs"}
    }
    return ExperimentConfig(
        command=args.command,
        options=opts,
        out_dir=args.out,
        render_figures=not args.no_figures,
    )


def _configs_from_file(path: str, args: argparse.Namespace) -> list[ExperimentConfig]:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ValueError(f"cannot read config file {path!r}")
    cli_parser = _build_parser()
    configs = []
    for section in parser.sections():
        command = section.split(":", 1)[0]
        if command not in _COMMANDS:
            raise ValueError(
                f"config section [{section}] does not name a known subcommand"
            )
        argv = [command]
        seed = 0
        for key, value in parser.items(section):
            if key == "seed":
                seed = int(value)
                continue
            argv += [f"--{key.replace('_', '-')}", value]
        if args.no_figures:
            argv.append("--no-figures")
        argv += ["--out", args.out]
        cell_args = cli_parser.parse_args(argv)
        cfg = _config_from_args(cell_args)
        configs.append(
            ExperimentConfig(
                command=cfg.command,
                options=cfg.options,
                out_dir=cfg.out_dir,
                render_figures=cfg.render_figures,
                seed=seed,
                label=section,
            )
        )
    if not configs:
        raise ValueError(f"config file {path!r} has no sections")
    return configs


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        if args.command == "run":
            configs = _configs_from_file(args.config, args)
        else:
            configs = [_config_from_args(args)]
        jobs = getattr(args, "jobs", 1)
        if jobs > 1 and len(configs) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_run_cell, configs))
        else:
            results = [_run_cell(cfg) for cfg in configs]
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    all_ok = True
    verify_rows = []
    for cfg, (ok, rows, err) in zip(configs, results):
        if err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        all_ok &= ok
        verify_rows += rows
        status = "pass" if ok else "FAIL"
        print(f"{cfg.label or cfg.command}: {status}")
    if verify_rows:
        out = Path(os.environ.get("HOMSPEC_OUT") or configs[0].out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "verify_summary.csv", _VERIFY_SUMMARY_HEADER, verify_rows)
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
