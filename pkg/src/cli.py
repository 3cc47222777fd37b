from __future__ import annotations
import functools
import logging
import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np

from src.config import DEFAULT_PATHS, DEFAULT_SEED, DEFAULT_STEPS, DEFAULT_T_MAX, SEED_ENVVAR, RunConfig
from src.errors import GgbmError
from src.montecarlo.perpetual import estimate_potential_mc, estimate_record
from src.pipeline.digest import sha256_file
from src.pipeline.report import build_report, dump_json, write_report
from src.pipeline.verify import SUITES, run_suite
from src.potential import testfunctions
from src.potential.green import green_density, potential
from src.process.fbm import generate_fbm
from src.process.ggbm import fdd_charfun, ggbm_path_product, ggbm_path_subordinated, marginal_density
from src.process.paths import GridSpec, path_to_csv
from src.sampling.randvar import draw_y_beta
from src.special.constants import green_constant
from src.special.specfun import m_wright, mittag_leffler

logger = logging.getLogger("ggbm")

EXIT_FAIL = 1
EXIT_ERROR = 2


def _guarded(fn):
    """Library errors and I/O errors become `error: ...` on stderr and exit 2."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (GgbmError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)
    return wrapper


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"not a comma-separated list of numbers: {text!r}") from exc


def _matrix(text: str) -> np.ndarray:
    """Rows separated by ';', components by ','."""
    return np.array([_floats(row) for row in text.split(";")])


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("wrote %s sha256=%s", out, sha256_file(out))


def _scalar(name: str, value: float, fmt: str) -> str:
    if fmt == "json":
        return dump_json({"function": name, "value": value}).decode("utf-8") + "\n"
    return f"{value:.15g}\n"


beta_opt = click.option("--beta", type=float, default=0.5, show_default=True)
alpha_opt = click.option("--alpha", type=float, default=1.5, show_default=True)
dim_opt = click.option("--dim", type=int, default=3, show_default=True)
seed_opt = click.option("--seed", type=int, envvar=SEED_ENVVAR, default=DEFAULT_SEED, show_envvar=True,
                        help="Master seed; falls back to $GGBM_DEFAULT_SEED, then 0.")
paths_opt = click.option("--paths", "n_paths", type=int, default=DEFAULT_PATHS, show_default=True)
t_max_opt = click.option("--t-max", type=float, default=DEFAULT_T_MAX, show_default=True)
steps_opt = click.option("--steps", type=int, default=DEFAULT_STEPS, show_default=True)
out_opt = click.option("--out", type=click.Path(path_type=Path), default=None)
threads_opt = click.option("--threads", type=int, default=1, show_default=True)


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG (stderr).")
def cli(verbose: int):
    """Generalized grey Brownian motion: special functions, samplers, Green potentials."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


# -------------------------------
# eval
# -------------------------------

@cli.command(name="eval")
@click.argument("function", type=click.Choice(["ml", "mwright", "green-constant", "density", "charfun"]))
@beta_opt
@alpha_opt
@dim_opt
@click.option("--z", type=float, default=-1.0, help="ml: argument z <= 0")
@click.option("--tau", type=float, default=0.0, help="mwright: argument tau >= 0")
@click.option("--t", "t", type=float, default=1.0, help="density: time t > 0")
@click.option("--y", "y", type=str, default=None, help="density: point, e.g. 0.5,0,0")
@click.option("--times", type=str, default="1", help="charfun: t_1,...,t_n")
@click.option("--theta", type=str, default=None, help="charfun: rows ';'-separated, e.g. 0.3;-0.2")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guarded
def eval_(function, beta, alpha, dim, z, tau, t, y, times, theta, fmt):
    """Evaluate one special function or density; prints 15 significant digits."""
    cfg = RunConfig(f"eval:{function}", beta=beta, alpha=alpha, dim=dim, fmt=fmt)
    if function == "ml":
        value = mittag_leffler(beta, z).value
    elif function == "mwright":
        value = m_wright(beta, tau).value
    elif function == "green-constant":
        value = green_constant(cfg.validate())
    elif function == "density":
        params = cfg.validate()
        point = _floats(y) if y else [0.0] * dim
        value = marginal_density(params, point, t)
    else:
        params = cfg.validate()
        tt = _floats(times)
        th = _matrix(theta) if theta else np.zeros((len(tt), dim))
        value = fdd_charfun(params, tt, th)
    click.echo(_scalar(function, value, fmt), nl=False)


# -------------------------------
# sample
# -------------------------------

@cli.command()
@click.argument("what", type=click.Choice(["ybeta", "fbm", "ggbm"]))
@beta_opt
@alpha_opt
@dim_opt
@click.option("--hurst", type=float, default=None, help="fbm: Hurst index (default alpha/2)")
@click.option("-n", "count", type=int, default=10, show_default=True, help="ybeta: number of draws")
@click.option("--construction", type=click.Choice(["product", "subordinated"]), default="product")
@seed_opt
@t_max_opt
@steps_opt
@out_opt
@_guarded
def sample(what, beta, alpha, dim, hurst, count, construction, seed, t_max, steps, out):
    """Draw Y_beta values or one fBm / ggBm path as CSV."""
    cfg = RunConfig(f"sample:{what}", beta=beta, alpha=alpha, dim=dim, seed=seed, t_max=t_max, steps=steps, out=out,
                    fmt="csv")
    params = cfg.validate()
    if what == "ybeta":
        if count < 1:
            raise click.BadParameter("requires n >= 1", param_hint="-n")
        ys = np.atleast_1d(draw_y_beta(beta, cfg.seed_spec.stream(), count))
        text = "".join(f"{v:.17g}\n" for v in ys)
    else:
        grid = GridSpec(t_max=t_max, n_steps=steps)
        if what == "fbm":
            path = generate_fbm(hurst if hurst is not None else params.hurst, grid, dim, cfg.seed_spec)
        elif construction == "product":
            path = ggbm_path_product(params, grid, cfg.seed_spec)
        else:
            path = ggbm_path_subordinated(params, grid, cfg.seed_spec)
        text = path_to_csv(path)
    _emit(text, out)


# -------------------------------
# verify / estimate-potential
# -------------------------------

@cli.command()
@click.argument("suite", type=click.Choice(list(SUITES)))
@beta_opt
@alpha_opt
@dim_opt
@seed_opt
@paths_opt
@t_max_opt
@threads_opt
@out_opt
@_guarded
def verify(suite, beta, alpha, dim, seed, n_paths, t_max, threads, out):
    """Run a validation suite; prints a JSON report, exit 1 if any check fails."""
    cfg = RunConfig(f"verify:{suite}", beta=beta, alpha=alpha, dim=dim, seed=seed, n_paths=n_paths, t_max=t_max,
                    threads=threads, out=out)
    params = cfg.validate()
    checks = run_suite(suite, cfg)
    extra = {"params": params.as_dict(), "seed": seed, "n_paths": n_paths}
    if suite == "green":
        extra["t_max"] = t_max
    data = build_report(suite, checks, extra)
    digest = write_report(data, out)
    if digest:
        logger.info("report %s sha256=%s", out, digest)
    click.echo(data.decode("utf-8"))
    if not all(c["pass"] for c in checks):
        sys.exit(EXIT_FAIL)


@cli.command(name="estimate-potential")
@beta_opt
@alpha_opt
@dim_opt
@seed_opt
@paths_opt
@t_max_opt
@threads_opt
@out_opt
@click.option("--sigma", type=float, default=1.0, show_default=True, help="width of the Gaussian test function")
@click.option("--x", "x", type=str, default=None, help="starting point, e.g. 0.5,0,0")
@_guarded
def estimate_potential(beta, alpha, dim, seed, n_paths, t_max, threads, out, sigma, x):
    """Monte Carlo perpetual integral of a Gaussian next to its Green potential (JSON)."""
    cfg = RunConfig("estimate-potential", beta=beta, alpha=alpha, dim=dim, seed=seed, n_paths=n_paths, t_max=t_max,
                    threads=threads, out=out)
    params = cfg.validate()
    point = np.array(_floats(x)) if x else np.zeros(dim)
    f = testfunctions.gaussian(dim, sigma=sigma)
    analytic = potential(green_density(params), f, point).value
    est = estimate_potential_mc(params, f, point, cfg.perpetual_spec(), threads=threads)
    data = dump_json(estimate_record(est, params, f, point, analytic))
    digest = write_report(data, out)
    if digest:
        logger.info("estimate %s sha256=%s", out, digest)
    click.echo(data.decode("utf-8"))


# -------------------------------
# sweep
# -------------------------------

SWEEP_QUANTITIES = ("green-constant", "ml", "mwright", "potential")


@cli.command()
@click.argument("quantity", type=click.Choice(list(SWEEP_QUANTITIES)))
@click.option("--param", "param", type=click.Choice(["beta", "alpha", "z", "tau"]), required=True)
@click.option("--start", type=float, required=True)
@click.option("--stop", type=float, required=True)
@click.option("--num", type=int, default=11, show_default=True)
@beta_opt
@alpha_opt
@dim_opt
@out_opt
@_guarded
def sweep(quantity, param, start, stop, num, beta, alpha, dim, out):
    """Tidy CSV (quantity,parameter,x,value) of one quantity along one parameter, for external plotting."""
    if num < 1:
        raise click.BadParameter("requires num >= 1", param_hint="--num")
    rows = ["quantity,parameter,x,value"]
    for v in np.linspace(start, stop, num):
        kw = {"beta": beta, "alpha": alpha, "z": -1.0, "tau": 0.0}
        kw[param] = float(v)
        rows.append(f"{quantity},{param},{float(v):.17g},{_sweep_value(quantity, kw, dim):.17g}")
    _emit("\n".join(rows) + "\n", out)


def _sweep_value(quantity: str, kw: dict, dim: int) -> float:
    if quantity == "ml":
        return mittag_leffler(kw["beta"], kw["z"]).value
    if quantity == "mwright":
        return m_wright(kw["beta"], kw["tau"]).value
    params = RunConfig(f"eval:{quantity}", beta=kw["beta"], alpha=kw["alpha"], dim=dim).params
    if quantity == "green-constant":
        return green_constant(params)
    return potential(green_density(params), testfunctions.gaussian(dim), np.zeros(dim)).value


if __name__ == "__main__":
    cli()
