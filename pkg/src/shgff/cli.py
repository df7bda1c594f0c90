"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 kinematic-region violation,
4 quadrature non-convergence, 5 internal error.
"""
from __future__ import annotations

import concurrent.futures
import json
import sys

import click
import numpy as np

from .combin import enumerate_compositions
from .correlator import (
    ContourLadder, CorrelatorRequest, GaussianSmearing, SpacetimePoint,
    check_region, compute_I_n, compute_W_r, smeared_correlator,
    _composition_phase,
)
from .formfactor import load_operator, verify_axioms
from .specfun import ModelParams, min_form_factor, s_matrix

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGION = 3
EXIT_NONCONVERGED = 4
EXIT_INTERNAL = 5


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(str(exc)) from exc


class ConfigError(Exception):
    pass


class NonConvergence(Exception):
    pass


def _model_from(cfg: dict) -> ModelParams:
    try:
        m = cfg["model"]
        return ModelParams(b=float(m["b"]), mass=float(m.get("mass", 1.0)),
                           b_hat=m.get("b_hat"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad model section: {exc}") from exc


def _operators_from(cfg: dict, params: ModelParams) -> list:
    try:
        return [load_operator(doc, params) for doc in cfg["operators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad operators section: {exc}") from exc


def _request_from(cfg: dict, params: ModelParams, operators, tol, nodes, L
                  ) -> CorrelatorRequest:
    try:
        r = cfg["request"]
        points = [SpacetimePoint(float(p[0]), float(p[1])) for p in r["points"]]
        ladder = None
        if "ladder" in r:
            ladder = ContourLadder(len(operators),
                                   {tuple(map(int, k.split(","))): float(v)
                                    for k, v in r["ladder"].items()})
        return CorrelatorRequest(
            params=params, operators=operators, points=points,
            r=tuple(int(x) for x in r["r"]), ladder=ladder,
            nodes=int(nodes or r.get("nodes", 96)),
            L=float(L or r.get("L", 8.0)),
            max_nodes=int(r.get("max_nodes", 3072)),
            tol=float(tol or r.get("tol", 1e-9)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad request section: {exc}") from exc


@click.group()
def main():
    """Form-factor bootstrap and truncated correlation functions."""


@main.command("specfun")
@click.option("--b", type=float, required=True, help="coupling in [0, 1/2]")
@click.option("--mass", type=float, default=1.0)
@click.option("--beta", "betas", type=float, multiple=True, required=True,
              help="rapidity (repeatable)")
def specfun_cmd(b, mass, betas):
    """Evaluate the two-body S-matrix and minimal form factor."""
    try:
        params = ModelParams(b=b, mass=mass)
    except ValueError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo("beta,re(S),im(S),re(F),im(F)")
    for be in betas:
        s = s_matrix(be, params)
        f = min_form_factor(be, params)
        click.echo(",".join([_fmt(be), _fmt(s.real), _fmt(s.imag),
                             _fmt(f.real), _fmt(f.imag)]))
    sys.exit(EXIT_OK)


@main.command("verify")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--n-max", type=int, default=3)
@click.option("--tol", type=float, default=1e-6)
def verify_cmd(config_path, n_max, tol):
    """Check the bootstrap axioms for every configured operator."""
    try:
        cfg = _load_config(config_path)
        params = _model_from(cfg)
        operators = _operators_from(cfg, params)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    worst = 0.0
    for op in operators:
        for n in range(n_max + 1):
            rep = verify_axioms(op, params, n)
            worst = max(worst, rep.max_residual())
            click.echo(f"{op.name} n={n} exchange={rep.exchange:.3e} "
                       f"periodicity={rep.periodicity:.3e} "
                       f"residue={rep.residue:.3e} boost={rep.boost:.3e}")
    if worst > tol:
        click.echo(f"FAIL worst residual {worst:.3e} > {tol:.1e}", err=True)
        sys.exit(EXIT_NONCONVERGED)
    click.echo(f"OK worst residual {worst:.3e}")
    sys.exit(EXIT_OK)


@main.command("enumerate")
@click.option("--k", type=int, required=True)
@click.option("--r", "r_str", required=True, help="comma-separated ranks r_1..r_{k-1}")
def enumerate_cmd(k, r_str):
    """List composition vectors with the given crossing ranks."""
    try:
        r = tuple(int(x) for x in r_str.split(","))
        comps = enumerate_compositions(k, r)
    except ValueError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    from .combin import blocks
    click.echo("blocks: " + " ".join(f"({b},{a})" for b, a in blocks(k)))
    for c in comps:
        click.echo(" ".join(str(x) for x in c.counts))
    click.echo(f"total: {len(comps)}")
    sys.exit(EXIT_OK)


@main.command("eval-ff")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--operator", "op_name", default=None)
@click.option("--betas", "betas_str", required=True,
              help="comma-separated rapidities")
def eval_ff_cmd(config_path, op_name, betas_str):
    """Evaluate an operator's n-particle form factor."""
    try:
        cfg = _load_config(config_path)
        params = _model_from(cfg)
        operators = _operators_from(cfg, params)
        betas = [complex(x) for x in betas_str.split(",")] if betas_str else []
    except (ConfigError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    ops = [op for op in operators if op_name is None or op.name == op_name]
    if not ops:
        click.echo(f"config error: no operator named {op_name}", err=True)
        sys.exit(EXIT_CONFIG)
    for op in ops:
        try:
            val = op.provider.evaluate(betas)
        except Exception as exc:  # noqa: BLE001
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)
        click.echo(f"{op.name} F_{len(betas)} = {_fmt(complex(val).real)} "
                   f"{_fmt(complex(val).imag)}")
    sys.exit(EXIT_OK)


@main.command("correlator")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--output", "output_path", default=None, type=click.Path())
@click.option("--mixed", "mixed_t", type=int, default=None,
              help="distinguished operator index for the t-representation")
@click.option("--smeared", is_flag=True, default=False)
@click.option("--threads", type=int, default=1)
@click.option("--tol", type=float, default=None)
@click.option("--nodes", type=int, default=None)
@click.option("--l", "--L", "L", type=float, default=None)
def correlator_cmd(config_path, output_path, mixed_t, smeared, threads, tol, nodes, L):
    """Compute a truncated correlator and write a CSV breakdown."""
    try:
        cfg = _load_config(config_path)
        params = _model_from(cfg)
        operators = _operators_from(cfg, params)
        request = _request_from(cfg, params, operators, tol, nodes, L)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    if not smeared and not check_region(request.points):
        click.echo("region error: points must be space-like separated with "
                   "strictly decreasing spatial coordinates", err=True)
        sys.exit(EXIT_REGION)

    try:
        if smeared:
            try:
                smr = [GaussianSmearing(tuple(s["center"]), tuple(s["width"]))
                       for s in cfg["request"]["smearings"]]
            except (KeyError, TypeError) as exc:
                click.echo(f"config error: bad smearings: {exc}", err=True)
                sys.exit(EXIT_CONFIG)
            result = smeared_correlator(request, smr)
        elif threads > 1:
            result = _compute_threaded(request, mixed_t, threads)
        else:
            result = compute_W_r(request, mixed_t=mixed_t)
    except ValueError as exc:
        click.echo(f"region/config error: {exc}", err=True)
        sys.exit(EXIT_REGION)
    except Exception as exc:  # noqa: BLE001
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)

    lines = ["composition,re_I,im_I,err,phase_re,phase_im"]
    for comp, val, err, ph in result.breakdown:
        comp_str = ";".join(str(c) for c in comp.counts)
        lines.append(",".join([comp_str, _fmt(val.real), _fmt(val.imag),
                               _fmt(err), _fmt(ph.real), _fmt(ph.imag)]))
    lines.append(",".join(["total", _fmt(result.value.real),
                           _fmt(result.value.imag), _fmt(result.error),
                           _fmt(1.0), _fmt(0.0)]))
    text = "\n".join(lines) + "\n"
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text)
    click.echo(text, nl=False)

    doc_path = cfg.get("output", {}).get("doc")
    if doc_path:
        with open(doc_path, "w") as fh:
            fh.write(result.describe() + "\n")
    if result.error > request.tol * max(1.0, abs(result.value)):
        click.echo(f"non-convergence: error estimate {result.error:.3e} "
                   f"exceeds tolerance", err=True)
        sys.exit(EXIT_NONCONVERGED)
    sys.exit(EXIT_OK)


def _compute_threaded(request, mixed_t, threads):
    """Per-composition parallelism with a deterministic reduction order."""
    from .correlator import CorrelatorResult
    comps = enumerate_compositions(request.k, tuple(request.r))
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(compute_I_n, request, comp, mixed_t) for comp in comps]
        vals = [f.result() for f in futs]
    total = 0.0 + 0.0j
    err_total = 0.0
    breakdown = []
    for comp, (val, err) in zip(comps, vals):
        ph = _composition_phase(comp, request.operators, mixed_t)
        weight = ph / (comp.factorial_weight() * (2.0 * np.pi) ** comp.total)
        total += weight * val
        err_total += abs(weight) * err
        breakdown.append((comp, val, err, ph))
    return CorrelatorResult(total, err_total, breakdown)


if __name__ == "__main__":
    main()
