"""Command-line front end.

Usage:
    qstat crib --stats be
    qstat --json coins --k 2 --n 2 --stats fd
    qstat daycare --n 10
    qstat dice --k 3 --n 30 --record 1,0,0 --out dice.csv --format csv
    qstat verify --scenario all --trials 100000 --seed 0

Exit codes: 0 success, 1 domain error or failed verification, 2 bad arguments.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

import click

from .asymptotics import BetaPosterior, beta_density, beta_mean, finite_n_deviation
from .ensemble import DrawRecord, condition_on_draw, fraction_distribution, prepare_equal_weight
from .errors import QstatError
from .fock import StatisticsKind
from .scenarios import (
    all_same_state_probability,
    crib_answers,
    daycare_posterior,
    daycare_prior,
    dice_posterior,
)
from .verify import DEFAULT_MIN_ACCEPTED, SCENARIOS, run_verification

SCHEMA = "qstat/1"
STATS_CHOICE = click.Choice(["classical", "be", "fd"], case_sensitive=False)


def rat(x: Fraction) -> str:
    """Lossless ``"num/den"`` rendering (integers render bare, e.g. ``"0"``)."""
    return str(Fraction(x))


def _with_floats(payload: dict, keys: Sequence[str]) -> dict:
    payload["float"] = {key: float(Fraction(payload[key])) for key in keys}
    return payload


def _table(distribution, bp: BetaPosterior) -> list[dict]:
    return [{"R": r, "exact_p": p, "beta_density": beta_density(bp, float(r))} for r, p in distribution]


def write_table(rows: list[dict], path: str, fmt: str) -> None:
    """Write an ``R, exact_p, beta_density`` table for plotting."""
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["R", "exact_p", "beta_density"])
            for row in rows:
                writer.writerow([rat(row["R"]), rat(row["exact_p"]), repr(row["beta_density"])])
    else:
        doc = {
            "schema": SCHEMA,
            "columns": ["R", "exact_p", "beta_density"],
            "rows": [
                {"R": rat(row["R"]), "exact_p": rat(row["exact_p"]), "beta_density": row["beta_density"]} for row in rows
            ],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)


def read_table(path: str) -> list[dict]:
    """Inverse of :func:`write_table` for either format."""
    with open(path) as fh:
        if path.endswith(".csv"):
            rows = list(csv.DictReader(fh))
        else:
            rows = json.load(fh)["rows"]
    return [
        {"R": Fraction(r["R"]), "exact_p": Fraction(r["exact_p"]), "beta_density": float(r["beta_density"])}
        for r in rows
    ]


def _emit(ctx: click.Context, payload: dict, text: str) -> None:
    if ctx.obj.get("json"):
        click.echo(json.dumps({"schema": SCHEMA, **payload}, indent=2))
    else:
        click.echo(text)


def _export(ctx: click.Context, rows: list[dict]) -> None:
    out = ctx.params.get("out")
    if out:
        write_table(rows, out, ctx.params["fmt"])


def _json_flag(ctx, param, value):
    if value:
        ctx.ensure_object(dict)["json"] = True
    return value


json_option = click.option("--json", "as_json", is_flag=True, expose_value=False, callback=_json_flag, help="Machine-readable JSON output.")
out_option = click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Export R, exact_p, beta_density table.")
format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)


def export_options(f):
    return out_option(format_option(f))


def _dist_lines(distribution, label: str = "R") -> str:
    return "\n".join(f"  {label}={rat(r):>8}  p={rat(p):>14}  ({float(p):.6f})" for r, p in distribution)


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable JSON output.")
@click.pass_context
def cli(ctx: click.Context, as_json: bool) -> None:
    """Exact probabilities for identical particles in k levels."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = ctx.obj.get("json", False) or as_json


@cli.command()
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Number of levels.")
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Number of particles.")
@click.option("--stats", type=STATS_CHOICE, required=True)
@export_options
@json_option
@click.pass_context
def coins(ctx, k, n, stats, out, fmt):
    """All-same probability and the level-1 fraction distribution."""
    kind = StatisticsKind.parse(stats)
    all_same = all_same_state_probability(k, n, kind)
    payload = {"command": "coins", "k": k, "n": n, "stats": kind.value, "all_same": rat(all_same)}
    text = f"P(all {n} in level 1) = {rat(all_same)}  ({float(all_same):.6g})"
    if n >= 1:
        dist = fraction_distribution(prepare_equal_weight(k, n, kind), 0)
        payload["distribution"] = [{"R": rat(r), "p": rat(p), "p_float": float(p)} for r, p in dist]
        text += "\nfraction in level 1:\n" + _dist_lines(dist)
        _export(ctx, _table(dist, BetaPosterior.from_record((0,) * k)) if k >= 2 else [])
    _emit(ctx, _with_floats(payload, ["all_same"]), text)


@cli.command()
@click.option("--stats", type=STATS_CHOICE, required=True)
@export_options
@json_option
@click.pass_context
def crib(ctx, stats, out, fmt):
    """Two-child crib: question I (random child is B) and II (at least one B)."""
    kind = StatisticsKind.parse(stats)
    answers = crib_answers(kind)
    payload = {"command": "crib", "stats": kind.value, **{key: rat(v) for key, v in answers.items()}}
    text = (
        f"question I  (other is B | randomly picked child is B) = {rat(answers['question_I'])}\n"
        f"question II (both are B | at least one is B)           = {rat(answers['question_II'])}"
    )
    posterior, _ = condition_on_draw(prepare_equal_weight(2, 2, kind), 0)
    _export(ctx, _table(fraction_distribution(posterior, 0), BetaPosterior(2, 1)))
    _emit(ctx, _with_floats(payload, list(answers)), text)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of children.")
@export_options
@json_option
@click.pass_context
def daycare(ctx, n, out, fmt):
    """Boson day care: prior, posterior after one boy is drawn, and means."""
    prior = daycare_prior(n)
    posterior = daycare_posterior(n)
    mean_m = sum((m * p for m, p in posterior.items()), Fraction(0))
    payload = {
        "command": "daycare",
        "n": n,
        "prior": [{"R": rat(Fraction(m, n)), "p": rat(p)} for m, p in prior.items()],
        "prior_mean_R": rat(Fraction(1, 2)),
        "posterior": [{"m": m, "p": rat(p), "p_float": float(p)} for m, p in posterior.items()],
        "posterior_mean_m": rat(mean_m),
        "asymptotic_prior_mean_R": rat(beta_mean(BetaPosterior(1, 1))),
        "asymptotic_posterior_mean_R": rat(beta_mean(BetaPosterior(2, 1))),
    }
    text = f"prior: each of {n + 1} boy counts has p = {rat(Fraction(1, n + 1))}, mean R = 1/2\n"
    text += "posterior after first child is a boy (m boys among the rest):\n"
    text += "\n".join(f"  m={m:>4}  p={rat(p):>12}" for m, p in posterior.items())
    text += f"\nmean m = {rat(mean_m)}"
    if n >= 2:
        mean_r = mean_m / (n - 1)
        payload["posterior_mean_R"] = rat(mean_r)
        text += f", mean R = {rat(mean_r)}"
        dist = [(Fraction(m, n - 1), p) for m, p in posterior.items()]
        _export(ctx, _table(dist, BetaPosterior(2, 1)))
    _emit(ctx, _with_floats(payload, ["posterior_mean_m"]), text)


def _parse_record(ctx, param, value):
    if value is None:
        return None
    try:
        return DrawRecord.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


@cli.command()
@click.option("--k", "k", type=click.IntRange(min=2), required=True, help="Number of levels.")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of dice.")
@click.option("--record", callback=_parse_record, required=True, help="Observed draws per level, e.g. 1,0,0.")
@export_options
@json_option
@click.pass_context
def dice(ctx, k, n, record, out, fmt):
    """Bosonic dice: exact posterior of the level-1 fraction after a draw record."""
    if record.k != k:
        raise click.BadParameter(f"record has {record.k} entries, expected {k}", param_hint="--record")
    if record.total >= n:
        raise click.BadParameter(f"record draws {record.total} of {n} dice; at least one must remain", param_hint="--record")
    post = dice_posterior(k, n, record)
    bp = post.beta
    deviation = finite_n_deviation(k, n, record)
    payload = {
        "command": "dice",
        "k": k,
        "n": n,
        "record": list(record.counts),
        "distribution": [{"R": rat(r), "p": rat(p), "p_float": float(p)} for r, p in post.distribution],
        "mean": rat(post.mean),
        "beta": {"nu1": bp.nu1, "nu_rest": bp.nu_rest},
        "beta_mean": rat(beta_mean(bp)),
        "finite_n_deviation": deviation,
    }
    text = (
        f"remaining dice: {post.remaining}\n"
        f"exact mean R = {rat(post.mean)}\n"
        f"Beta(nu1={bp.nu1}, nu_rest={bp.nu_rest}), mean {rat(beta_mean(bp))}\n"
        f"finite-n deviation (sup |scaled mass - density|) = {deviation:.6g}"
    )
    _export(ctx, _table(post.distribution, bp))
    _emit(ctx, _with_floats(payload, ["mean", "beta_mean"]), text)


@cli.command()
@click.option("--scenario", type=click.Choice([*SCENARIOS, "all"]), default="all", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=DEFAULT_MIN_ACCEPTED, show_default=True, help="Minimum accepted trials per check.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True, help="Overridden by QSTAT_SEED.")
@json_option
@click.pass_context
def verify(ctx, scenario, trials, seed):
    """Compare exact answers with Monte Carlo estimates (99% Wilson intervals)."""
    env_seed = os.environ.get("QSTAT_SEED")
    if env_seed:
        try:
            seed = int(env_seed)
        except ValueError:
            raise click.BadParameter(f"QSTAT_SEED={env_seed!r} is not an integer") from None
    checks = run_verification(scenario, seed=seed, min_accepted=trials)
    failed = [c for c in checks if not c.ok]
    payload = {"command": "verify", "seed": seed, "checks": [c.to_dict() for c in checks], "passed": not failed}
    lines = [
        f"{'PASS' if c.ok else 'FAIL'}  {c.scenario}: {c.quantity}  exact={rat(c.exact)}  "
        f"est={c.estimate:.5f}  ci=[{c.ci_low:.5f}, {c.ci_high:.5f}]  n={c.accepted}"
        for c in checks
    ]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed (seed {seed})")
    _emit(ctx, payload, "\n".join(lines))
    if failed:
        ctx.exit(1)


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="qstat", standalone_mode=False, obj={})
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.Abort:
        return 1
    except QstatError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 1
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    # without standalone mode, click hands back ctx.exit codes as the return value
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
