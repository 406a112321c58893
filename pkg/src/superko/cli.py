"""Command line front end: ``superko ko-table | tate | verify | pi0``."""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import __version__
from . import categories as cat
from .clifford import DEGREE_CAP, GradedCliffordModule, abs_quotient, abs_quotient_complex, irreducible_dims
from .suites import SUITE_NAMES, run_suite


def _emit(payload: dict, markdown: str, fmt: str, output: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n" if fmt == "json" else markdown
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _table(headers: list[str], rows: list[list]) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _parse_range(text: str) -> tuple[int, int]:
    sep = ":" if ":" in text else ","
    try:
        lo, hi = (int(p) for p in text.split(sep))
    except ValueError:
        raise click.BadParameter(f"expected MIN:MAX, got {text!r}", param_hint="--n-range")
    if lo > hi:
        raise click.BadParameter("empty range", param_hint="--n-range")
    if lo < -DEGREE_CAP or hi > DEGREE_CAP:
        raise click.BadParameter(f"degrees must lie within +-{DEGREE_CAP}", param_hint="--n-range")
    return lo, hi


def output_options(fn):
    fn = click.option("--output", "output", type=click.Path(dir_okay=False), default=None, help="Write to FILE instead of stdout.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "markdown"]), default="json", show_default=True)(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def main():
    """Clifford-module K-theory coefficients and field-theory verification suites."""


@main.command("ko-table")
@click.option("--n-range", default="0:7", show_default=True, help="Degrees MIN:MAX.")
@click.option("--field", type=click.Choice(["R", "C"]), default="R", show_default=True)
@output_options
def ko_table(n_range, field, fmt, output):
    """Quotient groups M_n / i M_{n+1} degree by degree."""
    lo, hi = _parse_range(n_range)
    rows = []
    for n in range(lo, hi + 1):
        g = abs_quotient(n) if field == "R" else abs_quotient_complex(n)
        dims = irreducible_dims(n, field)
        rows.append({"n": n, "group": g.presentation(), "rank": g.rank, "torsion": list(g.torsion), "module_dims": [list(d) for d in dims]})
    md = _table(["n", "group", "irreducible dims (even|odd)"], [[r["n"], r["group"], ", ".join(f"({e}|{o})" for e, o in r["module_dims"])] for r in rows])
    _emit({"field": field, "rows": rows}, md, fmt, output)


@main.command("tate")
@click.option("--n", "n", type=int, required=True)
@click.option("--k-min", type=int, default=-3, show_default=True)
@click.option("--k-max", type=int, default=3, show_default=True)
@click.option("--dim-cap", type=int, default=None, help="Certify the group by a pi_0 computation.")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None, help='JSON {"k0": int, "levels": {"k": dim}}.')
@output_options
def tate(n, k_min, k_max, dim_cap, input_path, fmt, output):
    """Per-level coefficient groups of the Tate K-theory model."""
    if k_min > k_max:
        raise click.BadParameter("empty window", param_hint="--k-min/--k-max")
    objects = k0 = None
    if input_path:
        with open(input_path, encoding="utf-8") as fh:
            data = json.load(fh)
        objects = {int(k): int(v) for k, v in data.get("levels", {}).items()}
        k0 = data.get("k0")
    try:
        groups = cat.tate_coefficients(n, (k_min, k_max), dim_cap=dim_cap, objects=objects, k0=k0)
    except cat.TateError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    rows = [{"k": k, "group": g.presentation()} for k, g in zip(range(k_min, k_max + 1), groups)]
    md = _table(["k", "group"], [[r["k"], r["group"]] for r in rows])
    _emit({"n": n, "k_window": [k_min, k_max], "rows": rows}, md, fmt, output)


def _run(args):
    name, seed = args
    return run_suite(name, seed).to_json()


@main.command("verify")
@click.argument("suite", type=click.Choice(list(SUITE_NAMES) + ["all"]))
@click.option("--seed", type=int, envvar="SUPERKO_SEED", default=0, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@output_options
def verify(suite, seed, jobs, fmt, output):
    """Run seeded invariant suites; exit 1 on any failure."""
    names = list(SUITE_NAMES) if suite == "all" else [suite]
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run, [(n, seed) for n in names]))
    else:
        reports = [_run((n, seed)) for n in names]
    passed = all(r["passed"] for r in reports)
    rows = []
    for r in reports:
        for c in r["checks"]:
            rows.append([r["suite"], c["name"], c["total"] - c["failed"], c["failed"], "pass" if c["passed"] else "FAIL"])
    md = _table(["suite", "check", "passed", "failed", "status"], rows)
    _emit({"seed": seed, "passed": passed, "suites": reports}, md, fmt, output)
    if not passed:
        sys.exit(1)


@main.command("pi0")
@click.option("--n", "n", type=int, required=True, help="Ambient Clifford degree.")
@click.option("--dim-cap", type=int, default=8, show_default=True)
@click.option("--field", type=click.Choice(["R", "C"]), default="R", show_default=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Ambient module as JSON.")
@output_options
def pi0(n, dim_cap, field, input_path, fmt, output):
    """Connected components of bounded-dimension objects, labelled by the quotient group."""
    ambient = n
    if input_path:
        with open(input_path, encoding="utf-8") as fh:
            ambient = GradedCliffordModule.from_json(json.load(fh))
        if ambient.degree != n:
            raise click.BadParameter("ambient degree does not match --n", param_hint="--input")
    try:
        res = cat.pi0(ambient, dim_cap, field)
    except cat.StabilityError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    payload = res.to_json()
    md = _table(
        ["n", "group", "components", "objects", "edges", "bijective", "addition"],
        [[res.degree, res.group.presentation(), res.components, res.nodes, res.edges, res.bijective, res.addition_ok]],
    )
    _emit(payload, md, fmt, output)
    if not res.passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
