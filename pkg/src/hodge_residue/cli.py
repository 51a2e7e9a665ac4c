"""Command-line front end: verification suites, densities, boundary values.

``hodge-residue verify`` runs the selected check suites and writes a
deterministic JSON (or markdown) report; the exit code doubles as a CI gate
(0 all checks pass, 1 at least one failed, 2 bad configuration).  ``density``
and ``boundary`` evaluate single functionals on user-supplied inputs.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import click

from .boundary import (
    BoundaryArgs,
    boundary_contraction,
    boundary_density,
    closed_form_boundary_coefficient,
    verify_boundary,
)
from .forms import form_from_json, vectors_from_json
from .residue import (
    FUNCTIONALS,
    CheckReport,
    lemma_check,
    lemma_ids,
    spectral_density,
    verify_theorem,
)
from .scalars import sphere_volume
from .symbols import check_flat_commutators

SUITES = ("lemmas", "theorems", "boundary", "commutators", "all")

DEFAULT_LEMMA_DIMENSIONS = (4, 6)
DEFAULT_SYMBOL_ORDERS = (2, 3)
DEFAULT_COMMUTATOR_DIMENSIONS = (2, 4)


def _worker_count() -> int:
    env = os.environ.get("HODGE_RESIDUE_THREADS")
    if env:
        try:
            workers = int(env)
        except ValueError:
            raise click.UsageError("HODGE_RESIDUE_THREADS must be an integer")
        if workers < 1:
            raise click.UsageError("HODGE_RESIDUE_THREADS must be >= 1")
        return workers
    return min(8, os.cpu_count() or 1)


def _commutator_report(identity: str, n: int) -> CheckReport:
    records = [r for r in check_flat_commutators(n) if r["identity"] == identity]
    mismatches = sum(0 if r["ok"] else 1 for r in records)
    monomials = sum(r["monomials"] for r in records)
    return CheckReport(
        check_id=f"commutator.{identity}",
        n=n,
        trials=monomials,
        status="pass" if mismatches == 0 else "fail",
        computed=f"{mismatches} mismatching monomials",
        expected="0 mismatching monomials",
    )


def _build_tasks(suite: str, n_values: Sequence[int], m_values: Sequence[int],
                 commutator_ns: Sequence[int], trials: int, seed: int) -> List:
    tasks = []
    if suite in ("lemmas", "all"):
        for lemma_id in lemma_ids():
            for n in n_values:
                tasks.append(lambda lid=lemma_id, nn=n: lemma_check(lid, nn, trials, seed))
    if suite in ("theorems", "all"):
        for functional_id in sorted(FUNCTIONALS):
            for m in m_values:
                tasks.append(lambda fid=functional_id, mm=m: verify_theorem(fid, mm, trials, seed))
    if suite in ("boundary", "all"):
        for flavor in ("psi1", "psi2"):
            for m in m_values:
                tasks.append(lambda fl=flavor, mm=m: verify_boundary(fl, mm, trials, seed))
    if suite in ("commutators", "all"):
        for identity in ("c", "chat"):
            for n in commutator_ns:
                tasks.append(lambda ident=identity, nn=n: _commutator_report(ident, nn))
    return tasks


def _render_markdown(report: Dict) -> str:
    lines = [
        "# Verification report",
        "",
        f"- suite: `{report['config']['suite']}`",
        f"- seed: {report['config']['seed']}, trials: {report['config']['trials']}",
        f"- summary: {report['summary']['pass']} pass, {report['summary']['fail']} fail",
        "",
        "| id | n | trials | status | computed | expected |",
        "|----|---|--------|--------|----------|----------|",
    ]
    for check in report["checks"]:
        lines.append(
            "| {id} | {n} | {trials} | {status} | `{computed}` | `{expected}` |".format(**check)
        )
    lines.append("")
    return "\n".join(lines)


@click.group()
def main() -> None:
    """Exact verification engine for spectral form/torsion functionals."""


@main.command("verify")
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True)
@click.option("--n", "n_value", type=int, default=None, help="Single dimension override (lemma/commutator suites).")
@click.option("--m", "m_value", type=int, default=None, help="Single symbol-order override (theorem/boundary suites).")
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True, path_type=Path), default=None)
@click.option("--format", "fmt", type=click.Choice(("json", "md")), default="json", show_default=True)
def cmd_verify(suite: str, n_value: Optional[int], m_value: Optional[int], trials: int,
               seed: int, out: Optional[Path], fmt: str) -> None:
    """Run verification suites and emit a deterministic report."""
    if trials < 1:
        raise click.UsageError("--trials must be >= 1")
    if n_value is not None and (n_value % 2 or not 4 <= n_value <= 14):
        raise click.UsageError("--n must be even with 4 <= n <= 14")
    if m_value is not None and m_value < 2:
        raise click.UsageError("--m must be >= 2")
    n_values = (n_value,) if n_value is not None else DEFAULT_LEMMA_DIMENSIONS
    m_values = (m_value,) if m_value is not None else DEFAULT_SYMBOL_ORDERS
    commutator_ns = (n_value,) if n_value is not None else DEFAULT_COMMUTATOR_DIMENSIONS

    tasks = _build_tasks(suite, n_values, m_values, commutator_ns, trials, seed)
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        reports = list(pool.map(lambda task: task(), tasks))
    reports.sort(key=lambda r: (r.check_id, r.n))

    passed = sum(1 for r in reports if r.passed)
    failed = len(reports) - passed
    report = {
        "version": 1,
        "config": {
            "suite": suite,
            "n": sorted(n_values),
            "m": sorted(m_values),
            "trials": trials,
            "seed": seed,
        },
        "checks": [r.to_dict() for r in reports],
        "summary": {"pass": passed, "fail": failed},
    }
    rendered = (
        json.dumps(report, indent=2, sort_keys=True) + "\n"
        if fmt == "json"
        else _render_markdown(report)
    )
    if out is not None:
        out.write_text(rendered, encoding="utf-8")
        click.echo(f"{passed} pass, {failed} fail -> {out}")
    else:
        click.echo(rendered, nl=False)
    if failed:
        sys.exit(1)


@main.command("density")
@click.argument("functional_id", type=click.Choice(sorted(FUNCTIONALS)))
@click.option("--m", type=int, required=True)
@click.option("--form", "form_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--vectors", "vectors_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
def cmd_density(functional_id: str, m: int, form_path: Path, vectors_path: Path) -> None:
    """Evaluate one interior density on a form/vectors pair (exact + float)."""
    try:
        form = form_from_json(form_path)
        vectors = vectors_from_json(vectors_path)
        value = spectral_density(functional_id, form, vectors, m)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"invalid input: {exc}")
    click.echo(value.render())
    click.echo(f"float: {value.numeric()}")


@main.command("boundary")
@click.argument("flavor", type=click.Choice(("psi1", "psi2")))
@click.option("--m", type=int, required=True)
@click.option("--vectors", "vectors_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
def cmd_boundary(flavor: str, m: int, vectors_path: Path) -> None:
    """Evaluate one boundary density and compare with its closed form."""
    try:
        vectors = vectors_from_json(vectors_path)
        if len(vectors) != 3:
            raise ValueError("boundary densities take exactly three vectors")
        u, v, w = (tuple(vec) for vec in vectors)
        args = BoundaryArgs(flavor, u, v, w, m)
        engine = boundary_density(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"invalid input: {exc}")
    n = 2 * m
    closed = (
        closed_form_boundary_coefficient(flavor, m)
        * boundary_contraction(flavor, u, v, w)
        * (1 << n)
        * sphere_volume(n - 2)
    )
    click.echo(f"engine: {engine.render()}")
    click.echo(f"closed form: {closed.render()}")
    verdict = "match" if engine == closed else "MISMATCH"
    click.echo(f"verdict: {verdict}")
    if verdict != "match":
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
