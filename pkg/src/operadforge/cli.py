"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage or domain error.
Set OPERADFORGE_LOG=DEBUG (or INFO, WARNING) for log output on stderr.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import sys
import time
from collections import Counter
from pathlib import Path

import click

from . import gf2homology, linkcheck, posetkit, treekit
from .stratlab import (
    BUILTIN_MODELS,
    EXAMPLES,
    CellModel,
    ModelError,
    boundary_colimit,
    cone_fill,
    extend,
    free_action_check,
    recognize,
    run_example,
    stratified_euler,
    validate_model,
)

log = logging.getLogger("operadforge")

FORMATS = ("json", "table", "dot")
SCHEMES = {"rbw": treekit.Scheme.RBW, "five": treekit.Scheme.FIVE, "rwlocal": treekit.Scheme.RWLOCAL}
FLAVORS = ("operad", "bimoduleBoundary", "leftPart", "rightPart")


def _setup_logging() -> None:
    level = os.environ.get("OPERADFORGE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(data, fmt: str, table_rows=None) -> None:
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True, default=str))
    elif table_rows is not None:
        for row in table_rows:
            click.echo("\t".join(str(x) for x in row))
    else:
        click.echo(json.dumps(data, sort_keys=True, default=str))


def _load_model(spec: str) -> CellModel:
    if spec in BUILTIN_MODELS:
        return BUILTIN_MODELS[spec]()
    path = Path(spec)
    if not path.exists():
        raise click.UsageError(f"unknown model {spec!r}; builtins are {sorted(BUILTIN_MODELS)}")
    return CellModel.from_json(path.read_text())


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Trees, posets, polytopes and cell models of manifold operads."""
    _setup_logging()


# enumerate -----------------------------------------------------------------------------


@main.command("enumerate")
@click.option("--labels", type=click.IntRange(min=1), required=True, help="Number of labels.")
@click.option("--scheme", type=click.Choice(sorted(SCHEMES) + ["none"]), default="none")
@click.option("--count", is_flag=True, help="Print only the number of trees.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table")
def cmd_enumerate(labels: int, scheme: str, count: bool, fmt: str) -> None:
    """List the trees on {1..labels}."""
    try:
        if scheme == "none":
            trees = treekit.enumerate_trees(labels)
        else:
            trees = treekit.enumerate_colored(labels, SCHEMES[scheme])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if count:
        click.echo(len(trees))
        return
    if fmt == "dot":
        for t in trees:
            click.echo(treekit.tree_to_dot(t))
    elif fmt == "json":
        _emit([treekit.tree_to_json(t) for t in trees], "json")
    else:
        for t in trees:
            click.echo(t.describe())


# verification sweeps -------------------------------------------------------------------------

SWEEPS = ("links", "elementary", "join-decomp", "five", "rwlocal")


def _run_sweeps(kinds, labels_max, sample5, seed, workers):
    out = {}
    for kind in kinds:
        lm = min(labels_max, 3) if kind == "five" else labels_max
        t0 = time.perf_counter()
        res = linkcheck.sweep(kind, lm, workers=workers, sample5=sample5 if kind != "five" else 0, seed=seed)
        out[kind] = (res, time.perf_counter() - t0)
    return out


def _verify(kind, labels_max, sample5, seed, workers, dump, fmt) -> None:
    if labels_max < 2:
        raise click.UsageError("--labels-max must be at least 2")
    kinds = SWEEPS if kind == "all" else (kind,)
    results = _run_sweeps(kinds, labels_max, sample5, seed, workers)
    failures = []
    summary = []
    for k, (res, secs) in results.items():
        bad = [r for r in res if not r["ok"]]
        failures.extend(bad)
        summary.append({"suite": k, "certificates": len(res), "failures": len(bad), "seconds": round(secs, 2)})
    if dump and failures:
        Path(dump).write_text(json.dumps(failures, indent=2, sort_keys=True, default=str))
    if fmt == "json":
        # timings vary between runs, so only counts go into the JSON report
        report = {
            "summary": [{k: v for k, v in s.items() if k != "seconds"} for s in summary],
            "certificates": {k: res for k, (res, _) in results.items()},
        }
        _emit(report, "json")
    else:
        rows = [("suite", "certificates", "failures", "seconds")]
        rows += [(s["suite"], s["certificates"], s["failures"], s["seconds"]) for s in summary]
        _emit(None, "table", rows)
        if failures:
            click.echo(f"counterexamples: {len(failures)}" + (f" written to {dump}" if dump else ""), err=True)
    if failures:
        sys.exit(1)


def _sweep_options(f):
    f = click.option("--labels-max", type=int, default=4, show_default=True)(f)
    f = click.option("--sample5", type=click.IntRange(min=0), default=0, help="Extra seeded trees on five labels.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--workers", type=click.IntRange(min=1), default=None, help="Defaults to the CPU count.")(f)
    f = click.option("--dump-counterexample", "dump", type=click.Path(dir_okay=False), default=None)(f)
    f = click.option("--format", "fmt", type=click.Choice(FORMATS[:2]), default="table")(f)
    return f


@main.command("verify")
@click.argument("kind", type=click.Choice(SWEEPS + ("all",)))
@_sweep_options
def cmd_verify(kind, labels_max, sample5, seed, workers, dump, fmt) -> None:
    """Run certificate sweeps; exit 1 if any certificate fails."""
    _verify(kind, labels_max, sample5, seed, workers or os.cpu_count() or 1, dump, fmt)


@main.command("linkcheck")
@click.option("--kind", type=click.Choice(SWEEPS), default="links", show_default=True)
@click.option("--tree", "tree_json", default=None, help="Check a single tree given as JSON (inline or a file).")
@_sweep_options
def cmd_linkcheck(kind, tree_json, labels_max, sample5, seed, workers, dump, fmt) -> None:
    """Link certificates for one tree, or for the whole corpus."""
    if tree_json is None:
        _verify(kind, labels_max, sample5, seed, workers or os.cpu_count() or 1, dump, fmt)
        return
    text = Path(tree_json).read_text() if Path(tree_json).exists() else tree_json
    try:
        scheme = treekit.Scheme.FIVE if kind == "five" else (treekit.Scheme.RWLOCAL if kind == "rwlocal" else treekit.Scheme.RBW)
        T = treekit.tree_from_json(text, scheme)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"bad tree: {exc}")
    res = linkcheck._job((kind, T))
    bad = [r for r in res if not r["ok"]]
    if dump and bad:
        Path(dump).write_text(json.dumps(bad, indent=2, sort_keys=True, default=str))
    if fmt == "json":
        _emit({"tree": T.describe(), "certificates": res}, "json")
    else:
        rows = [("subject", "ok", "failed checks")]
        rows += [(r["subject"], r["ok"], ",".join(k for k, v in r["checks"].items() if not v)) for r in res]
        _emit(None, "table", rows)
    if bad:
        sys.exit(1)


# homology of files ----------------------------------------------------------------------------


def _read_complex(path: str):
    data = json.loads(sys.stdin.read() if path == "-" else Path(path).read_text())
    if "facets" in data:
        return gf2homology.SimplicialComplex(data["facets"])
    if "covers" in data:
        return posetkit.order_complex(posetkit.FinPoset.from_json(data))
    raise click.UsageError("expected a JSON object with 'facets' or with 'elements' and 'covers'")


@main.command("euler")
@click.argument("path")
def cmd_euler(path: str) -> None:
    """Euler characteristic of a facet list, or of a poset's order complex."""
    click.echo(gf2homology.euler_characteristic(_read_complex(path)))


@main.command("betti")
@click.argument("path")
@click.option("--reduced", is_flag=True)
def cmd_betti(path: str, reduced: bool) -> None:
    """GF(2) Betti numbers of a facet list, or of a poset's order complex."""
    cc = gf2homology.from_complex(_read_complex(path))
    if reduced:
        click.echo(json.dumps({str(k): v for k, v in sorted(gf2homology.reduced_betti(cc).items())}))
    else:
        click.echo(json.dumps(gf2homology.betti(cc)))


# stratlab --------------------------------------------------------------------------------------


@main.group("stratlab")
def stratlab_group() -> None:
    """Cell models, boundary colimits and surgery."""


def _complex_report(cx, model, m, flavor) -> dict:
    rec = recognize(cx)
    wit = free_action_check(cx)
    return {
        "model": model.name,
        "arity": m,
        "flavor": flavor,
        "counts": {str(k): v for k, v in cx.counts().items()},
        "euler": cx.euler(),
        "stratified_euler": stratified_euler(model, m, flavor) if flavor else None,
        "recognized": rec.to_json(),
        "free": not wit,
        "fixed_cells": len(wit),
    }


@stratlab_group.command("boundary")
@click.option("--model", "model_spec", default="interval", show_default=True, help="Builtin name or JSON file.")
@click.option("--arity", type=click.IntRange(min=2), required=True)
@click.option("--flavor", type=click.Choice(FLAVORS), default="bimoduleBoundary", show_default=True)
@click.option("--color", type=click.Choice(["R", "B"]), default="R", help="Operad color for the operad flavor.")
@click.option("--fill", "fill", type=int, multiple=True, help="Cone-fill W in this arity first (repeatable).")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table")
def cmd_boundary(model_spec, arity, flavor, color, fill, fmt) -> None:
    """Boundary colimit of a model in one arity."""
    M = _load_model(model_spec)
    try:
        for k in sorted(fill):
            M = M.replace({("W", k): cone_fill(boundary_colimit(M, k))}, f"{M.name}+fill{k}")
        cx = boundary_colimit(M, arity, flavor, color)
    except (ModelError, KeyError, ValueError) as exc:
        raise click.UsageError(str(exc))
    if fmt == "dot":
        click.echo(cx.to_dot())
        return
    rep = _complex_report(cx, M, arity, flavor)
    if fmt == "json":
        rep["complex"] = cx.to_json()
        _emit(rep, "json")
    else:
        rows = [(k, json.dumps(v, sort_keys=True)) for k, v in rep.items()]
        _emit(None, "table", rows)


@stratlab_group.command("validate")
@click.option("--model", "model_spec", default="interval", show_default=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS[:2]), default="table")
def cmd_validate(model_spec, fmt) -> None:
    """Check every invariant of a cell model."""
    M = _load_model(model_spec)
    bad = validate_model(M)
    if fmt == "json":
        _emit({"model": M.name, "ok": not bad, "violations": [v.to_json() for v in bad]}, "json")
    else:
        rows = [("code", "where", "detail")] + [(v.code, v.where, v.detail) for v in bad]
        _emit(None, "table", rows if bad else [("ok", M.name)])
    if bad:
        sys.exit(1)


@stratlab_group.command("extend")
@click.option("--model", "model_spec", default="trivial", show_default=True)
@click.option("--side", type=click.Choice(["left", "right"]), default="right", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the extended model as JSON.")
@click.option("--format", "fmt", type=click.Choice(FORMATS[:2]), default="table")
def cmd_extend(model_spec, side, output, fmt) -> None:
    """Extend a truncated bimodule by one arity."""
    M = _load_model(model_spec)
    try:
        res = extend(M, side)
    except ModelError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if output:
        Path(output).write_text(json.dumps(res.model.to_json(), sort_keys=True))
    rep = res.summary()
    rep["operad_recognized"] = recognize(res.operad).to_json()
    rep["bimodule_recognized"] = recognize(res.bimodule).to_json()
    bad = validate_model(res.model, max_arity=res.arity)
    rep["valid"] = not bad
    if fmt == "json":
        _emit(rep, "json")
    else:
        _emit(None, "table", [(k, json.dumps(v, sort_keys=True, default=str)) for k, v in rep.items()])
    if bad:
        sys.exit(1)


@stratlab_group.command("export")
@click.option("--model", "model_spec", default="interval", show_default=True)
def cmd_export(model_spec) -> None:
    """Print a model as JSON."""
    _emit(_load_model(model_spec).to_json(), "json")


def _example(name: str, fmt: str) -> None:
    try:
        rep = run_example(name)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        _emit(rep, "json")
    else:
        rows = [("quantity", "expected", "computed", "match")]
        for k, v in rep["expected"].items():
            got = rep["computed"].get(k)
            rows.append((k, json.dumps(v), json.dumps(got), "yes" if got == v else "NO"))
        _emit(None, "table", rows)
    if not rep["ok"]:
        sys.exit(1)


_EXAMPLE_NAMES = sorted(EXAMPLES) + ["fm1"]


@stratlab_group.command("example")
@click.argument("name", type=click.Choice(_EXAMPLE_NAMES))
@click.option("--format", "fmt", type=click.Choice(FORMATS[:2]), default="table")
def cmd_stratlab_example(name, fmt) -> None:
    """Reproduce a worked example, expected against computed."""
    _example("fm1-pentagons" if name == "fm1" else name, fmt)


@main.command("example")
@click.argument("name", type=click.Choice(_EXAMPLE_NAMES))
@click.option("--format", "fmt", type=click.Choice(FORMATS[:2]), default="table")
def cmd_example(name, fmt) -> None:
    """Reproduce a worked example, expected against computed."""
    _example("fm1-pentagons" if name == "fm1" else name, fmt)


# report ------------------------------------------------------------------------------------------


@main.command("report")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="report", show_default=True)
@click.option("--labels-max", type=click.IntRange(min=2, max=4), default=3, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def cmd_report(out_dir, labels_max, workers) -> None:
    """Write a TSV summary and figures for the examples and sweeps."""
    from . import report

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, figures = report.build(out, labels_max=labels_max, workers=workers)
    with open(out / "summary.tsv", "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t")
        w.writerow(("section", "item", "expected", "computed", "match"))
        w.writerows(rows)
    click.echo("----- BEGIN REPORT -----")
    for r in rows:
        click.echo("\t".join(str(x) for x in r))
    click.echo("----- END REPORT -----")
    for f in figures:
        click.echo(f"figure\t{f}")
    mismatches = Counter(r[0] for r in rows if r[4] == "no")
    if mismatches:
        click.echo(f"mismatches: {dict(mismatches)}", err=True)


if __name__ == "__main__":
    main()
