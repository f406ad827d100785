"""``hilsup`` command line.

Exit status: 0 when everything passes, 1 when a verification check fails,
2 for usage errors and size-guard refusals.
"""

from __future__ import annotations

import contextlib
import csv
import functools
import io
import json
import os
import sys
from dataclasses import dataclass

import click

from . import algebra as alg
from .dedsys import classify_all
from .free import DEFAULT_MAX_ELEMENTS, build_free, canonical_subset, cardinality_checks, gstar
from .io import dumps_algebra, load_algebra, save_algebra, save_free
from .reports import count_report
from .verify import SUITES, run_suites

FORMATS = ("text", "json", "csv")


@dataclass
class RunConfig:
    fmt: str = "text"
    size_guard: int | None = None

    @property
    def max_elements(self) -> int:
        return self.size_guard if self.size_guard is not None else DEFAULT_MAX_ELEMENTS


def parse_range(text: str) -> list[int]:
    """``"2"``, ``"1-3"`` or ``"1,2,4"`` (and mixtures) as a sorted list of positive ints."""
    out: set[int] = set()
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            a = int(lo)
            b = int(hi) if sep else a
        except ValueError:
            raise click.BadParameter(f"not an integer range: {text!r}") from None
        if a < 1 or b < a:
            raise click.BadParameter(f"range must be non-empty with values >= 1: {text!r}")
        out.update(range(a, b + 1))
    if not out:
        raise click.BadParameter(f"empty range: {text!r}")
    return sorted(out)


class Range(click.ParamType):
    name = "range"

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return parse_range(value)
        except click.BadParameter as exc:
            self.fail(exc.message, param, ctx)


RANGE = Range()


def _guarded(fn):
    """Map size-guard refusals to exit status 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except alg.SizeGuardError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@contextlib.contextmanager
def _env_guard(value: int):
    """Expose ``--size-guard`` to the library for the duration of one command."""
    old = os.environ.get("HILSUP_SIZE_GUARD")
    os.environ["HILSUP_SIZE_GUARD"] = str(value)
    try:
        yield
    finally:
        if old is None:
            del os.environ["HILSUP_SIZE_GUARD"]
        else:
            os.environ["HILSUP_SIZE_GUARD"] = old


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else ("" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


@click.group()
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)
@click.option("--size-guard", type=click.IntRange(min=1), default=None, help="Carrier cap (default: HILSUP_SIZE_GUARD or built-in).")
@click.pass_context
def main(ctx, fmt, size_guard):
    """Finite Hilbert algebras with supremum: chains, free algebras, counts."""
    if size_guard is not None:
        ctx.with_resource(_env_guard(size_guard))
    elif "HILSUP_SIZE_GUARD" in os.environ:
        try:
            size_guard = alg.size_guard()
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
    ctx.obj = RunConfig(fmt, size_guard)


@main.command()
@click.argument("q", type=int)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout.")
def chain(q, out):
    """Write the chain J_{Q+1} as an algebra file."""
    if q < 1:
        raise click.BadParameter("Q must be >= 1", param_hint="Q")
    C = alg.make_chain(q)
    if out is None:
        click.echo(dumps_algebra(C), nl=False)
    else:
        try:
            save_algebra(C, out)
        except OSError as exc:
            raise click.FileError(out, hint=str(exc)) from None
        click.echo(f"wrote {out} size={C.size}")


def _free_summary(F) -> dict:
    filters = {k: gstar(F, canonical_subset(k)) for k in range(1, F.r + 1)}
    card = cardinality_checks(F, filters)
    return {
        "n": F.n,
        "r": F.r,
        "size": F.size,
        "alpha": {str(k): {str(p): g.alpha[p] for p in sorted(g.alpha)} for k, g in filters.items()},
        "m_k": {str(k): g.m_k for k, g in filters.items()},
        "cardinality": {
            "inclusion_exclusion": card.inclusion_exclusion,
            "binomial": card.binomial,
            "alpha_product": card.alpha_product,
            "agree": card.ok,
        },
    }


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--r", "r", type=click.IntRange(min=1), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Algebra file; the header goes next to it.")
@click.option("--allow-large", is_flag=True, help="Lift the desk-scale limit on n and r.")
@click.pass_obj
@_guarded
def free(cfg: RunConfig, n, r, out, allow_large):
    """Build Free_{n+1}(r) and summarise alpha, m_k and the cardinality forms."""
    F = build_free(n, r, allow_large=allow_large, max_elements=cfg.max_elements)
    summary = _free_summary(F)
    if out is not None:
        try:
            path, side = save_free(F, out)
        except OSError as exc:
            raise click.FileError(out, hint=str(exc)) from None
        summary["files"] = [str(path), str(side)]
    if cfg.fmt == "json":
        click.echo(_json(summary), nl=False)
    elif cfg.fmt == "csv":
        rows = [
            {"k": int(k), "p": int(p), "alpha": a, "m_k": summary["m_k"][k]}
            for k, per in summary["alpha"].items()
            for p, a in per.items()
        ]
        click.echo(_csv(rows), nl=False)
    else:
        c = summary["cardinality"]
        click.echo(f"size={F.size}")
        for k in range(1, r + 1):
            per = summary["alpha"][str(k)]
            click.echo(f"k={k} m_k={summary['m_k'][str(k)]} alpha " + " ".join(f"p={p}:{a}" for p, a in per.items()))
        click.echo(
            f"cardinality inclusion_exclusion={c['inclusion_exclusion']} binomial={c['binomial']} "
            f"alpha_product={c['alpha_product']} agree={'yes' if c['agree'] else 'no'}"
        )
        for f in summary.get("files", []):
            click.echo(f"wrote {f}")


@main.command()
@click.argument("path", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--chain", "q", type=click.IntRange(min=1), default=None, help="Use J_{q+1}.")
@click.option("--n", "n", type=click.IntRange(min=1), default=None)
@click.option("--r", "r", type=click.IntRange(min=1), default=None)
@click.pass_obj
@_guarded
def dedsys(cfg: RunConfig, path, q, n, r):
    """Classify every deductive system of an algebra file, a chain, or a free algebra."""
    sources = (path is not None) + (q is not None) + (n is not None or r is not None)
    if sources != 1:
        raise click.UsageError("give exactly one of PATH, --chain Q, or --n N --r R")
    if path is not None:
        A = load_algebra(path)
    elif q is not None:
        A = alg.make_chain(q)
    else:
        if n is None or r is None:
            raise click.UsageError("--n and --r go together")
        A = build_free(n, r, max_elements=cfg.max_elements).algebra
    rows = [c.row() for c in classify_all(A, limit=cfg.size_guard)]
    if cfg.fmt == "json":
        click.echo(_json({"size": A.size, "deductive_systems": rows}), nl=False)
    elif cfg.fmt == "csv":
        click.echo(_csv(rows), nl=False)
    else:
        click.echo(f"size={A.size} deductive_systems={len(rows)}")
        for row in rows:
            tags = [t for t in ("irreducible", "fully_irreducible", "prime", "minimal_in_E") if row[t]]
            val = "" if row["valued_p"] is None else f" p={row['valued_p']}"
            click.echo(f"{row['members']}{val} {' '.join(tags)}".rstrip())


def _reports(ns, rs):
    for n in ns:
        for r in rs:
            yield count_report(n, r)


@main.command()
@click.option("--n", "ns", type=RANGE, required=True, help="e.g. 1, 1-2 or 1,3")
@click.option("--r", "rs", type=RANGE, required=True)
@click.pass_obj
@_guarded
def counts(cfg: RunConfig, ns, rs):
    """alpha/eta table per (n, r), with closed forms next to the enumeration."""
    reps = list(_reports(ns, rs))
    if cfg.fmt == "json":
        click.echo(_json([x.to_dict() for x in reps]), nl=False)
    elif cfg.fmt == "csv":
        body = [x.to_csv().split("\n", 1) for x in reps]
        click.echo(body[0][0] + "\n" + "".join(b for _, b in body), nl=False)
    else:
        click.echo("\n".join(x.to_text() for x in reps), nl=False)


@main.command()
@click.option("--n", "ns", type=RANGE, required=True)
@click.option("--r", "rs", type=RANGE, required=True)
@click.pass_obj
@_guarded
def bound(cfg: RunConfig, ns, rs):
    """Alternating upper bound against the exact cardinality."""
    reps = list(_reports(ns, rs))
    rows = [
        {
            "n": x.n,
            "r": x.r,
            "bound": x.upper_bound,
            "exact": x.cardinality_exact,
            "holds": x.bound_holds,
            "bound_literal": x.upper_bound_literal,
        }
        for x in reps
    ]
    if cfg.fmt == "json":
        click.echo(_json(rows), nl=False)
    elif cfg.fmt == "csv":
        click.echo(_csv(rows), nl=False)
    else:
        for x in reps:
            click.echo(f"n={x.n} r={x.r} {x.bound_line()}")


@main.command()
@click.option("--n", "ns", type=RANGE, required=True)
@click.option("--r", "rs", type=RANGE, required=True)
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITES + ("all",)), default=("all",), show_default=True)
@click.pass_obj
@_guarded
def verify(cfg: RunConfig, ns, rs, suites):
    """Run verification suites; exit 1 if any check fails."""
    results = []
    for n in ns:
        for r in rs:
            F = build_free(n, r, max_elements=cfg.max_elements)
            for res in run_suites(n, r, suites, F=F):
                results.append(((n, r), res))
    failed = sum(res.status == "fail" for _, res in results)
    if cfg.fmt == "json":
        click.echo(_json([{"n": n, "r": r, **res.to_dict()} for (n, r), res in results]), nl=False)
    elif cfg.fmt == "csv":
        click.echo(_csv([{"n": n, "r": r, **res.to_dict()} for (n, r), res in results]), nl=False)
    else:
        for (n, r), res in results:
            click.echo(f"n={n} r={r} {res.line()}")
        passed = sum(res.status == "pass" for _, res in results)
        notes = sum(res.status == "note" for _, res in results)
        click.echo(f"summary: {passed} passed, {failed} failed, {notes} notes")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
