"""Command line shell: validate, query, generate, report, serve.

Exit codes: 0 success, 1 data errors (violations, parse failures), 2 usage.
COMPASS_DATA supplies the default data file; COMPASS_PORT the default port.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import report as report_mod
from .fixture import fixture
from .ontology import build_compass_schema
from .query import QueryError, evaluate, parse_query
from .store import TripleStore
from .synth import GenConfig, generate
from .turtle import TurtleParseError
from .validator import explain, validate


def _load(path: str) -> TripleStore:
    store = TripleStore()
    if path == "fixture":
        return fixture()
    try:
        store.load_text(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise click.ClickException(f"cannot read {path}: {exc}")
    except TurtleParseError as exc:
        raise click.ClickException(f"parse error in {path}: {exc}")
    return store


_data_argument = click.argument("data", envvar="COMPASS_DATA", type=str)


@click.group()
def main():
    """Knowledge-graph engine and coverage reporting for social services.

    DATA arguments accept a Turtle file path or the word 'fixture' for the
    bundled dataset.
    """


@main.command(name="validate")
@_data_argument
def validate_cmd(data):
    """Check DATA against the schema; nonzero exit iff violations exist."""
    store = _load(data)
    violations = validate(store, build_compass_schema())
    for v in violations:
        click.echo(explain(v))
    click.echo(f"{len(violations)} violations")
    if violations:
        sys.exit(1)


@main.command()
@_data_argument
@click.argument("queryfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "table"]), default="csv")
def query(data, queryfile, fmt):
    """Run a query file against DATA and print the solution table."""
    store = _load(data)
    text = Path(queryfile).read_text(encoding="utf-8")
    try:
        ast = parse_query(text, store.prefixes)
    except QueryError as exc:
        raise click.ClickException(str(exc))
    table = evaluate(store, build_compass_schema(), ast)
    rendered = [
        [cell.n3(store.prefixes) if cell is not None else "" for cell in row]
        for row in table.rows
    ]
    if fmt == "csv":
        click.echo(report_mod.to_csv([list(table.columns)] + rendered), nl=False)
    else:
        widths = [
            max(len(col), *(len(r[i]) for r in rendered)) if rendered else len(col)
            for i, col in enumerate(table.columns)
        ]
        click.echo("  ".join(c.ljust(w) for c, w in zip(table.columns, widths)))
        for row in rendered:
            click.echo("  ".join(c.ljust(w) for c, w in zip(row, widths)))


@main.command()
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--clients", type=int, default=20, show_default=True)
@click.option("--services", type=int, default=6, show_default=True)
@click.option("--events", type=int, default=30, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def gen(seed, clients, services, events, output):
    """Generate a deterministic synthetic dataset."""
    try:
        config = GenConfig(
            seed=seed, client_count=clients, service_count=services, event_count=events
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    store = generate(config)
    Path(output).write_text(store.serialize(), encoding="utf-8")
    click.echo(f"wrote {len(store)} triples to {output}")


@main.command()
@click.argument("kind", type=click.Choice(["gaps", "demographics"]))
@_data_argument
@click.option("-o", "--outdir", type=click.Path(file_okay=False), default="reports",
              show_default=True, help="Where the CSV and PNG files land.")
def report(kind, data, outdir):
    """Write a coverage report: CSV rows plus a rendered figure."""
    store = _load(data)
    schema = build_compass_schema()
    out = Path(outdir)
    if kind == "demographics":
        paths = report_mod.write_demographics_report(store, schema, out)
        click.echo(report_mod.to_csv(report_mod.demographics_rows(store, schema)), nl=False)
    else:
        paths = report_mod.write_gaps_report(store, schema, out)
        gap_rows, dup_rows = report_mod.gaps_rows(store, schema)
        click.echo(report_mod.to_csv(gap_rows), nl=False)
        click.echo(report_mod.to_csv(dup_rows), nl=False)
    for p in paths:
        click.echo(f"wrote {p}")


_QUESTIONS = (
    "matches",
    "eligibility",
    "referrals",
    "privacy",
    "duration",
    "alternatives",
    "services",
    "demographics",
    "gaps",
    "barriers",
)


@main.command()
@click.argument("question", type=click.Choice(_QUESTIONS))
@_data_argument
@click.option("--client", help="Client IRI or prefixed name.")
@click.option("--service", help="Service IRI (privacy).")
@click.option("--satisfier", help="Need satisfier IRI (alternatives).")
@click.option("--profile", help="Requirement profile IRI (alternatives).")
@click.option("--exclude", default="", help="Comma-separated services to exclude.")
@click.option("--code", help="Service code IRI (duration, barriers).")
@click.option("--code-class", help="Code class IRI filter (services).")
@click.option("--location", help="Location IRI filter (services).")
def ask(question, data, client, service, satisfier, profile, exclude, code, code_class, location):
    """Answer one coverage question as JSON; mirrors the HTTP API payloads."""
    import json

    from . import competency
    from .namespaces import expand_name
    from .server import (
        barrier_json,
        coverage_json,
        demographics_json,
        match_json,
        term_json,
    )
    from .store import iri

    store = _load(data)
    schema = build_compass_schema()

    def node(name, option):
        if not name:
            raise click.UsageError(f"--{option} is required for '{question}'")
        try:
            return iri(expand_name(name, store.prefixes))
        except (KeyError, ValueError) as exc:
            raise click.ClickException(str(exc))

    try:
        if question == "matches":
            out = {
                "matches": [
                    match_json(store, m)
                    for m in competency.services_matching_needs(store, schema, node(client, "client"))
                ]
            }
        elif question == "eligibility":
            eligible, barriers = competency.eligibility_and_barriers(
                store, schema, node(client, "client")
            )
            out = {
                "eligible": [match_json(store, m) for m in eligible],
                "barriers": [barrier_json(store, b) for b in barriers],
            }
        elif question == "referrals":
            out = {
                "services": [
                    match_json(store, m)
                    for m in competency.referral_options(store, schema, node(client, "client"))
                ]
            }
        elif question == "privacy":
            out = {
                "codes": [
                    term_json(c, store.prefixes)
                    for c in competency.privacy_requirements(store, schema, node(service, "service"))
                ]
            }
        elif question == "duration":
            report = competency.service_duration_detail(
                store, schema, node(client, "client"), node(code, "code")
            )
            out = {
                "weeks": report.weeks,
                "skippedEvents": [term_json(e, store.prefixes) for e in report.skipped_events],
            }
        elif question == "alternatives":
            excluded = {
                iri(expand_name(e.strip(), store.prefixes))
                for e in exclude.split(",")
                if e.strip()
            }
            out = {
                "services": [
                    match_json(store, m)
                    for m in competency.alternative_services(
                        store, schema, node(satisfier, "satisfier"), node(profile, "profile"), excluded
                    )
                ]
            }
        elif question == "services":
            out = {
                "services": [
                    match_json(store, m)
                    for m in competency.list_services(
                        store,
                        schema,
                        node(code_class, "code-class") if code_class else None,
                        node(location, "location") if location else None,
                    )
                ]
            }
        elif question == "demographics":
            out = {"rows": demographics_json(store, competency.priority_demographics(store, schema))}
        elif question == "gaps":
            out = coverage_json(store, competency.gaps_and_duplicates(store, schema))
        else:  # barriers
            rows = competency.barrier_aggregate(store, schema, node(code, "code"))
            out = {
                "rows": [
                    {"characteristic": term_json(ch, store.prefixes), "count": n} for ch, n in rows
                ]
            }
    except competency.UnknownEntityError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(out, indent=2))


@main.command()
@_data_argument
@click.option("--port", type=int, envvar="COMPASS_PORT", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(data, port, host):
    """Serve the HTTP API over DATA."""
    from .server import create_app

    if data == "fixture":
        app = create_app(store=fixture())
    else:
        try:
            app = create_app(str(data))
        except (OSError, TurtleParseError) as exc:
            raise click.ClickException(f"cannot load {data}: {exc}")
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
