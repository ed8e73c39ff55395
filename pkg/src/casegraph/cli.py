"""Command-line entry points: ingest, update, serve, report build/export."""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from . import ingest as ingest_mod, report as report_mod
from .errors import CasegraphError
from .service import ServiceConfig, run
from .store import CaseStore


def _store(data_root: str | None) -> CaseStore:
    root = data_root or os.environ.get("CASEGRAPH_DATA_ROOT")
    if not root:
        raise click.UsageError("set --data-root or CASEGRAPH_DATA_ROOT")
    return CaseStore(Path(root))


@click.group()
def main():
    """Provenance-tracked investigation-graph engine."""


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--data-root", help="store directory (default: $CASEGRAPH_DATA_ROOT)")
def ingest(file, data_root):
    """Load a central-database dataset file."""
    try:
        dsid = ingest_mod.load_dataset(_store(data_root), file)
    except CasegraphError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    click.echo(f"loaded dataset {dsid}")


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--data-root", help="store directory (default: $CASEGRAPH_DATA_ROOT)")
def update(file, data_root):
    """Apply an evidence update delta and flag affected states."""
    import json

    store = _store(data_root)
    try:
        delta = json.loads(Path(file).read_text())
        result = ingest_mod.apply_update(store, delta)
    except CasegraphError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    click.echo(f"dataset {result.dataset_id} now at version {result.new_version}")
    for doc_id, states in sorted(result.affected_states.items()):
        click.echo(f"  {doc_id}: {len(states)} state(s) flagged stale")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="service config JSON")
@click.option("--data-root", help="store directory override")
@click.option("--listen", help="host:port to bind")
def serve(config_path, data_root, listen):
    """Run the HTTP JSON API."""
    config = ServiceConfig.from_file(config_path) if config_path else ServiceConfig()
    if data_root:
        config.data_root = data_root
    if listen:
        config.listen_address = listen
    try:
        run(config)
    except CasegraphError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")


@main.group()
def report():
    """Build and export final reports."""


@report.command("build")
@click.option("--doc", "doc_id", required=True, help="document id")
@click.option("--state", "states", multiple=True, required=True,
              help="flagged state id (repeatable; order = section order)")
@click.option("--description", "descriptions", multiple=True,
              help="section description, one per --state")
@click.option("--title", default="Investigation report")
@click.option("--author", required=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--data-root", help="store directory (default: $CASEGRAPH_DATA_ROOT)")
def report_build(doc_id, states, descriptions, title, author, out, data_root):
    """Assemble flagged analysis states into a report JSON file."""
    store = _store(data_root)
    descs = list(descriptions) + [""] * (len(states) - len(descriptions))
    try:
        doc = store.document(doc_id)
        rep = report_mod.build_report(doc, list(zip(states, descs)), title, author)
    except CasegraphError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    Path(out).write_bytes(report_mod.export_report(rep, "json"))
    click.echo(f"report {rep.id} written to {out}")


@report.command("export")
@click.option("--report", "report_path", required=True, type=click.Path(exists=True),
              help="report JSON produced by 'report build'")
@click.option("--format", "fmt", default="html", show_default=True)
@click.option("--out", type=click.Path(), help="output file (default: stdout)")
def report_export(report_path, fmt, out):
    """Render a built report to another format."""
    try:
        rep = report_mod.import_report(Path(report_path).read_bytes())
        data = report_mod.export_report(rep, fmt)
    except CasegraphError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    if out:
        Path(out).write_bytes(data)
        click.echo(f"wrote {out}")
    else:
        sys.stdout.buffer.write(data)


if __name__ == "__main__":
    main()
