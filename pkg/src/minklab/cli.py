"""Command-line client for the report builders.

Subcommands mirror the service endpoints one to one.  By default the
reports run in-process; with --server the same payload is POSTed to a
running service instance instead.  Inputs are file paths in the
documented formats, or builtin names from the registry.

Exit codes: 0 if every verdict passed, 1 on a verdict failure, 2 on a
parse or precondition error.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Optional

import click

from . import reports
from .errors import InputError

_ENDPOINTS = {
    "det2": ("/det2", reports.det2_report),
    "cup-form": ("/cup-form", reports.cup_form_report),
    "graph-basis": ("/graph-basis", reports.graph_basis_report),
    "minima": ("/minima", reports.minima_report),
    "pairing": ("/pairing", reports.pairing_report),
    "count": ("/count", reports.count_report),
    "verify-stab": ("/verify-stab", reports.verify_stab_report),
}


def _fail_input(message: str) -> None:
    click.echo(json.dumps({"error": message}, sort_keys=True), err=True)
    sys.exit(reports.EXIT_INPUT_ERROR)


def _dispatch(command: str, payload: dict, server: Optional[str], plain: bool) -> None:
    path, builder = _ENDPOINTS[command]
    if server is None:
        try:
            report = builder(**payload)
        except InputError as exc:
            _fail_input(str(exc))
    else:
        import httpx

        response = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            _fail_input(f"HTTP {response.status_code}: {detail}")
        report = response.json()
    _emit(report, plain)
    sys.exit(reports.EXIT_PASS if report["passed"] else reports.EXIT_FAIL)


def _emit(report: dict, plain: bool) -> None:
    if not plain:
        click.echo(json.dumps(report, sort_keys=True, indent=2))
        return
    click.echo(f"command: {report['command']}")
    click.echo(f"input:   sha256:{report['input_digest'][:16]}…")
    for key, value in sorted(report["results"].items()):
        click.echo(f"  {key}: {json.dumps(value, sort_keys=True)}")
    for name, ok in sorted(report["verdicts"].items()):
        click.echo(f"  [{'PASS' if ok else 'FAIL'}] {name}")
    click.echo("passed" if report["passed"] else "FAILED")


def _read_source(source: str) -> tuple[Optional[str], Optional[str]]:
    """A source is a file path if it exists, otherwise a builtin name."""
    if os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            return fh.read(), None
    return None, source


@click.group()
def main() -> None:
    """Invariants, hypothesis tests, and certified bounds."""


_server_option = click.option("--server", default=None, help="Base URL of a running service.")
_plain_option = click.option("--plain", is_flag=True, help="Human-readable output instead of JSON.")


@main.command("det2")
@click.argument("source")
@click.option("--invariant", type=click.Path(exists=True), default=None,
              help="Balanced-invariant term-set file to evaluate alongside.")
@_server_option
@_plain_option
def det2_cmd(source, invariant, server, plain):
    """Determinant mod 2 of a tensor file (or builtin tensor name)."""
    text, builtin = _read_source(source)
    invariant_text = None
    if invariant is not None:
        with open(invariant, "r", encoding="utf-8") as fh:
            invariant_text = fh.read()
    _dispatch(
        "det2",
        {"tensor_text": text, "builtin": builtin, "invariant_text": invariant_text},
        server,
        plain,
    )


@main.command("cup-form")
@click.argument("source")
@_server_option
@_plain_option
def cup_form_cmd(source, server, plain):
    """Cup-product form and hypothesis bit of a complex file or builtin."""
    text, builtin = _read_source(source)
    _dispatch("cup-form", {"complex_text": text, "builtin": builtin}, server, plain)


@main.command("graph-basis")
@click.argument("source")
@click.option("--oracle", is_flag=True, help="Also run the exhaustive successive-minima oracle.")
@_server_option
@_plain_option
def graph_basis_cmd(source, oracle, server, plain):
    """Greedy cycle-basis certificate for a metric graph file."""
    text, builtin = _read_source(source)
    if text is None:
        _fail_input(f"graph file not found: {source}")
    _dispatch("graph-basis", {"graph_text": text, "oracle": oracle}, server, plain)


@main.command("minima")
@click.argument("source")
@click.option("--seed", type=int, default=None, help="Seed for Monte Carlo volume.")
@click.option("--samples", type=int, default=1_000_000, show_default=True)
@click.option("--tolerance", type=float, default=None,
              help="Override the derived Minkowski-ratio tolerance.")
@_server_option
@_plain_option
def minima_cmd(source, seed, samples, tolerance, server, plain):
    """Successive minima and Minkowski checks for a body file or builtin."""
    text, builtin = _read_source(source)
    _dispatch(
        "minima",
        {
            "body_json": text,
            "builtin": builtin,
            "seed": seed,
            "samples": samples,
            "tolerance": tolerance,
        },
        server,
        plain,
    )


@main.command("pairing")
@click.argument("source")
@_server_option
@_plain_option
def pairing_cmd(source, server, plain):
    """Pairing permutation for an alternating form file or builtin."""
    text, builtin = _read_source(source)
    _dispatch("pairing", {"form_text": text, "builtin": builtin}, server, plain)


@main.command("count")
@click.argument("source")
@click.argument("t", type=float)
@_server_option
@_plain_option
def count_cmd(source, t, server, plain):
    """Count nonzero lattice vectors of norm at most T."""
    text, builtin = _read_source(source)
    _dispatch("count", {"body_json": text, "builtin": builtin, "t": t}, server, plain)


@main.command("verify-stab")
@click.argument("source")
@click.option("--vectors", type=click.Path(exists=True), default=None,
              help="File with one integer vector per line; defaults to the minima vectors.")
@_server_option
@_plain_option
def verify_stab_cmd(source, vectors, server, plain):
    """Flat-torus asymptotic identity and stable-ball length bound."""
    text, builtin = _read_source(source)
    vecs = None
    if vectors is not None:
        vecs = []
        with open(vectors, "r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    vecs.append([int(tok) for tok in line.split()])
    _dispatch(
        "verify-stab",
        {"body_json": text, "builtin": builtin, "vectors": vecs},
        server,
        plain,
    )


@main.command("builtins")
def builtins_cmd():
    """List the named fixtures available in place of input files."""
    click.echo(json.dumps(reports.builtins_report()["results"], sort_keys=True, indent=2))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_cmd(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
