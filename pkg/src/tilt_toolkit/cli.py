"""Single command-line entry point for the whole toolkit.

One binary with nested subcommands keeps the pieces discoverable:
``tilt`` for document work, ``hub`` for the store and its server,
``score`` for privacy scoring, ``dsar`` for access-request automation,
and ``archive`` for export analysis. Exit codes are shared across the
suite: 0 success, 1 validation or completeness failure, 2 I/O failure,
3 DSAR execution failure, 64 usage error. ``--json`` output is
canonical, so identical invocations over identical inputs emit
byte-identical text; errors go to the error stream prefixed with the
module's stable error name.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any, Sequence

import click

from . import archive as archive_mod
from . import dsar as dsar_mod
from . import hub as hub_mod
from . import scoring
from .core import (
    canonical_json,
    check_completeness,
    codec,
    diffing,
)
from .core.completeness import report_to_tree as completeness_tree
from .errors import (
    IoError,
    NotFoundError,
    TiltSyntaxError,
    ToolkitError,
    UnknownCommandError,
    ValidationError,
)

__all__ = ["main", "run"]


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text("utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _load_tree(path: str) -> Any:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise TiltSyntaxError(exc.msg, exc.lineno, exc.colno) from exc


def _emit_json(tree: Any) -> None:
    click.echo(canonical_json(tree))


@click.group(name="tilt-toolkit")
def cli() -> None:
    """Transparency documents, hub, scoring, DSAR runs, and archives."""


# --- tilt: document work ---------------------------------------------------


@cli.group()
def tilt() -> None:
    """Parse, check, diff, and hash transparency documents."""


@tilt.command("validate")
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def tilt_validate(file: str, as_json: bool) -> None:
    """Parse FILE and verify every schema rule."""
    doc = codec.parse(_read_text(file))
    doc = codec.with_hash(doc)
    if as_json:
        _emit_json(
            {
                "ok": True,
                "id": doc.meta.id,
                "version": doc.meta.version,
                "hash": doc.meta.hash,
            }
        )
    else:
        click.echo(f"ok {doc.meta.id} version {doc.meta.version}")


@tilt.command("completeness")
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="machine output")
@click.pass_context
def tilt_completeness(ctx: click.Context, file: str, as_json: bool) -> None:
    """Check FILE against the mandatory-disclosure checklist."""
    doc = codec.parse(_read_text(file))
    report = check_completeness(doc)
    if as_json:
        _emit_json(completeness_tree(report))
    else:
        for item in report.items:
            suffix = f"  {item.evidence_path}" if item.evidence_path else ""
            click.echo(f"{item.key} {item.status}{suffix}")
        click.echo(f"missing {len(report.missing())}")
    if report.missing():
        ctx.exit(1)


@tilt.command("diff")
@click.argument("old")
@click.argument("new")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def tilt_diff(old: str, new: str, as_json: bool) -> None:
    """Structural changes from OLD to NEW."""
    delta = diffing.diff(codec.parse(_read_text(old)), codec.parse(_read_text(new)))
    if as_json:
        _emit_json(diffing.diff_to_tree(delta))
    else:
        for entry in delta.entries:
            click.echo(f"{entry.op} {entry.path}")
        click.echo(f"entries {len(delta.entries)}")


@tilt.command("hash")
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def tilt_hash(file: str, as_json: bool) -> None:
    """Content hash of FILE's canonical form."""
    digest = codec.compute_hash(codec.parse(_read_text(file)))
    if as_json:
        _emit_json({"hash": digest})
    else:
        click.echo(digest)


# --- hub: store and server -------------------------------------------------


@cli.group()
def hub() -> None:
    """Versioned document store, served or operated in place."""


@hub.command("serve")
@click.option("--port", type=int, default=None, help="listen port")
@click.option("--data-dir", default=None, help="store directory")
@click.option("--ui-dir", default=None, help="static assets mounted at /ui")
def hub_serve(port: int | None, data_dir: str | None, ui_dir: str | None) -> None:
    """Run the REST service (flag beats environment beats default)."""
    hub_mod.serve(hub_mod.resolve_config(port=port, data_dir=data_dir, ui_dir=ui_dir))


@hub.command("put")
@click.argument("file")
@click.option("--data-dir", default=None, help="store directory")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def hub_put(file: str, data_dir: str | None, as_json: bool) -> None:
    """Store FILE as the next version of its document."""
    config = hub_mod.resolve_config(data_dir=data_dir)
    store = hub_mod.DocumentStore(Path(config.data_dir))
    doc = codec.parse(_read_text(file))
    etag = store.put(doc)
    if as_json:
        _emit_json({"id": doc.meta.id, "version": doc.meta.version, "etag": etag})
    else:
        click.echo(f"stored {doc.meta.id} version {doc.meta.version} {etag}")


@hub.command("get")
@click.argument("doc_id")
@click.option("--version", type=int, default=None, help="specific version")
@click.option("--data-dir", default=None, help="store directory")
@click.option("--json", "as_json", is_flag=True, help="canonical document text")
def hub_get(doc_id: str, version: int | None, data_dir: str | None, as_json: bool) -> None:
    """Print a stored document (latest version by default)."""
    config = hub_mod.resolve_config(data_dir=data_dir)
    store = hub_mod.DocumentStore(Path(config.data_dir))
    record = store.fetch(doc_id, version)
    tree = codec.document_to_tree(record.doc)
    if as_json:
        _emit_json(tree)
    else:
        click.echo(json.dumps(tree, indent=2, ensure_ascii=False))


@hub.command("query")
@click.argument("filter_text", metavar="FILTER")
@click.option("--data-dir", default=None, help="store directory")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def hub_query(filter_text: str, data_dir: str | None, as_json: bool) -> None:
    """Latest versions matching FILTER (``path op value && ...``)."""
    config = hub_mod.resolve_config(data_dir=data_dir)
    store = hub_mod.DocumentStore(Path(config.data_dir))
    results = hub_mod.scan_documents(store, filter_text)
    if as_json:
        _emit_json(results)
    else:
        for match in results:
            click.echo(f"{match['id']} version {match['version']}")
        click.echo(f"matches {len(results)}")


# --- score -------------------------------------------------------------


@cli.command("score")
@click.argument("file")
@click.option("--signals", "signals_path", required=True, help="signals file keyed by domain")
@click.option("--domain", default=None, help="domain to pick from the signals file")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def score_cmd(file: str, signals_path: str, domain: str | None, as_json: bool) -> None:
    """Score FILE using external signals for one domain."""
    doc = codec.parse(_read_text(file))
    table = _load_tree(signals_path)
    if not isinstance(table, dict):
        raise ValidationError("signals file must map domains to signal records", "")
    if domain is None:
        if len(table) != 1:
            raise ValidationError(
                f"signals file names {len(table)} domains; pass --domain", ""
            )
        domain = next(iter(table))
    if domain not in table:
        raise NotFoundError(f"no signals for domain {domain}")
    signals = scoring.signals_from_tree(table[domain], domain)
    report = scoring.compute_score(doc, signals)
    if as_json:
        _emit_json(scoring.report_to_tree(report))
    else:
        click.echo(f"score {report.score} {report.label}")
        for entry in report.breakdown:
            click.echo(f"{entry.code} {entry.points:+d}")


# --- dsar --------------------------------------------------------------


@cli.group()
def dsar() -> None:
    """Validate, run, and look up access-request descriptors."""


@dsar.command("validate")
@click.argument("file")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def dsar_validate(file: str, as_json: bool) -> None:
    """Check FILE against every descriptor rule."""
    descriptor = dsar_mod.validate_descriptor(_read_text(file))
    if as_json:
        _emit_json(
            {
                "ok": True,
                "service": descriptor.service,
                "domain": descriptor.domain,
                "steps": len(descriptor.steps),
            }
        )
    else:
        click.echo(f"ok {descriptor.service} {descriptor.domain} steps {len(descriptor.steps)}")


def _driver_from_spec(spec: str) -> dsar_mod.SiteDriver:
    kind, _, rest = spec.partition(":")
    if kind != "mock" or not rest:
        raise ValidationError("must be mock:<fixture-file>", "driver")
    return dsar_mod.MockDriver(_load_tree(rest))


def _identity_from_file(path: str) -> dict[str, str]:
    tree = _load_tree(path)
    if not isinstance(tree, dict) or not all(
        isinstance(key, str) and isinstance(value, str) for key, value in tree.items()
    ):
        raise ValidationError("identity file must map names to text", "")
    return tree


@dsar.command("run")
@click.argument("file")
@click.option("--driver", "driver_spec", required=True, help="mock:<fixture-file>")
@click.option("--identity", "identity_path", required=True, help="identity JSON file")
@click.option("--out", "out_dir", required=True, help="artifact directory")
@click.option("--resume", "resume_path", default=None, help="session file to resume")
@click.option("--json", "as_json", is_flag=True, help="machine output")
@click.pass_context
def dsar_run(
    ctx: click.Context,
    file: str,
    driver_spec: str,
    identity_path: str,
    out_dir: str,
    resume_path: str | None,
    as_json: bool,
) -> None:
    """Execute FILE's steps; prints the session for later resume.

    Exits 0 when the run finished or parked as waiting, 3 when it
    failed.
    """
    descriptor = dsar_mod.validate_descriptor(_read_text(file))
    driver = _driver_from_spec(driver_spec)
    identity = _identity_from_file(identity_path)
    resume = None
    if resume_path is not None:
        resume = dsar_mod.session_from_tree(_load_tree(resume_path))
    # the bundled driver is scripted, so runs use virtual time
    session = dsar_mod.execute(
        descriptor,
        driver,
        identity,
        out_dir,
        resume=resume,
        clock=dsar_mod.VirtualClock(),
    )
    if as_json:
        click.echo(dsar_mod.session_json(session))
    else:
        click.echo(f"status {session.status} step {session.step_index}")
        for artifact in session.artifacts:
            click.echo(f"artifact {artifact.name} {artifact.byte_length} {artifact.local_path}")
        if session.failure is not None:
            click.echo(f"failure step {session.failure.step_index}: {session.failure.reason}")
    if session.status == dsar_mod.STATUS_FAILED:
        ctx.exit(3)


@dsar.command("lookup")
@click.argument("domain")
@click.option("--registry", "registry_path", required=True, help="registry JSON file")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def dsar_lookup(domain: str, registry_path: str, as_json: bool) -> None:
    """Find the registry record responsible for DOMAIN."""
    records = dsar_mod.parse_registry(_read_text(registry_path))
    record = dsar_mod.registry_lookup(records, domain)
    if record is None:
        raise NotFoundError(f"no registry entry for {domain}")
    if as_json:
        _emit_json(dsar_mod.record_to_tree(record))
    else:
        click.echo(f"{record.service} {record.domain} {record.request_url} {record.difficulty}")


# --- archive -----------------------------------------------------------


@cli.group()
def archive() -> None:
    """Analyze an unpacked data-export archive, locally."""


def _profile_for(directory: str, service: str | None) -> archive_mod.ArchiveProfile:
    return archive_mod.profile(archive_mod.ingest(directory, service))


@archive.command("analyze")
@click.argument("directory")
@click.option("--service", default=None, help="service name (defaults to directory name)")
@click.option("--json", "as_json", is_flag=True, help="machine output")
def archive_analyze(directory: str, service: str | None, as_json: bool) -> None:
    """Aggregate DIRECTORY into counts, time span, and histogram."""
    prof = _profile_for(directory, service)
    tree = archive_mod.profile_to_tree(prof)
    if as_json:
        _emit_json(tree)
    else:
        click.echo(f"service {prof.service}")
        for kind in archive_mod.KINDS:
            click.echo(f"{kind} {prof.counts_by_kind.get(kind, 0)}")
        if prof.earliest is not None and prof.latest is not None:
            click.echo(f"span {tree['earliest']} .. {tree['latest']}")
        click.echo(f"bytes {prof.total_bytes}")


@archive.command("risk")
@click.argument("directory")
@click.option("--service", default=None, help="service name (defaults to directory name)")
def archive_risk(directory: str, service: str | None) -> None:
    """Print DIRECTORY's numeric risk factor."""
    click.echo(str(archive_mod.risk_factor(_profile_for(directory, service))))


@archive.command("scoreboard")
@click.argument("directory")
@click.option("--service", default=None, help="service name (defaults to directory name)")
def archive_scoreboard(directory: str, service: str | None) -> None:
    """Print DIRECTORY's shareable scoreboard entry as JSON."""
    entry = archive_mod.scoreboard_entry(_profile_for(directory, service))
    _emit_json(archive_mod.entry_to_tree(entry))


# --- dispatch ----------------------------------------------------------


def run(argv: Sequence[str] | None = None) -> int:
    """Dispatch one invocation and return its exit code.

    Toolkit errors print as ``Name: message`` on the error stream and
    map to their exit codes; anything the argument parser rejects
    prints usage and maps to 64.
    """
    try:
        # click returns ctx.exit codes itself when not standalone
        rv = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="tilt-toolkit",
            standalone_mode=False,
        )
        return rv if isinstance(rv, int) else 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        error = UnknownCommandError(exc.format_message())
        click.echo(f"{error.name}: {error}", err=True)
        return error.exit_code
    except click.Abort:
        return 1
    except ToolkitError as exc:
        click.echo(f"{exc.name}: {exc}", err=True)
        return exc.exit_code


def main() -> None:
    sys.exit(run())
