"""Command line interface.

Exit codes: 0 on success, 1 on a domain error (reported as a one-line JSON
error object on stderr), 2 on a usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import FnetError
from .model import KINDS
from .partition import partition_by_pivot, partition_kb
from .session import MODES, MODE_ROUTED, SessionLog, start_session
from .similarity import UnmatchedPolicy, sim_entities, similarity_matrix
from .store import (
    ParseError,
    format_number,
    load_kb,
    load_partition,
    load_query,
    save_partition,
    validate_kb,
)

_POLICY_CHOICE = click.Choice([p.value for p in UnmatchedPolicy])
_KIND_CHOICE = click.Choice(list(KINDS))


def _fail(error: FnetError) -> None:
    click.echo(json.dumps(error.to_document(), ensure_ascii=False), err=True)
    sys.exit(1)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except FnetError as exc:
        _fail(exc)


@click.group()
def main() -> None:
    """Graded similarity over fuzzy-described objects, goals and instances."""


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


@main.command()
@click.argument("kb_path", metavar="KB", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def validate(kb_path: Path) -> None:
    """Validate a knowledge base file and print the report."""
    try:
        document = json.loads(kb_path.read_bytes().decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        _fail(ParseError(f"not valid UTF-8 JSON: {exc}"))
        return
    report = validate_kb(document)
    for issue in report.errors:
        click.echo(f"error   {issue.code}  {issue.path}: {issue.message}")
    for issue in report.warnings:
        click.echo(f"warning {issue.code}  {issue.path}: {issue.message}")
    click.echo(f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)")
    if not report.ok:
        sys.exit(1)


# ---------------------------------------------------------------------------
# sim
# ---------------------------------------------------------------------------


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--kind", required=True, type=_KIND_CHOICE)
@click.option("--left", required=True)
@click.option("--right", required=True)
@click.option("--policy", type=_POLICY_CHOICE, default=UnmatchedPolicy.ZERO.value, show_default=True)
def sim(kb_path: Path, kind: str, left: str, right: str, policy: str) -> None:
    """Print the similarity of two entities of one kind."""

    def run():
        kb = load_kb(kb_path)
        score = sim_entities(kb.entity(kind, left), kb.entity(kind, right), UnmatchedPolicy(policy))
        click.echo(format_number(score))

    _guard(run)


# ---------------------------------------------------------------------------
# matrix
# ---------------------------------------------------------------------------


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--kind", required=True, type=_KIND_CHOICE)
@click.option("--policy", type=_POLICY_CHOICE, default=UnmatchedPolicy.ZERO.value, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, allow_dash=True, path_type=Path))
def matrix(kb_path: Path, kind: str, policy: str, out_path: Path) -> None:
    """Write the pairwise similarity matrix of one kind as CSV."""

    def run():
        kb = load_kb(kb_path)
        result = similarity_matrix(kb, kind, UnmatchedPolicy(policy))
        lines = ["," + ",".join(result.names)]
        for name, row in zip(result.names, result.scores):
            lines.append(name + "," + ",".join(format_number(score) for score in row))
        text = "\n".join(lines) + "\n"
        if str(out_path) == "-":
            click.echo(text, nl=False)
        else:
            out_path.write_text(text, encoding="utf-8")
        for note in result.notes:
            click.echo(f"note: {note}", err=True)

    _guard(run)


# ---------------------------------------------------------------------------
# partition
# ---------------------------------------------------------------------------


@main.command("partition")
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--kind", required=True, type=_KIND_CHOICE)
@click.option("--pivot", default=None, help="Partition by similarity to this entity instead of the band prototypes.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
def partition_cmd(kb_path: Path, kind: str, pivot: str | None, out_path: Path) -> None:
    """Partition one kind into the four similarity classes and save it."""

    def run():
        kb = load_kb(kb_path)
        if pivot is None:
            result = partition_kb(kb, kind)
        else:
            result = partition_by_pivot(kb, kind, pivot)
        save_partition(result, out_path)
        for cls in result.classes:
            members = ", ".join(f"{name}={format_number(score)}" for name, score in cls.members) or "(empty)"
            click.echo(f"level {cls.level}: {members}")

    _guard(run)


# ---------------------------------------------------------------------------
# query
# ---------------------------------------------------------------------------


def _candidate_line(candidate) -> str:
    level = "-" if candidate.level is None else str(candidate.level)
    return f"{candidate.name}  score={format_number(candidate.score)}  level={level}"


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--partition", "partition_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--query", "query_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--mode", type=click.Choice(list(MODES)), default=MODE_ROUTED, show_default=True)
@click.option("--auto-accept-at", "threshold", type=float, default=None, help="Accept the first candidate at or above this score.")
@click.option("--interactive", is_flag=True, help="Read accept/reject commands from stdin.")
@click.option("--log", "log_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
def query(kb_path: Path, partition_path: Path, query_path: Path, mode: str, threshold: float | None, interactive: bool, log_path: Path | None) -> None:
    """Resolve a query against a partitioned knowledge base.

    With --auto-accept-at, candidates are rejected until one reaches the
    threshold.  With --interactive, each candidate awaits an accept or
    reject line on stdin.  With neither, every candidate is listed in
    presentation order without accepting any.
    """
    if threshold is not None and interactive:
        raise click.UsageError("--auto-accept-at and --interactive are mutually exclusive")

    def run():
        kb = load_kb(kb_path)
        loaded_partition = load_partition(partition_path)
        loaded_query = load_query(query_path)
        log_stream = log_path.open("a", encoding="utf-8") if log_path else None
        logger = SessionLog(log_stream) if log_stream else None
        try:
            session, candidate = start_session(kb, loaded_partition, loaded_query, mode, logger)
            while candidate is not None:
                click.echo(_candidate_line(candidate))
                if threshold is not None and candidate.score >= threshold:
                    record = session.accept()
                    click.echo(
                        f"accepted {record.entity}  score={format_number(record.score)}  "
                        f"rejections={record.rejections}  evaluations={record.evaluations}"
                    )
                    return
                if interactive:
                    answer = click.prompt("accept or reject", type=click.Choice(["accept", "reject"]))
                    if answer == "accept":
                        record = session.accept()
                        click.echo(
                            f"accepted {record.entity}  score={format_number(record.score)}  "
                            f"rejections={record.rejections}  evaluations={record.evaluations}"
                        )
                        return
                candidate = session.reject()
            click.echo(f"exhausted after {len(session.presented)} candidate(s), evaluations={session.evaluations}")
            if threshold is not None:
                sys.exit(1)
        finally:
            if log_stream:
                log_stream.close()

    _guard(run)


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


@main.command()
@click.option("--kb", "kb_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--partition", "partition_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--port", type=int, default=8000, envvar="FNET_PORT", show_default=True, help="Port to bind; FNET_PORT supplies the default.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--cors-origin", default=None, help="Allow browser calls from this origin.")
@click.option("--session-timeout", type=float, default=1800.0, show_default=True, help="Idle seconds before a session is evicted.")
def serve(kb_path: Path, partition_path: Path, port: int, host: str, cors_origin: str | None, session_timeout: float) -> None:
    """Serve the engine over HTTP."""

    def run():
        import uvicorn

        from .server import create_app

        kb = load_kb(kb_path)
        loaded_partition = load_partition(partition_path)
        if loaded_partition.kb_fingerprint != kb.fingerprint:
            from .errors import FingerprintMismatchError

            raise FingerprintMismatchError("partition was built from a different knowledge base")
        app = create_app(kb, loaded_partition, cors_origin=cors_origin, session_timeout=session_timeout)
        uvicorn.run(app, host=host, port=port, log_level="warning")

    _guard(run)


if __name__ == "__main__":
    main()
