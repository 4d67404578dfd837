"""Administrative command line: validate, simulate, analyze, serve."""

import dataclasses
import json
import sys
from pathlib import Path

import click

from . import analytics, simulator
from .bank import load_bank
from .errors import EngineError
from .ontology import load_ontology, validate_bank
from .scheduler import AssignmentMode
from .session import read_log, write_log


def _parse_policy(spec: str) -> simulator.LearnerPolicy:
    """Parse a policy spec: always_correct, always_incorrect, bernoulli:P, logistic:A."""
    name, _, arg = spec.partition(":")
    if name == "always_correct":
        return simulator.LearnerPolicy.always_correct()
    if name == "always_incorrect":
        return simulator.LearnerPolicy.always_incorrect()
    if name == "bernoulli":
        return simulator.LearnerPolicy.bernoulli(float(arg or 0.5))
    if name == "logistic":
        return simulator.LearnerPolicy.logistic(float(arg or 0.0))
    raise click.BadParameter(f"unknown policy {spec!r}")


@click.group()
def main() -> None:
    """Adaptive programming-practice engine."""


@main.command()
@click.argument("ontology", type=click.Path(exists=True))
@click.argument("bank", type=click.Path(exists=True))
def validate(ontology: str, bank: str) -> None:
    """Validate an ontology and question bank; exit 1 on hard findings."""
    try:
        graph = load_ontology(Path(ontology))
        questions = load_bank(bank)
    except EngineError as exc:
        click.echo(f"error: {exc.message}", err=True)
        sys.exit(1)
    report = validate_bank(graph, questions)
    for finding in report.errors:
        click.echo(f"error: {finding}")
    for finding in report.warnings:
        click.echo(f"warning: {finding}")
    if report.clean:
        click.echo("ok: no findings")
    sys.exit(0 if report.ok else 1)


@main.command("steps-to-threshold")
@click.option("--k", type=float, required=True, help="Learning rate.")
@click.option("--threshold", type=float, default=0.85, show_default=True)
def steps_to_threshold_cmd(k: float, threshold: float) -> None:
    """Correct answers needed to reach the threshold under the fresh-item model."""
    click.echo(simulator.steps_to_threshold(k, threshold))


@main.command()
@click.option("--k", type=float, required=True, help="Learning rate.")
@click.option("--policy", default="always_correct", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-steps", type=int, default=200, show_default=True)
def simulate(k: float, policy: str, seed: int, max_steps: int) -> None:
    """Emit a JSON Lines rating trace for one synthetic learner."""
    trace = simulator.policy_trace(_parse_policy(policy), k, seed=seed, max_steps=max_steps)
    for step in trace:
        click.echo(json.dumps(dataclasses.asdict(step), sort_keys=True))


@main.command()
@click.option("--ontology", type=click.Path(exists=True), required=True)
@click.option("--bank", type=click.Path(exists=True), required=True)
@click.option("--learners", type=int, default=5, show_default=True)
@click.option("--policy", "policies", multiple=True, default=("bernoulli:0.7",), show_default=True)
@click.option("--mode", type=click.Choice(["adaptive", "random"]), default="adaptive")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--concept", default="conditionals", show_default=True)
@click.option("--out", type=click.Path(), required=True, help="Event log destination (JSONL).")
def cohort(ontology, bank, learners, policies, mode, seed, concept, out) -> None:
    """Simulate a cohort against a real bank and write its event log."""
    graph = load_ontology(Path(ontology))
    questions = load_bank(bank)
    assignment = AssignmentMode.random(seed) if mode == "random" else AssignmentMode.adaptive()
    events = simulator.run_cohort(
        learners,
        [_parse_policy(p) for p in policies],
        questions,
        graph,
        assignment,
        seed,
        concept=concept,
    )
    write_log(events, out)
    click.echo(f"wrote {len(events)} events to {out}")


@main.command()
@click.argument("log", type=click.Path(exists=True))
@click.option("--csv", "csv_out", type=click.Path(), default=None, help="Per-learner CSV path.")
@click.option("--group", default="", help="Group label for the CSV rows.")
def analyze(log: str, csv_out: str | None, group: str) -> None:
    """Compute the six log-derived features; optionally export per-learner CSV."""
    events = read_log(log)
    features = analytics.compute_features(events)
    learners = analytics.learner_ids(events)
    click.echo(f"learners: {len(learners)}  submissions: {analytics.submission_count(events)}")
    for name in analytics.FEATURE_NAMES:
        click.echo(f"{name}: {getattr(features, name)}")
    if csv_out:
        rows = analytics.per_learner_table(events, group)
        with open(csv_out, "w", encoding="utf-8", newline="") as fh:
            analytics.write_csv(rows, fh)
        click.echo(f"wrote {len(rows)} row(s) to {csv_out}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default=".", show_default=True, envvar="DATA_DIR")
@click.option("--mode", type=click.Choice(["adaptive", "random"]), default="adaptive")
@click.option("--ontology", type=click.Path(exists=True), required=True)
@click.option("--bank", type=click.Path(exists=True), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--language", default="python", show_default=True)
@click.option("--initial-concept", default="variables", show_default=True)
def serve(port, host, data_dir, mode, ontology, bank, seed, language, initial_concept) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        ontology_path=ontology,
        bank_path=bank,
        mode=mode,
        seed=seed,
        data_dir=data_dir,
        language=language,
        initial_concept=initial_concept,
    )
    try:
        app = create_app(config)
    except EngineError as exc:
        click.echo(f"startup failed: {exc.message}", err=True)
        sys.exit(1)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
