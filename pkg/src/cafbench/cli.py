"""Command-line surface.

Subcommands: ``count``, ``check``, ``search``, ``replay``, ``table``.
Exit codes: 0 verdict/report produced, 1 usage or configuration error,
2 cell budget exceeded, 3 timeout, 4 replay failure, 5 disagreement with
the published grid.  All output is byte-deterministic for fixed flags.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from cafbench import axioms as ax
from cafbench import rules, serialize
from cafbench.core import DEFAULT_CELL_BUDGET, Instance, InstanceTooLargeError
from cafbench.replay import (
    PROOFS,
    ReplayError,
    ReplayPreconditionError,
    replay_theorem,
)
from cafbench.report import build_table_report, render_csv, render_figure, render_text, report_rows
from cafbench.search import AxiomSet, brute_force_search, search

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_TIMEOUT = 3
EXIT_REPLAY = 4
EXIT_DISAGREE = 5

ENV_CELL_BUDGET = "CAFBENCH_CELL_BUDGET"

AXIOM_TOKENS = {
    "unanimity": "unanimity",
    "independence": "independence",
    "expertise": "expertise",
    "categorical-expertise": "categorical_expertise",
    "minimal-expertise": "minimal_expertise",
    "semidecisive": "semi_decisive",
    "semi-decisive": "semi_decisive",
}


class CliError(click.ClickException):
    exit_code = EXIT_USAGE


def _cell_budget(option_value):
    if option_value is not None:
        return option_value
    env = os.environ.get(ENV_CELL_BUDGET)
    return int(env) if env else DEFAULT_CELL_BUDGET


def _instance(n, m, p) -> Instance:
    try:
        return Instance(n=n, m=m, p=p)
    except ValueError as exc:
        raise CliError(str(exc))


def _parse_axioms(spec: str, allow_equal_categories=True, pinned=None) -> AxiomSet:
    flags = {}
    for token in spec.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in AXIOM_TOKENS:
            raise CliError(
                f"unknown axiom {token!r}; choose from {sorted(set(AXIOM_TOKENS))}"
            )
        flags[AXIOM_TOKENS[token]] = True
    try:
        return AxiomSet(
            allow_equal_categories=allow_equal_categories, pinned=pinned, **flags
        )
    except ValueError as exc:
        raise CliError(str(exc))


def _echo_json(data) -> None:
    click.echo(json.dumps(data, indent=2, sort_keys=True))


def _load_config_defaults(path):
    """Simple key = value file; keys use the long option names."""
    defaults = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"bad config line {raw!r} (expected key = value)")
        key, value = (part.strip() for part in line.split("=", 1))
        defaults[key.replace("-", "_")] = value
    return defaults


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Key = value file supplying default option values.")
@click.pass_context
def cli(ctx, config_path):
    """Workbench for aggregating classifications under expertise axioms."""
    if config_path:
        defaults = _load_config_defaults(config_path)
        ctx.default_map = {name: defaults for name in
                           ("count", "check", "search", "replay", "table")}


@cli.command()
@click.option("--m", type=int, required=True, help="Number of objects.")
@click.option("--p", type=int, required=True, help="Number of categories.")
@click.option("--n", type=int, default=None, help="Also count profiles for n individuals.")
def count(m, p, n):
    """Count classifications (and profiles) at the given sizes."""
    inst = _instance(n if n is not None else 2, m, p)
    data = {"m": m, "p": p, "classifications": inst.num_classifications}
    if n is not None:
        data["n"] = n
        data["profiles"] = inst.num_profiles
    _echo_json(data)


def _parse_rule(spec: str, instance: Instance, same_category: bool) -> rules.RuleConfig:
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "dictator":
        idx = int(arg) if arg else 0
        return rules.RuleConfig(rules.DICTATOR, dictator=idx)
    aliases = {
        "semi-pairs": rules.SEMI_DECISIVE_PAIRS,
        "semi-decisive-pairs": rules.SEMI_DECISIVE_PAIRS,
        "minimal-pairs": rules.MINIMAL_PAIRS,
        "fixed-block": rules.FIXED_BLOCK,
        "pair-fill": rules.DECISIVE_PAIR_FILL,
        "decisive-pair-fill": rules.DECISIVE_PAIR_FILL,
    }
    if name not in aliases:
        raise CliError(
            f"unknown rule {spec!r}; choose dictator[:i], semi-pairs, "
            f"minimal-pairs, fixed-block, or pair-fill"
        )
    try:
        return rules.default_config(aliases[name], instance, same_category=same_category)
    except rules.RuleConfigError as exc:
        raise CliError(f"invalid rule configuration: {exc}")


@cli.command()
@click.option("--rule", "rule_spec", required=True,
              help="dictator[:i], semi-pairs, minimal-pairs, fixed-block, or pair-fill.")
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--axioms", "axioms_spec", required=True,
              help="Comma-separated axiom names to check.")
@click.option("--same-category", is_flag=True,
              help="Configure both decisive pairs on the same category.")
@click.option("--cell-budget", type=int, default=None)
def check(rule_spec, n, m, p, axioms_spec, same_category, cell_budget):
    """Materialize a rule and check axioms against it."""
    inst = _instance(n, m, p)
    config = _parse_rule(rule_spec, inst, same_category)
    budget = _cell_budget(cell_budget)
    try:
        table = rules.materialize(config, inst, cell_budget=budget)
    except rules.RuleConfigError as exc:
        raise CliError(f"invalid rule configuration: {exc}")
    results = {}
    for token in axioms_spec.split(","):
        token = token.strip().lower()
        if token not in AXIOM_TOKENS:
            raise CliError(f"unknown axiom {token!r}")
        field = AXIOM_TOKENS[token]
        if field == "unanimity":
            violation = ax.check_unanimity(table)
        elif field == "independence":
            violation = ax.check_independence(table)
        else:
            checker = {
                "expertise": ax.check_expertise,
                "categorical_expertise": ax.check_categorical_expertise,
                "minimal_expertise": ax.check_minimal_expertise,
                "semi_decisive": ax.check_semi_decisive_pair,
            }[field]
            witness = checker(table)
            results[token] = (
                {"status": "pass", "witness": serialize.witness_to_dict(witness)}
                if witness is not None
                else {"status": "fail", "witness": None}
            )
            continue
        results[token] = (
            {"status": "pass"}
            if violation is None
            else {"status": "violation", "violation": serialize.violation_to_dict(violation)}
        )
    _echo_json(
        {
            "rule": rule_spec,
            "instance": {"n": n, "m": m, "p": p},
            "results": results,
        }
    )


def _parse_pin(values):
    if not values:
        return None
    claims = []
    for value in values:
        parts = value.split(":")
        if len(parts) != 4:
            raise CliError(
                "pinned witness must be kind:individual:object:category "
                "(use '-' for an unused field)"
            )
        kind, i, x, t = parts
        try:
            claims.append(
                ax.DecisivenessClaim(
                    kind=kind,
                    individual=int(i),
                    object=None if x == "-" else int(x),
                    category=None if t == "-" else int(t),
                )
            )
        except ValueError as exc:
            raise CliError(str(exc))
    return tuple(claims)


@cli.command(name="search")
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--axioms", "axioms_spec", required=True)
@click.option("--pin-witness", "pins", multiple=True,
              help="kind:individual:object:category; repeat per claim.")
@click.option("--no-symmetry", is_flag=True, help="Disable witness-tuple canonicalization.")
@click.option("--oracle", is_flag=True, help="Use the brute-force enumerator instead.")
@click.option("--strict-categories", is_flag=True,
              help="Require distinct categories for categorical expertise.")
@click.option("--timeout", type=float, default=None, help="Seconds before giving up.")
@click.option("--cell-budget", type=int, default=None)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the witness table to this JSON file when satisfiable.")
@click.pass_context
def search_cmd(ctx, n, m, p, axioms_spec, pins, no_symmetry, oracle,
               strict_categories, timeout, cell_budget, out_path):
    """Decide whether any aggregation table satisfies the axiom set."""
    inst = _instance(n, m, p)
    axiom_set = _parse_axioms(
        axioms_spec,
        allow_equal_categories=not strict_categories,
        pinned=_parse_pin(pins),
    )
    budget = _cell_budget(cell_budget)
    try:
        if oracle:
            outcome = brute_force_search(inst, axiom_set)
            data = {
                "verdict": outcome.verdict,
                "engine": "brute-force",
                "tables_explored": outcome.tables_explored,
            }
            table, claims = (outcome.witnesses[0] if outcome.witnesses else (None, ()))
        else:
            result = search(
                inst,
                axiom_set,
                symmetry_reduction=not no_symmetry,
                timeout=timeout,
                cell_budget=budget,
            )
            data = {
                "verdict": result.verdict,
                "engine": "propagation",
                "tuples_explored": result.tuples_explored,
                "nodes": result.nodes,
            }
            table, claims = result.table, result.claims
    except InstanceTooLargeError as exc:
        click.echo(str(exc), err=True)
        ctx.exit(EXIT_CAP)
    if table is not None:
        witness = serialize.table_to_dict(table, claims)
        if out_path:
            Path(out_path).write_text(json.dumps(witness, indent=2, sort_keys=True))
            data["witness_file"] = out_path
        else:
            data["witness"] = witness
    _echo_json(data)
    if data["verdict"] == "timeout":
        ctx.exit(EXIT_TIMEOUT)


@cli.command()
@click.option("--proof", type=click.Choice(PROOFS), required=True)
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--same-category", is_flag=True,
              help="Replay the branch where both claims share a category.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def replay(ctx, proof, n, m, p, same_category, fmt):
    """Emit the step-by-step contradiction trace of a shipped proof."""
    inst = _instance(n, m, p)
    try:
        trace = replay_theorem(proof, inst, same_category=same_category)
    except ReplayPreconditionError as exc:
        raise CliError(str(exc))
    except ReplayError as exc:
        click.echo(f"replay failure: {exc}", err=True)
        ctx.exit(EXIT_REPLAY)
    if fmt == "json":
        _echo_json(serialize.trace_to_dict(trace))
    else:
        click.echo(serialize.trace_to_text(trace), nl=False)


@cli.command()
@click.option("--max-m", type=int, default=4, show_default=True)
@click.option("--max-p", type=int, default=3, show_default=True)
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")
@click.option("--timeout", type=float, default=None, help="Per-cell search timeout, seconds.")
@click.option("--cell-budget", type=int, default=None)
@click.option("--out-dir", type=click.Path(), default=None,
              help="Also write table.csv, table.json, and table.png here.")
@click.pass_context
def table(ctx, max_m, max_p, n, fmt, timeout, cell_budget, out_dir):
    """Reproduce the published verdict grid over small instances."""
    if max_p < 2 or max_m < max_p:
        raise CliError("need max-m >= max-p >= 2")
    instances = [
        Instance(n, m, p)
        for p in range(2, max_p + 1)
        for m in range(p, max_m + 1)
    ]
    report = build_table_report(
        instances, timeout=timeout, cell_budget=_cell_budget(cell_budget)
    )
    if fmt == "json":
        click.echo(json.dumps(list(report_rows(report)), indent=2, sort_keys=True))
    elif fmt == "csv":
        click.echo(render_csv(report), nl=False)
    else:
        click.echo(render_text(report), nl=False)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table.csv").write_text(render_csv(report))
        (out / "table.json").write_text(
            json.dumps(list(report_rows(report)), indent=2, sort_keys=True)
        )
        render_figure(report, str(out / "table.png"))
    if report.disagreements:
        click.echo(
            f"{len(report.disagreements)} cell(s) disagree with the published grid",
            err=True,
        )
        ctx.exit(EXIT_DISAGREE)


def main(argv=None) -> int:
    try:
        # With standalone_mode off, click returns ctx.exit codes instead of
        # calling sys.exit.
        result = cli.main(args=argv, standalone_mode=False)
        if isinstance(result, int):
            return result
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except InstanceTooLargeError as exc:
        click.echo(str(exc), err=True)
        return EXIT_CAP
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
