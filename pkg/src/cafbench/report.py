"""Reproduction of the summary grid of verdicts, with figure rendering.

Rows are the three expertise variants crossed with {alone, +Unanimity,
+Independence}; columns are instances.  Every computed verdict is compared
against the published claim for that region of (m, p), and the report
flags any disagreement.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

from cafbench.core import Instance, InstanceTooLargeError
from cafbench.search import AxiomSet, search

EXPERTISE_ROWS = ("minimal-expertise", "expertise", "categorical-expertise")
EXTRA_COLUMNS = ("alone", "unanimity", "independence")


def predicted_verdict(row: str, extra: str, m: int, p: int) -> str:
    """The published satisfiability claim for this cell ("yes" / "no")."""
    if row == "categorical-expertise":
        return "no"
    if extra == "unanimity":
        return "no"
    if extra == "independence":
        return "no" if m <= p + 1 else "yes"
    if row == "expertise":
        return "no" if m == p else "yes"
    # minimal expertise alone: impossible only in the 2x2 corner
    return "no" if (m, p) == (2, 2) else "yes"


def axiom_set_for(row: str, extra: str) -> AxiomSet:
    return AxiomSet(
        unanimity=extra == "unanimity",
        independence=extra == "independence",
        expertise=row == "expertise",
        categorical_expertise=row == "categorical-expertise",
        minimal_expertise=row == "minimal-expertise",
    )


@dataclass(frozen=True)
class CellResult:
    row: str
    extra: str
    instance: Instance
    verdict: str  # "yes" | "no" | "timeout" | "skipped: cap"
    predicted: str
    agrees: Optional[bool]  # None when not decided


@dataclass(frozen=True)
class TableReport:
    cells: tuple

    @property
    def disagreements(self) -> tuple:
        return tuple(c for c in self.cells if c.agrees is False)

    @property
    def all_agree(self) -> bool:
        return all(c.agrees for c in self.cells if c.agrees is not None) and not self.disagreements


def build_table_report(
    instances,
    *,
    timeout: Optional[float] = None,
    cell_budget: Optional[int] = None,
    symmetry_reduction: bool = True,
) -> TableReport:
    from cafbench.core import DEFAULT_CELL_BUDGET

    budget = DEFAULT_CELL_BUDGET if cell_budget is None else cell_budget
    cells = []
    for row in EXPERTISE_ROWS:
        for extra in EXTRA_COLUMNS:
            for inst in instances:
                predicted = predicted_verdict(row, extra, inst.m, inst.p)
                try:
                    outcome = search(
                        inst,
                        axiom_set_for(row, extra),
                        timeout=timeout,
                        cell_budget=budget,
                        symmetry_reduction=symmetry_reduction,
                    )
                except InstanceTooLargeError:
                    cells.append(
                        CellResult(row, extra, inst, "skipped: cap", predicted, None)
                    )
                    continue
                if outcome.verdict == "timeout":
                    verdict, agrees = "timeout", None
                else:
                    verdict = "yes" if outcome.satisfiable else "no"
                    agrees = verdict == predicted
                cells.append(CellResult(row, extra, inst, verdict, predicted, agrees))
    return TableReport(tuple(cells))


def report_rows(report: TableReport):
    for c in report.cells:
        yield {
            "axiom": c.row,
            "with": c.extra,
            "n": c.instance.n,
            "m": c.instance.m,
            "p": c.instance.p,
            "verdict": c.verdict,
            "predicted": c.predicted,
            "agrees": "" if c.agrees is None else str(c.agrees).lower(),
        }


def render_csv(report: TableReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["axiom", "with", "n", "m", "p", "verdict", "predicted", "agrees"]
    )
    writer.writeheader()
    for row in report_rows(report):
        writer.writerow(row)
    return buf.getvalue()


def render_text(report: TableReport) -> str:
    lines = []
    header = f"{'axiom':<24}{'with':<14}{'(n,m,p)':<12}{'verdict':<14}{'predicted':<11}agree"
    lines.append(header)
    lines.append("-" * len(header))
    for c in report.cells:
        triple = f"({c.instance.n},{c.instance.m},{c.instance.p})"
        agree = "-" if c.agrees is None else ("yes" if c.agrees else "NO")
        lines.append(
            f"{c.row:<24}{c.extra:<14}{triple:<12}{c.verdict:<14}{c.predicted:<11}{agree}"
        )
    return "\n".join(lines) + "\n"


def render_figure(report: TableReport, path: str) -> None:
    """Verdict grid as a colored matrix, one row per axiom combination."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Patch

    instances = []
    for c in report.cells:
        if c.instance not in instances:
            instances.append(c.instance)
    row_keys = [(row, extra) for row in EXPERTISE_ROWS for extra in EXTRA_COLUMNS]
    lookup = {(c.row, c.extra, c.instance): c for c in report.cells}

    colors = {"yes": "#2e7d32", "no": "#b23b3b", "timeout": "#e0a800", "skipped: cap": "#9e9e9e"}
    fig, ax = plt.subplots(
        figsize=(1.6 + 1.1 * len(instances), 1.2 + 0.45 * len(row_keys))
    )
    for yi, key in enumerate(row_keys):
        for xi, inst in enumerate(instances):
            cell = lookup.get((key[0], key[1], inst))
            if cell is None:
                continue
            face = colors.get(cell.verdict, "#9e9e9e")
            edge = "black" if cell.agrees is not False else "#ffd600"
            lw = 0.8 if cell.agrees is not False else 3.0
            ax.add_patch(
                plt.Rectangle((xi, len(row_keys) - 1 - yi), 1, 1, facecolor=face,
                              edgecolor=edge, linewidth=lw)
            )
    ax.set_xlim(0, len(instances))
    ax.set_ylim(0, len(row_keys))
    ax.set_xticks([i + 0.5 for i in range(len(instances))])
    ax.set_xticklabels([f"m={i.m}, p={i.p}" for i in instances], fontsize=8)
    ax.set_yticks([len(row_keys) - 1 - i + 0.5 for i in range(len(row_keys))])
    ax.set_yticklabels([f"{row} + {extra}" if extra != "alone" else row
                        for row, extra in row_keys], fontsize=8)
    ax.set_aspect("equal")
    ax.set_title("Existence of an aggregator satisfying each axiom set", fontsize=10)
    legend = [Patch(facecolor=v, label=k) for k, v in colors.items()]
    legend.append(Patch(facecolor="white", edgecolor="#ffd600", linewidth=3, label="disagrees"))
    ax.legend(handles=legend, loc="center left", bbox_to_anchor=(1.02, 0.5), fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
