"""JSON schemas and text rendering for tables, witnesses, and traces.

Witness files pin outputs to profile ranks against the canonical
lexicographic enumeration, so they reload bit-for-bit:

    {"instance": {"n": ..., "m": ..., "p": ...},
     "entries": [[profile_rank, [category, ...]], ...],
     "witness_claims": [...]}

Reports name objects and categories 1-based (x1, t1) to match the usual
presentation; all stored indices stay 0-based.
"""

from __future__ import annotations

from typing import Optional

from cafbench.axioms import AxiomViolation, DecisivenessClaim, ExpertiseWitness
from cafbench.core import CafTable, Instance
from cafbench.replay import ContradictionTrace, TraceStep


def obj_name(x: int) -> str:
    return f"x{x + 1}"


def cat_name(t: int) -> str:
    return f"t{t + 1}"


def claim_to_dict(claim: DecisivenessClaim) -> dict:
    return {
        "kind": claim.kind,
        "individual": claim.individual,
        "object": claim.object,
        "category": claim.category,
    }


def claim_from_dict(d: dict) -> DecisivenessClaim:
    return DecisivenessClaim(
        kind=d["kind"],
        individual=d["individual"],
        object=d.get("object"),
        category=d.get("category"),
    )


def table_to_dict(table: CafTable, claims: tuple = ()) -> dict:
    inst = table.instance
    return {
        "instance": {"n": inst.n, "m": inst.m, "p": inst.p},
        "entries": [[r, list(out)] for r, out in enumerate(table.outputs)],
        "witness_claims": [claim_to_dict(c) for c in claims],
    }


def table_from_dict(d: dict) -> tuple:
    """Reload a witness file; returns (CafTable, claims)."""
    inst = Instance(**d["instance"])
    entries = sorted(d["entries"], key=lambda e: e[0])
    ranks = [e[0] for e in entries]
    if ranks != list(range(inst.num_profiles)):
        raise ValueError("witness entries do not cover every profile rank exactly once")
    outputs = tuple(tuple(e[1]) for e in entries)
    claims = tuple(claim_from_dict(c) for c in d.get("witness_claims", ()))
    return CafTable(inst, outputs), claims


def violation_to_dict(v: AxiomViolation) -> dict:
    return {
        "axiom": v.axiom,
        "profile_ranks": list(v.profile_ranks),
        "object": v.object,
        "category": v.category,
        "reason": v.reason,
    }


def witness_to_dict(w: ExpertiseWitness) -> dict:
    return {"first": claim_to_dict(w.first), "second": claim_to_dict(w.second)}


def render_profile(profile, p: int, label: str = "c") -> str:
    """Tabular layout: categories as rows, individuals as columns."""
    n = len(profile)
    headers = [label] + [str(i + 1) for i in range(n)]
    rows = []
    for t in range(p):
        cells = [cat_name(t)]
        for i in range(n):
            objs = [obj_name(x) for x, cat in enumerate(profile[i]) if cat == t]
            cells.append(",".join(objs) or "-")
        rows.append(cells)
    widths = [max(len(r[k]) for r in [headers] + rows) for k in range(n + 1)]
    out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    out.append("-" * len(out[0]))
    for r in rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(out)


def _step_text(step: TraceStep, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if step.kind == "case-split":
        lines.append(
            f"{pad}case split: which object covers {cat_name(step.category)} "
            f"in {step.profile}?"
        )
        for obj, branch in step.branches:
            lines.append(f"{pad}  case {obj_name(obj)} -> {cat_name(step.category)}:")
            for sub in branch:
                lines.extend(_step_text(sub, indent + 2))
        return lines
    if step.kind == "contradiction":
        if step.detail == "empty-category":
            what = f"category {cat_name(step.category)} of {step.profile} is left empty"
        elif step.detail == "capacity-clash":
            what = (
                f"category {cat_name(step.category)} of {step.profile} holds more "
                f"objects than it can"
            )
        else:
            what = f"object {obj_name(step.obj)} of {step.profile} has no category left"
        lines.append(f"{pad}contradiction: {what}")
        return lines
    if step.kind == "copy":
        lines.append(
            f"{pad}independence: {obj_name(step.obj)} has the same column in "
            f"{step.source} and {step.profile}, outputs must match"
        )
        return lines
    verb = "force" if step.kind == "force" else "exclude"
    why = step.axiom
    if step.axiom == "claim" and step.claim is not None:
        why = f"{step.claim.kind} of individual {step.claim.individual + 1}"
    elif step.axiom == "capacity":
        why = f"capacity ({cat_name(step.full_category)} is full)"
    lines.append(
        f"{pad}{verb} {obj_name(step.obj)} "
        f"{'->' if step.kind == 'force' else '-/->'} {cat_name(step.category)} "
        f"in {step.profile}  [{why}]"
    )
    return lines


def trace_to_text(trace: ContradictionTrace) -> str:
    inst = trace.instance
    parts = [
        f"proof replay: {trace.proof} at (n={inst.n}, m={inst.m}, p={inst.p})"
        + (" [equal categories]" if trace.same_category else ""),
        "claims: "
        + "; ".join(
            f"individual {c.individual + 1} {c.kind}"
            + (f" over {obj_name(c.object)}" if c.object is not None else "")
            + (f" / {cat_name(c.category)}" if c.category is not None else "")
            for c in trace.claims
        ),
        "",
    ]
    for label, profile in trace.profiles:
        parts.append(render_profile(profile, inst.p, label))
        parts.append("")
    for step in trace.steps:
        parts.extend(_step_text(step))
    return "\n".join(parts) + "\n"


def _step_to_dict(step: TraceStep) -> dict:
    d = {
        "kind": step.kind,
        "profile": step.profile,
        "object": step.obj,
        "category": step.category,
        "axiom": step.axiom,
        "detail": step.detail,
    }
    if step.claim is not None:
        d["claim"] = claim_to_dict(step.claim)
    if step.source is not None:
        d["source"] = step.source
    if step.full_category is not None:
        d["full_category"] = step.full_category
    if step.branches:
        d["branches"] = [
            {"object": obj, "steps": [_step_to_dict(s) for s in branch]}
            for obj, branch in step.branches
        ]
    return d


def trace_to_dict(trace: ContradictionTrace) -> dict:
    inst = trace.instance
    return {
        "proof": trace.proof,
        "instance": {"n": inst.n, "m": inst.m, "p": inst.p},
        "same_category": trace.same_category,
        "claims": [claim_to_dict(c) for c in trace.claims],
        "profiles": {label: [list(c) for c in prof] for label, prof in trace.profiles},
        "steps": [_step_to_dict(s) for s in trace.steps],
    }
