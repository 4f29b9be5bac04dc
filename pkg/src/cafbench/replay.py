"""Replays of the impossibility proofs as checkable contradiction traces.

Each replay constructs the proof's profiles, applies exactly the axiom
deductions the proof invokes (plus explicit pigeonhole steps where the
proof counts category sizes), and ends in the stated contradiction.  A
trace is data: :func:`verify_trace` re-applies every step against a fresh
state, checking each justification, so a shipped trace is a certificate
rather than prose.

Deduction state: per profile, a set of still-possible categories for every
object.  Steps shrink these sets; a contradiction is an empty category, an
over-full category, or an object with no category left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cafbench.axioms import (
    CATEGORICALLY_DECISIVE,
    MINIMALLY_DECISIVE,
    OBJECT_DECISIVE,
    DecisivenessClaim,
)
from cafbench.core import Instance

PROOFS = ("theorem-1", "prop-2", "prop-3", "prop-4", "prop-5")


class ReplayError(Exception):
    """A trace step's justification does not hold (implementation bug)."""


class ReplayPreconditionError(ValueError):
    """The binding does not satisfy the proof's hypotheses."""


@dataclass(frozen=True)
class TraceStep:
    kind: str  # force | exclude | copy | case-split | contradiction
    profile: Optional[str] = None
    obj: Optional[int] = None
    category: Optional[int] = None
    axiom: Optional[str] = None  # unanimity | claim | assumption | surjectivity | capacity
    claim: Optional[DecisivenessClaim] = None
    source: Optional[str] = None  # copy: profile the constraint comes from
    full_category: Optional[int] = None  # capacity: the category at capacity
    detail: str = ""
    branches: tuple = ()  # case-split: ((assumed object, steps...), ...)


@dataclass(frozen=True)
class ContradictionTrace:
    proof: str
    instance: Instance
    same_category: bool
    claims: tuple
    profiles: tuple  # ((label, Profile), ...)
    steps: tuple


class _State:
    """Candidate-category sets per (profile label, object)."""

    def __init__(self, instance, profiles):
        self.instance = instance
        self.profiles = dict(profiles)
        self.cands = {
            (label, x): set(range(instance.p))
            for label in self.profiles
            for x in range(instance.m)
        }

    def clone(self):
        other = _State.__new__(_State)
        other.instance = self.instance
        other.profiles = self.profiles
        other.cands = {k: set(v) for k, v in self.cands.items()}
        return other

    def forced_to(self, label, category):
        return {
            x
            for x in range(self.instance.m)
            if self.cands[(label, x)] == {category}
        }


def _check_justification(state: _State, step: TraceStep) -> None:
    inst = state.instance
    profile = state.profiles[step.profile]
    if step.axiom == "assumption":
        return
    if step.axiom == "independence":
        if step.kind != "copy":
            raise ReplayError(f"independence only justifies copies: {step}")
        return
    if step.axiom == "unanimity":
        if step.kind != "force" or any(c[step.obj] != step.category for c in profile):
            raise ReplayError(f"unanimity does not justify {step}")
        return
    if step.axiom == "claim":
        c = step.claim
        mine = profile[c.individual][step.obj]
        if c.kind == OBJECT_DECISIVE:
            ok = step.kind == "force" and step.obj == c.object and mine == step.category
        elif c.kind == MINIMALLY_DECISIVE:
            if step.kind == "force":
                ok = step.obj == c.object and step.category == c.category and mine == c.category
            else:
                ok = step.obj == c.object and step.category == c.category and mine != c.category
        elif c.kind == CATEGORICALLY_DECISIVE:
            ok = step.kind == "exclude" and step.category == c.category and mine != c.category
        else:
            ok = False
        if not ok:
            raise ReplayError(f"claim {c} does not justify {step}")
        return
    if step.axiom == "surjectivity":
        # The category has no other possible member, so this object takes it.
        if step.kind != "force":
            raise ReplayError(f"surjectivity only justifies forces: {step}")
        others = [
            x
            for x in range(inst.m)
            if x != step.obj and step.category in state.cands[(step.profile, x)]
        ]
        if others:
            raise ReplayError(
                f"surjectivity does not justify {step}: {others} still possible"
            )
        return
    if step.axiom == "capacity":
        # full_category holds its maximum of m-p+1 objects, so every other
        # category holds exactly one; exclusions follow.
        if step.kind != "exclude":
            raise ReplayError(f"capacity only justifies exclusions: {step}")
        full = state.forced_to(step.profile, step.full_category)
        if len(full) != inst.m - inst.p + 1:
            raise ReplayError(
                f"category {step.full_category} not at capacity in {step.profile}: {full}"
            )
        if step.category == step.full_category:
            if step.obj in full:
                raise ReplayError(f"cannot exclude a member of the full category: {step}")
        else:
            holders = state.forced_to(step.profile, step.category)
            if not (holders - {step.obj}):
                raise ReplayError(
                    f"category {step.category} has no forced member besides {step.obj}"
                )
        return
    raise ReplayError(f"unknown justification {step.axiom!r} in {step}")


def _apply_step(state: _State, step: TraceStep) -> None:
    """Validate and apply one non-splitting, non-terminal step."""
    _check_justification(state, step)
    cell = state.cands[(step.profile, step.obj)]
    if step.kind == "force":
        cell.intersection_update({step.category})
    elif step.kind == "exclude":
        cell.discard(step.category)
    elif step.kind == "copy":
        src_profile = state.profiles[step.source]
        dst_profile = state.profiles[step.profile]
        if any(c[step.obj] != d[step.obj] for c, d in zip(src_profile, dst_profile)):
            raise ReplayError(
                f"independence copy of object {step.obj}: columns differ "
                f"between {step.source} and {step.profile}"
            )
        cell.intersection_update(state.cands[(step.source, step.obj)])
    else:
        raise ReplayError(f"cannot apply step kind {step.kind!r}")


def _check_contradiction(state: _State, step: TraceStep) -> None:
    inst = state.instance
    if step.detail == "empty-category":
        alive = [
            x
            for x in range(inst.m)
            if step.category in state.cands[(step.profile, x)]
        ]
        if alive:
            raise ReplayError(
                f"category {step.category} not empty in {step.profile}: {alive}"
            )
    elif step.detail == "capacity-clash":
        members = state.forced_to(step.profile, step.category)
        if len(members) <= inst.m - inst.p + 1:
            raise ReplayError(
                f"category {step.category} not over capacity in {step.profile}"
            )
    elif step.detail == "cell-empty":
        if state.cands[(step.profile, step.obj)]:
            raise ReplayError(
                f"object {step.obj} still has candidates in {step.profile}"
            )
    else:
        raise ReplayError(f"unknown contradiction {step.detail!r}")


def _verify_steps(state: _State, steps) -> None:
    """Steps must close with a contradiction (possibly inside every branch)."""
    for idx, step in enumerate(steps):
        if step.kind == "contradiction":
            _check_contradiction(state, step)
            if idx != len(steps) - 1:
                raise ReplayError("steps continue past the contradiction")
            return
        if step.kind == "case-split":
            candidates = {
                x
                for x in range(state.instance.m)
                if step.category in state.cands[(step.profile, x)]
            }
            covered = {obj for obj, _ in step.branches}
            if covered != candidates:
                raise ReplayError(
                    f"case split on category {step.category} in {step.profile} covers "
                    f"{sorted(covered)} but candidates are {sorted(candidates)}"
                )
            if not candidates:
                raise ReplayError("empty case split; should be an empty-category step")
            for obj, branch_steps in step.branches:
                branch = state.clone()
                branch.cands[(step.profile, obj)].intersection_update({step.category})
                _verify_steps(branch, branch_steps)
            if idx != len(steps) - 1:
                raise ReplayError("steps continue past the case split")
            return
        _apply_step(state, step)
    raise ReplayError("trace ended without a contradiction")


def verify_trace(trace: ContradictionTrace) -> None:
    """Re-run every deduction; raises :class:`ReplayError` on any gap."""
    state = _State(trace.instance, trace.profiles)
    _verify_steps(state, trace.steps)


# ---------------------------------------------------------------------------
# Profile construction
# ---------------------------------------------------------------------------

X, Y = 0, 1  # the two designated objects in every proof


def _complete(instance: Instance, head) -> tuple:
    """One individual's classification: designated head plus the generic tail.

    ``head`` gives the categories of objects 0 and 1; remaining objects go to
    categories 2..p-1 in order, overflowing into the last category.
    """
    m, p = instance.m, instance.p
    tail = [2 + k if 2 + k < p else p - 1 for k in range(m - 2)]
    return tuple(list(head) + tail)


def _profile(instance: Instance, head0, head1, head_rest) -> tuple:
    rest = _complete(instance, head_rest)
    return tuple(
        [_complete(instance, head0), _complete(instance, head1)]
        + [rest] * (instance.n - 2)
    )


def _min_claims(same_category: bool) -> tuple:
    t2 = 0 if same_category else 1
    return (
        DecisivenessClaim(MINIMALLY_DECISIVE, 0, object=X, category=0),
        DecisivenessClaim(MINIMALLY_DECISIVE, 1, object=Y, category=t2),
    )


def _force(profile, obj, cat, axiom, claim=None, detail=""):
    return TraceStep("force", profile=profile, obj=obj, category=cat, axiom=axiom, claim=claim, detail=detail)


def _exclude(profile, obj, cat, axiom, claim=None, full_category=None, detail=""):
    return TraceStep(
        "exclude",
        profile=profile,
        obj=obj,
        category=cat,
        axiom=axiom,
        claim=claim,
        full_category=full_category,
        detail=detail,
    )


def _copy(source, target, obj):
    return TraceStep("copy", profile=target, obj=obj, source=source, axiom="independence")


def _contradiction(profile, detail, category=None, obj=None):
    return TraceStep(
        "contradiction", profile=profile, category=category, obj=obj, detail=detail
    )


# ---------------------------------------------------------------------------
# The five replays
# ---------------------------------------------------------------------------


def _replay_unanimity_conflict(instance, same_category, with_unanimity) -> ContradictionTrace:
    """Shared core of theorem-1 and prop-2."""
    claims = _min_claims(same_category)
    t2 = claims[1].category
    # Individual 0 swaps the designated objects; everyone else agrees with
    # individual 1.  Remaining objects are unanimous.
    c = _profile(instance, head0=(1, 0), head1=(0, 1), head_rest=(0, 1))
    steps = []
    if with_unanimity:
        for w in range(2, instance.m):
            steps.append(_force("c", w, c[0][w], "unanimity"))
    steps.append(_exclude("c", X, 0, "claim", claim=claims[0]))
    if same_category:
        steps.append(_exclude("c", Y, 0, "claim", claim=claims[1]))
    else:
        steps.append(_force("c", Y, t2, "claim", claim=claims[1]))
    steps.append(_contradiction("c", "empty-category", category=0))
    trace = ContradictionTrace(
        proof="theorem-1" if with_unanimity else "prop-2",
        instance=instance,
        same_category=same_category,
        claims=claims,
        profiles=(("c", c),),
        steps=tuple(steps),
    )
    verify_trace(trace)
    return trace


def replay_theorem_1(instance: Instance, same_category: bool = False) -> ContradictionTrace:
    """Unanimity plus two minimally decisive pairs empties a category."""
    return _replay_unanimity_conflict(instance, same_category, with_unanimity=True)


def replay_prop_2(instance: Instance, same_category: bool = False) -> ContradictionTrace:
    """At m = p = 2 the two minimally decisive pairs alone suffice."""
    if not (instance.m == 2 and instance.p == 2):
        raise ReplayPreconditionError("prop-2 needs m = p = 2")
    return _replay_unanimity_conflict(instance, same_category, with_unanimity=False)


def replay_prop_3(instance: Instance, same_category: bool = False) -> ContradictionTrace:
    """Independence plus minimal decisiveness fails for p <= m <= p+1."""
    m, p = instance.m, instance.p
    if not p <= m <= p + 1:
        raise ReplayPreconditionError("prop-3 needs p <= m <= p+1")
    if same_category and m != p + 1:
        raise ReplayPreconditionError("the equal-categories branch needs m = p+1")
    claims = _min_claims(same_category)
    extras = list(range(2, m))
    c = _profile(instance, head0=(0, 1), head1=(1, 0), head_rest=(0, 1))
    cpp = _profile(instance, head0=(1, 0), head1=(0, 1), head_rest=(0, 1))
    if not same_category:
        cp = _profile(instance, head0=(0, 1), head1=(0, 1), head_rest=(0, 1))
        profiles = (("c", c), ("c'", cp), ("c''", cpp))
        branches = []
        for z in extras:
            sub = [
                _force("c", z, 1, "assumption"),
                _force("c'", X, 0, "claim", claim=claims[0]),
                _force("c'", Y, 1, "claim", claim=claims[1]),
                _copy("c", "c'", z),
            ]
            if m == p:
                sub.append(_contradiction("c'", "capacity-clash", category=1))
            else:
                for w in extras:
                    if w == z:
                        continue
                    sub.append(_exclude("c'", w, 1, "capacity", full_category=1))
                    sub.append(_exclude("c'", w, 0, "capacity", full_category=1))
                sub.append(_exclude("c''", X, 0, "claim", claim=claims[0]))
                sub.append(_force("c''", Y, 1, "claim", claim=claims[1]))
                for v in extras:
                    sub.append(_copy("c'", "c''", v))
                sub.append(_contradiction("c''", "empty-category", category=0))
            branches.append((z, tuple(sub)))
        steps = [
            _force("c", X, 0, "claim", claim=claims[0]),
            _exclude("c", Y, 1, "claim", claim=claims[1]),
        ]
        if branches:
            steps.append(
                TraceStep("case-split", profile="c", category=1, branches=tuple(branches))
            )
        else:
            # m = p = 2: no object can cover the second category at all.
            steps.append(_contradiction("c", "empty-category", category=1))
    else:
        profiles = (("c", c), ("c''", cpp))
        steps = [
            _force("c", X, 0, "claim", claim=claims[0]),
            _force("c", Y, 0, "claim", claim=claims[1]),
        ]
        for w in extras:
            steps.append(_exclude("c", w, 0, "capacity", full_category=0))
        steps.append(_split_bijection(instance, claims, extras, list(range(1, p))))
    trace = ContradictionTrace(
        proof="prop-3",
        instance=instance,
        same_category=same_category,
        claims=claims,
        profiles=profiles,
        steps=tuple(steps),
    )
    verify_trace(trace)
    return trace


def _split_bijection(instance, claims, free_objects, categories):
    """Nested case splits assigning each remaining category its sole object.

    Once every category but the designated one has its object pinned, the
    Independence copies into c'' empty the designated category.
    """

    def leaf(assignment):
        steps = [
            _exclude("c''", X, 0, "claim", claim=claims[0]),
            _exclude("c''", Y, 0, "claim", claim=claims[1]),
        ]
        for z in free_objects:
            steps.append(_copy("c", "c''", z))
        steps.append(_contradiction("c''", "empty-category", category=0))
        return tuple(steps)

    def split(remaining_cats, assignment):
        if not remaining_cats:
            return leaf(assignment)
        t = remaining_cats[0]
        branches = []
        for z in free_objects:
            if z in assignment:
                continue
            sub_assignment = dict(assignment)
            sub_assignment[z] = t
            sub = [_force("c", z, t, "assumption")]
            rest = split(remaining_cats[1:], sub_assignment)
            if isinstance(rest, tuple):
                sub.extend(rest)
            else:
                sub.append(rest)
            branches.append((z, tuple(sub)))
        return TraceStep("case-split", profile="c", category=t, branches=tuple(branches))

    return split(categories, {})


def replay_prop_4(instance: Instance) -> ContradictionTrace:
    """Two object-decisive individuals collide in one category at m = p."""
    if instance.m != instance.p:
        raise ReplayPreconditionError("prop-4 needs m = p")
    claims = (
        DecisivenessClaim(OBJECT_DECISIVE, 0, object=X),
        DecisivenessClaim(OBJECT_DECISIVE, 1, object=Y),
    )
    c = _profile(instance, head0=(1, 0), head1=(0, 1), head_rest=(0, 1))
    steps = (
        _force("c", X, 1, "claim", claim=claims[0]),
        _force("c", Y, 1, "claim", claim=claims[1]),
        _contradiction("c", "capacity-clash", category=1),
    )
    trace = ContradictionTrace(
        proof="prop-4",
        instance=instance,
        same_category=False,
        claims=claims,
        profiles=(("c", c),),
        steps=steps,
    )
    verify_trace(trace)
    return trace


def replay_prop_5(instance: Instance, same_category: bool = False) -> ContradictionTrace:
    """Categorical decisiveness is unsatisfiable outright."""
    m, p = instance.m, instance.p
    t2 = 0 if same_category else 1
    claims = (
        DecisivenessClaim(CATEGORICALLY_DECISIVE, 0, category=0),
        DecisivenessClaim(CATEGORICALLY_DECISIVE, 1, category=t2),
    )
    if same_category:
        c = _profile(instance, head0=(0, 1), head1=(1, 0), head_rest=(1, 0))
    elif p == 2:
        # The generic tail would hand the second individual a spare object in
        # its decisive category; glue extras to object 1's category instead.
        def follow_y(head):
            return tuple(list(head) + [head[1]] * (m - 2))

        c = tuple(
            [follow_y((0, 1)), follow_y((1, 0))] + [follow_y((0, 1))] * (instance.n - 2)
        )
    else:
        c = _profile(instance, head0=(0, 1), head1=(1, 0), head_rest=(0, 1))
    steps = []
    emptied = None
    state = _State(instance, (("c", c),))
    for claim in claims:
        for obj in range(m):
            if c[claim.individual][obj] != claim.category:
                steps.append(_exclude("c", obj, claim.category, "claim", claim=claim))
                _apply_step(state, steps[-1])
                if not state.cands[("c", obj)]:
                    emptied = obj
                    break
        if emptied is not None:
            break
    if emptied is not None:
        steps.append(_contradiction("c", "cell-empty", obj=emptied))
    elif same_category:
        steps.append(_contradiction("c", "empty-category", category=0))
    else:
        steps.append(_force("c", X, 0, "surjectivity"))
        steps.append(_force("c", X, 1, "surjectivity"))
        steps.append(_contradiction("c", "cell-empty", obj=X))
    trace = ContradictionTrace(
        proof="prop-5",
        instance=instance,
        same_category=same_category,
        claims=claims,
        profiles=(("c", c),),
        steps=tuple(steps),
    )
    verify_trace(trace)
    return trace


_REPLAYS = {
    "theorem-1": replay_theorem_1,
    "prop-2": replay_prop_2,
    "prop-3": replay_prop_3,
    "prop-4": replay_prop_4,
    "prop-5": replay_prop_5,
}


def replay_theorem(name: str, instance: Instance, same_category: bool = False) -> ContradictionTrace:
    """Dispatch a named proof replay; the trace returned is already verified."""
    if name not in _REPLAYS:
        raise ReplayPreconditionError(f"unknown proof {name!r}; choose from {PROOFS}")
    if name == "prop-4":
        if same_category:
            raise ReplayPreconditionError("prop-4 has no equal-categories branch")
        return replay_prop_4(instance)
    return _REPLAYS[name](instance, same_category)
