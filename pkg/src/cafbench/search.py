"""Exhaustive satisfiability search over aggregation tables.

Given an instance and an axiom set, decide whether any total aggregation
table satisfies it.  The existential expertise axioms drive an outer loop
over admissible witness tuples (symmetry-reduced to canonical
representatives by default); for each tuple the remaining problem is a
constraint satisfaction over table cells.  Without Independence the
profiles decouple and are solved one by one; with Independence cells
sharing an object column merge into a single variable and a propagating
backtracker runs over the merged cells.  A slow but straightforward
brute-force enumerator doubles as an independent oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product
from typing import Optional

from cafbench.axioms import (
    CATEGORICALLY_DECISIVE,
    MINIMALLY_DECISIVE,
    MINIMALLY_SEMI_DECISIVE,
    OBJECT_DECISIVE,
    DecisivenessClaim,
    check_categorical_expertise,
    check_claim,
    check_expertise,
    check_independence,
    check_minimal_expertise,
    check_semi_decisive_pair,
    check_unanimity,
)
from cafbench.core import (
    CafTable,
    DEFAULT_CELL_BUDGET,
    Instance,
    InstanceTooLargeError,
    enumerate_classifications,
    enumerate_profiles,
)

#: Ceiling on the number of candidate tables the brute-force path may visit.
DEFAULT_TABLE_CAP = 5_000_000


class SearchTimeout(Exception):
    pass


@dataclass(frozen=True)
class AxiomSet:
    """Which axioms a table must satisfy.

    ``allow_equal_categories`` selects the permissive reading of categorical
    expertise (the two categories may coincide).  ``pinned`` skips the
    existential outer loop and checks exactly the given claims.
    """

    unanimity: bool = False
    independence: bool = False
    expertise: bool = False
    categorical_expertise: bool = False
    minimal_expertise: bool = False
    semi_decisive: bool = False
    allow_equal_categories: bool = True
    pinned: Optional[tuple] = None  # tuple of DecisivenessClaim

    def __post_init__(self):
        if not any(
            (
                self.unanimity,
                self.independence,
                self.expertise,
                self.categorical_expertise,
                self.minimal_expertise,
                self.semi_decisive,
            )
        ):
            raise ValueError("axiom set must enable at least one axiom")

    @property
    def existential_flags(self) -> tuple:
        flags = []
        if self.expertise:
            flags.append(OBJECT_DECISIVE)
        if self.categorical_expertise:
            flags.append(CATEGORICALLY_DECISIVE)
        if self.minimal_expertise:
            flags.append(MINIMALLY_DECISIVE)
        if self.semi_decisive:
            flags.append(MINIMALLY_SEMI_DECISIVE)
        return tuple(flags)

    def names(self) -> tuple:
        out = []
        for flag, name in (
            (self.unanimity, "unanimity"),
            (self.independence, "independence"),
            (self.expertise, "expertise"),
            (self.categorical_expertise, "categorical-expertise"),
            (self.minimal_expertise, "minimal-expertise"),
            (self.semi_decisive, "semi-decisive"),
        ):
            if flag:
                out.append(name)
        return tuple(out)


@dataclass(frozen=True)
class SearchOutcome:
    verdict: str  # "satisfiable" | "unsatisfiable" | "timeout"
    table: Optional[CafTable] = None
    claims: tuple = ()
    tuples_explored: int = 0
    nodes: int = 0

    @property
    def satisfiable(self) -> bool:
        return self.verdict == "satisfiable"


def _claim_pairs(kind: str, instance: Instance, allow_equal_categories: bool):
    """All admissible witness claim pairs of one kind, lexicographic order."""
    n, m, p = instance.n, instance.m, instance.p
    for i, j in product(range(n), repeat=2):
        if i == j:
            continue
        if kind == CATEGORICALLY_DECISIVE:
            for t, t2 in product(range(p), repeat=2):
                if t == t2 and not allow_equal_categories:
                    continue
                yield (
                    DecisivenessClaim(kind, i, category=t),
                    DecisivenessClaim(kind, j, category=t2),
                )
        elif kind == OBJECT_DECISIVE:
            for x, y in product(range(m), repeat=2):
                if x == y:
                    continue
                yield (
                    DecisivenessClaim(kind, i, object=x),
                    DecisivenessClaim(kind, j, object=y),
                )
        else:
            for x, y in product(range(m), repeat=2):
                if x == y:
                    continue
                for t, t2 in product(range(p), repeat=2):
                    yield (
                        DecisivenessClaim(kind, i, object=x, category=t),
                        DecisivenessClaim(kind, j, object=y, category=t2),
                    )


def _canonical_claim_pairs(kind: str, instance: Instance, allow_equal_categories: bool):
    """Orbit representatives under relabeling of individuals/objects/categories.

    Individuals pin to (0, 1) and objects to (0, 1); the first category pins
    to 0 and the second is either equal (0) or not (1).
    """
    if kind == CATEGORICALLY_DECISIVE:
        seconds = [1] + ([0] if allow_equal_categories else [])
        for t2 in sorted(seconds):
            yield (
                DecisivenessClaim(kind, 0, category=0),
                DecisivenessClaim(kind, 1, category=t2),
            )
    elif kind == OBJECT_DECISIVE:
        yield (
            DecisivenessClaim(kind, 0, object=0),
            DecisivenessClaim(kind, 1, object=1),
        )
    else:
        for t2 in (0, 1):
            yield (
                DecisivenessClaim(kind, 0, object=0, category=0),
                DecisivenessClaim(kind, 1, object=1, category=t2),
            )


def _witness_tuples(instance: Instance, axioms: AxiomSet, symmetry_reduction: bool):
    """Joint witness tuples: one claim pair per requested existential axiom."""
    if axioms.pinned is not None:
        yield tuple(axioms.pinned)
        return
    flags = axioms.existential_flags
    if not flags:
        yield ()
        return
    # Canonicalization picks one representative per relabeling orbit, which
    # is only a single orbit computation when one existential axiom is set.
    if symmetry_reduction and len(flags) == 1:
        gen = _canonical_claim_pairs(flags[0], instance, axioms.allow_equal_categories)
        for pair in gen:
            yield pair
        return
    pools = [
        list(_claim_pairs(kind, instance, axioms.allow_equal_categories))
        for kind in flags
    ]
    for combo in product(*pools):
        yield tuple(c for pair in combo for c in pair)


def _cell_mask(instance, profile, obj, claims, unanimity, full_mask):
    """Allowed-category bitmask for one (profile, object) cell."""
    mask = full_mask
    if unanimity:
        t = profile[0][obj]
        if all(c[obj] == t for c in profile[1:]):
            mask &= 1 << t
    for claim in claims:
        kind = claim.kind
        if kind == OBJECT_DECISIVE:
            if claim.object == obj:
                mask &= 1 << profile[claim.individual][obj]
        elif kind == CATEGORICALLY_DECISIVE:
            if profile[claim.individual][obj] != claim.category:
                mask &= ~(1 << claim.category)
        elif kind == MINIMALLY_DECISIVE:
            if claim.object == obj:
                if profile[claim.individual][obj] == claim.category:
                    mask &= 1 << claim.category
                else:
                    mask &= ~(1 << claim.category)
        else:  # minimally semi-decisive
            if claim.object == obj and profile[claim.individual][obj] == claim.category:
                mask &= 1 << claim.category
    return mask


def _solve_decoupled(instance, profiles, classifications, claims, unanimity, deadline):
    """Profile-by-profile solve; valid when no constraint links profiles."""
    full = (1 << instance.p) - 1
    outputs = []
    nodes = 0
    for profile in profiles:
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout
        masks = [
            _cell_mask(instance, profile, x, claims, unanimity, full)
            for x in range(instance.m)
        ]
        chosen = None
        for cand in classifications:
            nodes += 1
            if all(masks[x] >> cand[x] & 1 for x in range(instance.m)):
                chosen = cand
                break
        if chosen is None:
            return None, nodes
        outputs.append(chosen)
    return tuple(outputs), nodes


def _solve_independent(instance, profiles, claims, unanimity, deadline):
    """Backtracking over column-merged cells with surjectivity propagation.

    Variables are (object, column-pattern) classes; each profile constrains
    the m classes its columns select, and every category must keep at least
    one supporting cell per profile.
    """
    m, p = instance.m, instance.p
    full = (1 << p) - 1
    var_ids = {}
    var_profiles = []  # vid -> profile indices touching it
    domains = []
    profile_vars = []
    for pr, profile in enumerate(profiles):
        row = []
        for x in range(m):
            col = (x, tuple(c[x] for c in profile))
            vid = var_ids.get(col)
            if vid is None:
                vid = len(domains)
                var_ids[col] = vid
                domains.append(full)
                var_profiles.append([])
            mask = _cell_mask(instance, profile, x, claims, unanimity, full)
            domains[vid] &= mask
            row.append(vid)
            var_profiles[vid].append(pr)
        profile_vars.append(row)
    if any(d == 0 for d in domains):
        return None, 1

    bit_of = {1 << t: t for t in range(p)}
    trail = []
    nodes = 0

    def set_domain(vid, new):
        trail.append((vid, domains[vid]))
        domains[vid] = new

    def propagate(queue):
        while queue:
            pr = queue.pop()
            row = profile_vars[pr]
            for t in range(p):
                bit = 1 << t
                support = [vid for vid in row if domains[vid] & bit]
                if not support:
                    return False
                if len(support) == 1 and domains[support[0]] != bit:
                    vid = support[0]
                    set_domain(vid, bit)
                    queue.update(var_profiles[vid])
        return True

    order = sorted(range(len(domains)), key=lambda v: (var_profiles[v][0], v))

    def pick():
        best = None
        best_key = None
        for vid in order:
            d = domains[vid]
            size = d.bit_count()
            if size > 1:
                key = (size,)
                if best_key is None or key < best_key:
                    best, best_key = vid, key
                    if size == 2:
                        break
        return best

    def backtrack():
        nonlocal nodes
        if deadline is not None and time.monotonic() > deadline:
            raise SearchTimeout
        vid = pick()
        if vid is None:
            return True
        d = domains[vid]
        for t in range(p):
            bit = 1 << t
            if not d & bit:
                continue
            nodes += 1
            mark = len(trail)
            set_domain(vid, bit)
            if propagate(set(var_profiles[vid])) and backtrack():
                return True
            while len(trail) > mark:
                v, old = trail.pop()
                domains[v] = old
        return False

    if not propagate(set(range(len(profiles)))):
        return None, 1
    if not backtrack():
        return None, nodes
    outputs = tuple(
        tuple(bit_of[domains[vid]] for vid in profile_vars[pr])
        for pr in range(len(profiles))
    )
    return outputs, nodes


def search(
    instance: Instance,
    axioms: AxiomSet,
    *,
    symmetry_reduction: bool = True,
    timeout: Optional[float] = None,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> SearchOutcome:
    """Decide whether any table over the instance satisfies the axiom set.

    Returns the first satisfying table with its witness claims, an
    unsatisfiable verdict with exhaustion counts, or a timeout verdict
    (never conflated with unsatisfiable).
    """
    instance.check_budget(cell_budget)
    profiles = enumerate_profiles(instance, cell_budget)
    classifications = enumerate_classifications(instance, cell_budget)
    deadline = None if timeout is None else time.monotonic() + timeout
    tuples_explored = 0
    total_nodes = 0
    try:
        for claims in _witness_tuples(instance, axioms, symmetry_reduction):
            tuples_explored += 1
            if axioms.independence:
                outputs, nodes = _solve_independent(
                    instance, profiles, claims, axioms.unanimity, deadline
                )
            else:
                outputs, nodes = _solve_decoupled(
                    instance, profiles, classifications, claims, axioms.unanimity, deadline
                )
            total_nodes += nodes
            if outputs is not None:
                return SearchOutcome(
                    verdict="satisfiable",
                    table=CafTable(instance, outputs),
                    claims=claims,
                    tuples_explored=tuples_explored,
                    nodes=total_nodes,
                )
    except SearchTimeout:
        return SearchOutcome(
            verdict="timeout", tuples_explored=tuples_explored, nodes=total_nodes
        )
    return SearchOutcome(
        verdict="unsatisfiable", tuples_explored=tuples_explored, nodes=total_nodes
    )


def _passes(table: CafTable, axioms: AxiomSet):
    """Run the axiom-module checkers verbatim; witness claims or None."""
    if axioms.unanimity and check_unanimity(table) is not None:
        return None
    if axioms.independence and check_independence(table) is not None:
        return None
    claims = []
    if axioms.pinned is not None:
        for claim in axioms.pinned:
            if check_claim(table, claim) is not None:
                return None
            claims.append(claim)
        return tuple(claims)
    for kind in axioms.existential_flags:
        if kind == OBJECT_DECISIVE:
            witness = check_expertise(table)
        elif kind == CATEGORICALLY_DECISIVE:
            witness = check_categorical_expertise(
                table, allow_equal_categories=axioms.allow_equal_categories
            )
        elif kind == MINIMALLY_DECISIVE:
            witness = check_minimal_expertise(table)
        else:
            witness = check_semi_decisive_pair(table)
        if witness is None:
            return None
        claims.extend(witness.claims)
    return tuple(claims)


def _candidate_tables(instance: Instance, independence: bool, table_cap: int):
    """Exhaustive candidate stream for the brute-force oracle."""
    profiles = enumerate_profiles(instance)
    classifications = enumerate_classifications(instance)
    s = len(classifications)
    if s ** len(profiles) <= table_cap:
        for combo in product(classifications, repeat=len(profiles)):
            yield combo
        return
    if not independence:
        raise _bf_cap_error(instance, table_cap)
    # Factorize into per-object column functions: every table built this way
    # is independent by construction, and every independent table arises.
    m, p, n = instance.m, instance.p, instance.n
    patterns = sorted({tuple(c[x] for c in prof) for prof in profiles for x in range(m)})
    per_object = p ** len(patterns)
    if per_object**m > table_cap:
        raise _bf_cap_error(instance, table_cap)
    pattern_index = {pat: k for k, pat in enumerate(patterns)}
    funcs = list(product(range(p), repeat=len(patterns)))
    for combo in product(funcs, repeat=m):
        outputs = []
        ok = True
        for prof in profiles:
            row = tuple(
                combo[x][pattern_index[tuple(c[x] for c in prof)]] for x in range(m)
            )
            if len(set(row)) != p:
                ok = False
                break
            outputs.append(row)
        if ok:
            yield tuple(outputs)


def _bf_cap_error(instance, cap):
    return InstanceTooLargeError(
        f"brute-force table space at {(instance.n, instance.m, instance.p)} "
        f"exceeds the cap of {cap} candidates"
    )


def brute_force_search(
    instance: Instance,
    axioms: AxiomSet,
    *,
    find_all: bool = False,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> "BruteForceOutcome":
    """Independent oracle: enumerate candidate tables and recheck axioms.

    Either the full table space fits under the cap, or Independence must be
    flagged so the space factorizes into per-object column functions.
    """
    witnesses = []
    explored = 0
    for outputs in _candidate_tables(instance, axioms.independence, table_cap):
        explored += 1
        table = CafTable(instance, outputs)
        claims = _passes(table, axioms)
        if claims is not None:
            if not find_all:
                return BruteForceOutcome("satisfiable", ((table, claims),), explored)
            witnesses.append((table, claims))
    if witnesses:
        return BruteForceOutcome("satisfiable", tuple(witnesses), explored)
    return BruteForceOutcome("unsatisfiable", (), explored)


@dataclass(frozen=True)
class BruteForceOutcome:
    verdict: str
    witnesses: tuple  # ((CafTable, claims), ...)
    tables_explored: int

    @property
    def satisfiable(self) -> bool:
        return self.verdict == "satisfiable"

    @property
    def table(self) -> Optional[CafTable]:
        return self.witnesses[0][0] if self.witnesses else None
