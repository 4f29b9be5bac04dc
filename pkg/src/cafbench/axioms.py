"""Executable axiom checkers over materialized aggregation tables.

Checkers either return ``None`` (pass) or a concrete :class:`AxiomViolation`
citing the first violating profile in enumeration order.  The existential
axioms (the three expertise variants and the semi-decisive-pair variant)
return the lexicographically first :class:`ExpertiseWitness`, or ``None``
when no admissible pair of decisive individuals exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from cafbench.core import CafTable, enumerate_profiles

OBJECT_DECISIVE = "object-decisive"
CATEGORICALLY_DECISIVE = "categorically-decisive"
MINIMALLY_DECISIVE = "minimally-decisive"
MINIMALLY_SEMI_DECISIVE = "minimally-semi-decisive"


@dataclass(frozen=True)
class DecisivenessClaim:
    """One individual's claimed decisive power.

    ``object-decisive`` carries an object and no category; ``categorically-
    decisive`` a category and no object; the minimal variants carry both.
    """

    kind: str
    individual: int
    object: Optional[int] = None
    category: Optional[int] = None

    def __post_init__(self):
        if self.kind == OBJECT_DECISIVE:
            ok = self.object is not None and self.category is None
        elif self.kind == CATEGORICALLY_DECISIVE:
            ok = self.object is None and self.category is not None
        elif self.kind in (MINIMALLY_DECISIVE, MINIMALLY_SEMI_DECISIVE):
            ok = self.object is not None and self.category is not None
        else:
            raise ValueError(f"unknown decisiveness kind {self.kind!r}")
        if not ok:
            raise ValueError(f"claim fields inconsistent with kind {self.kind!r}: {self}")


@dataclass(frozen=True)
class ExpertiseWitness:
    """Two distinct individuals, each decisive in the same sense."""

    first: DecisivenessClaim
    second: DecisivenessClaim

    def __post_init__(self):
        if self.first.individual == self.second.individual:
            raise ValueError("witness individuals must be distinct")
        if self.first.kind != self.second.kind:
            raise ValueError("witness claims must share a decisiveness kind")
        if self.first.kind in (OBJECT_DECISIVE, MINIMALLY_DECISIVE, MINIMALLY_SEMI_DECISIVE):
            if self.first.object == self.second.object:
                raise ValueError("witness objects must be distinct")

    @property
    def claims(self) -> tuple:
        return (self.first, self.second)


@dataclass(frozen=True)
class AxiomViolation:
    """A reproducible failure: re-checking the cited profiles re-fails."""

    axiom: str
    profile_ranks: tuple
    object: Optional[int] = None
    category: Optional[int] = None
    reason: str = ""


def check_unanimity(table: CafTable) -> Optional[AxiomViolation]:
    """Unanimously classified objects must keep their category socially."""
    inst = table.instance
    for r, profile in enumerate(enumerate_profiles(inst)):
        out = table.outputs[r]
        for x in range(inst.m):
            t = profile[0][x]
            if all(c[x] == t for c in profile[1:]) and out[x] != t:
                return AxiomViolation(
                    axiom="unanimity",
                    profile_ranks=(r,),
                    object=x,
                    category=t,
                    reason=(
                        f"all individuals place object {x} in category {t} "
                        f"but the output places it in {out[x]}"
                    ),
                )
    return None


def check_independence(table: CafTable) -> Optional[AxiomViolation]:
    """An object's social category may depend only on its column.

    Implemented by grouping profiles by per-object column and checking each
    group is constant, which is equivalent to the pairwise formulation
    without the quadratic scan.
    """
    inst = table.instance
    seen = {}  # (object, column) -> (first profile rank, output category)
    for r, profile in enumerate(enumerate_profiles(inst)):
        out = table.outputs[r]
        for x in range(inst.m):
            col = tuple(c[x] for c in profile)
            prev = seen.get((x, col))
            if prev is None:
                seen[(x, col)] = (r, out[x])
            elif prev[1] != out[x]:
                return AxiomViolation(
                    axiom="independence",
                    profile_ranks=(prev[0], r),
                    object=x,
                    reason=(
                        f"profiles {prev[0]} and {r} agree on object {x}'s column "
                        f"{col} but the outputs differ ({prev[1]} vs {out[x]})"
                    ),
                )
    return None


def is_decisive_over_object(table: CafTable, i: int, x: int) -> Optional[AxiomViolation]:
    """Individual i's category for object x is always the social one."""
    inst = table.instance
    for r, profile in enumerate(enumerate_profiles(inst)):
        if table.outputs[r][x] != profile[i][x]:
            return AxiomViolation(
                axiom=OBJECT_DECISIVE,
                profile_ranks=(r,),
                object=x,
                category=profile[i][x],
                reason=(
                    f"individual {i} places object {x} in {profile[i][x]} "
                    f"but the output places it in {table.outputs[r][x]}"
                ),
            )
    return None


def is_categorically_decisive(table: CafTable, i: int, t: int) -> Optional[AxiomViolation]:
    """Every object socially placed in t was placed there by individual i."""
    inst = table.instance
    for r, profile in enumerate(enumerate_profiles(inst)):
        out = table.outputs[r]
        for x in range(inst.m):
            if out[x] == t and profile[i][x] != t:
                return AxiomViolation(
                    axiom=CATEGORICALLY_DECISIVE,
                    profile_ranks=(r,),
                    object=x,
                    category=t,
                    reason=(
                        f"output places object {x} in category {t} but individual "
                        f"{i} placed it in {profile[i][x]}"
                    ),
                )
    return None


def is_minimally_decisive(
    table: CafTable, i: int, x: int, t: int
) -> Optional[AxiomViolation]:
    """Individual i puts x in t exactly when the output does (both directions)."""
    inst = table.instance
    for r, profile in enumerate(enumerate_profiles(inst)):
        mine = profile[i][x] == t
        social = table.outputs[r][x] == t
        if mine and not social:
            return AxiomViolation(
                axiom=MINIMALLY_DECISIVE,
                profile_ranks=(r,),
                object=x,
                category=t,
                reason=(
                    f"forward failure: individual {i} places object {x} in {t} "
                    f"but the output does not"
                ),
            )
        if social and not mine:
            return AxiomViolation(
                axiom=MINIMALLY_DECISIVE,
                profile_ranks=(r,),
                object=x,
                category=t,
                reason=(
                    f"backward failure: output places object {x} in {t} "
                    f"but individual {i} does not"
                ),
            )
    return None


def is_minimally_semi_decisive(
    table: CafTable, i: int, x: int, t: int
) -> Optional[AxiomViolation]:
    """Forward implication only: i placing x in t forces the output to."""
    inst = table.instance
    for r, profile in enumerate(enumerate_profiles(inst)):
        if profile[i][x] == t and table.outputs[r][x] != t:
            return AxiomViolation(
                axiom=MINIMALLY_SEMI_DECISIVE,
                profile_ranks=(r,),
                object=x,
                category=t,
                reason=(
                    f"individual {i} places object {x} in {t} but the output "
                    f"places it in {table.outputs[r][x]}"
                ),
            )
    return None


def check_claim(table: CafTable, claim: DecisivenessClaim) -> Optional[AxiomViolation]:
    if claim.kind == OBJECT_DECISIVE:
        return is_decisive_over_object(table, claim.individual, claim.object)
    if claim.kind == CATEGORICALLY_DECISIVE:
        return is_categorically_decisive(table, claim.individual, claim.category)
    if claim.kind == MINIMALLY_DECISIVE:
        return is_minimally_decisive(table, claim.individual, claim.object, claim.category)
    return is_minimally_semi_decisive(table, claim.individual, claim.object, claim.category)


def _distinct_pairs(k: int):
    return ((i, j) for i, j in product(range(k), repeat=2) if i != j)


def check_expertise(table: CafTable) -> Optional[ExpertiseWitness]:
    """First (i, j, x, y) with i, j decisive over distinct objects x, y."""
    inst = table.instance
    for i, j in _distinct_pairs(inst.n):
        for x, y in product(range(inst.m), repeat=2):
            if x == y:
                continue
            if (
                is_decisive_over_object(table, i, x) is None
                and is_decisive_over_object(table, j, y) is None
            ):
                return ExpertiseWitness(
                    DecisivenessClaim(OBJECT_DECISIVE, i, object=x),
                    DecisivenessClaim(OBJECT_DECISIVE, j, object=y),
                )
    return None


def check_categorical_expertise(
    table: CafTable, allow_equal_categories: bool = True
) -> Optional[ExpertiseWitness]:
    """First (i, j, t, t') with i, j categorically decisive over t, t'.

    Equal categories are admitted by default; pass
    ``allow_equal_categories=False`` for the strict reading.
    """
    inst = table.instance
    for i, j in _distinct_pairs(inst.n):
        for t, t2 in product(range(inst.p), repeat=2):
            if t == t2 and not allow_equal_categories:
                continue
            if (
                is_categorically_decisive(table, i, t) is None
                and is_categorically_decisive(table, j, t2) is None
            ):
                return ExpertiseWitness(
                    DecisivenessClaim(CATEGORICALLY_DECISIVE, i, category=t),
                    DecisivenessClaim(CATEGORICALLY_DECISIVE, j, category=t2),
                )
    return None


def check_minimal_expertise(table: CafTable) -> Optional[ExpertiseWitness]:
    """First (i, j, x, y, t, t') with minimal decisiveness over distinct x, y."""
    return _check_pairwise(table, MINIMALLY_DECISIVE, is_minimally_decisive)


def check_semi_decisive_pair(table: CafTable) -> Optional[ExpertiseWitness]:
    """Semi-decisive counterpart of :func:`check_minimal_expertise`."""
    return _check_pairwise(table, MINIMALLY_SEMI_DECISIVE, is_minimally_semi_decisive)


def _check_pairwise(table, kind, predicate) -> Optional[ExpertiseWitness]:
    inst = table.instance
    for i, j in _distinct_pairs(inst.n):
        for x, y in product(range(inst.m), repeat=2):
            if x == y:
                continue
            for t, t2 in product(range(inst.p), repeat=2):
                if (
                    predicate(table, i, x, t) is None
                    and predicate(table, j, y, t2) is None
                ):
                    return ExpertiseWitness(
                        DecisivenessClaim(kind, i, object=x, category=t),
                        DecisivenessClaim(kind, j, object=y, category=t2),
                    )
    return None
