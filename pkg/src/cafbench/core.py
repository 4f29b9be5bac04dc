"""Instances, classifications, profiles, and their enumeration.

A classification is a tuple of category indices, one per object, covering
every category at least once.  A profile is one classification per
individual.  Everything here is immutable and pure; enumeration order is
lexicographic throughout so ranks are stable across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

# One category index per object.
Classification = tuple
# One classification per individual.
Profile = tuple

#: Default budget on S(m,p)^n * m table cells before enumeration is refused.
DEFAULT_CELL_BUDGET = 10_000_000


class InstanceTooLargeError(Exception):
    """Raised when an enumeration would exceed the configured cell budget."""


@dataclass(frozen=True)
class Instance:
    """Problem dimensions: n individuals classify m objects into p categories.

    Objects are indices 0..m-1, categories 0..p-1, individuals 0..n-1.
    Requires n >= 2 and m >= p >= 2; instances with m < p admit no
    classification at all and are rejected outright.
    """

    n: int
    m: int
    p: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 individuals, got n={self.n}")
        if self.p < 2:
            raise ValueError(f"need at least 2 categories, got p={self.p}")
        if self.m < self.p:
            raise ValueError(
                f"need at least as many objects as categories, got m={self.m} < p={self.p}"
            )

    @property
    def num_classifications(self) -> int:
        return count_surjections(self.m, self.p)

    @property
    def num_profiles(self) -> int:
        return self.num_classifications**self.n

    @property
    def num_cells(self) -> int:
        return self.num_profiles * self.m

    def check_budget(self, cell_budget: int = DEFAULT_CELL_BUDGET) -> None:
        if self.num_cells > cell_budget:
            raise InstanceTooLargeError(
                f"instance {(self.n, self.m, self.p)} needs {self.num_cells} "
                f"table cells, budget is {cell_budget}"
            )


def count_surjections(m: int, p: int) -> int:
    """Number of surjections from m objects onto p categories.

    Inclusion-exclusion over the categories that could be missed; zero
    when m < p.
    """
    if m < 1 or p < 1:
        raise ValueError("m and p must be positive")
    if m < p:
        return 0
    return sum((-1) ** k * math.comb(p, k) * (p - k) ** m for k in range(p + 1))


def is_surjective(assignment: Classification, p: int) -> bool:
    return len(set(assignment)) == p and all(0 <= t < p for t in assignment)


def validate_classification(assignment: Classification, instance: Instance) -> None:
    if len(assignment) != instance.m:
        raise ValueError(
            f"classification has {len(assignment)} entries, expected m={instance.m}"
        )
    if not all(0 <= t < instance.p for t in assignment):
        raise ValueError(f"category index out of range in {assignment}")
    if len(set(assignment)) != instance.p:
        raise ValueError(f"classification {assignment} is not surjective onto p={instance.p}")


@lru_cache(maxsize=None)
def _classifications(m: int, p: int) -> tuple:
    return tuple(
        a for a in product(range(p), repeat=m) if len(set(a)) == p
    )


@lru_cache(maxsize=None)
def _classification_ranks(m: int, p: int) -> dict:
    return {c: r for r, c in enumerate(_classifications(m, p))}


def enumerate_classifications(
    instance: Instance, cell_budget: int = DEFAULT_CELL_BUDGET
) -> tuple:
    """All surjective assignments, in lexicographic order."""
    instance.check_budget(cell_budget)
    return _classifications(instance.m, instance.p)


def rank(instance: Instance, classification: Classification) -> int:
    """Position of a classification in the lexicographic enumeration."""
    validate_classification(classification, instance)
    return _classification_ranks(instance.m, instance.p)[tuple(classification)]


def unrank(instance: Instance, r: int) -> Classification:
    """Inverse of :func:`rank`."""
    cs = _classifications(instance.m, instance.p)
    if not 0 <= r < len(cs):
        raise ValueError(f"classification rank {r} out of range [0, {len(cs)})")
    return cs[r]


def enumerate_profiles(
    instance: Instance, cell_budget: int = DEFAULT_CELL_BUDGET
) -> tuple:
    """All n-tuples of classifications, individual 0 varying slowest."""
    instance.check_budget(cell_budget)
    return tuple(product(_classifications(instance.m, instance.p), repeat=instance.n))


def profile_rank(instance: Instance, profile: Profile) -> int:
    """Row-major rank of a profile against the canonical enumeration."""
    s = instance.num_classifications
    ranks = _classification_ranks(instance.m, instance.p)
    r = 0
    for c in profile:
        r = r * s + ranks[tuple(c)]
    return r


def unrank_profile(instance: Instance, r: int) -> Profile:
    s = instance.num_classifications
    if not 0 <= r < s**instance.n:
        raise ValueError(f"profile rank {r} out of range")
    cs = _classifications(instance.m, instance.p)
    out = []
    for _ in range(instance.n):
        r, q = divmod(r, s)
        out.append(cs[q])
    return tuple(reversed(out))


def inverse_image(classification: Classification, t: int) -> frozenset:
    """Objects assigned to category t; nonempty for every t by surjectivity."""
    return frozenset(j for j, cat in enumerate(classification) if cat == t)


@dataclass(frozen=True)
class CafTable:
    """A classification aggregation function, fully materialized.

    ``outputs[r]`` is the social classification at the profile of rank r in
    the canonical profile enumeration.  Totality and surjectivity of every
    output are enforced at construction.
    """

    instance: Instance
    outputs: tuple

    def __post_init__(self):
        expected = self.instance.num_profiles
        if len(self.outputs) != expected:
            raise ValueError(
                f"table has {len(self.outputs)} entries, expected {expected}"
            )
        for r, out in enumerate(self.outputs):
            if len(out) != self.instance.m or len(set(out)) != self.instance.p:
                raise ValueError(
                    f"output at profile rank {r} is not a classification: {out}"
                )

    def apply(self, profile: Profile) -> Classification:
        return self.outputs[profile_rank(self.instance, profile)]


def _is_perm(seq: tuple) -> bool:
    return sorted(seq) == list(range(len(seq)))


def _invert(perm: tuple) -> tuple:
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v] = i
    return tuple(inv)


@dataclass(frozen=True)
class Relabeling:
    """Simultaneous renaming of objects, categories, and individuals."""

    object_perm: tuple
    category_perm: tuple
    individual_perm: tuple

    def __post_init__(self):
        for name, perm in (
            ("object_perm", self.object_perm),
            ("category_perm", self.category_perm),
            ("individual_perm", self.individual_perm),
        ):
            if not _is_perm(perm):
                raise ValueError(f"{name} is not a permutation: {perm}")

    @staticmethod
    def identity(instance: Instance) -> "Relabeling":
        return Relabeling(
            tuple(range(instance.m)), tuple(range(instance.p)), tuple(range(instance.n))
        )

    def inverse(self) -> "Relabeling":
        return Relabeling(
            _invert(self.object_perm),
            _invert(self.category_perm),
            _invert(self.individual_perm),
        )

    def compose(self, other: "Relabeling") -> "Relabeling":
        """Relabeling equal to applying ``other`` first, then ``self``."""
        return Relabeling(
            tuple(self.object_perm[j] for j in other.object_perm),
            tuple(self.category_perm[t] for t in other.category_perm),
            tuple(self.individual_perm[i] for i in other.individual_perm),
        )


def apply_relabeling(classification: Classification, rel: Relabeling) -> Classification:
    """Rename objects and categories; surjectivity is preserved."""
    if len(classification) != len(rel.object_perm):
        raise ValueError("object permutation length does not match classification")
    out = [0] * len(classification)
    for j, cat in enumerate(classification):
        out[rel.object_perm[j]] = rel.category_perm[cat]
    return tuple(out)


def apply_relabeling_profile(profile: Profile, rel: Relabeling) -> Profile:
    if len(profile) != len(rel.individual_perm):
        raise ValueError("individual permutation length does not match profile")
    out = [None] * len(profile)
    for i, c in enumerate(profile):
        out[rel.individual_perm[i]] = apply_relabeling(c, rel)
    return tuple(out)


def apply_relabeling_table(table: CafTable, rel: Relabeling) -> CafTable:
    """Conjugate a table by a relabeling.

    The new table sends a relabeled profile to the relabeled output of the
    original table on the original profile.
    """
    inst = table.instance
    inv = rel.inverse()
    outputs = []
    for r in range(inst.num_profiles):
        original = apply_relabeling_profile(unrank_profile(inst, r), inv)
        outputs.append(apply_relabeling(table.outputs[profile_rank(inst, original)], rel))
    return CafTable(inst, tuple(outputs))
