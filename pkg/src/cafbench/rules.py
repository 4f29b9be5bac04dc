"""The known constructive aggregation rules, as deterministic procedures.

Each rule maps any profile of a valid instance to a surjective social
classification.  ``materialize`` evaluates a rule on every profile and
returns an explicit :class:`~cafbench.core.CafTable`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from cafbench.core import (
    CafTable,
    DEFAULT_CELL_BUDGET,
    Classification,
    Instance,
    Profile,
    enumerate_classifications,
    enumerate_profiles,
)

DICTATOR = "dictator"
SEMI_DECISIVE_PAIRS = "semi-decisive-pairs"
MINIMAL_PAIRS = "minimal-pairs"
FIXED_BLOCK = "fixed-block"
DECISIVE_PAIR_FILL = "decisive-pair-fill"

RULE_KINDS = (DICTATOR, SEMI_DECISIVE_PAIRS, MINIMAL_PAIRS, FIXED_BLOCK, DECISIVE_PAIR_FILL)


class RuleConfigError(ValueError):
    """The rule configuration violates its validity conditions."""


@dataclass(frozen=True)
class PriorityOrders:
    """Fixed walk orders used by the fill stages of the staged rules."""

    object_order: tuple
    category_order: tuple

    @staticmethod
    def identity(instance: Instance) -> "PriorityOrders":
        return PriorityOrders(tuple(range(instance.m)), tuple(range(instance.p)))


@dataclass(frozen=True)
class RuleConfig:
    """Parameters for one rule.

    ``pairs`` holds the two (individual, object, category) triples for the
    staged rules; ``decisive`` the (individual, object) pairs for the
    fixed-block and pair-fill rules; ``fixed`` the frozen assignment of the
    non-decisive objects; ``default`` the fallback classification of the
    minimal-pairs rule.
    """

    kind: str
    dictator: Optional[int] = None
    pairs: tuple = ()
    decisive: tuple = ()
    default: Optional[tuple] = None
    fixed: tuple = ()  # ((object, category), ...)
    orders: Optional[PriorityOrders] = None

    def resolved_orders(self, instance: Instance) -> PriorityOrders:
        return self.orders if self.orders is not None else PriorityOrders.identity(instance)


def validate_config(config: RuleConfig, instance: Instance) -> None:
    n, m, p = instance.n, instance.m, instance.p
    if config.kind not in RULE_KINDS:
        raise RuleConfigError(f"unknown rule kind {config.kind!r}")
    if config.kind == DICTATOR:
        if config.dictator is None or not 0 <= config.dictator < n:
            raise RuleConfigError(f"dictator index must be in 0..{n - 1}")
        return
    if config.kind in (SEMI_DECISIVE_PAIRS, MINIMAL_PAIRS):
        if len(config.pairs) != 2:
            raise RuleConfigError("exactly two (individual, object, category) triples required")
        (i1, x1, t1), (i2, x2, t2) = config.pairs
        if i1 == i2:
            raise RuleConfigError("the two decisive individuals must be distinct")
        if x1 == x2:
            raise RuleConfigError("the two decisive objects must be distinct")
        for i, x, t in config.pairs:
            if not (0 <= i < n and 0 <= x < m and 0 <= t < p):
                raise RuleConfigError(f"pair ({i}, {x}, {t}) out of range")
        if config.kind == SEMI_DECISIVE_PAIRS:
            if t1 == t2:
                # No unanimous rule can honour two semi-decisive claims on a
                # shared category: a profile where both triggers fire and
                # m - p extra objects are unanimously in that category leaves
                # only p - 2 objects for the remaining p - 1 categories.
                raise RuleConfigError(
                    "semi-decisive pairs must target distinct categories"
                )
            if p > 2 and m > p:
                # Forced cells can swallow every object: with both triggers
                # fired and the extras unanimously spread over all categories
                # but one, some category is left empty no matter how the rule
                # completes.  Satisfiable only when p = 2 or m = p.
                raise RuleConfigError(
                    "semi-decisive pairs need p = 2 or m = p (unanimity "
                    "conflicts otherwise)"
                )
        else:
            if t1 != t2 and not (m >= p > 2):
                raise RuleConfigError("minimal-pairs rule needs m >= p > 2")
            if t1 == t2 and not (m > p > 2):
                raise RuleConfigError(
                    "minimal-pairs rule with equal categories needs m > p > 2"
                )
            if config.default is None:
                raise RuleConfigError("minimal-pairs rule needs a default classification")
            d = config.default
            if len(d) != m or len(set(d)) != p:
                raise RuleConfigError(f"default {d} is not a classification")
            if d[x1] == t1 or d[x2] == t2:
                raise RuleConfigError(
                    "default classification must keep each decisive object out of "
                    "its decisive category"
                )
        return
    if config.kind == FIXED_BLOCK:
        decisive = config.decisive
        if len(decisive) < 2:
            raise RuleConfigError("at least two (individual, object) pairs required")
        inds = [i for i, _ in decisive]
        objs = [x for _, x in decisive]
        if len(set(inds)) != len(inds) or len(set(objs)) != len(objs):
            raise RuleConfigError("decisive individuals and objects must be distinct")
        if any(not (0 <= i < n and 0 <= x < m) for i, x in decisive):
            raise RuleConfigError("decisive pair out of range")
        if m < p + len(decisive):
            raise RuleConfigError(
                f"fixed-block rule needs m >= p + {len(decisive)} (got m={m}, p={p})"
            )
        fixed = dict(config.fixed)
        free = set(objs)
        if set(fixed) != set(range(m)) - free:
            raise RuleConfigError("fixed assignment must cover exactly the non-decisive objects")
        if set(fixed.values()) != set(range(p)):
            raise RuleConfigError("fixed assignment must cover all categories")
        return
    # decisive-pair-fill
    if len(config.decisive) != 2:
        raise RuleConfigError("exactly two (individual, object) pairs required")
    (i1, x1), (i2, x2) = config.decisive
    if i1 == i2 or x1 == x2:
        raise RuleConfigError("decisive individuals and objects must be distinct")
    if any(not (0 <= i < n and 0 <= x < m) for i, x in config.decisive):
        raise RuleConfigError("decisive pair out of range")
    if m != p + 1:
        raise RuleConfigError(f"pair-fill rule needs m = p + 1 (got m={m}, p={p})")


def dictator_rule(config: RuleConfig, instance: Instance, profile: Profile) -> Classification:
    """Copy the fixed individual's classification verbatim."""
    return tuple(profile[config.dictator])


def semi_decisive_pairs_rule(
    config: RuleConfig, instance: Instance, profile: Profile
) -> Classification:
    """Staged fill honouring two semi-decisive (individual, object, category) pairs.

    Triggered pairs are assigned first, then unanimous objects, then the
    first unassigned object fills the first empty category and so on, with
    leftovers distributed round-robin over the category order.
    """
    m, p = instance.m, instance.p
    orders = config.resolved_orders(instance)
    out = [None] * m
    for i, x, t in config.pairs:
        if profile[i][x] == t:
            out[x] = t
    for x in range(m):
        if out[x] is not None:
            continue
        t = profile[0][x]
        if all(c[x] == t for c in profile[1:]):
            out[x] = t
    _fill_first_to_first(out, orders)
    _round_robin(out, orders)
    assert len(set(out)) == p, "staged fill left a category empty"
    return tuple(out)


def _fill_first_to_first(out, orders: PriorityOrders) -> None:
    empty = [t for t in orders.category_order if t not in out]
    unassigned = iter(x for x in orders.object_order if out[x] is None)
    for t in empty:
        x = next(unassigned, None)
        if x is None:
            break
        out[x] = t


def _round_robin(out, orders: PriorityOrders, allowed=None) -> None:
    k = 0
    cats = orders.category_order
    for x in orders.object_order:
        if out[x] is not None:
            continue
        for _ in range(len(cats)):
            t = cats[k % len(cats)]
            k += 1
            if allowed is None or t in allowed.get(x, cats):
                out[x] = t
                break


def minimal_pairs_rule(
    config: RuleConfig, instance: Instance, profile: Profile
) -> Classification:
    """Enforce two minimally decisive pairs, both implication directions.

    Untriggered runs return the pre-given default classification; otherwise
    triggered objects are pinned, still-empty categories are filled by the
    earliest allowed unassigned object (the constrained categories first, so
    the fill cannot strand a decisive object), and leftovers go round-robin
    over their allowed categories.
    """
    m, p = instance.m, instance.p
    orders = config.resolved_orders(instance)
    (i1, x1, t1), (i2, x2, t2) = config.pairs
    fired1 = profile[i1][x1] == t1
    fired2 = profile[i2][x2] == t2
    if not fired1 and not fired2:
        return tuple(config.default)
    out = [None] * m
    allowed = {}
    if fired1:
        out[x1] = t1
    else:
        allowed[x1] = [t for t in orders.category_order if t != t1]
    if fired2:
        out[x2] = t2
    else:
        allowed[x2] = [t for t in orders.category_order if t != t2]
    # Fill empty categories, the ones a decisive object is barred from first.
    constrained = [t for t in dict.fromkeys((t2, t1)) if t not in out]
    rest = [t for t in orders.category_order if t not in out and t not in constrained]
    for t in constrained + rest:
        if t in out:
            continue
        for x in orders.object_order:
            if out[x] is None and t in allowed.get(x, orders.category_order):
                out[x] = t
                break
        else:
            raise AssertionError(f"no object available for category {t}")
    _round_robin(out, orders, allowed=allowed)
    assert all(v is not None for v in out) and len(set(out)) == p
    return tuple(out)


def fixed_block_rule(config: RuleConfig, instance: Instance, profile: Profile) -> Classification:
    """Frozen assignment for most objects; decisive individuals place the rest.

    The frozen block already covers every category, so the outcome is
    surjective no matter what the decisive individuals submit.
    """
    out = [None] * instance.m
    for x, t in config.fixed:
        out[x] = t
    for i, x in config.decisive:
        out[x] = profile[i][x]
    return tuple(out)


def decisive_pair_fill_rule(
    config: RuleConfig, instance: Instance, profile: Profile
) -> Classification:
    """Two decisive objects placed by their individuals, the rest fill gaps.

    Only valid at m = p + 1: the remaining objects pair first-to-first with
    the empty categories, and the single possible leftover lands in the
    first category of the order.
    """
    orders = config.resolved_orders(instance)
    out = [None] * instance.m
    for i, x in config.decisive:
        out[x] = profile[i][x]
    _fill_first_to_first(out, orders)
    for x in orders.object_order:
        if out[x] is None:
            out[x] = orders.category_order[0]
    assert len(set(out)) == instance.p
    return tuple(out)


_RULE_FUNCS = {
    DICTATOR: dictator_rule,
    SEMI_DECISIVE_PAIRS: semi_decisive_pairs_rule,
    MINIMAL_PAIRS: minimal_pairs_rule,
    FIXED_BLOCK: fixed_block_rule,
    DECISIVE_PAIR_FILL: decisive_pair_fill_rule,
}


def apply_rule(config: RuleConfig, instance: Instance, profile: Profile) -> Classification:
    validate_config(config, instance)
    return _RULE_FUNCS[config.kind](config, instance, profile)


def materialize(
    config: RuleConfig, instance: Instance, cell_budget: int = DEFAULT_CELL_BUDGET
) -> CafTable:
    """Evaluate the rule on every profile; validates every output."""
    validate_config(config, instance)
    func = _RULE_FUNCS[config.kind]
    outputs = tuple(
        func(config, instance, profile) for profile in enumerate_profiles(instance, cell_budget)
    )
    return CafTable(instance, outputs)


def default_config(
    kind: str,
    instance: Instance,
    dictator: int = 0,
    same_category: bool = False,
) -> RuleConfig:
    """Canonical configuration at an instance: individuals 0 and 1 decisive
    over objects 0 and 1 (categories 0 and 1, or both 0 with
    ``same_category``)."""
    t2 = 0 if same_category else 1
    if kind == DICTATOR:
        config = RuleConfig(DICTATOR, dictator=dictator)
    elif kind in (SEMI_DECISIVE_PAIRS, MINIMAL_PAIRS):
        pairs = ((0, 0, 0), (1, 1, t2))
        default = None
        if kind == MINIMAL_PAIRS:
            default = next(
                (
                    c
                    for c in enumerate_classifications(instance)
                    if c[0] != 0 and c[1] != t2
                ),
                None,
            )
        config = RuleConfig(kind, pairs=pairs, default=default)
    elif kind == FIXED_BLOCK:
        fixed = tuple((x, (x - 2) % instance.p) for x in range(2, instance.m))
        config = RuleConfig(FIXED_BLOCK, decisive=((0, 0), (1, 1)), fixed=fixed)
    elif kind == DECISIVE_PAIR_FILL:
        config = RuleConfig(DECISIVE_PAIR_FILL, decisive=((0, 0), (1, 1)))
    else:
        raise RuleConfigError(f"unknown rule kind {kind!r}")
    validate_config(config, instance)
    return config
