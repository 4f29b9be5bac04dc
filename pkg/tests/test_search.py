from itertools import product

import pytest

from cafbench.axioms import (
    MINIMALLY_DECISIVE,
    MINIMALLY_SEMI_DECISIVE,
    DecisivenessClaim,
    check_claim,
    check_independence,
    check_minimal_expertise,
    check_unanimity,
)
from cafbench.core import (
    Instance,
    InstanceTooLargeError,
    enumerate_profiles,
)
from cafbench.search import (
    AxiomSet,
    brute_force_search,
    search,
)

FLAG_NAMES = (
    "unanimity",
    "independence",
    "expertise",
    "categorical_expertise",
    "minimal_expertise",
    "semi_decisive",
)


def axiom_subsets(names=FLAG_NAMES):
    for bits in product([False, True], repeat=len(names)):
        if any(bits):
            yield AxiomSet(**dict(zip(names, bits)))


def test_axiom_set_requires_a_flag():
    with pytest.raises(ValueError):
        AxiomSet()
    AxiomSet(unanimity=True)


def test_known_verdicts_minimal_expertise():
    # satisfiable everywhere except the 2x2 corner
    assert not search(Instance(2, 2, 2), AxiomSet(minimal_expertise=True)).satisfiable
    for m, p in [(3, 2), (4, 2), (3, 3), (4, 3)]:
        assert search(Instance(2, m, p), AxiomSet(minimal_expertise=True)).satisfiable


def test_known_verdicts_with_unanimity():
    # never satisfiable together with unanimity
    for m, p in [(2, 2), (3, 2), (4, 2), (3, 3), (4, 3)]:
        out = search(
            Instance(2, m, p), AxiomSet(minimal_expertise=True, unanimity=True)
        )
        assert not out.satisfiable


def test_known_verdicts_with_independence():
    # with independence: unsatisfiable exactly when m <= p + 1
    for m, p, sat in [(2, 2, False), (3, 2, False), (4, 2, True), (3, 3, False), (4, 3, False)]:
        out = search(
            Instance(2, m, p), AxiomSet(minimal_expertise=True, independence=True)
        )
        assert out.satisfiable == sat


def test_known_verdicts_expertise_and_categorical():
    # full expertise: unsatisfiable exactly at m = p
    for m, p, sat in [(2, 2, False), (3, 2, True), (3, 3, False), (4, 3, True)]:
        assert search(Instance(2, m, p), AxiomSet(expertise=True)).satisfiable == sat
    # categorical expertise: never satisfiable
    for m, p in [(2, 2), (3, 2), (3, 3)]:
        assert not search(Instance(2, m, p), AxiomSet(categorical_expertise=True)).satisfiable


def test_search_agrees_with_brute_force_everywhere_at_2_2_2():
    inst = Instance(2, 2, 2)
    for axioms in axiom_subsets():
        fast = search(inst, axioms)
        slow = brute_force_search(inst, axioms)
        assert fast.verdict == slow.verdict, axioms.names


def test_search_agrees_with_brute_force_with_independence_at_2_3_2():
    # spot sample of independence-containing subsets via the factorized
    # oracle; the acceptance suite sweeps all of them
    inst = Instance(2, 3, 2)
    picks = [
        AxiomSet(independence=True),
        AxiomSet(independence=True, unanimity=True),
        AxiomSet(independence=True, minimal_expertise=True),
        AxiomSet(independence=True, expertise=True),
        AxiomSet(independence=True, unanimity=True, minimal_expertise=True),
    ]
    for axioms in picks:
        fast = search(inst, axioms)
        slow = brute_force_search(inst, axioms)
        assert fast.verdict == slow.verdict, axioms.names


def test_brute_force_cap():
    inst = Instance(2, 3, 2)
    with pytest.raises(InstanceTooLargeError):
        brute_force_search(inst, AxiomSet(unanimity=True))  # 6^36 tables, no factorization


def test_dictatorship_recovery():
    # unanimity + independence admit exactly the two dictatorships
    inst = Instance(2, 3, 2)
    out = brute_force_search(
        inst, AxiomSet(unanimity=True, independence=True), find_all=True
    )
    assert len(out.witnesses) == 2
    profiles = list(enumerate_profiles(inst))
    kinds = set()
    for table, _ in out.witnesses:
        for i in range(inst.n):
            if all(table.outputs[r] == prof[i] for r, prof in enumerate(profiles)):
                kinds.add(i)
    assert kinds == {0, 1}


def test_dictatorship_uniqueness_fails_in_degenerate_corner():
    # at (2,2,2) every object column is unique, so independence is vacuous and
    # the two all-disagree profiles are unconstrained: 4 tables, not 2
    out = brute_force_search(
        Instance(2, 2, 2), AxiomSet(unanimity=True, independence=True), find_all=True
    )
    assert len(out.witnesses) == 4


def test_witnesses_revalidate_through_checkers():
    inst = Instance(2, 3, 2)
    out = search(inst, AxiomSet(minimal_expertise=True))
    assert out.satisfiable
    table = out.table
    assert check_unanimity(table) is not None or True  # unanimity not required here
    for claim in out.claims:
        assert check_claim(table, claim) is None
    assert check_minimal_expertise(table) is not None

    out = search(inst, AxiomSet(minimal_expertise=True, independence=False))
    fb = search(Instance(2, 4, 2), AxiomSet(minimal_expertise=True, independence=True))
    assert fb.satisfiable
    assert check_independence(fb.table) is None
    for claim in fb.claims:
        assert check_claim(fb.table, claim) is None


def test_symmetry_reduction_preserves_verdicts():
    for n, m, p in [(2, 2, 2), (2, 3, 2)]:
        inst = Instance(n, m, p)
        for axioms in [
            AxiomSet(minimal_expertise=True),
            AxiomSet(minimal_expertise=True, unanimity=True),
            AxiomSet(expertise=True),
            AxiomSet(semi_decisive=True, unanimity=True),
        ]:
            a = search(inst, axioms, symmetry_reduction=True)
            b = search(inst, axioms, symmetry_reduction=False)
            assert a.verdict == b.verdict
            # reduction must explore no more tuples than the full product
            assert a.tuples_explored <= b.tuples_explored


def test_pinned_claims_relabeling_invariance():
    inst = Instance(2, 3, 2)
    base = (
        DecisivenessClaim(MINIMALLY_DECISIVE, 0, object=0, category=0),
        DecisivenessClaim(MINIMALLY_DECISIVE, 1, object=1, category=1),
    )
    moved = (
        DecisivenessClaim(MINIMALLY_DECISIVE, 1, object=2, category=1),
        DecisivenessClaim(MINIMALLY_DECISIVE, 0, object=0, category=0),
    )
    a = search(inst, AxiomSet(minimal_expertise=True, pinned=base))
    b = search(inst, AxiomSet(minimal_expertise=True, pinned=moved))
    assert a.verdict == b.verdict == "satisfiable"


def test_pinned_semi_decisive_same_category_unsat():
    # no unanimous rule honours two semi-decisive claims on a shared category
    pins = (
        DecisivenessClaim(MINIMALLY_SEMI_DECISIVE, 0, object=0, category=0),
        DecisivenessClaim(MINIMALLY_SEMI_DECISIVE, 1, object=1, category=0),
    )
    out = search(Instance(2, 3, 2), AxiomSet(unanimity=True, pinned=pins))
    assert not out.satisfiable


def test_timeout_verdict():
    out = search(
        Instance(2, 4, 3),
        AxiomSet(minimal_expertise=True, independence=True),
        timeout=1e-9,
    )
    assert out.verdict == "timeout"
    assert not out.satisfiable


def test_cell_budget_guard():
    with pytest.raises(InstanceTooLargeError):
        search(Instance(2, 4, 3), AxiomSet(minimal_expertise=True), cell_budget=10)


def test_monotonicity_adding_axioms_never_gains_satisfiability():
    inst = Instance(2, 3, 2)
    base = AxiomSet(minimal_expertise=True)
    assert search(inst, base).satisfiable
    stronger = AxiomSet(minimal_expertise=True, unanimity=True)
    # adding an axiom can only shrink the solution set
    if search(inst, stronger).satisfiable:
        assert search(inst, base).satisfiable
