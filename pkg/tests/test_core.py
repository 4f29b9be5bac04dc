import math
from itertools import product

import pytest

from cafbench.core import (
    CafTable,
    Instance,
    InstanceTooLargeError,
    Relabeling,
    apply_relabeling,
    apply_relabeling_profile,
    apply_relabeling_table,
    count_surjections,
    enumerate_classifications,
    enumerate_profiles,
    inverse_image,
    is_surjective,
    profile_rank,
    rank,
    unrank,
    unrank_profile,
)

SMALL = [(2, 2, 2), (2, 3, 2), (2, 3, 3), (2, 4, 2), (2, 4, 3), (3, 3, 2)]


def brute_count_surjections(m, p):
    """Independent oracle: filter all p^m maps for surjectivity."""
    return sum(
        1 for f in product(range(p), repeat=m) if set(f) == set(range(p))
    )


def test_count_surjections_matches_brute_force():
    for m in range(1, 6):
        for p in range(1, m + 1):
            assert count_surjections(m, p) == brute_count_surjections(m, p)


def test_count_surjections_known_values():
    assert count_surjections(2, 2) == 2
    assert count_surjections(3, 2) == 6
    assert count_surjections(4, 3) == 36
    assert count_surjections(2, 3) == 0
    assert count_surjections(5, 5) == math.factorial(5)


def test_instance_validation():
    with pytest.raises(ValueError):
        Instance(1, 2, 2)  # need n >= 2
    with pytest.raises(ValueError):
        Instance(2, 2, 1)  # need p >= 2
    with pytest.raises(ValueError):
        Instance(2, 2, 3)  # need m >= p
    inst = Instance(2, 3, 2)
    assert inst.num_classifications == 6
    assert inst.num_profiles == 36
    assert inst.num_cells == 36 * 3


def test_budget_guard():
    inst = Instance(2, 3, 2)
    inst.check_budget(1000)
    with pytest.raises(InstanceTooLargeError):
        inst.check_budget(10)


def test_enumeration_is_lexicographic_and_complete():
    for n, m, p in SMALL:
        inst = Instance(n, m, p)
        cs = list(enumerate_classifications(inst))
        assert len(cs) == count_surjections(m, p)
        assert cs == sorted(cs)
        assert len(set(cs)) == len(cs)
        for c in cs:
            assert is_surjective(c, p)


def test_rank_unrank_roundtrip():
    for n, m, p in SMALL:
        inst = Instance(n, m, p)
        for r, c in enumerate(enumerate_classifications(inst)):
            assert rank(inst, c) == r
            assert unrank(inst, r) == c


def test_profile_enumeration_individual_zero_outermost():
    inst = Instance(2, 3, 2)
    profiles = list(enumerate_profiles(inst))
    assert len(profiles) == 36
    cs = list(enumerate_classifications(inst))
    # profile rank = rank(c_0) * S + rank(c_1)
    assert profiles[0] == (cs[0], cs[0])
    assert profiles[1] == (cs[0], cs[1])
    assert profiles[6] == (cs[1], cs[0])


def test_profile_rank_roundtrip():
    for n, m, p in SMALL:
        inst = Instance(n, m, p)
        for r, prof in enumerate(enumerate_profiles(inst)):
            assert profile_rank(inst, prof) == r
            assert unrank_profile(inst, r) == prof


def test_inverse_image_partitions_objects():
    inst = Instance(2, 4, 3)
    for c in enumerate_classifications(inst):
        cells = [inverse_image(c, t) for t in range(3)]
        assert all(cells)  # surjective: no empty category
        union = set().union(*cells)
        assert union == set(range(4))
        assert sum(len(s) for s in cells) == 4


def test_caftable_requires_total_surjective_outputs():
    inst = Instance(2, 2, 2)
    good = tuple(prof[0] for prof in enumerate_profiles(inst))
    CafTable(inst, good)
    with pytest.raises(ValueError):
        CafTable(inst, good[:-1])  # not total
    with pytest.raises(ValueError):
        CafTable(inst, ((0, 0),) * inst.num_profiles)  # not surjective


def test_caftable_apply_matches_outputs():
    inst = Instance(2, 3, 2)
    outputs = tuple(prof[1] for prof in enumerate_profiles(inst))
    table = CafTable(inst, outputs)
    for r, prof in enumerate(enumerate_profiles(inst)):
        assert table.apply(prof) == outputs[r]


def test_relabeling_requires_permutations():
    inst = Instance(2, 3, 2)
    Relabeling((1, 0, 2), (0, 1), (0, 1))
    with pytest.raises(ValueError):
        Relabeling((0, 0, 2), (0, 1), (0, 1))
    with pytest.raises(ValueError):
        apply_relabeling((0, 0, 1), Relabeling((0, 1), (0, 1), (0, 1)))


def test_relabeling_group_action():
    inst = Instance(2, 3, 2)
    rel = Relabeling((2, 0, 1), (1, 0), (1, 0))
    ident = Relabeling.identity(inst)
    for c in enumerate_classifications(inst):
        assert apply_relabeling(c, ident) == c
        assert apply_relabeling(apply_relabeling(c, rel), rel.inverse()) == c
        # composition acts as applying rel twice
        twice = rel.compose(rel)
        assert apply_relabeling(c, twice) == apply_relabeling(
            apply_relabeling(c, rel), rel
        )


def test_relabeling_moves_objects_and_categories():
    inst = Instance(2, 3, 2)
    rel = Relabeling((1, 2, 0), (1, 0), (0, 1))
    c = (0, 0, 1)
    out = apply_relabeling(c, rel)
    # object j lands at position object_perm[j] with category_perm applied
    assert out[1] == 1 and out[2] == 1 and out[0] == 0


def test_relabeling_profile_and_table_consistency():
    inst = Instance(2, 3, 2)
    rel = Relabeling((2, 0, 1), (1, 0), (1, 0))
    outputs = tuple(prof[0] for prof in enumerate_profiles(inst))
    table = CafTable(inst, outputs)
    moved = apply_relabeling_table(table, rel)
    for prof in enumerate_profiles(inst):
        lhs = moved.apply(apply_relabeling_profile(prof, rel))
        rhs = apply_relabeling(table.apply(prof), rel)
        assert lhs == rhs
