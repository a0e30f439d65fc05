"""Restricted-part-size partition enumeration and its canonical order."""

from pblocksim.partitions import partitions_max_part

from helpers import all_partitions


def test_counts_against_plain_recursion():
    for n in range(1, 7):
        for p in range(1, n + 1):
            items = list(range(n))
            got = partitions_max_part(items, p)
            want = {tuple(sorted(tuple(x) for x in parts))
                    for parts in all_partitions(items, p)}
            assert {tuple(ps) for ps in got} == want
            assert len(got) == len(want)


def test_order_finest_first():
    got = partitions_max_part([0, 1, 2], 2)
    assert got[0] == [(0,), (1,), (2,)]
    # then the two-part partitions in lexicographic order of sorted parts
    assert got[1:] == [[(0,), (1, 2)], [(0, 1), (2,)], [(0, 2), (1,)]]


def test_part_size_cap():
    for parts in partitions_max_part(range(6), 2):
        assert all(len(part) <= 2 for part in parts)


def test_singletons_only_when_p1():
    got = partitions_max_part([3, 5, 9], 1)
    assert got == [[(3,), (5,), (9,)]]
