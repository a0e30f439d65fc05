"""Set partitions with a cap on part size.

Engines that re-split merged blocks enumerate every partition of a small
label set into parts of size <= p, most-refined first: descending part
count, then lexicographic on the sorted part contents.  Sets here never
exceed 2p labels, so materialize-and-sort is fine.
"""

from __future__ import annotations

from itertools import combinations


def _partitions_rec(items: tuple, max_size: int):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for take in range(min(max_size, len(items)), 0, -1):
        for chosen in combinations(rest, take - 1):
            part = (head,) + chosen
            chosen_set = set(chosen)
            remaining = tuple(x for x in rest if x not in chosen_set)
            for tail in _partitions_rec(remaining, max_size):
                yield [part] + tail


def partitions_max_part(items, max_size: int) -> list[list[tuple]]:
    """All partitions with parts <= max_size, finest first.

    Each partition comes back as a list of sorted tuples; the list itself is
    in the canonical order (descending number of parts, then lexicographic
    on the sequence of sorted parts).
    """
    items = tuple(sorted(items))
    all_parts = []
    for parts in _partitions_rec(items, max_size):
        canon = sorted(tuple(sorted(p)) for p in parts)
        all_parts.append(canon)
    all_parts.sort(key=lambda ps: (-len(ps), ps))
    return all_parts
