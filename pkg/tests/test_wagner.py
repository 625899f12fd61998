import itertools
import random

import pytest
from hypothesis import given, settings

from wecken.freegroup import Word, enumerate_words, parse_word
from wecken.wagner import (
    Endomorphism,
    NoRemnantError,
    class_partition,
    has_remnant,
    has_remnant_bruteforce,
    nielsen_number,
    remnant_bounds,
    tail_table,
)

from conftest import endomorphisms, random_maps

EXAMPLE = "ba^3b;ab^-1a^2"


def phi(text, n=2):
    return Endomorphism.parse(text, n)


def rows(table):
    return [
        (r.kind, r.owner, r.position, r.epsilon, str(r.w), str(r.w_bar), r.index)
        for r in table
    ]


def test_endomorphism_validation():
    with pytest.raises(ValueError):
        Endomorphism(2, (Word((1,)),))
    with pytest.raises(ValueError):
        Endomorphism(2, (Word((3,)), Word()))
    with pytest.raises(ValueError):
        Endomorphism.parse("a;b;a", 2)
    assert phi(EXAMPLE)(1) == parse_word("ba^3b", 2)
    assert phi(EXAMPLE).format() == EXAMPLE


def test_example_tail_table():
    expected = [
        ("wedge", None, None, None, "1", "1", 1),
        ("occurrence", 1, 2, 1, "b", "b^-1a^-2", -1),
        ("occurrence", 1, 3, 1, "ba", "b^-1a^-1", -1),
        ("occurrence", 1, 4, 1, "ba^2", "b^-1", -1),
        ("occurrence", 2, 2, -1, "ab^-1", "a^-2b", 1),
    ]
    assert rows(tail_table(phi(EXAMPLE))) == expected


def test_example_record_dicts():
    d = tail_table(phi(EXAMPLE)).as_dicts()
    assert d[4] == {
        "kind": "occurrence", "owner": 2, "position": 2, "epsilon": -1,
        "w": "ab^-1", "wBar": "a^-2b", "index": 1,
    }


def test_example_classes_and_nielsen():
    f = phi(EXAMPLE)
    part = class_partition(f)
    assert part.classes == ((0,), (1,), (2,), (3,), (4,))
    assert part.index_sums == (1, -1, -1, -1, 1)
    assert all(part.essential)
    assert has_remnant(f)
    assert nielsen_number(f) == 5


def test_wedge_only():
    f = phi("b^2;a^2")
    assert len(tail_table(f)) == 1
    assert class_partition(f).classes == ((0,),)
    assert has_remnant(f)
    assert nielsen_number(f) == 1


def test_squares():
    f = phi("a^2;b^-2")
    assert rows(tail_table(f))[1:] == [
        ("occurrence", 1, 1, 1, "1", "a^-1", -1),
        ("occurrence", 1, 2, 1, "a", "1", -1),
        ("occurrence", 2, 1, -1, "b^-1", "b^2", 1),
        ("occurrence", 2, 2, -1, "b^-2", "b", 1),
    ]
    part = class_partition(f)
    assert part.classes == ((0, 1, 2), (3,), (4,))
    assert part.index_sums == (-1, 1, 1)
    assert nielsen_number(f) == 3


@pytest.mark.parametrize(
    "text, remnant",
    [(EXAMPLE, True), ("ab;b^-1", False), ("b^2;a^2", True), ("1;a", False), ("ab;ba", True), ("ab;b^-1a^-1", False)],
)
def test_remnant_examples(text, remnant):
    f = phi(text)
    assert has_remnant(f) is remnant
    assert has_remnant_bruteforce(f) is remnant


def test_remnant_bounds_example():
    # ab b^-1a cancels one letter at the seam, on the right of ab and the left of b^-1a
    assert remnant_bounds(phi("ab;b^-1a")) == [(0, 1), (1, 0)]
    assert remnant_bounds(phi("ab;ba")) == [(0, 0), (0, 0)]


def test_nielsen_requires_remnant():
    with pytest.raises(NoRemnantError):
        nielsen_number(phi("ab;b^-1"))


def test_remnant_exhaustive_rank2():
    small = list(enumerate_words(2, 3))
    assert len(small) == 53
    for a, b in itertools.product(small, repeat=2):
        f = Endomorphism(2, (a, b))
        assert has_remnant(f) == has_remnant_bruteforce(f), f


def test_remnant_random(random_sample):
    mismatches = [f for f in random_sample if has_remnant(f) != has_remnant_bruteforce(f)]
    assert mismatches == []


def _trace(f):
    return sum(sum(1 if x == i else -1 for x in w if abs(x) == i)
               for i, w in enumerate(f.images, start=1))


def test_index_sum_law(random_sample):
    for f in random_sample:
        table = tail_table(f)
        assert table.index_sum == 1 - _trace(f)
        occ = sum(sum(abs(x) == i for x in w) for i, w in enumerate(f.images, start=1))
        assert len(table) == 1 + occ


@settings(max_examples=200)
@given(endomorphisms(3))
def test_partition_is_tail_components(f):
    table = tail_table(f)
    part = class_partition(f, table)
    assert sorted(i for block in part.classes for i in block) == list(range(len(table)))
    block_of = {i: k for k, block in enumerate(part.classes) for i in block}
    # directly related records share a block
    for r, q in itertools.combinations(table, 2):
        if set(r.tails()) & set(q.tails()):
            assert block_of[r.id] == block_of[q.id]
    # every block is connected by direct relations
    for block in part.classes:
        reached, frontier = {block[0]}, [block[0]]
        while frontier:
            i = frontier.pop()
            for j in block:
                if j not in reached and set(table[i].tails()) & set(table[j].tails()):
                    reached.add(j)
                    frontier.append(j)
        assert reached == set(block)
    if has_remnant(f):
        assert nielsen_number(f) <= len(part) <= len(table)


def test_relabel_invariance():
    rng = random.Random(7)
    for f in random_maps(500, ns=(3, 5), ps=(4, 8), seed=3):
        perm = list(range(1, f.rank + 1))
        rng.shuffle(perm)
        g = f.relabel(perm)
        old, new = tail_table(f), tail_table(g)
        sigma = dict(zip(range(1, f.rank + 1), perm))
        moved = lambda w: tuple(sigma[abs(x)] * (1 if x > 0 else -1) for x in w)
        key = lambda r: (r.kind, r.owner, r.position)
        mapped = sorted(
            ((r.kind, sigma.get(r.owner), r.position), moved(r.w), moved(r.w_bar), r.index)
            for r in old
        )
        got = sorted((key(r), tuple(r.w), tuple(r.w_bar), r.index) for r in new)
        assert mapped == got
        assert has_remnant(f) == has_remnant(g)
        if has_remnant(f):
            assert nielsen_number(f) == nielsen_number(g)


def test_trivial_image_has_no_remnant_but_tabulates():
    f = phi("1;ab")
    assert not has_remnant(f)
    assert len(tail_table(f)) == 2
