from __future__ import annotations

from itertools import combinations, product

import pytest

from superstab.hardness import (
    CoverageInstance,
    oracle_min_coverage,
    parse_coverage,
    reduce_min_coverage,
    solve_two_side_deletion,
)
from superstab.model import Edge, FormatError, doctor, hospital
from superstab.oracle import CapExceeded, oracle_two_side_deletion
from superstab.superstable import exists_super_stable

from conftest import sample_instances

COVER_TEXT = """ground: a b
set A: a
set B: a b
x: 1
y: 1
"""


def edges(*pairs):
    return frozenset(Edge(d, h) for d, h in pairs)


def cover(ground, families, picks, limit):
    return CoverageInstance(tuple(ground), tuple(frozenset(f) for f in families), picks, limit)


def test_coverage_instance_validation():
    with pytest.raises(ValueError, match="invalid ground element name"):
        cover(["a(b"], [], 0, 0)
    with pytest.raises(ValueError, match="duplicate ground element"):
        cover(["a", "a"], [], 0, 0)
    with pytest.raises(ValueError, match="not a ground element"):
        cover(["a"], [{"b"}], 0, 0)
    with pytest.raises(ValueError, match="picks must be between"):
        cover(["a"], [{"a"}], 2, 0)
    with pytest.raises(ValueError, match="picks must be between"):
        cover(["a"], [{"a"}], -1, 0)
    with pytest.raises(ValueError, match="cover_limit must be between"):
        cover(["a"], [{"a"}], 1, 2)


def test_parse_coverage_roundtrip():
    cov = parse_coverage(COVER_TEXT)
    assert cov.ground == ("a", "b")
    assert cov.families == (frozenset({"a"}), frozenset({"a", "b"}))
    assert cov.picks == 1
    assert cov.cover_limit == 1


def test_parse_coverage_comments_and_blanks():
    text = "# intro\nground: a   # trailing\n\nset A:\nx: 0\ny: 1\n"
    cov = parse_coverage(text)
    assert cov.ground == ("a",)
    assert cov.families == (frozenset(),)


@pytest.mark.parametrize(
    "text,needle",
    [
        ("ground a\nx: 0\ny: 0\n", "expected ':'"),
        ("x: 0\ny: 0\n", "missing 'ground:'"),
        ("ground:\ny: 0\n", "missing 'x:'"),
        ("ground:\nx: 0\n", "missing 'y:'"),
        ("ground: a\nground: b\nx: 0\ny: 0\n", "second 'ground:'"),
        ("set A: a\nground: a\nx: 0\ny: 0\n", "before 'ground:'"),
        ("ground: a\nset A(: a\nx: 0\ny: 0\n", "invalid set name"),
        ("ground: a\nset A: a\nset A: a\nx: 1\ny: 0\n", "duplicate set name"),
        ("ground: a\nset A: b\nx: 0\ny: 0\n", "not in the ground set"),
        ("ground: a\nset A: a a\nx: 0\ny: 0\n", "duplicate set member"),
        ("ground: a a\nx: 0\ny: 0\n", "duplicate ground element"),
        ("ground: a\nx: two\ny: 0\n", "'x:' needs an integer"),
        ("ground: a\nx: 0\nx: 1\ny: 0\n", "second 'x:'"),
        ("ground: a\nx: 0\ny: 0\ny: 1\n", "second 'y:'"),
        ("ground: a\nwhat: 1\nx: 0\ny: 0\n", "expected 'ground:'"),
        ("ground: a\nx: 5\ny: 0\n", "picks must be between"),
        ("ground: a\nx: 0\ny: 9\n", "cover_limit must be between"),
    ],
)
def test_parse_coverage_errors(text, needle):
    with pytest.raises(FormatError, match=needle):
        parse_coverage(text)


def test_reduction_frozen_shape():
    red = reduce_min_coverage(parse_coverage(COVER_TEXT))
    inst = red.instance
    assert inst.doctors == ("T1", "T2")
    assert inst.hospitals == ("s1", "s2", "t1", "t2")
    assert inst.edges == edges(
        ("T1", "s1"), ("T1", "t1"), ("T2", "s1"), ("T2", "s2"), ("T2", "t2")
    )
    assert red.doctor_budget == 1
    assert red.hospital_budget == 1
    assert red.doctor_of == {1: doctor("T1"), 2: doctor("T2")}
    assert red.slot_of == {1: hospital("t1"), 2: hospital("t2")}
    for v in inst.vertices():
        for e in inst.incident(v):
            assert inst.rank_of(v, e) == 1


def test_reduction_is_deterministic():
    a = reduce_min_coverage(parse_coverage(COVER_TEXT)).instance
    b = reduce_min_coverage(parse_coverage(COVER_TEXT)).instance
    assert a == b


def test_reduction_ground_names_are_positional():
    red = reduce_min_coverage(cover(["zz", "aa"], [{"aa"}], 1, 0))
    # zz came first, so it is s1; the family member aa maps to s2.
    assert red.instance.edges == edges(("T1", "s2"), ("T1", "t1"))


def test_reduction_worked_example_end_to_end():
    red = reduce_min_coverage(parse_coverage(COVER_TEXT))
    witness = solve_two_side_deletion(red.instance, red.doctor_budget, red.hospital_budget)
    assert witness == frozenset({doctor("T2"), hospital("t1")})
    assert exists_super_stable(red.instance, witness) is not None
    assert oracle_min_coverage(parse_coverage(COVER_TEXT))


def test_empty_family_covers_nothing():
    yes = cover([], [set()], 1, 0)
    assert oracle_min_coverage(yes)
    red = reduce_min_coverage(yes)
    assert red.instance.doctors == ("T1",)
    assert red.instance.hospitals == ("t1",)
    assert solve_two_side_deletion(red.instance, red.doctor_budget, red.hospital_budget) == frozenset()


def test_single_member_family_cannot_meet_a_zero_limit():
    no = cover(["a"], [{"a"}], 1, 0)
    assert not oracle_min_coverage(no)
    red = reduce_min_coverage(no)
    assert red.doctor_budget == 0
    assert red.hospital_budget == 0
    assert solve_two_side_deletion(red.instance, 0, 0) is None


def test_zero_picks_always_cover():
    assert oracle_min_coverage(cover(["a", "b"], [{"a"}, {"b"}], 0, 0))
    assert oracle_min_coverage(cover(["a"], [], 0, 1))


def test_oracle_min_coverage_cap():
    cov = cover(["a"], [set()] * 3, 0, 0)
    with pytest.raises(CapExceeded, match="subset-search cap"):
        oracle_min_coverage(cov, max_families=2)


def test_solver_frozen_witnesses(tie_2x2):
    assert solve_two_side_deletion(tie_2x2, 1, 1) == frozenset({doctor("d1"), hospital("h2")})
    assert solve_two_side_deletion(tie_2x2, 0, 2) == frozenset(
        {hospital("h1"), hospital("h2")}
    )
    assert solve_two_side_deletion(tie_2x2, 2, 0) == frozenset({doctor("d1"), doctor("d2")})
    assert solve_two_side_deletion(tie_2x2, 0, 1) is None
    assert solve_two_side_deletion(tie_2x2, 1, 0) is None


def test_solver_zero_budgets_mirror_existence(strict_2x2, tie_2x2):
    assert solve_two_side_deletion(strict_2x2, 0, 0) == frozenset()
    assert solve_two_side_deletion(tie_2x2, 0, 0) is None


def test_solver_rejects_negative_budgets(tie_2x2):
    with pytest.raises(ValueError, match="non-negative"):
        solve_two_side_deletion(tie_2x2, -1, 0)
    with pytest.raises(ValueError, match="non-negative"):
        solve_two_side_deletion(tie_2x2, 0, -1)


def test_solver_doctor_cap(strict_2x2):
    with pytest.raises(CapExceeded, match="subset-search cap"):
        solve_two_side_deletion(strict_2x2, 0, 0, max_doctors=1)


def test_full_budgets_always_find_a_witness():
    for inst in sample_instances(20, seed="hardness-full"):
        witness = solve_two_side_deletion(inst, len(inst.doctors), len(inst.hospitals))
        assert witness is not None
        assert exists_super_stable(inst, witness) is not None


def test_solver_witnesses_are_valid_and_match_the_oracle():
    for inst in sample_instances(20, seed="hardness-agree"):
        for q1 in range(3):
            for q2 in range(3):
                got = solve_two_side_deletion(inst, q1, q2)
                expect = oracle_two_side_deletion(inst, q1, q2)
                assert (got is None) == (expect is None)
                if got is None:
                    continue
                assert sum(1 for v in got if v.side == "D") <= q1
                assert sum(1 for v in got if v.side == "H") <= q2
                assert exists_super_stable(inst, got) is not None


def all_coverage_instances(max_ground: int, max_families: int):
    for n in range(max_ground + 1):
        ground = tuple(chr(ord("a") + i) for i in range(n))
        subsets = [
            frozenset(pick)
            for size in range(n + 1)
            for pick in combinations(ground, size)
        ]
        for m in range(max_families + 1):
            for fams in product(subsets, repeat=m):
                yield ground, fams


def test_coverage_and_deletion_answers_coincide_everywhere_small():
    checked = 0
    for ground, fams in all_coverage_instances(2, 2):
        for picks in range(len(fams) + 1):
            for limit in range(len(ground) + 1):
                cov = cover(ground, fams, picks, limit)
                red = reduce_min_coverage(cov)
                want = oracle_min_coverage(cov)
                via_solver = (
                    solve_two_side_deletion(
                        red.instance, red.doctor_budget, red.hospital_budget
                    )
                    is not None
                )
                via_oracle = (
                    oracle_two_side_deletion(
                        red.instance, red.doctor_budget, red.hospital_budget
                    )
                    is not None
                )
                assert want == via_solver == via_oracle
                checked += 1
    assert checked > 100
