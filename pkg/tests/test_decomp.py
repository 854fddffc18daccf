"""Special-decomposition layer: rule checking, enumeration counts,
canonicalization under Weyl conjugacy."""

import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from gokit.decomp import (
    TriPartition,
    canonical_encoding,
    canonicalize,
    enumerate_special,
    enumerate_special_with_stats,
    is_special,
    literal_conditions,
    standard_partition,
)
from gokit.errors import (
    InvalidPartition,
    NotARoot,
    SearchBudgetExceeded,
    UnsupportedSystem,
)
from gokit.roots import build_root_system, root_permutations, vadd, vneg

# (raw labeled count, canonical classes, nodes expanded). Counts are
# mathematical facts (cross-checked by brute force below where feasible);
# node counts are pruning regressions.
ENUM_ORACLE = {
    ("A", 2): (0, 0, 33),
    ("A", 3): (0, 0, 192),
    ("A", 4): (0, 0, 972),
    ("B", 2): (4, 1, 66),
    ("B", 3): (8, 1, 723),
    ("B", 4): (16, 1, 4626),
    ("C", 2): (4, 1, 66),
    ("C", 3): (6, 1, 597),
    ("C", 4): (8, 1, 4428),
    ("D", 4): (0, 0, 1746),
    ("G", 2): (0, 0, 168),
    ("F", 4): (0, 0, 18114),
}


def _unit(rs, i):
    return tuple(Q(1) if k == i else Q(0) for k in range(rs.ambient_dim))


def _classes(partitions):
    seen = {}
    for tp in partitions:
        seen.setdefault(canonical_encoding(tp), tp)
    return seen


@pytest.mark.parametrize("family,rank", [("B", 2), ("B", 3), ("B", 4),
                                         ("C", 2), ("C", 3), ("C", 4)])
def test_standard_partition_is_special(family, rank):
    tp = standard_partition(build_root_system(family, rank))
    report = is_special(tp)
    assert report.verdict
    assert report.violations == ()
    assert report.interacting_pairs_count >= 1


def test_standard_partition_only_for_bc():
    for family, rank in [("A", 2), ("D", 4), ("G", 2), ("F", 4)]:
        with pytest.raises(UnsupportedSystem):
            standard_partition(build_root_system(family, rank))


@pytest.mark.parametrize("family,rank", sorted(ENUM_ORACLE))
def test_enumeration_counts(family, rank):
    rs = build_root_system(family, rank)
    found, stats = enumerate_special_with_stats(rs)
    raw, classes, nodes = ENUM_ORACLE[(family, rank)]
    assert stats.raw_count == raw == len(found)
    assert len(_classes(found)) == classes
    assert stats.nodes == nodes
    for tp in found:
        assert is_special(tp).verdict


@pytest.mark.parametrize("family,rank", [("A", 2), ("B", 2), ("C", 2), ("G", 2),
                                         ("A", 3), ("B", 3), ("C", 3)])
def test_raw_count_matches_brute_force(family, rank):
    """Independent oracle: try all 3^lines assignments directly."""
    rs = build_root_system(family, rank)
    lines = rs.lines()
    count = 0
    for assign in itertools.product((0, 1, 2), repeat=len(lines)):
        parts = {0: [], 1: [], 2: []}
        for rep, part in zip(lines, assign):
            parts[part] += [rep, vneg(rep)]
        try:
            tp = TriPartition.from_parts(rs, parts[0], parts[1], parts[2])
        except InvalidPartition:
            continue
        if is_special(tp).verdict:
            count += 1
    assert count == ENUM_ORACLE[(family, rank)][0]


@pytest.mark.parametrize("family,rank", [("B", 2), ("B", 3), ("B", 4),
                                         ("C", 2), ("C", 3), ("C", 4)])
def test_unique_class_is_the_standard_one(family, rank):
    rs = build_root_system(family, rank)
    found = enumerate_special(rs)
    classes = _classes(found)
    std_enc = canonical_encoding(standard_partition(rs))
    assert set(classes) == {std_enc}


def test_c3_dropped_configuration_fails_interaction_totality():
    """R0 = {+-2e2, +-2e3}, R1 = all short roots, R2 = {+-2e1} satisfies
    every per-plane rule but leaves the e2 +- e3 lines idle; it must be
    rejected, and only for that reason."""
    rs = build_root_system("C", 3)
    e1, e2, e3 = (_unit(rs, i) for i in range(3))
    r0 = [vadd(e2, e2), vneg(vadd(e2, e2)), vadd(e3, e3), vneg(vadd(e3, e3))]
    r2 = [vadd(e1, e1), vneg(vadd(e1, e1))]
    r1 = [r for r in rs.roots if r not in set(r0) | set(r2)]
    tp = TriPartition.from_parts(rs, r0, r1, r2)
    report = is_special(tp)
    assert not report.verdict
    assert report.violations
    assert all(v.rule == "h" for v in report.violations)
    idle = {v.pair[0] for v in report.violations}
    assert idle == {vadd(e2, vneg(e3)), vadd(e2, e3)}


@pytest.mark.parametrize("rank", [2, 3])
def test_cn_transposed_split_is_not_special(rank):
    """R0 = {+-(e_i - e_j)}, R1 = long, R2 = {+-(e_i + e_j)} on C_n: the
    u(n)-stabilizer split that works for B_n fails the cross-pair rules
    once the long/short roles are exchanged."""
    rs = build_root_system("C", rank)
    r_a, r_plus, r_long = [], [], []
    for r in rs.roots:
        nz = [x for x in r if x != 0]
        if len(nz) == 1:
            r_long.append(r)
        elif nz[0] == -nz[1]:
            r_a.append(r)
        else:
            r_plus.append(r)
    tp = TriPartition.from_parts(rs, r_a, r_long, r_plus)
    report = is_special(tp)
    assert not report.verdict
    assert report.violations


def test_invalid_partition_shapes_rejected():
    rs = build_root_system("B", 2)
    e0, e1 = _unit(rs, 0), _unit(rs, 1)
    std = standard_partition(rs)
    r0, r1, r2 = sorted(std.r0), sorted(std.r1), sorted(std.r2)
    with pytest.raises(InvalidPartition):  # overlap
        TriPartition.from_parts(rs, r0, r1, r2 + [r1[0]])
    with pytest.raises(InvalidPartition):  # not symmetric
        TriPartition.from_parts(rs, r0, [e0, e1, vneg(e1)], r2 + [vneg(e0)])
    with pytest.raises(InvalidPartition):  # not total
        TriPartition.from_parts(rs, [], r1, r2)
    with pytest.raises(InvalidPartition):  # empty R2
        TriPartition.from_parts(rs, r0 + r2, r1, [])
    with pytest.raises(InvalidPartition):  # R0 not closed
        TriPartition.from_parts(rs, r1, r0, r2)
    with pytest.raises(NotARoot):  # non-root member
        TriPartition.from_parts(rs, r0, r1, r2[:-2] + [vadd(e0, vadd(e0, e1)), vneg(vadd(e0, vadd(e0, e1)))])


def test_swap_labels_preserves_speciality_and_class():
    tp = standard_partition(build_root_system("B", 3))
    sw = tp.swap_labels()
    assert sw.r1 == tp.r2 and sw.r2 == tp.r1
    assert is_special(sw).verdict
    assert canonical_encoding(sw) == canonical_encoding(tp)


@pytest.mark.parametrize("family,rank", [("B", 2), ("C", 2), ("B", 3), ("C", 3)])
def test_weyl_conjugation_preserves_class(family, rank):
    rs = build_root_system(family, rank)
    tp = standard_partition(rs)
    enc = canonical_encoding(tp)
    perms = root_permutations(rs)
    rng = random.Random(7)
    for p in rng.sample(list(perms), min(12, len(perms))):
        conj = TriPartition.from_parts(
            rs,
            [rs.roots[p[rs.index[r]]] for r in tp.r0],
            [rs.roots[p[rs.index[r]]] for r in tp.r1],
            [rs.roots[p[rs.index[r]]] for r in tp.r2],
        )
        assert is_special(conj).verdict
        assert canonical_encoding(conj) == enc


def test_canonicalize_is_idempotent_and_stable():
    rs = build_root_system("C", 3)
    tp = standard_partition(rs)
    can = canonicalize(tp)
    assert canonical_encoding(can) == canonical_encoding(tp)
    assert canonicalize(can).to_json_dict() == can.to_json_dict()


def test_json_round_trip():
    rs = build_root_system("C", 3)
    tp = standard_partition(rs)
    doc = tp.to_json_dict()
    back = TriPartition.from_json_dict(doc)
    assert back.r0 == tp.r0 and back.r1 == tp.r1 and back.r2 == tp.r2
    back2 = TriPartition.from_json_dict(doc, rs=rs)
    assert back2.r1 == tp.r1
    with pytest.raises(InvalidPartition):
        TriPartition.from_json_dict({"R0": [], "R1": [], "R2": []})


def test_budget_exhaustion_raises():
    rs = build_root_system("B", 4)
    with pytest.raises(SearchBudgetExceeded) as exc:
        enumerate_special(rs, budget=10)
    assert exc.value.budget == 10
    assert exc.value.nodes >= 10


def test_literal_conditions_on_standard_b3():
    """The pointwise signed-pair reading is diagnostic only: on a standard
    decomposition (which IS special) some signed pairs fail it, which is
    exactly why the normative check works per plane."""
    tp = standard_partition(build_root_system("B", 3))
    assert is_special(tp).verdict
    recs = literal_conditions(tp)
    assert recs
    assert any(r.get("i_sum_is_root") and not r["i_difference_is_root"] for r in recs)
    split_flags = [r["ii_iii_long_split_ok"] for r in recs if "ii_iii_long_split_ok" in r]
    assert not all(split_flags)


@settings(max_examples=120, deadline=None)
@given(assign=st.tuples(*[st.integers(0, 2) for _ in range(4)]))
def test_b2_speciality_matches_rule_census(assign):
    """On B2 every assignment is decidable by hand: the verdict must agree
    with a direct reading of the plane rules plus interaction totality."""
    rs = build_root_system("B", 2)
    lines = rs.lines()
    parts = {0: [], 1: [], 2: []}
    for rep, part in zip(lines, assign):
        parts[part] += [rep, vneg(rep)]
    try:
        tp = TriPartition.from_parts(rs, parts[0], parts[1], parts[2])
    except InvalidPartition:
        return
    report = is_special(tp)
    swapped = is_special(tp.swap_labels())
    assert report.verdict == swapped.verdict  # label swap symmetry
    if report.verdict:
        assert report.interacting_pairs_count >= 1
        assert not report.violations
    else:
        assert report.violations or report.interacting_pairs_count == 0
