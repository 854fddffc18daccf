"""Curated homogeneous spaces and the rank-2 metric survey.

Each entry packages a construction recipe (a root-system partition, or
an explicit isotropy subalgebra), the metric block template, and the
behavior the verification suite re-derives. The `claim` strings state
what the entry is expected to do; nothing downstream trusts them, the
acceptance tests re-check every one through the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .algebra import build_compact_algebra
from .decomp import TriPartition, standard_partition
from .engine import (
    ReductiveSpace,
    go_sample_check,
    make_metric,
    make_space_from_partition,
    make_space_from_subalgebra,
    SAMPLES_DEFAULT,
    SEED_DEFAULT,
)
from .errors import InvalidMetric
from .roots import build_root_system, vadd, vneg


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    family: str
    rank: int
    description: str
    claim: str
    arity: int  # number of metric blocks in the template
    rank2_survey: bool  # full-rank isotropy over a rank-2 group
    expected: dict  # outcome per metric kind, re-derived by the tests
    _builder: object

    def build(self) -> tuple[ReductiveSpace, tuple[tuple[int, ...], ...]]:
        return self._builder()


def _standard_entry(entry_id: str, family: str, rank: int):
    def build():
        st = build_root_system(family, rank)
        table = build_compact_algebra(st)
        return make_space_from_partition(table, standard_partition(st), name=entry_id)

    return build


def _su3_t2():
    st = build_root_system("A", 2)
    table = build_compact_algebra(st)
    space = make_space_from_subalgebra(
        table, [{0: Q(1)}, {1: Q(1)}], name="su3-t2"
    )
    blocks = ((0, 1), (2, 3), (4, 5))
    return space, blocks


def _su3_su2u1():
    st = build_root_system("A", 2)
    table = build_compact_algebra(st)
    a1, a2 = st.simple_roots
    r0 = [a1, vneg(a1)]
    r2 = [vadd(a1, a2), vneg(vadd(a1, a2))]
    r1 = [a2, vneg(a2)]
    tp = TriPartition.from_parts(st, r0, r1, r2)
    return make_space_from_partition(table, tp, name="su3-su2u1")


def _su3_su2():
    st = build_root_system("A", 2)
    table = build_compact_algebra(st)
    a1 = st.simple_roots[0]
    iu, iv = table.root_block(a1)
    h = [{0: Q(1)}, {iu: Q(1)}, {iv: Q(1)}]
    space = make_space_from_subalgebra(table, h, name="su3-su2")
    blocks = ((0,), (1, 2, 3, 4))
    return space, blocks


def _g2_partition(entry_id: str, r0_lines, r2_lines):
    st = build_root_system("G", 2)
    table = build_compact_algebra(st)
    r0 = [r if s > 0 else vneg(r) for r in r0_lines for s in (1, -1)]
    r2 = [r if s > 0 else vneg(r) for r in r2_lines for s in (1, -1)]
    used = set(r0) | set(r2)
    r1 = [r for r in st.roots if r not in used]
    tp = TriPartition.from_parts(st, r0, r1, r2)
    return make_space_from_partition(table, tp, name=entry_id)


def _g2_lines():
    st = build_root_system("G", 2)
    a1, a2 = st.simple_roots
    theta = vadd(vadd(vadd(a1, a1), a1), vadd(a2, a2))  # 3 a1 + 2 a2
    return st, a1, a2, theta


def _g2_u2_long():
    _, a1, _, theta = _g2_lines()
    return _g2_partition("g2-u2-long", [theta], [a1])


def _g2_u2_short():
    _, a1, _, theta = _g2_lines()
    return _g2_partition("g2-u2-short", [a1], [theta])


def _g2_su2su2():
    st, a1, _, theta = _g2_lines()
    table = build_compact_algebra(st)
    h = [{0: Q(1)}, {1: Q(1)}]
    for root in (a1, theta):
        iu, iv = table.root_block(root)
        h += [{iu: Q(1)}, {iv: Q(1)}]
    space = make_space_from_subalgebra(table, h, name="g2-su2su2")
    blocks = (tuple(range(space.dim_m)),)
    return space, blocks


def _su2_group():
    st = build_root_system("A", 1)
    table = build_compact_algebra(st)
    space = make_space_from_subalgebra(table, [], name="su2-group")
    blocks = ((0,), (1,), (2,))
    return space, blocks


_TWO_BLOCK_GO = {
    "normal": "no_counterexample",
    "proper": "no_counterexample",
}

ENTRIES: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        id="so5-u2",
        family="B",
        rank=2,
        description="standard two-block split of B2; isotropy u(2)",
        claim="geodesic-orbit for every positive eigenvalue pair; "
        "normal at x2 = x1 and symmetric at x2 = 2 x1",
        arity=2,
        rank2_survey=True,
        expected=_TWO_BLOCK_GO,
        _builder=_standard_entry("so5-u2", "B", 2),
    ),
    CatalogEntry(
        id="so7-u3",
        family="B",
        rank=3,
        description="standard two-block split of B3; isotropy u(3)",
        claim="geodesic-orbit for every positive eigenvalue pair",
        arity=2,
        rank2_survey=False,
        expected=_TWO_BLOCK_GO,
        _builder=_standard_entry("so7-u3", "B", 3),
    ),
    CatalogEntry(
        id="so9-u4",
        family="B",
        rank=4,
        description="standard two-block split of B4; isotropy u(4)",
        claim="geodesic-orbit for every positive eigenvalue pair",
        arity=2,
        rank2_survey=False,
        expected=_TWO_BLOCK_GO,
        _builder=_standard_entry("so9-u4", "B", 4),
    ),
    CatalogEntry(
        id="sp2-u1sp1",
        family="C",
        rank=2,
        description="standard two-block split of C2; isotropy u(1) + sp(1)",
        claim="geodesic-orbit for every positive eigenvalue pair",
        arity=2,
        rank2_survey=True,
        expected=_TWO_BLOCK_GO,
        _builder=_standard_entry("sp2-u1sp1", "C", 2),
    ),
    CatalogEntry(
        id="sp3-u1sp2",
        family="C",
        rank=3,
        description="standard two-block split of C3; isotropy u(1) + sp(2)",
        claim="geodesic-orbit for every positive eigenvalue pair",
        arity=2,
        rank2_survey=False,
        expected=_TWO_BLOCK_GO,
        _builder=_standard_entry("sp3-u1sp2", "C", 3),
    ),
    CatalogEntry(
        id="su3-t2",
        family="A",
        rank=2,
        description="full flag of A2: isotropy is the torus, three root-line blocks",
        claim="geodesic-orbit only when all three eigenvalues coincide",
        arity=3,
        rank2_survey=True,
        expected={"normal": "no_counterexample", "proper": "not_go"},
        _builder=_su3_t2,
    ),
    CatalogEntry(
        id="su3-su2u1",
        family="A",
        rank=2,
        description="partial flag of A2: isotropy torus + one root pair, "
        "two labeled root-line blocks",
        claim="the two blocks span one irreducible isotropy module: unequal "
        "eigenvalues are rejected, the normal metric is geodesic-orbit",
        arity=2,
        rank2_survey=True,
        expected={"normal": "no_counterexample", "proper": "invalid_metric"},
        _builder=_su3_su2u1,
    ),
    CatalogEntry(
        id="su3-su2",
        family="A",
        rank=2,
        description="su(3) over the root su(2): rank-deficient isotropy, "
        "blocks (line, 4-dim module)",
        claim="geodesic-orbit for every positive eigenvalue pair",
        arity=2,
        rank2_survey=False,
        expected=_TWO_BLOCK_GO,
        _builder=_su3_su2,
    ),
    CatalogEntry(
        id="g2-u2-long",
        family="G",
        rank=2,
        description="G2 with isotropy torus + long-root pair; blocks "
        "(8-dim doublet sum, short-root line)",
        claim="no proper geodesic-orbit metric; unequal eigenvalues are "
        "refuted by exact certificate",
        arity=2,
        rank2_survey=True,
        expected={"normal": "no_counterexample", "proper": "not_go"},
        _builder=_g2_u2_long,
    ),
    CatalogEntry(
        id="g2-u2-short",
        family="G",
        rank=2,
        description="G2 with isotropy torus + short-root pair; blocks "
        "(8-dim string sum, long-root line)",
        claim="no proper geodesic-orbit metric; unequal eigenvalues are "
        "refuted by exact certificate",
        arity=2,
        rank2_survey=True,
        expected={"normal": "no_counterexample", "proper": "not_go"},
        _builder=_g2_u2_short,
    ),
    CatalogEntry(
        id="g2-su2su2",
        family="G",
        rank=2,
        description="G2 over so(4) = two orthogonal root su(2)s plus torus; "
        "single 8-dim tangent block",
        claim="isotropy-irreducible tangent module: only the normal metric "
        "arises and it is geodesic-orbit",
        arity=1,
        rank2_survey=True,
        expected={"normal": "no_counterexample"},
        _builder=_g2_su2su2,
    ),
    CatalogEntry(
        id="su2-group",
        family="A",
        rank=1,
        description="the group case: empty isotropy, three singleton blocks",
        claim="bi-invariant metrics are exactly the positive multiples of "
        "the base form",
        arity=3,
        rank2_survey=False,
        expected={"normal": "no_counterexample"},
        _builder=_su2_group,
    ),
)


def catalog_list() -> tuple[CatalogEntry, ...]:
    return ENTRIES


def get_entry(entry_id: str) -> CatalogEntry:
    for e in ENTRIES:
        if e.id == entry_id:
            return e
    raise KeyError(f"unknown catalog entry {entry_id!r}")


ARITY_GRIDS: dict[int, tuple[tuple[int, ...], ...]] = {
    1: ((1,),),
    2: ((1, 1), (1, 2), (1, 3), (2, 5)),
    3: ((1, 1, 1), (1, 1, 2), (1, 2, 3), (2, 2, 5)),
}


def run_survey_rank2(
    n_samples: int = SAMPLES_DEFAULT, seed: int = SEED_DEFAULT
) -> dict:
    """Sweep the eigenvalue grid over all full-rank rank-2 entries.

    Outcome per grid point: no_counterexample, not_go (with the failing
    sample index), or invalid_metric (blocks not compatible with the
    isotropy). Survivors with non-equal eigenvalues are collected
    separately; the expected set is so5-u2 and sp2-u1sp1 only.
    """
    report_entries = []
    survivors_unequal: set[str] = set()
    for entry in ENTRIES:
        if not entry.rank2_survey:
            continue
        space, blocks = entry.build()
        rows = []
        for xs in ARITY_GRIDS[entry.arity]:
            row: dict = {"x": [str(v) for v in xs]}
            try:
                metric = make_metric(space, blocks, xs)
            except InvalidMetric as exc:
                row["outcome"] = "invalid_metric"
                row["reason"] = str(exc)
                rows.append(row)
                continue
            verdict = go_sample_check(space, metric, n_samples=n_samples, seed=seed)
            if verdict.status == "NotGO":
                row["outcome"] = "not_go"
                row["sample_index"] = verdict.counterexample["sample_index"]
            else:
                row["outcome"] = "no_counterexample"
                if len(set(xs)) > 1:
                    survivors_unequal.add(entry.id)
            rows.append(row)
        report_entries.append({"id": entry.id, "arity": entry.arity, "rows": rows})
    return {
        "samples": n_samples,
        "seed": seed,
        "entries": report_entries,
        "survivors_unequal": sorted(survivors_unequal),
    }
