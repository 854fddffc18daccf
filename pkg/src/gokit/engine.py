"""Geodesic-orbit verification engine over exact arithmetic.

A reductive space is a pair of subspaces h, m of a compact algebra with
[h,h] in h, b(h,m) = 0 and [h,m] in m; h + m need not be the whole
algebra, so totally geodesic orbits are spaces of the same kind. A
metric is a block partition of the m-basis with positive rational
eigenvalues; the metric endomorphism A is scalar on each block and the
metric is g = b(A., .).

The central routine is go_feasible: for a tangent direction X it solves
the linear system in H

    ([H, A X])_m = -([X, A X])_m

exactly. A solution is re-verified against both forms of the geodesic
criterion ([H+X, AX] in h, and g-orthogonality of [H+X, .]_m to X); an
infeasible system yields an integer left-null certificate, which is the
definitive refutation used by the sampling check.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction as Q

from . import linalg
from .algebra import Element, StructureTable
from .decomp import TriPartition
from .errors import (
    DegenerateOrbit,
    DomainError,
    InvalidMetric,
    NotASubalgebra,
)
from .jsonio import encode_rational
from .roots import Vec, plane_system

SAMPLES_DEFAULT = 500
SEED_DEFAULT = 0
BOUND_DEFAULT = 5


def element_to_json(el: Element) -> dict:
    return {str(i): encode_rational(c) for i, c in sorted(el.items()) if c != 0}


def _dense(el: Element, dim: int) -> list[Q]:
    out = [Q(0)] * dim
    for i, c in el.items():
        out[i] = c
    return out


def _combo(basis, coords) -> Element:
    out: Element = {}
    for c, el in zip(coords, basis):
        if c == 0:
            continue
        for i, w in el.items():
            val = out.get(i, Q(0)) + Q(c) * w
            if val == 0:
                out.pop(i, None)
            else:
                out[i] = val
    return out


@dataclass(frozen=True, eq=False)
class ReductiveSpace:
    table: StructureTable
    h_basis: tuple[Element, ...]
    m_basis: tuple[Element, ...]
    rank_flag: bool
    name: str
    tp: TriPartition | None = None
    _caches: dict = field(default_factory=dict, repr=False)

    @property
    def dim_h(self) -> int:
        return len(self.h_basis)

    @property
    def dim_m(self) -> int:
        return len(self.m_basis)

    def _cache(self, key, make):
        if key not in self._caches:
            self._caches[key] = make()
        return self._caches[key]

    def _h_span(self) -> linalg.RowBasis:
        def make():
            rb = linalg.RowBasis(self.table.dim)
            for el in self.h_basis:
                rb.add(_dense(el, self.table.dim))
            return rb

        return self._cache("h_span", make)

    def _m_span(self) -> linalg.RowBasis:
        def make():
            rb = linalg.RowBasis(self.table.dim)
            for el in self.m_basis:
                rb.add(_dense(el, self.table.dim))
            return rb

        return self._cache("m_span", make)

    def _gram_m(self) -> list[list[Q]]:
        def make():
            return [
                [self.table.b_pair(x, y) for y in self.m_basis] for x in self.m_basis
            ]

        return self._cache("gram_m", make)

    def in_h(self, el: Element) -> bool:
        return self._h_span().contains(_dense(el, self.table.dim))

    def in_m(self, el: Element) -> bool:
        return self._m_span().contains(_dense(el, self.table.dim))

    def m_coords(self, el: Element) -> list[Q]:
        """Coordinates of el in the m-basis; DomainError if el is not in m."""
        rows = [
            [_dense(v, self.table.dim)[d] for v in self.m_basis]
            for d in range(self.table.dim)
        ]
        res = linalg.solve_with_certificate(rows, _dense(el, self.table.dim))
        if not res.solved:
            raise DomainError("element does not lie in m")
        return list(res.solution)

    def project_m(self, el: Element) -> Element:
        """b-orthogonal projection onto span(m_basis)."""
        rhs = [self.table.b_pair(v, el) for v in self.m_basis]
        res = linalg.solve_with_certificate(self._gram_m(), rhs)
        assert res.solved
        return _combo(self.m_basis, res.solution)


def _make_space(table, h_basis, m_basis, name, tp=None) -> ReductiveSpace:
    dim = table.dim
    h_basis = tuple(dict(el) for el in h_basis)
    m_basis = tuple(dict(el) for el in m_basis)
    hb = linalg.RowBasis(dim)
    for el in h_basis:
        if not hb.add(_dense(el, dim)):
            raise NotASubalgebra("h basis is linearly dependent")
    mb = linalg.RowBasis(dim)
    for el in m_basis:
        if not mb.add(_dense(el, dim)):
            raise NotASubalgebra("m basis is linearly dependent")
    for x in h_basis:
        for y in h_basis:
            if not hb.contains(_dense(table.bracket(x, y), dim)):
                raise NotASubalgebra("h is not closed under the bracket")
    for x in h_basis:
        for y in m_basis:
            if table.b_pair(x, y) != 0:
                raise NotASubalgebra("h and m are not b-orthogonal")
            if not mb.contains(_dense(table.bracket(x, y), dim)):
                raise NotASubalgebra("[h, m] does not stay in m")
    rank = table.rank
    rank_flag = all(hb.contains(_dense({i: Q(1)}, dim)) for i in range(rank))
    return ReductiveSpace(
        table=table,
        h_basis=h_basis,
        m_basis=m_basis,
        rank_flag=rank_flag,
        name=name,
        tp=tp,
    )


def make_space_from_subalgebra(
    table: StructureTable, h_basis, name: str = "space"
) -> ReductiveSpace:
    """m is the exact b-orthogonal complement of the given subalgebra."""
    dim = table.dim
    h_basis = tuple(dict(el) for el in h_basis)
    if h_basis:
        rows = []
        for el in h_basis:
            d = _dense(el, dim)
            rows.append([sum(d[k] * table.form[k][j] for k in el) for j in range(dim)])
        complement = linalg.nullspace(rows)
        m_basis = tuple(
            {i: c for i, c in enumerate(v) if c != 0} for v in complement
        )
    else:
        m_basis = tuple({i: Q(1)} for i in range(dim))
    return _make_space(table, h_basis, m_basis, name)


def make_space_from_partition(
    table: StructureTable, tp: TriPartition, name: str = "space"
) -> tuple[ReductiveSpace, tuple[tuple[int, ...], ...]]:
    """h = Cartan + root blocks of R0; m = root blocks of R1 then R2.

    Returns the space and the metric block template: m-basis index
    groups for the R1 block and the R2 block, eigenvalues unbound.
    """
    st = table.rs
    if tp.rs is not st:
        raise DomainError("partition belongs to a different root system")
    h_basis: list[Element] = [{i: Q(1)} for i in range(table.rank)]
    for line in st.lines():
        if tp.part_of[line] == 0:
            iu, iv = table.root_block(line)
            h_basis += [{iu: Q(1)}, {iv: Q(1)}]
    m_basis: list[Element] = []
    blocks: list[tuple[int, ...]] = []
    for part in (1, 2):
        ids = []
        for line in st.lines():
            if tp.part_of[line] == part:
                iu, iv = table.root_block(line)
                ids += [len(m_basis), len(m_basis) + 1]
                m_basis += [{iu: Q(1)}, {iv: Q(1)}]
        blocks.append(tuple(ids))
    space = _make_space(table, h_basis, m_basis, name, tp=tp)
    return space, tuple(blocks)


@dataclass(frozen=True, eq=False)
class MetricSpec:
    space: ReductiveSpace
    blocks: tuple[tuple[int, ...], ...]
    x: tuple[Q, ...]
    merged: tuple[tuple[int, ...], ...]  # blocks fused by equal eigenvalue
    eig: tuple[Q, ...]  # eigenvalue per m-basis index

    @property
    def is_normal(self) -> bool:
        return len(self.merged) == 1

    def apply_A(self, coords) -> list[Q]:
        return [e * c for e, c in zip(self.eig, coords)]

    def eigenvalues_json(self) -> list[str]:
        return [encode_rational(v) for v in self.x]


def make_metric(space: ReductiveSpace, blocks, x, check_invariance: bool = True) -> MetricSpec:
    """Metric endomorphism from (block, eigenvalue) pairs.

    Blocks with equal eigenvalues are fused before the ad_h-invariance
    check: only the A-eigenspaces are geometric. check_invariance=False
    skips the eigenspace checks (invariance and cross-block grading) so
    that defective configurations can still be built and then refuted by
    skew_symmetry_audit; it is not meant for ordinary use.
    """
    blocks = tuple(tuple(int(i) for i in blk) for blk in blocks)
    x = tuple(Q(v) for v in x)
    if len(blocks) != len(x):
        raise InvalidMetric(f"{len(blocks)} blocks but {len(x)} eigenvalues")
    if not blocks:
        raise InvalidMetric("no blocks")
    flat = sorted(i for blk in blocks for i in blk)
    if flat != list(range(space.dim_m)):
        raise InvalidMetric("blocks do not partition the m-basis")
    for v in x:
        if v <= 0:
            raise InvalidMetric(f"eigenvalue {v} is not positive")

    eig = [Q(0)] * space.dim_m
    for blk, v in zip(blocks, x):
        for i in blk:
            eig[i] = v

    for a in range(len(blocks)):
        for bidx in range(a + 1, len(blocks)):
            for i in blocks[a]:
                for j in blocks[bidx]:
                    if space.table.b_pair(space.m_basis[i], space.m_basis[j]) != 0:
                        raise InvalidMetric(
                            f"blocks {a} and {bidx} are not b-orthogonal"
                        )

    order: list[Q] = []
    for v in x:
        if v not in order:
            order.append(v)
    merged = tuple(
        tuple(i for blk, xv in zip(blocks, x) if xv == v for i in blk) for v in order
    )

    if check_invariance:
        dim = space.table.dim
        for blk in merged:
            rb = linalg.RowBasis(dim)
            for i in blk:
                rb.add(_dense(space.m_basis[i], dim))
            for h in space.h_basis:
                for i in blk:
                    w = space.table.bracket(h, space.m_basis[i])
                    if not rb.contains(_dense(w, dim)):
                        raise InvalidMetric(
                            "eigenspace is not ad_h-invariant "
                            f"(bracket leaves the block of m[{i}])"
                        )
        for a in range(len(merged)):
            for bidx in range(a + 1, len(merged)):
                for i in merged[a]:
                    for j in merged[bidx]:
                        w = space.table.bracket(space.m_basis[i], space.m_basis[j])
                        for h in space.h_basis:
                            if space.table.b_pair(h, w) != 0:
                                raise InvalidMetric(
                                    f"[m[{i}], m[{j}]] has a component in h"
                                )

    return MetricSpec(space=space, blocks=blocks, x=x, merged=merged, eig=tuple(eig))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    h_coords: tuple[Q, ...] | None
    H: Element | None
    certificate: tuple[int, ...] | None

    def to_json_dict(self) -> dict:
        doc: dict = {"feasible": self.feasible}
        if self.feasible:
            doc["H"] = element_to_json(self.H)
        else:
            doc["certificate"] = list(self.certificate)
        return doc


def _go_system(space: ReductiveSpace, metric: MetricSpec, coords):
    AX = _combo(space.m_basis, metric.apply_A(coords))
    X = _combo(space.m_basis, coords)
    rows = []
    lead = [space.table.bracket(h, AX) for h in space.h_basis]
    for mj in space.m_basis:
        rows.append([space.table.b_pair(mj, w) for w in lead])
    w0 = space.table.bracket(X, AX)
    rhs = [-space.table.b_pair(mj, w0) for mj in space.m_basis]
    return X, AX, rows, rhs


def verify_go_certificate(space, metric, X: Element, H: Element) -> tuple[bool, bool]:
    """Exact re-check of both geodesic-criterion forms for a solution H."""
    coords = space.m_coords(X)
    AX = _combo(space.m_basis, metric.apply_A(coords))
    total = dict(H)
    for i, c in X.items():
        total[i] = total.get(i, Q(0)) + c
    form_i = space.in_h(space.table.bracket(total, AX))
    form_ii = all(
        space.table.b_pair(space.table.bracket(total, mj), AX) == 0
        for mj in space.m_basis
    )
    return form_i, form_ii


def go_feasible(space: ReductiveSpace, metric: MetricSpec, X: Element) -> FeasibilityResult:
    """Solve for an isotropy compensator H making X + H geodesic.

    Infeasibility comes with an integer left-null certificate y:
    y^T rows = 0 while y^T rhs != 0, verified before returning.
    """
    if not X or all(c == 0 for c in X.values()):
        raise DomainError("X = 0 is not a valid direction")
    coords = space.m_coords(X)  # DomainError if X is outside m
    return _go_feasible_coords(space, metric, coords)


def _go_feasible_coords(space, metric, coords) -> FeasibilityResult:
    X, AX, rows, rhs = _go_system(space, metric, coords)
    res = linalg.solve_with_certificate(rows, rhs)
    if res.solved:
        H = _combo(space.h_basis, res.solution)
        ok_i, ok_ii = verify_go_certificate(space, metric, X, H)
        assert ok_i and ok_ii, "solution failed exact re-verification"
        return FeasibilityResult(
            feasible=True,
            h_coords=tuple(res.solution),
            H=H,
            certificate=None,
        )
    y = res.certificate
    for col in range(len(space.h_basis)):
        assert sum(yk * rows[k][col] for k, yk in enumerate(y)) == 0
    assert sum(yk * rhs[k] for k, yk in enumerate(y)) != 0
    return FeasibilityResult(
        feasible=False,
        h_coords=None,
        H=None,
        certificate=tuple(int(v) for v in y),
    )


@dataclass(frozen=True)
class GoVerdict:
    status: str  # "NotGO" | "NoCounterexampleFound"
    samples_tested: int
    seed: int
    bound: int
    counterexample: dict | None
    certificates: tuple[tuple[Element, Element], ...]  # retained (X, H) pairs

    def to_json_dict(self) -> dict:
        doc = {
            "status": self.status,
            "samples_tested": self.samples_tested,
            "seed": self.seed,
            "bound": self.bound,
            "counterexample": None,
        }
        if self.counterexample is not None:
            ce = dict(self.counterexample)
            ce["X"] = element_to_json(ce["X"])
            doc["counterexample"] = ce
        return doc


def _draw_coords(seed: int, idx: int, dim: int, bound: int) -> list[int]:
    rng = random.Random(f"{seed}:{idx}")
    while True:
        cs = [rng.randint(-bound, bound) for _ in range(dim)]
        if any(cs):
            return cs


def go_sample_check(
    space: ReductiveSpace,
    metric: MetricSpec,
    n_samples: int = SAMPLES_DEFAULT,
    seed: int = SEED_DEFAULT,
    bound: int = BOUND_DEFAULT,
    retain: int = 3,
) -> GoVerdict:
    """Randomized refutation search: NotGO is definitive, the positive
    outcome only reports that no counterexample was found.

    Sample substreams are derived from (seed, index); the first failing
    index is reported regardless of worker scheduling.
    """
    if n_samples < 1:
        raise DomainError("need at least one sample")
    dim = space.dim_m
    threads = int(os.environ.get("GOKIT_THREADS", "1") or "1")

    kept: list[tuple[Element, Element]] = []
    failure: tuple[int, list[int], FeasibilityResult] | None = None

    def run(idx: int):
        cs = _draw_coords(seed, idx, dim, bound)
        return idx, cs, _go_feasible_coords(space, metric, [Q(c) for c in cs])

    tested = 0
    if threads > 1:
        chunk = max(threads * 4, 8)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for start in range(0, n_samples, chunk):
                idxs = range(start, min(start + chunk, n_samples))
                for idx, cs, res in pool.map(run, idxs):
                    tested += 1
                    if res.feasible:
                        if len(kept) < retain:
                            kept.append((_combo(space.m_basis, [Q(c) for c in cs]), res.H))
                    elif failure is None:
                        failure = (idx, cs, res)
                if failure is not None:
                    break
    else:
        for idx in range(n_samples):
            idx, cs, res = run(idx)
            tested += 1
            if res.feasible:
                if len(kept) < retain:
                    kept.append((_combo(space.m_basis, [Q(c) for c in cs]), res.H))
            else:
                failure = (idx, cs, res)
                break

    if failure is not None:
        idx, cs, res = failure
        ce = {
            "sample_index": idx,
            "coefficients": list(cs),
            "X": _combo(space.m_basis, [Q(c) for c in cs]),
            "certificate": list(res.certificate),
        }
        return GoVerdict(
            status="NotGO",
            samples_tested=tested,
            seed=seed,
            bound=bound,
            counterexample=ce,
            certificates=tuple(kept),
        )
    return GoVerdict(
        status="NoCounterexampleFound",
        samples_tested=tested,
        seed=seed,
        bound=bound,
        counterexample=None,
        certificates=tuple(kept),
    )


def U_map(space: ReductiveSpace, metric: MetricSpec, X: Element, Y: Element) -> Element:
    """The symmetric bilinear term of the covariant derivative, as the
    unique solution of 2 g(U(X,Y), Z) = g([Z,X]_m, Y) + g(X, [Z,Y]_m)
    over the m-basis, one exact solve against the Gram matrix of g."""
    cx = space.m_coords(X)
    cy = space.m_coords(Y)
    AX = _combo(space.m_basis, metric.apply_A(cx))
    AY = _combo(space.m_basis, metric.apply_A(cy))
    gram_b = space._gram_m()
    n = space.dim_m
    gram_g = [[metric.eig[j] * gram_b[j][k] for k in range(n)] for j in range(n)]
    rhs = []
    for mj in space.m_basis:
        t1 = space.table.b_pair(space.table.bracket(mj, X), AY)
        t2 = space.table.b_pair(space.table.bracket(mj, Y), AX)
        rhs.append((t1 + t2) / 2)
    res = linalg.solve_with_certificate(gram_g, rhs)
    assert res.solved
    return _combo(space.m_basis, res.solution)


def nabla(space: ReductiveSpace, metric: MetricSpec, X: Element, Y: Element) -> Element:
    """Covariant derivative at the base point: -1/2 [X,Y]_m + U(X_m, Y_m)."""
    Xm = space.project_m(X)
    Ym = space.project_m(Y)
    w = space.project_m(space.table.bracket(X, Y))
    out = U_map(space, metric, Xm, Ym)
    out = dict(out)
    for i, c in w.items():
        val = out.get(i, Q(0)) - c / 2
        if val == 0:
            out.pop(i, None)
        else:
            out[i] = val
    return out


@dataclass(frozen=True)
class TotallyGeodesicReport:
    ok: bool
    closure_in_h_plus_p: bool
    u_stays_in_p: bool
    failure: dict | None

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "closure_in_h_plus_p": self.closure_in_h_plus_p,
            "u_stays_in_p": self.u_stays_in_p,
            "failure": self.failure,
        }


def totally_geodesic_check(space, metric, p_basis) -> TotallyGeodesicReport:
    """Orbit test for a subspace p of m: the bracket closure of p must
    stay inside h + p, and U(p, p) must stay inside p."""
    dim = space.table.dim
    p_basis = [dict(el) for el in p_basis]
    for el in p_basis:
        if not space.in_m(el):
            raise DomainError("p basis vector outside m")

    prb = linalg.RowBasis(dim)
    for el in p_basis:
        prb.add(_dense(el, dim))
    hprb = linalg.RowBasis(dim)
    for el in space.h_basis:
        hprb.add(_dense(el, dim))
    for el in p_basis:
        hprb.add(_dense(el, dim))

    cond_a = True
    failure = None
    elems = list(p_basis)
    crb = linalg.RowBasis(dim)
    for el in elems:
        crb.add(_dense(el, dim))
    i = 0
    while i < len(elems) and cond_a:
        for j in range(i):
            w = space.table.bracket(elems[i], elems[j])
            dw = _dense(w, dim)
            if not crb.contains(dw):
                if not hprb.contains(dw):
                    cond_a = False
                    failure = {"condition": "a", "pair": [i, j]}
                    break
                crb.add(dw)
                elems.append(w)
        i += 1

    cond_b = True
    for i in range(len(p_basis)):
        if not cond_b:
            break
        for j in range(i, len(p_basis)):
            u = U_map(space, metric, p_basis[i], p_basis[j])
            if not prb.contains(_dense(u, dim)):
                cond_b = False
                if failure is None:
                    failure = {"condition": "b", "pair": [i, j]}
                break

    return TotallyGeodesicReport(
        ok=cond_a and cond_b,
        closure_in_h_plus_p=cond_a,
        u_stays_in_p=cond_b,
        failure=failure,
    )


def rank2_orbit(space: ReductiveSpace, metric: MetricSpec, alpha: Vec, beta: Vec):
    """The totally geodesic orbit attached to the plane of two roots.

    Requires a partition-built full-rank space. The orbit keeps the full
    torus, the R0 lines of the plane as isotropy and the R1/R2 lines as
    tangent blocks with the ambient eigenvalues.
    """
    if space.tp is None or not space.rank_flag:
        raise DomainError("rank-2 orbits need a partition-built full-rank space")
    st = space.table.rs
    tp = space.tp
    plane = plane_system(st, alpha, beta)
    reps = sorted({st.positive_of(r) for r in plane.members})
    m_lines = [rep for rep in reps if tp.part_of[rep] != 0]
    if not m_lines:
        raise DegenerateOrbit("plane has no tangent lines in m")
    h_basis: list[Element] = [{i: Q(1)} for i in range(space.table.rank)]
    for rep in reps:
        if tp.part_of[rep] == 0:
            iu, iv = space.table.root_block(rep)
            h_basis += [{iu: Q(1)}, {iv: Q(1)}]

    line_eig: dict[Vec, Q] = {}
    amb_index = {}
    for k, el in enumerate(space.m_basis):
        amb_index[min(el)] = k
    for rep in m_lines:
        iu, iv = space.table.root_block(rep)
        eu = metric.eig[amb_index[iu]]
        ev = metric.eig[amb_index[iv]]
        assert eu == ev, "root line split across eigenvalues"
        line_eig[rep] = eu

    m_basis: list[Element] = []
    blocks: list[tuple[int, ...]] = []
    xs: list[Q] = []
    for part in (1, 2):
        ids = []
        val = None
        for rep in m_lines:
            if tp.part_of[rep] == part:
                iu, iv = space.table.root_block(rep)
                ids += [len(m_basis), len(m_basis) + 1]
                m_basis += [{iu: Q(1)}, {iv: Q(1)}]
                val = line_eig[rep]
        if ids:
            blocks.append(tuple(ids))
            xs.append(val)
    orbit = _make_space(
        space.table, h_basis, m_basis, name=f"{space.name}-orbit", tp=None
    )
    return orbit, make_metric(orbit, blocks, xs)


@dataclass(frozen=True)
class SkewAuditReport:
    ok: bool
    pairs_checked: int
    failures: tuple[dict, ...]

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "pairs_checked": self.pairs_checked,
            "failures": list(self.failures),
        }


def skew_symmetry_audit(space: ReductiveSpace, metric: MetricSpec) -> SkewAuditReport:
    """Eigenspace-pair audit: b- and g-orthogonality, absence of isotropy
    components in cross brackets, and g-skewness of the cross adjoint
    action computed through explicit block projections."""
    table = space.table
    dim = table.dim
    merged = metric.merged
    failures: list[dict] = []
    pairs = 0

    block_vecs = [[space.m_basis[i] for i in blk] for blk in merged]
    block_eig = [metric.eig[blk[0]] for blk in merged]
    grams = [
        [[table.b_pair(x, y) for y in vecs] for x in vecs] for vecs in block_vecs
    ]

    def project(bidx: int, w: Element) -> list[Q]:
        rhs = [table.b_pair(v, w) for v in block_vecs[bidx]]
        res = linalg.solve_with_certificate(grams[bidx], rhs)
        assert res.solved
        return list(res.solution)

    for a in range(len(merged)):
        for b in range(len(merged)):
            if a == b:
                continue
            pairs += 1
            for x in block_vecs[a]:
                for y in block_vecs[b]:
                    if table.b_pair(x, y) != 0:
                        failures.append(
                            {"check": "b_orthogonality", "blocks": [a, b]}
                        )
                    if block_eig[b] * table.b_pair(x, y) != 0:
                        failures.append(
                            {"check": "g_orthogonality", "blocks": [a, b]}
                        )
            if a < b:
                for xi, x in enumerate(block_vecs[a]):
                    for yi, y in enumerate(block_vecs[b]):
                        w = table.bracket(x, y)
                        for h in space.h_basis:
                            val = table.b_pair(h, w)
                            if val != 0:
                                failures.append(
                                    {
                                        "check": "bracket_meets_h",
                                        "blocks": [a, b],
                                        "pair": [xi, yi],
                                        "value": encode_rational(val),
                                    }
                                )
                                break
            for xi, x in enumerate(block_vecs[a]):
                nb = len(block_vecs[b])
                imgs = [project(b, table.bracket(x, y)) for y in block_vecs[b]]
                for p in range(nb):
                    for q in range(p, nb):
                        lhs = sum(
                            block_eig[b] * imgs[p][k] * grams[b][k][q]
                            for k in range(nb)
                        )
                        rhs = sum(
                            block_eig[b] * grams[b][p][k] * imgs[q][k]
                            for k in range(nb)
                        )
                        if lhs + rhs != 0:
                            failures.append(
                                {
                                    "check": "skew_symmetry",
                                    "blocks": [a, b],
                                    "witness": [xi, p, q],
                                }
                            )

    return SkewAuditReport(ok=not failures, pairs_checked=pairs, failures=tuple(failures))


@dataclass(frozen=True)
class BiinvarianceReport:
    biinvariant: bool
    violating_triple: dict | None

    def to_json_dict(self) -> dict:
        return {
            "biinvariant": self.biinvariant,
            "violating_triple": self.violating_triple,
        }


def biinvariance_check(space: ReductiveSpace, metric: MetricSpec) -> BiinvarianceReport:
    """Group case (h = 0): the metric is bi-invariant iff ad_Z is g-skew
    for every Z, checked exactly on all basis triples."""
    if space.dim_h != 0:
        raise DomainError("bi-invariance check applies to the group case h = 0")
    n = space.dim_m
    gram_b = space._gram_m()

    def g_pair(cu, cv) -> Q:
        acc = Q(0)
        for j in range(n):
            if cu[j] == 0:
                continue
            ej = metric.eig[j]
            for k in range(n):
                if cv[k] != 0:
                    acc += cu[j] * ej * gram_b[j][k] * cv[k]
        return acc

    for z in range(n):
        for xj in range(n):
            bzx = space.m_coords(
                space.table.bracket(space.m_basis[z], space.m_basis[xj])
            )
            for yk in range(xj, n):
                bzy = space.m_coords(
                    space.table.bracket(space.m_basis[z], space.m_basis[yk])
                )
                ex = [Q(0)] * n
                ex[xj] = Q(1)
                ey = [Q(0)] * n
                ey[yk] = Q(1)
                val = g_pair(bzx, ey) + g_pair(ex, bzy)
                if val != 0:
                    return BiinvarianceReport(
                        biinvariant=False,
                        violating_triple={
                            "Z": z,
                            "X": xj,
                            "Y": yk,
                            "value": encode_rational(val),
                        },
                    )
    return BiinvarianceReport(biinvariant=True, violating_triple=None)
