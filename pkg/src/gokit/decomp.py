"""Special decompositions R = R0 | R1 | R2 of irreducible root systems.

A TriPartition is the structural object (total, symmetric, R0 closed,
R1/R2 nonempty). Speciality on top of that is the rank-2 pattern: every
interacting cross pair must sit inside a B2 plane partitioned the one
way that survives the geodesic-orbit constraints. The rule decomposes
plane by plane, which is what makes the backtracking enumeration with
per-plane feasibility tables exhaustive and fast.

Rules checked by is_special (letters used in violation records):
    (a) an interacting cross pair (one line in R1, one in R2, some signed
        sum a root) spans a plane of type B2;
    (b) the 4 short roots of such a plane lie in a single part i in {1,2};
    (c) the plane's long lines land one in R0 and one in R_j, {i,j}={1,2};
    (d) no interacting cross pair of two long roots (implied by (a)-(c),
        still checked independently);
    (e) no signed sum of a cross pair lands in R0;
    (f) at least one interacting cross pair exists (reported through
        interacting_pairs_count, not the violation list);
    (g) R0-equivalence: a root of R0 added to a root of R_i (i in {1,2})
        stays in R_i whenever the sum is a root (the eigenvalue classes
        are modules for the stability subalgebra);
    (h) cross-interaction totality: every line of R1 interacts with some
        line of R2 and vice versa. An idle line decouples from the other
        eigenvalue yet shares forced isotropy compensators with the
        interacting ones, which overdetermines the geodesic equation at
        rank 3 (witnessed by exact infeasibility certificates in the
        test suite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .errors import InvalidPartition, SearchBudgetExceeded, UnsupportedSystem
from .jsonio import decode_vector, encode_vector
from .roots import (
    PlaneSystem,
    RootSystem,
    Vec,
    all_planes,
    build_root_system,
    ip,
    norm2,
    root_permutations,
    vadd,
    vneg,
    vsub,
)

SEARCH_BUDGET_DEFAULT = 10**9


@dataclass(frozen=True, eq=False)
class TriPartition:
    rs: RootSystem
    part_of: dict[Vec, int] = field(repr=False)
    encoding: tuple[int, ...]  # part per root line, canonical line order

    @classmethod
    def from_parts(cls, rs: RootSystem, r0, r1, r2) -> "TriPartition":
        sets = [frozenset(rs.assert_root(v) for v in part) for part in (r0, r1, r2)]
        total = sum(len(s) for s in sets)
        union = sets[0] | sets[1] | sets[2]
        if total != len(union):
            raise InvalidPartition("parts overlap")
        if union != set(rs.roots):
            raise InvalidPartition("parts do not cover the root system")
        for k, s in enumerate(sets):
            for v in s:
                if vneg(v) not in s:
                    raise InvalidPartition(f"R{k} is not symmetric at {v}")
        if not sets[1] or not sets[2]:
            raise InvalidPartition("R1 and R2 must be nonempty")
        r0s = sets[0]
        for x in r0s:
            for y in r0s:
                s = vadd(x, y)
                if s in rs.index and s not in r0s:
                    raise InvalidPartition(f"R0 not closed: {x} + {y} lands outside R0")
        part_of = {}
        for k, s in enumerate(sets):
            for v in s:
                part_of[v] = k
        enc = tuple(part_of[line] for line in rs.lines())
        return cls(rs=rs, part_of=part_of, encoding=enc)

    @classmethod
    def from_encoding(cls, rs: RootSystem, encoding) -> "TriPartition":
        lines = rs.lines()
        if len(encoding) != len(lines):
            raise InvalidPartition(f"encoding length {len(encoding)} != {len(lines)} lines")
        parts: list[list[Vec]] = [[], [], []]
        for rep, val in zip(lines, encoding):
            if val not in (0, 1, 2):
                raise InvalidPartition(f"encoding value {val!r} not in {{0,1,2}}")
            parts[val] += [rep, vneg(rep)]
        return cls.from_parts(rs, *parts)

    def part(self, k: int) -> frozenset[Vec]:
        return frozenset(v for v, p in self.part_of.items() if p == k)

    @property
    def r0(self) -> frozenset[Vec]:
        return self.part(0)

    @property
    def r1(self) -> frozenset[Vec]:
        return self.part(1)

    @property
    def r2(self) -> frozenset[Vec]:
        return self.part(2)

    def swap_labels(self) -> "TriPartition":
        return TriPartition.from_parts(self.rs, self.r0, self.r2, self.r1)

    def to_json_dict(self) -> dict:
        return {
            "family": self.rs.family,
            "rank": self.rs.rank,
            "R0": [encode_vector(v) for v in sorted(self.r0)],
            "R1": [encode_vector(v) for v in sorted(self.r1)],
            "R2": [encode_vector(v) for v in sorted(self.r2)],
        }

    @classmethod
    def from_json_dict(cls, doc: dict, rs: RootSystem | None = None) -> "TriPartition":
        if rs is None:
            if "family" not in doc or "rank" not in doc:
                raise InvalidPartition("partition JSON lacks family/rank and no system given")
            rs = build_root_system(doc["family"], int(doc["rank"]))
        parts = [[decode_vector(v) for v in doc.get(key, [])] for key in ("R0", "R1", "R2")]
        return cls.from_parts(rs, *parts)


@dataclass(frozen=True)
class Violation:
    pair: tuple[Vec, Vec]
    rule: str
    reason: str


@dataclass(frozen=True)
class SpecialityReport:
    verdict: bool
    violations: tuple[Violation, ...]
    interacting_pairs_count: int
    literal: tuple[dict, ...] | None = None  # diagnostic records, see literal_conditions

    def to_json_dict(self) -> dict:
        doc = {
            "verdict": self.verdict,
            "interacting_pairs_count": self.interacting_pairs_count,
            "violations": [
                {
                    "pair": [encode_vector(v.pair[0]), encode_vector(v.pair[1])],
                    "rule": v.rule,
                    "reason": v.reason,
                }
                for v in self.violations
            ],
        }
        if self.literal is not None:
            doc["literal_conditions"] = list(self.literal)
        return doc


class _PlaneCtx:
    """Per-plane data shared by is_special and the enumerator."""

    def __init__(self, st: RootSystem, plane: PlaneSystem, line_index: dict[Vec, int]):
        self.tag = plane.tag
        self.members = plane.members
        reps = sorted({st.positive_of(m) for m in plane.members})
        self.line_ids = [line_index[rep] for rep in reps]  # global, sorted rep order
        self.reps = reps
        k = len(reps)
        norms = {norm2(m) for m in plane.members}
        lo = min(norms)
        self.plane_long = [norm2(rep) != lo for rep in reps]
        amb_norms = {norm2(r) for r in st.roots}
        amb_lo = min(amb_norms)
        self.amb_long = [norm2(rep) != amb_lo for rep in reps]
        # local sum table: for each local pair, the local line ids of all
        # roots hit by signed sums (always inside the plane)
        self.sums: dict[tuple[int, int], tuple[int, ...]] = {}
        local_of = {}
        for li, rep in enumerate(reps):
            local_of[rep] = li
            local_of[vneg(rep)] = li
        for i in range(k):
            for j in range(i + 1, k):
                hit = set()
                for x in (reps[i], vneg(reps[i])):
                    s = vadd(x, reps[j])
                    if s in st.index:
                        hit.add(local_of[s])
                    d = vsub(x, reps[j])
                    if d in st.index:
                        hit.add(local_of[d])
                if hit:
                    self.sums[(i, j)] = tuple(sorted(hit))
        self.k = k

    def assignment_ok(self, a) -> bool:
        """Full local assignment check: closure + rules (a)-(e) and (g)."""
        interacting = False
        for (i, j), hits in self.sums.items():
            pi, pj = a[i], a[j]
            if pi == 0 and pj == 0:
                if any(a[s] != 0 for s in hits):
                    return False  # R0 closure
            elif pi == 0 or pj == 0:
                m = pi + pj  # the non-R0 part of the pair
                if any(a[s] != m for s in hits):
                    return False  # (g)
            elif pi + pj == 3:  # {1,2} cross pair
                interacting = True
                if self.tag != "B2":
                    return False  # (a)
                if self.amb_long[i] and self.amb_long[j]:
                    return False  # (d)
                if any(a[s] == 0 for s in hits):
                    return False  # (e)
        if interacting and self.tag == "B2":
            short_parts = {a[i] for i in range(self.k) if not self.plane_long[i]}
            if short_parts not in ({1}, {2}):
                return False  # (b)
            (i_part,) = short_parts
            long_parts = sorted(a[i] for i in range(self.k) if self.plane_long[i])
            if long_parts != sorted((0, 3 - i_part)):
                return False  # (c)
        return True


class _SystemCtx:
    """Lines, interaction tables and plane contexts for one root system."""

    def __init__(self, st: RootSystem):
        self.st = st
        self.lines = st.lines()
        self.line_index = {rep: i for i, rep in enumerate(self.lines)}
        n = len(self.lines)
        # global interaction table at line level
        self.inter: dict[tuple[int, int], tuple[Vec, ...]] = {}
        for i in range(n):
            for j in range(i + 1, n):
                hits = []
                for x in (self.lines[i], vneg(self.lines[i])):
                    for y in (self.lines[j], vneg(self.lines[j])):
                        s = vadd(x, y)
                        if s in st.index:
                            hits.append(s)
                if hits:
                    self.inter[(i, j)] = tuple(hits)
        self.degree = [0] * n
        self.neighbors: list[list[int]] = [[] for _ in range(n)]
        for i, j in self.inter:
            self.degree[i] += 1
            self.degree[j] += 1
            self.neighbors[i].append(j)
            self.neighbors[j].append(i)
        self.planes = [
            _PlaneCtx(st, p, self.line_index)
            for p in all_planes(st)
            if p.tag != "A1xA1"
        ]


_CTX_CACHE: dict[tuple[str, int], _SystemCtx] = {}


def _ctx(st: RootSystem) -> _SystemCtx:
    key = (st.family, st.rank)
    if key not in _CTX_CACHE:
        _CTX_CACHE[key] = _SystemCtx(st)
    return _CTX_CACHE[key]


def is_special(tp: TriPartition, diagnostics: bool = False) -> SpecialityReport:
    ctx = _ctx(tp.rs)
    a = tp.encoding
    violations: list[Violation] = []
    inter_count = 0

    for pc in ctx.planes:
        loc = [a[g] for g in pc.line_ids]
        cross: list[tuple[int, int]] = []
        for (i, j), hits in pc.sums.items():
            pi, pj = loc[i], loc[j]
            pair = (pc.reps[i], pc.reps[j])
            if pi == 0 and pj == 0:
                for s in hits:
                    if loc[s] != 0:
                        # structural closure violation cannot occur for a
                        # constructed TriPartition; guard anyway
                        violations.append(Violation(pair, "closure", "R0 not closed in plane"))
                        break
            elif pi == 0 or pj == 0:
                m = pi + pj
                for s in hits:
                    if loc[s] != m:
                        violations.append(
                            Violation(
                                pair,
                                "g",
                                f"R0 translate on line of {pc.reps[s]} leaves R{m}",
                            )
                        )
                        break
            elif pi + pj == 3:
                cross.append((i, j))
                if pc.tag != "B2":
                    violations.append(
                        Violation(pair, "a", f"interacting cross pair spans a {pc.tag} plane, not B2")
                    )
                if pc.amb_long[i] and pc.amb_long[j]:
                    violations.append(
                        Violation(pair, "d", "interacting cross pair of two long roots")
                    )
                bad = [s for s in hits if loc[s] == 0]
                if bad:
                    violations.append(
                        Violation(
                            pair,
                            "e",
                            f"signed sum lands in R0 on line of {pc.reps[bad[0]]}",
                        )
                    )
        inter_count += len(cross)
        if cross and pc.tag == "B2":
            wit = (pc.reps[cross[0][0]], pc.reps[cross[0][1]])
            short_parts = {loc[i] for i in range(pc.k) if not pc.plane_long[i]}
            if short_parts not in ({1}, {2}):
                violations.append(
                    Violation(wit, "b", f"plane short roots split across parts {sorted(short_parts)}")
                )
            else:
                (i_part,) = short_parts
                long_parts = sorted(loc[i] for i in range(pc.k) if pc.plane_long[i])
                if long_parts != sorted((0, 3 - i_part)):
                    violations.append(
                        Violation(
                            wit,
                            "c",
                            f"plane long lines in parts {long_parts}, expected one in R0 "
                            f"and one in R{3 - i_part}",
                        )
                    )

    for i, rep in enumerate(ctx.lines):
        m = a[i]
        if m in (1, 2) and not any(a[j] == 3 - m for j in ctx.neighbors[i]):
            violations.append(
                Violation(
                    (rep, rep),
                    "h",
                    f"line of {rep} in R{m} interacts with no line of R{3 - m}",
                )
            )

    literal = literal_conditions(tp) if diagnostics else None
    verdict = not violations and inter_count >= 1
    return SpecialityReport(
        verdict=verdict,
        violations=tuple(violations),
        interacting_pairs_count=inter_count,
        literal=literal,
    )


def literal_conditions(tp: TriPartition) -> tuple[dict, ...]:
    """Diagnostic evaluation of the textbook conditions on signed cross pairs.

    Reported per signed pair (alpha in R1, beta in R2), for comparison with
    the normative plane rule; the pointwise reading of condition i is known
    to fail on standard decompositions (sign asymmetry), which is why it is
    diagnostic only.
    """
    st = tp.rs
    out = []
    r1 = sorted(tp.r1)
    r2 = sorted(tp.r2)
    amb_lo = min(norm2(r) for r in st.roots)
    for alpha in r1:
        for beta in r2:
            plus = vadd(alpha, beta)
            minus = vsub(alpha, beta)
            plus_in = plus in st.index
            minus_in = minus in st.index
            rec: dict = {
                "alpha": encode_vector(alpha),
                "beta": encode_vector(beta),
            }
            relevant = False
            if plus_in:
                relevant = True
                rec["i_sum_is_root"] = True
                rec["i_difference_is_root"] = minus_in
            if ip(alpha, beta) < 0 and (plus_in or minus_in):
                relevant = True
                both_short = norm2(alpha) == amb_lo and norm2(beta) == amb_lo
                longs = [g for g in (plus, minus) if g in st.index and norm2(g) != amb_lo]
                parts = sorted(tp.part_of[g] if g in tp.part_of else -1 for g in longs)
                cond = len(longs) == 2 and parts[0] == 0 and parts[1] in (1, 2)
                rec["ii_iii_variant"] = "iii" if both_short else "ii"
                rec["ii_iii_long_split_ok"] = cond
            if relevant:
                out.append(rec)
    return tuple(out)


def standard_partition(rs: RootSystem) -> TriPartition:
    """The standard special decomposition of B_n or C_n.

    B_n: R0 = {+-(e_i - e_j)}, R1 = short roots, R2 = {+-(e_i + e_j)};
    the stabilizer is u(n). C_n: R0 spans the C_{n-1} subsystem on
    coordinates 2..n, R1 = {+-e_1 +- e_j}, R2 = {+-2 e_1}; the stabilizer
    is u(1) + sp(n-1).
    """
    n = rs.rank
    if rs.family not in ("B", "C") or n < 2:
        raise UnsupportedSystem(f"standard partition defined for B_n/C_n, n >= 2, not {rs.name}")
    e = lambda i: tuple(Q(1) if k == i else Q(0) for k in range(rs.ambient_dim))
    if rs.family == "B":
        r0 = []
        r1 = []
        r2 = []
        for i in range(n):
            r1 += [e(i), vneg(e(i))]
            for j in range(i + 1, n):
                d = vsub(e(i), e(j))
                s = vadd(e(i), e(j))
                r0 += [d, vneg(d)]
                r2 += [s, vneg(s)]
        return TriPartition.from_parts(rs, r0, r1, r2)
    r0 = []
    r1 = []
    r2 = [vadd(e(0), e(0)), vneg(vadd(e(0), e(0)))]
    for i in range(1, n):
        two = vadd(e(i), e(i))
        r0 += [two, vneg(two)]
        for j in range(i + 1, n):
            d = vsub(e(i), e(j))
            s = vadd(e(i), e(j))
            r0 += [d, vneg(d), s, vneg(s)]
        for sign in (1, -1):
            v = vadd(e(0), vneg(e(i))) if sign < 0 else vadd(e(0), e(i))
            r1 += [v, vneg(v)]
    return TriPartition.from_parts(rs, r0, r1, r2)


@dataclass(frozen=True)
class EnumerationStats:
    nodes: int
    raw_count: int


def enumerate_special_with_stats(
    rs: RootSystem, budget: int = SEARCH_BUDGET_DEFAULT
) -> tuple[list[TriPartition], EnumerationStats]:
    """Exhaustive backtracking over line assignments with per-plane pruning.

    Lines are assigned in decreasing interaction-degree order; each
    constrained plane carries a feasibility table over partial local
    assignments (digit 3 = unassigned), so a branch dies the moment no
    completion of any touched plane can satisfy the rank-2 rules.
    """
    ctx = _ctx(rs)
    n = len(ctx.lines)
    order = sorted(range(n), key=lambda i: (-ctx.degree[i], ctx.lines[i]))

    # Per-plane feasibility tables over base-4 codes, built bottom-up from
    # complete assignments.
    tables: list[list[bool]] = []
    plane_pos: list[list[tuple[int, int]]] = [[] for _ in range(n)]  # line -> (plane, weight)
    plane_code: list[int] = []
    for p_idx, pc in enumerate(ctx.planes):
        k = pc.k
        pow4 = [4**t for t in range(k)]
        feas = [False] * (4**k)
        # complete assignments
        def fill(prefix: list[int]):
            if len(prefix) == k:
                code = sum(v * pow4[t] for t, v in enumerate(prefix))
                feas[code] = pc.assignment_ok(prefix)
                return
            for v in (0, 1, 2):
                fill(prefix + [v])

        fill([])
        # lift to partial assignments, fewest-unassigned first
        codes_by_unassigned: list[list[int]] = [[] for _ in range(k + 1)]
        for code in range(4**k):
            c, un = code, 0
            for _ in range(k):
                if c % 4 == 3:
                    un += 1
                c //= 4
            codes_by_unassigned[un].append(code)
        for un in range(1, k + 1):
            for code in codes_by_unassigned[un]:
                c, pos = code, 0
                while c % 4 != 3:
                    c //= 4
                    pos += 1
                base = code - 3 * pow4[pos]
                feas[code] = (
                    feas[base]
                    or feas[base + pow4[pos]]
                    or feas[base + 2 * pow4[pos]]
                )
        tables.append(feas)
        start = sum(3 * pow4[t] for t in range(k))
        plane_code.append(start)
        for t, g in enumerate(pc.line_ids):
            plane_pos[g].append((p_idx, pow4[t]))

    assign = [3] * n
    nodes = 0
    found: list[TriPartition] = []
    inter_pairs = list(ctx.inter.keys())

    def place(g: int, v: int) -> bool:
        """Set line g to v, return False if some plane becomes infeasible."""
        assign[g] = v
        ok = True
        for p_idx, w in plane_pos[g]:
            plane_code[p_idx] += (v - 3) * w
            if ok and not tables[p_idx][plane_code[p_idx]]:
                ok = False
        return ok

    def unplace(g: int, v: int):
        assign[g] = 3
        for p_idx, w in plane_pos[g]:
            plane_code[p_idx] += (3 - v) * w

    def rec(depth: int):
        nonlocal nodes
        if depth == n:
            enc = tuple(assign)
            if 1 not in enc or 2 not in enc:
                return
            if not any(enc[i] + enc[j] == 3 and enc[i] != enc[j] for i, j in inter_pairs):
                return
            for i in range(n):
                if enc[i] in (1, 2) and not any(
                    enc[j] == 3 - enc[i] for j in ctx.neighbors[i]
                ):
                    return
            tp = TriPartition.from_encoding(rs, enc)
            if is_special(tp).verdict:
                found.append(tp)
            return
        g = order[depth]
        for v in (0, 1, 2):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(nodes, budget)
            if place(g, v):
                rec(depth + 1)
            unplace(g, v)

    rec(0)
    found.sort(key=lambda tp: tp.encoding)
    return found, EnumerationStats(nodes=nodes, raw_count=len(found))


def enumerate_special(rs: RootSystem, budget: int = SEARCH_BUDGET_DEFAULT) -> list[TriPartition]:
    return enumerate_special_with_stats(rs, budget)[0]


_LINE_PERM_CACHE: dict[tuple[str, int], tuple[tuple[int, ...], ...]] = {}


def _line_perms(st: RootSystem) -> tuple[tuple[int, ...], ...]:
    key = (st.family, st.rank)
    if key in _LINE_PERM_CACHE:
        return _LINE_PERM_CACHE[key]
    lines = st.lines()
    line_of_root = {}
    for i, rep in enumerate(lines):
        line_of_root[st.index[rep]] = i
        line_of_root[st.index[vneg(rep)]] = i
    rep_root_idx = [st.index[rep] for rep in lines]
    perms = set()
    for rp in root_permutations(st):
        perms.add(tuple(line_of_root[rp[ri]] for ri in rep_root_idx))
    out = tuple(sorted(perms))
    _LINE_PERM_CACHE[key] = out
    return out


def canonical_encoding(tp: TriPartition) -> tuple[int, ...]:
    """Lexicographically least encoding over the Weyl action x label swap."""
    a = tp.encoding
    n = len(a)
    best = None
    swap = {0: 0, 1: 2, 2: 1}
    for lp in _line_perms(tp.rs):
        b = [0] * n
        for i in range(n):
            b[lp[i]] = a[i]
        for cand in (tuple(b), tuple(swap[x] for x in b)):
            if best is None or cand < best:
                best = cand
    return best


def canonicalize(tp: TriPartition) -> TriPartition:
    """Canonical representative of tp's equivalence class (idempotent)."""
    return TriPartition.from_encoding(tp.rs, canonical_encoding(tp))
