"""Irreducible root systems in epsilon coordinates, exact over Q.

Supported: A1-A4, B1-B4, C1-C4, D4, F4, G2. Families D2/D3 are refused
(they are reducible / coincide with A3) rather than silently remapped.

Conventions:
    * roots are tuples of Fraction in the ambient epsilon basis
      (A_n lives in dimension n+1, G2 in the zero-sum 3-space),
    * simple roots follow the Bourbaki numbering,
    * the canonical root order is plain tuple comparison; positive roots
      are additionally exposed sorted by (height, tuple) which is the
      order the structure-constant machinery expects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from itertools import combinations, product

from . import linalg
from .errors import DegeneratePlane, GroupTooLarge, NotARoot, UnsupportedSystem

Vec = tuple[Q, ...]
Mat = tuple[tuple[Q, ...], ...]

WEYL_CAP_DEFAULT = 10_000

PLANE_TAGS = {2: "A1", 4: "A1xA1", 6: "A2", 8: "B2", 12: "G2"}


def vec(*xs) -> Vec:
    return tuple(Q(x) for x in xs)


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(c, u: Vec) -> Vec:
    c = Q(c)
    return tuple(c * a for a in u)


def ip(u: Vec, v: Vec) -> Q:
    return sum((a * b for a, b in zip(u, v)), Q(0))


def norm2(u: Vec) -> Q:
    return ip(u, u)


def pairing(beta: Vec, alpha: Vec) -> Q:
    """Cartan pairing <beta, alpha^vee> = 2(beta,alpha)/(alpha,alpha)."""
    return 2 * ip(beta, alpha) / norm2(alpha)


def _unit(i: int, dim: int) -> Vec:
    return tuple(Q(1) if j == i else Q(0) for j in range(dim))


def _gen_roots(family: str, rank: int) -> tuple[list[Vec], list[Vec], int]:
    """Return (all roots, simple roots, ambient dimension)."""
    if family == "A":
        if not 1 <= rank <= 4:
            raise UnsupportedSystem(f"A{rank} outside supported range 1..4")
        dim = rank + 1
        e = [_unit(i, dim) for i in range(dim)]
        roots = [vsub(e[i], e[j]) for i in range(dim) for j in range(dim) if i != j]
        simples = [vsub(e[i], e[i + 1]) for i in range(rank)]
        return roots, simples, dim

    if family == "B":
        if not 1 <= rank <= 4:
            raise UnsupportedSystem(f"B{rank} outside supported range 1..4")
        dim = rank
        e = [_unit(i, dim) for i in range(dim)]
        roots = [s for i in range(dim) for s in (e[i], vneg(e[i]))]
        for i, j in combinations(range(dim), 2):
            for si, sj in product((1, -1), repeat=2):
                roots.append(vadd(vscale(si, e[i]), vscale(sj, e[j])))
        simples = [vsub(e[i], e[i + 1]) for i in range(rank - 1)] + [e[rank - 1]]
        return roots, simples, dim

    if family == "C":
        if not 1 <= rank <= 4:
            raise UnsupportedSystem(f"C{rank} outside supported range 1..4")
        dim = rank
        e = [_unit(i, dim) for i in range(dim)]
        roots = [s for i in range(dim) for s in (vscale(2, e[i]), vscale(-2, e[i]))]
        for i, j in combinations(range(dim), 2):
            for si, sj in product((1, -1), repeat=2):
                roots.append(vadd(vscale(si, e[i]), vscale(sj, e[j])))
        simples = [vsub(e[i], e[i + 1]) for i in range(rank - 1)] + [vscale(2, e[rank - 1])]
        return roots, simples, dim

    if family == "D":
        if rank != 4:
            raise UnsupportedSystem(
                f"D{rank} not supported (D2 is reducible, D3 = A3; only D4 is built)"
            )
        dim = 4
        e = [_unit(i, dim) for i in range(dim)]
        roots = []
        for i, j in combinations(range(dim), 2):
            for si, sj in product((1, -1), repeat=2):
                roots.append(vadd(vscale(si, e[i]), vscale(sj, e[j])))
        simples = [vsub(e[0], e[1]), vsub(e[1], e[2]), vsub(e[2], e[3]), vadd(e[2], e[3])]
        return roots, simples, dim

    if family == "F":
        if rank != 4:
            raise UnsupportedSystem(f"F{rank} does not exist; only F4")
        dim = 4
        e = [_unit(i, dim) for i in range(dim)]
        roots = [s for i in range(dim) for s in (e[i], vneg(e[i]))]
        for i, j in combinations(range(dim), 2):
            for si, sj in product((1, -1), repeat=2):
                roots.append(vadd(vscale(si, e[i]), vscale(sj, e[j])))
        for signs in product((1, -1), repeat=4):
            roots.append(tuple(Q(s, 2) for s in signs))
        simples = [
            vsub(e[1], e[2]),
            vsub(e[2], e[3]),
            e[3],
            vec(Q(1, 2), Q(-1, 2), Q(-1, 2), Q(-1, 2)),
        ]
        return roots, simples, dim

    if family == "G":
        if rank != 2:
            raise UnsupportedSystem(f"G{rank} does not exist; only G2")
        dim = 3
        e = [_unit(i, dim) for i in range(dim)]
        roots = [vsub(e[i], e[j]) for i in range(3) for j in range(3) if i != j]
        for i in range(3):
            j, k = [x for x in range(3) if x != i]
            long = vsub(vscale(2, e[i]), vadd(e[j], e[k]))
            roots.extend([long, vneg(long)])
        simples = [vsub(e[0], e[1]), vec(-2, 1, 1)]
        return roots, simples, dim

    raise UnsupportedSystem(f"family {family!r} not supported")


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    ambient_dim: int
    roots: tuple[Vec, ...]  # sorted canonically (tuple order)
    simple_roots: tuple[Vec, ...]  # Bourbaki numbering
    positive_roots: tuple[Vec, ...]  # sorted by (height, tuple)
    index: dict[Vec, int] = field(repr=False)
    expansion: dict[Vec, tuple[int, ...]] = field(repr=False)  # simple-root coords

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    def contains(self, v: Vec) -> bool:
        return tuple(Q(x) for x in v) in self.index

    def assert_root(self, v: Vec) -> Vec:
        w = tuple(Q(x) for x in v)
        if w not in self.index:
            raise NotARoot(f"{v} is not a root of {self.name}")
        return w

    def height(self, v: Vec) -> int:
        return sum(self.expansion[self.assert_root(v)])

    def is_positive(self, v: Vec) -> bool:
        return self.height(v) > 0

    def positive_of(self, v: Vec) -> Vec:
        """The positive root on the line through v."""
        w = self.assert_root(v)
        return w if self.is_positive(w) else vneg(w)

    def lines(self) -> tuple[Vec, ...]:
        """One positive representative per root line, in canonical order."""
        return tuple(sorted({self.positive_of(r) for r in self.roots}))


_SYSTEM_CACHE: dict[tuple[str, int], RootSystem] = {}


def build_root_system(family: str, rank: int) -> RootSystem:
    fam = str(family).strip().upper()
    if len(fam) != 1:
        raise UnsupportedSystem(f"family {family!r} not supported")
    key = (fam, int(rank))
    if key in _SYSTEM_CACHE:
        return _SYSTEM_CACHE[key]

    raw, simples, dim = _gen_roots(fam, int(rank))
    roots = tuple(sorted(set(raw)))
    assert len(roots) == len(raw), "duplicate roots generated"

    # Expand every root in the simple basis; integrality and uniform sign
    # double-check the generator tables.
    cols = list(zip(*simples))  # dim x rank
    expansion: dict[Vec, tuple[int, ...]] = {}
    for r in roots:
        res = linalg.solve_with_certificate([list(c) for c in cols], list(r))
        assert res.solved, f"root {r} outside simple-root span"
        coeffs = res.solution
        assert all(c.denominator == 1 for c in coeffs), f"non-integral expansion for {r}"
        signs = {1 if c > 0 else -1 for c in coeffs if c != 0}
        assert len(signs) == 1, f"mixed-sign expansion for {r}"
        expansion[r] = tuple(int(c) for c in coeffs)

    positives = [r for r in roots if sum(expansion[r]) > 0]
    assert len(positives) * 2 == len(roots)
    positives.sort(key=lambda r: (sum(expansion[r]), r))

    st = RootSystem(
        family=fam,
        rank=int(rank),
        ambient_dim=dim,
        roots=roots,
        simple_roots=tuple(simples),
        positive_roots=tuple(positives),
        index={r: i for i, r in enumerate(roots)},
        expansion=expansion,
    )
    _SYSTEM_CACHE[key] = st
    return st


def system_to_json(st: RootSystem) -> dict:
    from .jsonio import encode_vector

    return {
        "family": st.family,
        "rank": st.rank,
        "roots": [encode_vector(r) for r in st.roots],
    }


def reflection_matrix(alpha: Vec, dim: int) -> Mat:
    n2 = norm2(alpha)
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            x = Q(1) if i == j else Q(0)
            row.append(x - 2 * alpha[i] * alpha[j] / n2)
        rows.append(tuple(row))
    return tuple(rows)


def _matmul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    bt = list(zip(*b))
    return tuple(tuple(ip(row, col) for col in bt) for row in a)


def matvec(a: Mat, v: Vec) -> Vec:
    return tuple(ip(row, v) for row in a)


_W_CACHE: dict[tuple[str, int, int], tuple[Mat, ...]] = {}


def weyl_group(st: RootSystem, cap: int = WEYL_CAP_DEFAULT) -> tuple[Mat, ...]:
    """All Weyl group elements as rational orthogonal matrices (BFS closure).

    Raises GroupTooLarge as soon as the closure passes ``cap`` elements.
    """
    key = (st.family, st.rank, cap)
    if key in _W_CACHE:
        return _W_CACHE[key]
    gens = [reflection_matrix(a, st.ambient_dim) for a in st.simple_roots]
    ident = tuple(
        tuple(Q(1) if i == j else Q(0) for j in range(st.ambient_dim))
        for i in range(st.ambient_dim)
    )
    seen: set[Mat] = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(s, g)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise GroupTooLarge(
                            f"Weyl closure of {st.name} exceeded cap {cap}"
                        )
                    nxt.append(h)
        frontier = nxt
    out = tuple(sorted(seen))
    _W_CACHE[key] = out
    return out


_PERM_CACHE: dict[tuple[str, int, int], tuple[tuple[int, ...], ...]] = {}


def root_permutations(st: RootSystem, cap: int = WEYL_CAP_DEFAULT) -> tuple[tuple[int, ...], ...]:
    """The permutation action of W on the sorted root list, deduplicated.

    Distinct matrices can act identically on roots only when the ambient
    space exceeds the root span (A family); deduplication keeps the
    canonicalization loops tight.
    """
    key = (st.family, st.rank, cap)
    if key in _PERM_CACHE:
        return _PERM_CACHE[key]
    perms = set()
    for w in weyl_group(st, cap):
        perms.add(tuple(st.index[matvec(w, r)] for r in st.roots))
    out = tuple(sorted(perms))
    _PERM_CACHE[key] = out
    return out


@dataclass(frozen=True, eq=False)
class PlaneSystem:
    """Intersection of the root system with a 2-plane spanned by two roots."""

    tag: str  # "A1xA1", "A2", "B2" or "G2"
    members: tuple[Vec, ...]  # sorted canonically
    span: tuple[Vec, Vec]  # the spanning pair the plane was requested through

    def __len__(self) -> int:
        return len(self.members)


def plane_system(st: RootSystem, alpha: Vec, beta: Vec) -> PlaneSystem:
    a = st.assert_root(alpha)
    b = st.assert_root(beta)
    basis = linalg.RowBasis(st.ambient_dim)
    basis.add(a)
    if not basis.add(b):
        raise DegeneratePlane(f"{alpha} and {beta} are proportional")
    members = tuple(sorted(r for r in st.roots if basis.contains(r)))
    tag = PLANE_TAGS.get(len(members))
    assert tag is not None, f"unexpected plane cardinality {len(members)}"
    # Length pattern cross-check: B2 and G2 split half short half long,
    # A2 and A1xA1 sections of these systems never mix three lengths.
    norms = sorted({norm2(m) for m in members})
    if tag in ("B2", "G2"):
        assert len(norms) == 2 and 2 * sum(1 for m in members if norm2(m) == norms[0]) == len(members)
    else:
        assert len(norms) <= 2
    return PlaneSystem(tag=tag, members=members, span=(a, b))


_PLANES_CACHE: dict[tuple[str, int], tuple[PlaneSystem, ...]] = {}


def all_planes(st: RootSystem) -> tuple[PlaneSystem, ...]:
    """Every distinct 2-plane section, canonically ordered."""
    key = (st.family, st.rank)
    if key in _PLANES_CACHE:
        return _PLANES_CACHE[key]
    lines = st.lines()
    seen: dict[tuple[Vec, ...], PlaneSystem] = {}
    for a, b in combinations(lines, 2):
        ps = plane_system(st, a, b)
        seen.setdefault(ps.members, ps)
    out = tuple(seen[k] for k in sorted(seen))
    _PLANES_CACHE[key] = out
    return out


def closed_symmetric_subsystems(st: RootSystem) -> list[frozenset[Vec]]:
    """All P with P = -P and (P + P) intersect R inside P, as root sets.

    DFS over root lines; including a pair of lines forces every line their
    sums land on, which prunes hard enough for the supported ranks.
    """
    lines = st.lines()
    k = len(lines)
    line_of = {}
    for idx, rep in enumerate(lines):
        line_of[rep] = idx
        line_of[vneg(rep)] = idx

    forced: dict[tuple[int, int], frozenset[int]] = {}
    for i in range(k):
        for j in range(i, k):
            out = set()
            for x in (lines[i], vneg(lines[i])):
                for y in (lines[j], vneg(lines[j])):
                    s = vadd(x, y)
                    if s in st.index:
                        out.add(line_of[s])
            forced[(i, j)] = frozenset(out)

    results: list[frozenset[Vec]] = []

    def rec(idx: int, chosen: list[int], required: set[int]):
        if idx == k:
            roots = set()
            for c in chosen:
                roots.add(lines[c])
                roots.add(vneg(lines[c]))
            results.append(frozenset(roots))
            return
        # exclude line idx
        if idx not in required:
            rec(idx + 1, chosen, required)
        # include line idx
        new_req = set(required)
        ok = True
        for c in chosen + [idx]:
            pair = (min(c, idx), max(c, idx))
            for f in forced[pair]:
                if f < idx and f not in chosen:
                    ok = False
                    break
                new_req.add(f)
            if not ok:
                break
        if ok:
            chosen.append(idx)
            rec(idx + 1, chosen, new_req)
            chosen.pop()

    rec(0, [], set())
    return results
