"""Compact real forms with exact integer structure constants.

The complex simple algebra of a root system carries a Chevalley basis
{h_i, e_a} whose constants N(a, b) are integers, pinned down by a total
order on positive roots (height, then tuple order) and the sign rule
N > 0 on extraspecial pairs. The compact form is then spanned by

    t_i = i h_i,   u_a = e_a - e_-a,   v_a = i (e_a + e_-a)

over the positive roots a, and every bracket of basis vectors again has
integer coefficients. That keeps all downstream checks (Jacobi, form
invariance, positive definiteness, grading) in exact arithmetic.

Element convention: a sparse mapping {basis index: Fraction}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from . import linalg
from .errors import DimensionError, NotARoot
from .jsonio import encode_rational, encode_vector
from .roots import (
    RootSystem,
    Vec,
    build_root_system,
    ip,
    norm2,
    pairing,
    vadd,
    vneg,
    vscale,
    vsub,
)

Element = dict[int, Q]


class _Chevalley:
    """Structure constants N(a, b) for one root system.

    Pairs of positive roots with root sum are filled inductively by
    height of the sum: the extraspecial pair (least first member) gets
    N = p + 1 > 0, the remaining pairs follow from the Jacobi identity
    against the extraspecial pair. Mixed-sign arguments reduce through
    the zero-sum triple rotation N(x, y) = N(y, z) |z|^2 / |x|^2 and
    through N(-x, -y) = -N(x, y).
    """

    def __init__(self, st: RootSystem):
        self.st = st
        self.rank_of = {b: i for i, b in enumerate(st.positive_roots)}
        self.table: dict[tuple[Vec, Vec], int] = {}
        for gamma in st.positive_roots:
            if st.height(gamma) < 2:
                continue
            pairs = self._special_pairs(gamma)
            assert pairs, f"no special pair decomposes {gamma}"
            a, b = pairs[0]
            self.table[(a, b)] = self._chain_p(a, b) + 1
            for xi, eta in pairs[1:]:
                t1 = Q(0)
                de = vsub(eta, a)
                if de in st.index:
                    t1 = self.n(eta, vneg(a)) * self.n(xi, de)
                t2 = Q(0)
                dx = vsub(xi, a)
                if dx in st.index:
                    t2 = self.n(xi, vneg(a)) * self.n(dx, eta)
                val = (t1 + t2) / self.n(gamma, vneg(a))
                assert val.denominator == 1, f"non-integral N for {(xi, eta)}"
                val = int(val)
                assert abs(val) == self._chain_p(xi, eta) + 1
                self.table[(xi, eta)] = val

    def _special_pairs(self, gamma: Vec) -> list[tuple[Vec, Vec]]:
        out = []
        for xi in self.st.positive_roots:
            eta = vsub(gamma, xi)
            if eta in self.st.index and self.st.is_positive(eta):
                if self.rank_of[xi] < self.rank_of[eta]:
                    out.append((xi, eta))
        out.sort(key=lambda p: self.rank_of[p[0]])
        return out

    def _chain_p(self, a: Vec, b: Vec) -> int:
        p = 0
        while vsub(b, vscale(p + 1, a)) in self.st.index:
            p += 1
        return p

    def n(self, x: Vec, y: Vec) -> Q:
        s = vadd(x, y)
        if s not in self.st.index:
            return Q(0)
        xp, yp = self.st.is_positive(x), self.st.is_positive(y)
        if xp and yp:
            if self.rank_of[x] < self.rank_of[y]:
                return Q(self.table[(x, y)])
            return Q(-self.table[(y, x)])
        if not xp and not yp:
            return -self.n(vneg(x), vneg(y))
        z = vneg(s)
        return self.n(y, z) * norm2(z) / norm2(x)

    def constant(self, x: Vec, y: Vec) -> int:
        val = self.n(self.st.assert_root(x), self.st.assert_root(y))
        assert val.denominator == 1
        return int(val)


def chevalley_constant(st: RootSystem, x: Vec, y: Vec) -> int:
    """N(x, y) for roots x, y; zero when x + y is not a root."""
    return _chevalley(st).constant(x, y)


_CHEV_CACHE: dict[tuple[str, int], _Chevalley] = {}


def _chevalley(st: RootSystem) -> _Chevalley:
    key = (st.family, st.rank)
    if key not in _CHEV_CACHE:
        _CHEV_CACHE[key] = _Chevalley(st)
    return _CHEV_CACHE[key]


def coroot_coords(st: RootSystem, alpha: Vec) -> tuple[int, ...]:
    """Integer coordinates of the coroot of alpha in the simple coroots."""
    alpha = st.assert_root(alpha)
    target = vscale(Q(2) / norm2(alpha), alpha)
    cols = [vscale(Q(2) / norm2(s), s) for s in st.simple_roots]
    rows = [[c[d] for c in cols] for d in range(st.ambient_dim)]
    res = linalg.solve_with_certificate(rows, list(target))
    assert res.solved
    assert all(c.denominator == 1 for c in res.solution)
    return tuple(int(c) for c in res.solution)


@dataclass(frozen=True, eq=False)
class StructureTable:
    """Compact form over the basis [t_1..t_r, u_b1, v_b1, u_b2, v_b2, ...].

    brk holds the brackets of basis pairs for i < j only, as tuples of
    (target index, integer coefficient); zero brackets are absent. form
    is the Gram matrix of b = -Killing, integer and block diagonal: the
    torus block, then a scalar 2x2 block per root line.
    """

    rs: RootSystem
    dim: int
    basis: tuple[tuple, ...]  # ("t", k) 1-based / ("u"|"v", root)
    brk: dict[tuple[int, int], tuple[tuple[int, int], ...]] = field(repr=False)
    form: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.rs.simple_roots)

    def t_index(self, k: int) -> int:
        if not 1 <= k <= self.rank:
            raise DimensionError(f"torus index {k} out of range 1..{self.rank}")
        return k - 1

    def root_block(self, beta: Vec) -> tuple[int, int]:
        """(u, v) basis indexes of the root line through beta."""
        rep = self.rs.positive_of(beta)
        pos = _chevalley(self.rs).rank_of[rep]
        base = self.rank + 2 * pos
        return (base, base + 1)

    def basis_brk(self, i: int, j: int) -> tuple[tuple[int, int], ...]:
        if i == j:
            return ()
        if i < j:
            return self.brk.get((i, j), ())
        return tuple((k, -c) for k, c in self.brk.get((j, i), ()))

    def bracket(self, x: Element, y: Element) -> Element:
        out: Element = {}
        for i, a in x.items():
            if a == 0:
                continue
            for j, b in y.items():
                c = a * b
                if c == 0:
                    continue
                for k, w in self.basis_brk(i, j):
                    val = out.get(k, Q(0)) + c * w
                    if val == 0:
                        out.pop(k, None)
                    else:
                        out[k] = val
        return out

    def b_pair(self, x: Element, y: Element) -> Q:
        acc = Q(0)
        for i, a in x.items():
            row = self.form[i]
            for j, b in y.items():
                acc += a * row[j] * b
        return acc

    def describe(self, idx: int) -> str:
        lab = self.basis[idx]
        if lab[0] == "t":
            return f"t{lab[1]}"
        return f"{lab[0]}{tuple(str(c) for c in lab[1])}"


_ALGEBRA_CACHE: dict[tuple[str, int], StructureTable] = {}


def build_compact_algebra(st: RootSystem) -> StructureTable:
    key = (st.family, st.rank)
    if key in _ALGEBRA_CACHE:
        return _ALGEBRA_CACHE[key]

    ch = _chevalley(st)
    r = len(st.simple_roots)
    pos = st.positive_roots
    dim = r + 2 * len(pos)

    basis: list[tuple] = [("t", k) for k in range(1, r + 1)]
    for b in pos:
        basis += [("u", b), ("v", b)]
    iu = {b: r + 2 * k for k, b in enumerate(pos)}
    iv = {b: r + 2 * k + 1 for k, b in enumerate(pos)}

    brk: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}

    def put(i: int, j: int, terms: list[tuple[int, Q]]):
        terms = [(k, c) for k, c in terms if c != 0]
        if not terms:
            return
        if i > j:
            i, j = j, i
            terms = [(k, -c) for k, c in terms]
        for _, c in terms:
            assert c.denominator == 1
        merged: dict[int, int] = {}
        for k, c in terms:
            merged[k] = merged.get(k, 0) + int(c)
        out = tuple(sorted((k, c) for k, c in merged.items() if c != 0))
        if out:
            brk[(i, j)] = out

    def u_term(gamma: Vec, coeff: Q) -> tuple[int, Q]:
        # U(gamma) = u_gamma for positive gamma, -u_(-gamma) otherwise
        if st.is_positive(gamma):
            return (iu[gamma], coeff)
        return (iu[vneg(gamma)], -coeff)

    for k, alpha_k in enumerate(st.simple_roots, start=1):
        for b in pos:
            c = pairing(b, alpha_k)
            assert c.denominator == 1
            put(k - 1, iu[b], [(iv[b], c)])
            put(k - 1, iv[b], [(iu[b], -c)])

    for a in pos:
        cr = coroot_coords(st, a)
        put(iu[a], iv[a], [(i, Q(2 * c)) for i, c in enumerate(cr)])

    for ka, a in enumerate(pos):
        for b in pos[ka + 1 :]:
            s = vadd(a, b)
            d = vsub(a, b)
            ns = ch.n(a, b) if s in st.index else Q(0)
            nd = ch.n(a, vneg(b)) if d in st.index else Q(0)
            uu: list[tuple[int, Q]] = []
            uv: list[tuple[int, Q]] = []
            vv: list[tuple[int, Q]] = []
            if ns != 0:
                uu.append(u_term(s, ns))
                uv.append((iv[s], ns))  # s is positive: sum of positives
                vv.append(u_term(s, -ns))
            if nd != 0:
                uu.append(u_term(d, -nd))
                uv.append((iv[st.positive_of(d)], nd))
                vv.append(u_term(d, -nd))
            put(iu[a], iu[b], uu)
            put(iu[a], iv[b], uv)
            put(iv[a], iv[b], vv)
            # the mixed bracket is not symmetric in (a, b)
            s2 = s
            d2 = vneg(d)
            ns2 = ch.n(b, a) if s2 in st.index else Q(0)
            nd2 = ch.n(b, vneg(a)) if d2 in st.index else Q(0)
            uv2: list[tuple[int, Q]] = []
            if ns2 != 0:
                uv2.append((iv[s2], ns2))
            if nd2 != 0:
                uv2.append((iv[st.positive_of(d2)], nd2))
            put(iu[b], iv[a], uv2)

    # adjoint maps as column dictionaries, for the Killing form
    ad: list[dict[int, dict[int, int]]] = [dict() for _ in range(dim)]
    for (i, j), terms in brk.items():
        ad[i][j] = {k: c for k, c in terms}
        ad[j][i] = {k: -c for k, c in terms}

    form_rows: list[list[int]] = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            acc = 0
            for p, w in ad[j].items():
                back = ad[i]
                for q, c in w.items():
                    col = back.get(q)
                    if col:
                        acc += c * col.get(p, 0)
            form_rows[i][j] = -acc
            form_rows[j][i] = -acc

    table = StructureTable(
        rs=st,
        dim=dim,
        basis=tuple(basis),
        brk=brk,
        form=tuple(tuple(row) for row in form_rows),
    )
    _ALGEBRA_CACHE[key] = table
    return table


@dataclass(frozen=True)
class AlgebraReport:
    name: str
    dim: int
    ok: bool
    checks: dict[str, bool]
    counterexample: dict | None

    def to_json_dict(self) -> dict:
        return {
            "system": self.name,
            "dim": self.dim,
            "ok": self.ok,
            "checks": dict(self.checks),
            "counterexample": self.counterexample,
        }


def verify_algebra(table: StructureTable) -> AlgebraReport:
    """Exact verification: antisymmetric storage, Jacobi identity on all
    basis triples, ad-invariance of the form, positive definiteness, and
    the root-line grading. Stops at the first counterexample."""
    n = table.dim
    checks = {
        "antisymmetry": True,
        "jacobi": True,
        "invariance": True,
        "positive_definite": True,
        "grading": True,
    }
    ce: dict | None = None

    def fail(check: str, info: dict):
        nonlocal ce
        checks[check] = False
        if ce is None:
            ce = {"check": check, **info}

    for (i, j) in table.brk:
        if not i < j:
            fail("antisymmetry", {"indices": [i, j]})
            break

    basis_elems = [{i: Q(1)} for i in range(n)]
    pair_brk = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            pair_brk[i][j] = {k: Q(c) for k, c in table.basis_brk(i, j)}

    for i in range(n):
        if checks["jacobi"] is False:
            break
        for j in range(i + 1, n):
            if checks["jacobi"] is False:
                break
            for k in range(j + 1, n):
                acc: Element = {}
                for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                    w = table.bracket(pair_brk[x][y], basis_elems[z])
                    for idx, c in w.items():
                        val = acc.get(idx, Q(0)) + c
                        if val == 0:
                            acc.pop(idx, None)
                        else:
                            acc[idx] = val
                if acc:
                    fail(
                        "jacobi",
                        {
                            "indices": [i, j, k],
                            "labels": [table.describe(i), table.describe(j), table.describe(k)],
                            "residual": {table.describe(p): encode_rational(c) for p, c in sorted(acc.items())},
                        },
                    )
                    break

    for i in range(n):
        if checks["invariance"] is False:
            break
        for j in range(n):
            if checks["invariance"] is False:
                break
            for k in range(j, n):
                lhs = table.b_pair(pair_brk[i][j], basis_elems[k])
                rhs = table.b_pair(basis_elems[j], pair_brk[i][k])
                if lhs + rhs != 0:
                    fail(
                        "invariance",
                        {
                            "indices": [i, j, k],
                            "labels": [table.describe(i), table.describe(j), table.describe(k)],
                            "residual": encode_rational(lhs + rhs),
                        },
                    )
                    break

    minors = linalg.leading_principal_minors([list(row) for row in table.form])
    for d, m in enumerate(minors, start=1):
        if m <= 0:
            fail("positive_definite", {"order": d, "minor": encode_rational(Q(m))})
            break

    rank = table.rank
    block_of = {}
    for idx in range(rank, n):
        kind, root = table.basis[idx]
        rep = table.rs.positive_of(root)
        block_of[idx] = rep
    for (i, j), terms in sorted(table.brk.items()):
        if not checks["grading"]:
            break
        allowed: set | None = None
        if i < rank and j < rank:
            allowed = set()
        elif i < rank:
            allowed = {block_of[j]}
        else:
            a, b = block_of[i], block_of[j]
            if a == b:
                allowed = {a, "torus"}
            else:
                allowed = set()
                for x in (vadd(a, b), vsub(a, b)):
                    if x in table.rs.index:
                        allowed.add(table.rs.positive_of(x))
        for k, _ in terms:
            spot = "torus" if k < rank else block_of[k]
            if spot not in allowed:
                fail(
                    "grading",
                    {
                        "indices": [i, j],
                        "labels": [table.describe(i), table.describe(j)],
                        "lands_on": table.describe(k),
                    },
                )
                break

    ok = all(checks.values())
    return AlgebraReport(
        name=table.rs.name, dim=n, ok=ok, checks=checks, counterexample=ce
    )


def export_structure_table(table: StructureTable) -> dict:
    """JSON-ready dump: basis labels, integer brackets, form Gram matrix."""
    basis_doc = []
    for lab in table.basis:
        if lab[0] == "t":
            basis_doc.append({"kind": "t", "simple": lab[1]})
        else:
            basis_doc.append({"kind": lab[0], "root": encode_vector(lab[1])})
    brackets = {
        f"{i},{j}": {str(k): c for k, c in terms}
        for (i, j), terms in sorted(table.brk.items())
    }
    return {
        "system": table.rs.name,
        "dim": table.dim,
        "basis": basis_doc,
        "brackets": brackets,
        "form": [list(row) for row in table.form],
    }
