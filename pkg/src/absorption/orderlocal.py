"""Local models of hereditary orders as valuation-matrix orders over k[t].

An order is given by an integer matrix v: entry (a, b) of its elements
lies in t^{v_ab} k[t].  Finite-dimensional shadows are the truncations
Gamma / t^N Gamma (basis t^e E_ab with v_ab <= e < v_ab + N) and the fibers
Gamma / (t - c) Gamma.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import exactlinalg as la
from .errors import MixedTypes, NotBasic, VerificationFailed
from .repmod import Module, is_isomorphic, projective, projective_cover, pullback, simple
from .homalg import ext_dim
from .quiveralg import (
    AlgebraMorphism,
    PathBasisAlgebra,
    StructureConstAlgebra,
    basic_algebra,
    build_cyclic_nakayama,
    morphism_from_arrows,
    verify_isomorphism,
)


@dataclass
class ValuationOrder:
    v: np.ndarray
    p: int = la.DEFAULT_PRIME
    data: tuple | None = None      # ramification data when the order is standard
    label: str = ""

    def __post_init__(self):
        self.v = np.asarray(self.v, dtype=np.int64)
        if self.v.ndim != 2 or self.v.shape[0] != self.v.shape[1]:
            raise ValueError("valuation matrix must be square")

    @property
    def n(self) -> int:
        return self.v.shape[0]

    @property
    def r(self) -> int:
        return len(self.data) if self.data else 0

    @property
    def block_starts(self) -> list[int]:
        """0-based first row of each block."""
        starts, pos = [], 0
        for size in self.data:
            starts.append(pos)
            pos += size
        return starts

    def is_basic(self) -> bool:
        return self.data is not None and all(s == 1 for s in self.data)

    def to_dict(self) -> dict:
        return {"v": self.v.tolist(), "data": list(self.data) if self.data else None,
                "label": self.label}


def standard_hereditary_order(data, p: int = la.DEFAULT_PRIME) -> ValuationOrder:
    """Block upper triangular mod t: v_ab = 0 when block(a) <= block(b), else 1."""
    data = tuple(int(x) for x in data)
    if not data or any(x < 1 for x in data):
        raise ValueError("ramification data must be positive integers")
    blocks = [j for j, size in enumerate(data) for _ in range(size)]
    n = len(blocks)
    v = np.array([[int(blocks[a] > blocks[b]) for b in range(n)] for a in range(n)])
    return ValuationOrder(v, p, data, label="standard" + str(data))


def is_order(v) -> bool:
    v = np.asarray(v, dtype=np.int64)
    if np.any(np.diag(v) != 0):
        return False
    # v_ac <= v_ab + v_bc for all a, b, c
    return bool(np.all(v[:, None, :] <= v[:, :, None] + v[None, :, :]))


def maximal_shift_vector(v) -> list[int] | None:
    """d with v_ab = d_a - d_b and d_1 = 0, if one exists."""
    v = np.asarray(v, dtype=np.int64)
    d = v[:, 0].copy()
    if np.array_equal(d[:, None] - d[None, :], v):
        return d.tolist()
    return None


def is_maximal(v) -> bool:
    return is_order(v) and maximal_shift_vector(v) is not None


def contains(big, small) -> bool:
    """Order ``big`` contains order ``small`` (entrywise lower valuations)."""
    return bool(np.all(np.asarray(big) <= np.asarray(small)))


def is_bimodule_over(B, G) -> bool:
    """B is closed under multiplication by G on both sides."""
    B, G = np.asarray(B), np.asarray(G)
    right = np.all(B[:, None, :] <= B[:, :, None] + G[None, :, :])
    left = np.all(B[:, None, :] <= G[:, :, None] + B[None, :, :])
    return bool(right and left)


# ----------------------------------------------------------------------------
# finite-dimensional shadows


def _radical_rows(v: np.ndarray, basis: list) -> np.ndarray:
    """Jacobson radical of a tiled order truncation: t^e E_ab with e >= v_ab + [v_ab + v_ba = 0]."""
    rows = []
    for k, (e, a, b) in enumerate(basis):
        if e >= v[a, b] + int(v[a, b] + v[b, a] == 0):
            rows.append(k)
    return np.eye(len(basis), dtype=np.int64)[rows]


def truncated_algebra(G: ValuationOrder, N: int) -> StructureConstAlgebra:
    """Gamma / t^N Gamma, of dimension n^2 N."""
    if N < 1:
        raise ValueError("truncation order must be positive")
    v, n, p = G.v, G.n, G.p
    basis = [(e, a, b) for a in range(n) for b in range(n) for e in range(v[a, b], v[a, b] + N)]
    index = {key: k for k, key in enumerate(basis)}
    d = len(basis)
    struct = np.zeros((d, d, d), dtype=np.int64)
    for i, (e, a, b) in enumerate(basis):
        for j, (f, c, dd) in enumerate(basis):
            if b == c:
                k = index.get((e + f, a, dd))
                if k is not None:
                    struct[i, j, k] = 1
    one = np.zeros(d, dtype=np.int64)
    idem = []
    for a in range(n):
        one[index[(0, a, a)]] = 1
        idem.append(np.eye(d, dtype=np.int64)[index[(0, a, a)]])
    T = StructureConstAlgebra(struct, one, p, idempotents=idem, radical=_radical_rows(v, basis),
                              labels=[f"t^{e}E{a + 1}{b + 1}" for e, a, b in basis],
                              name=f"Gamma/t^{N}")
    T.order_basis = basis
    T.order_index = index
    T.order = G
    T.trunc = N
    return T


def fiber(G: ValuationOrder, c: int = 0) -> StructureConstAlgebra:
    """Gamma / (t - c) Gamma with basis the classes of t^{v_ab} E_ab (index a n + b)."""
    v, n, p = G.v, G.n, G.p
    c %= p
    d = n * n
    struct = np.zeros((d, d, d), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for dd in range(n):
                e = int(v[a, b] + v[b, dd] - v[a, dd])
                struct[a * n + b, b * n + dd, a * n + dd] = pow(c, e, p) if e else 1
    one = np.zeros(d, dtype=np.int64)
    idem = []
    for a in range(n):
        one[a * n + a] = 1
        idem.append(np.eye(d, dtype=np.int64)[a * n + a])
    radical = None
    if c == 0:
        basis = [(int(v[a, b]), a, b) for a in range(n) for b in range(n)]
        radical = _radical_rows(v, basis)
    return StructureConstAlgebra(struct, one, p, idempotents=idem, radical=radical,
                                 labels=[f"E{a + 1}{b + 1}" for a in range(n) for b in range(n)],
                                 name=f"fiber at t={c}")


def has_zero_radical(A: StructureConstAlgebra) -> bool:
    """Certify rad A = 0: the trace-form kernel contains the radical in any characteristic."""
    return A.trace_form_kernel().shape[0] == 0


@dataclass
class MoritaIdentification:
    order: ValuationOrder
    fiber: StructureConstAlgebra
    basic: StructureConstAlgebra
    lam: PathBasisAlgebra
    phi: AlgebraMorphism            # Lambda_r -> basic fiber
    inverse: np.ndarray


def _basic_coords(basic: StructureConstAlgebra, F: StructureConstAlgebra):
    if basic is F:
        return lambda x: np.asarray(x, dtype=np.int64)
    _, piv = la.rref(basic.inclusion, F.p)
    return lambda x: np.asarray(x, dtype=np.int64)[piv]


def fiber_basic_iso_to_lambda(G: ValuationOrder) -> MoritaIdentification:
    """Verified isomorphism Lambda_r -> basic algebra of the fiber at t = 0.

    e_j goes to E_{a_j a_j} and mu_{j,j+1} to the class of t^{v} E_{a_j a_{j+1}},
    where a_j is the first row of block j.
    """
    if G.data is None:
        raise ValueError("the Morita identification needs a standard order")
    F = fiber(G, 0)
    n, r = G.n, G.r
    starts = G.block_starts
    B, _ = basic_algebra(F, [F.idempotents[a] for a in range(n)])
    coords = _basic_coords(B, F)
    unit = np.eye(n * n, dtype=np.int64)
    verts = [coords(unit[a * n + a]) for a in starts]
    arrows = [coords(unit[starts[j] * n + starts[(j + 1) % r]]) for j in range(r)]
    lam = build_cyclic_nakayama(r, G.p)
    phi = morphism_from_arrows(lam, B, verts, arrows, name="phi")
    verdict = verify_isomorphism(phi)
    if not verdict.ok:
        raise VerificationFailed(f"Lambda_{r} -> basic fiber is not an isomorphism: {verdict.witness}")
    return MoritaIdentification(G, F, B, lam, phi, verdict.witness)


# ----------------------------------------------------------------------------
# maximal overorders


def enumerate_maximal_overorders(G: ValuationOrder, box: int | None = None) -> list[ValuationOrder]:
    """All maximal orders v_ab = d_a - d_b containing G, with d_1 = 0 and d in [-box, box]^n.

    Containment forces -v_1a <= d_a <= v_a1, which prunes the search
    without changing its result.
    """
    n, v = G.n, G.v
    box = n if box is None else box
    ranges = [range(max(-box, -int(v[0, a])), min(box, int(v[a, 0])) + 1) for a in range(1, n)]
    out = []
    for tail in itertools.product(*ranges):
        d = np.array((0,) + tail, dtype=np.int64)
        w = d[:, None] - d[None, :]
        if contains(w, v):
            out.append(ValuationOrder(w, G.p, None, label=f"d={d.tolist()}"))
    return out


def lattice_row_patterns(G: ValuationOrder) -> list[np.ndarray]:
    """Valuation pattern of L^(j) = E_{a_j a_j} Gamma for each block j."""
    return [G.v[a] for a in G.block_starts]


def row_type(pattern, G: ValuationOrder) -> tuple[int, int] | None:
    """(j, m) with pattern = pattern(L^(j)) + m, i.e. the row is t^m L^(j)."""
    pattern = np.asarray(pattern)
    for j, ref in enumerate(lattice_row_patterns(G), start=1):
        diff = pattern - ref
        if np.all(diff == diff[0]):
            return j, int(diff[0])
    return None


def classify_overorder_type(B: ValuationOrder, G: ValuationOrder) -> int:
    types = {row_type(B.v[a], G) and row_type(B.v[a], G)[0] for a in range(B.n)}
    if len(types) != 1 or None in types:
        raise MixedTypes(f"rows of {B.label} have types {sorted(map(str, types))}")
    return types.pop()


def overorder_module_check(B: ValuationOrder, G: ValuationOrder) -> dict:
    """Row-by-row identification B = (t^{m_a} L^(j))^{+n} as right Gamma-lattices."""
    rows = [row_type(B.v[a], G) for a in range(B.n)]
    types = {row[0] for row in rows if row}
    ok = all(rows) and len(types) == 1
    return {"ok": ok, "type": types.pop() if ok else None,
            "twists": [row[1] if row else None for row in rows]}


# ----------------------------------------------------------------------------
# pushforward of Lambda_r-modules


@dataclass
class LatticeRow:
    order: ValuationOrder
    row: int          # 1-based
    twist: int = 0

    def pattern(self) -> np.ndarray:
        return self.order.v[self.row - 1] + self.twist


@dataclass
class Pushforward:
    order: ValuationOrder
    algebra: StructureConstAlgebra          # Gamma / t^N
    morita: MoritaIdentification
    to_lambda: AlgebraMorphism              # Gamma / t^N -> Gamma / t -> Lambda_r
    lift: np.ndarray                        # Lambda_r basis -> chosen lifts in Gamma / t^N
    cache: dict = field(default_factory=dict)

    def __call__(self, M: Module) -> Module:
        out = pullback(M, self.to_lambda)
        out.name = f"i_*{M.name}"
        return out

    def simple(self, k: int) -> Module:
        if k not in self.cache:
            self.cache[k] = self(simple(self.morita.lam, k))
        return self.cache[k]

    def restrict_torsion(self, M: Module) -> Module:
        """A t-torsion Gamma/t^N-module as a Lambda_r-module, via the chosen lifts."""
        action = np.tensordot(self.lift, M.action, axes=(1, 0)) % M.p
        return Module(self.morita.lam, action, name=M.name)


def pushforward_functor(G: ValuationOrder, N: int = 2) -> Pushforward:
    if not G.is_basic():
        raise NotBasic("pushforward of modules is implemented for basic ramification data")
    mor = fiber_basic_iso_to_lambda(G)
    T = truncated_algebra(G, N)
    n = G.n
    F = mor.fiber
    # Gamma/t^N -> fiber: t^e E_ab -> E_ab if e = v_ab else 0
    to_fiber = np.zeros((T.dim, F.dim), dtype=np.int64)
    lift = np.zeros((F.dim, T.dim), dtype=np.int64)
    for k, (e, a, b) in enumerate(T.order_basis):
        if e == G.v[a, b]:
            to_fiber[k, a * n + b] = 1
            lift[a * n + b, k] = 1
    if mor.basic is not F:
        raise NotBasic("expected the fiber to be basic")
    psi = AlgebraMorphism(T, mor.lam, to_fiber @ mor.inverse % G.p, name="Gamma/t^N -> Lambda_r")
    lam_lift = mor.phi.matrix @ lift % G.p
    return Pushforward(G, T, mor, psi, lam_lift)


def pushforward_module(M: Module, G: ValuationOrder, N: int = 2) -> Module:
    return pushforward_functor(G, N)(M)


def lattice_resolution(G: ValuationOrder, k: int) -> tuple[LatticeRow, LatticeRow, np.ndarray]:
    """0 -> L^(k+1) twisted -> L^(k) -> i_*S_k -> 0 for basic G.

    Returns (sub, lattice, (a, b)) where the inclusion is left
    multiplication by t^m E_ab, m the twist of ``sub`` (1 at the wrap k = r,
    otherwise 0), and (a, b) = (k, k+1) as 0-based indices.
    """
    r = G.r
    nxt = k % r + 1
    twist = 1 if k == r else 0
    return LatticeRow(G, nxt, twist), LatticeRow(G, k), np.array([k - 1, nxt - 1])


def lattice_inclusion_ok(G: ValuationOrder, k: int) -> bool:
    """Cokernel of t^m L^(k+1) in L^(k) is one-dimensional, supported at column k."""
    sub, lat, _ = lattice_resolution(G, k)
    diff = sub.pattern() - lat.pattern()
    expected = np.zeros(G.n, dtype=np.int64)
    expected[k - 1] = 1
    return bool(np.array_equal(diff, expected))


def _inclusion_element(T: StructureConstAlgebra, G: ValuationOrder, k: int) -> np.ndarray:
    sub, _, (a, b) = lattice_resolution(G, k)
    return T.basis_vector(T.order_index[(sub.twist, int(a), int(b))])


def cokernel_matches_simple(push: Pushforward, k: int) -> bool:
    """Inside Gamma/t^N: e_k T / x e_{k+1} T is the pushforward of S_k."""
    T, G = push.algebra, push.order
    r = G.r
    x = _inclusion_element(T, G, k)
    Pk, Pk1 = projective(T, k), projective(T, k % r + 1)
    _, piv = la.rref(Pk.gen_elems, T.p)
    image = np.array([T.mul(x, y)[piv] for y in Pk1.gen_elems])
    Q, _ = Pk.quotient(la.row_basis(image, T.p))
    return is_isomorphic(Q, push.simple(k))


def _vertex_map_rank(M: Module, a: int, b: int, x: np.ndarray) -> int:
    Ba, Bb = M.vertex_bases[a], M.vertex_bases[b]
    if Ba.shape[0] == 0 or Bb.shape[0] == 0:
        return 0
    return la.rank_mod(Ba @ M.act(x) % M.p, M.p)


@dataclass
class PushforwardTable:
    r: int
    N: int
    ext: dict                 # (j, k, n) -> dim Ext^n_Gamma(i_*S_k, i_*S_j)
    hom_rows: dict            # (a, k) -> dim Hom(L^(a), i_*S_k)
    ext1_quotient: dict       # (j, k) -> dim Ext^1 over Gamma/t^N (agrees with Gamma for N >= 2)
    inclusions_ok: bool
    cokernels_ok: bool

    def expected_ext(self, j: int, k: int, n: int) -> int:
        r = self.r
        if n == 0:
            return int(j == k)
        if n == 1:
            return int(j == k % r + 1)
        return 0

    @property
    def ext_ok(self) -> bool:
        return all(v == self.expected_ext(j, k, n) for (j, k, n), v in self.ext.items())

    @property
    def orthogonality_ok(self) -> bool:
        return all(v == int(a == k) for (a, k), v in self.hom_rows.items())

    @property
    def quotient_ok(self) -> bool:
        return all(v == self.ext[(j, k, 1)] for (j, k), v in self.ext1_quotient.items())

    @property
    def rotation_invariant(self) -> bool:
        r = self.r
        return all(v == self.ext[(j % r + 1, k % r + 1, n)] for (j, k, n), v in self.ext.items())

    @property
    def ok(self) -> bool:
        return (self.ext_ok and self.orthogonality_ok and self.quotient_ok
                and self.rotation_invariant and self.inclusions_ok and self.cokernels_ok)

    def summary(self) -> dict:
        return {"ok": self.ok, "ext_ok": self.ext_ok, "orthogonality_ok": self.orthogonality_ok,
                "quotient_ok": self.quotient_ok, "rotation_invariant": self.rotation_invariant,
                "inclusions_ok": self.inclusions_ok, "cokernels_ok": self.cokernels_ok}


def pushforward_ext_table(G: ValuationOrder, N: int = 2, depth: int = 3) -> PushforwardTable:
    """Ext^n_Gamma(i_*S_k, i_*S_j) for 0 <= n <= depth via the two-term lattice resolutions."""
    push = pushforward_functor(G, N)
    T, r = push.algebra, G.r
    ext, hom_rows, quot = {}, {}, {}
    for k in range(1, r + 1):
        x = _inclusion_element(T, G, k)
        nxt = k % r + 1
        for j in range(1, r + 1):
            M = push.simple(j)
            dk, dn = M.dim_vector[k - 1], M.dim_vector[nxt - 1]
            rank = _vertex_map_rank(M, k - 1, nxt - 1, x)
            ext[(j, k, 0)] = dk - rank
            ext[(j, k, 1)] = dn - rank
            for n in range(2, depth + 1):
                ext[(j, k, n)] = 0
            quot[(j, k)] = ext_dim(push.simple(k), M, 1)
    for a in range(1, r + 1):
        for k in range(1, r + 1):
            hom_rows[(a, k)] = push.simple(k).dim_vector[a - 1]
    inclusions = all(lattice_inclusion_ok(G, k) for k in range(1, r + 1))
    cokernels = all(cokernel_matches_simple(push, k) for k in range(1, r + 1))
    return PushforwardTable(r, N, ext, hom_rows, quot, inclusions, cokernels)


@dataclass
class RestrictionCohomology:
    k: int
    h_minus1: Module
    h0: Module
    h_minus1_is_simple: bool
    h0_is_simple: bool

    @property
    def euler(self) -> int:
        return self.h0.dim - self.h_minus1.dim

    @property
    def ok(self) -> bool:
        return self.h_minus1_is_simple and self.h0_is_simple and self.euler == 0


def derived_restriction_cohomology(G: ValuationOrder, k: int, N: int = 2) -> RestrictionCohomology:
    """H^{-1} and H^0 of Li^* i_* S_k: kernel and cokernel of t on i_*S_k."""
    push = pushforward_functor(G, N)
    T = push.algebra
    if N < 2:
        raise ValueError("need N >= 2 so that t is a nonzero element")
    t = sum(T.basis_vector(T.order_index[(1, a, a)]) for a in range(G.n)) % T.p
    M = push.simple(k)
    mult = M.act(t)
    K = la.left_kernel(mult, T.p) if M.dim else np.zeros((0, 0), dtype=np.int64)
    ker_mod = M.restrict(K)
    coker_mod, _ = M.quotient(la.row_basis(mult, T.p))
    S = simple(push.morita.lam, k)
    h1 = push.restrict_torsion(ker_mod)
    h0 = push.restrict_torsion(coker_mod)
    return RestrictionCohomology(k, h1, h0, h1.dim == 1 and is_isomorphic(h1, S),
                                 h0.dim == 1 and is_isomorphic(h0, S))
