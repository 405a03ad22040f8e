"""Finite-dimensional right modules.

A module of dimension m over an algebra of dimension d stores one m x m
matrix per algebra basis element, acting on row vectors: ``v . x_b`` is
``v @ action[b]``.  Right modules compose the natural way,
``action(xy) = action(x) @ action(y)``.

Module maps are matrices too: f: M -> N is an (dim M) x (dim N) matrix and
``v -> v @ F``.  Composition "f then g" is ``F @ G``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import exactlinalg as la
from .errors import (
    AlgebraMismatch,
    Inconclusive,
    NotAutomorphism,
    VertexOutOfRange,
)
from .quiveralg import AlgebraMorphism, StructureConstAlgebra, check_multiplicative


class Module:
    def __init__(self, algebra: StructureConstAlgebra, action, name: str = ""):
        self.algebra = algebra
        self.action = np.mod(np.asarray(action, dtype=np.int64), algebra.p)
        d = algebra.dim
        if self.action.ndim != 3 or self.action.shape[0] != d or \
                self.action.shape[1] != self.action.shape[2]:
            raise ValueError("action must have shape (dim A, m, m)")
        self.name = name

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<{type(self).__name__}{label} dim={self.dim} over {self.algebra.name}>"

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    def act(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x, dtype=np.int64), self.action, axes=(0, 0)) % self.p

    def is_valid(self) -> bool:
        """Unit acts as identity and the action is multiplicative."""
        A, p = self.algebra, self.p
        if not np.array_equal(self.act(A.one), np.eye(self.dim, dtype=np.int64)):
            return False
        lhs = np.einsum("abc,cmn->abmn", A.struct, self.action) % p
        rhs = np.einsum("amk,bkn->abmn", self.action, self.action) % p
        return bool(np.array_equal(lhs, rhs))

    @cached_property
    def vertex_bases(self) -> list[np.ndarray]:
        """RREF bases of M e_j for each vertex (one block if no idempotents)."""
        idem = self.algebra.idempotents
        if idem is None:
            return [np.eye(self.dim, dtype=np.int64)]
        return [la.row_basis(self.act(e), self.p) for e in idem]

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.vertex_bases)

    def is_zero(self) -> bool:
        return self.dim == 0

    # -- constructions -------------------------------------------------------

    def span_closure(self, vectors) -> np.ndarray:
        """RREF basis of the submodule generated by ``vectors``."""
        p = self.p
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, self.dim)
        basis = la.row_basis(vectors, p)
        gens = [self.act(g) for g in self.algebra.generators()]
        while basis.shape[0]:
            grown = la.row_basis(np.vstack([basis] + [basis @ g % p for g in gens]), p)
            if grown.shape[0] == basis.shape[0]:
                break
            basis = grown
        return basis

    def restrict(self, basis: np.ndarray, name: str = "") -> "Module":
        """Submodule spanned by an RREF ``basis`` that is already closed."""
        basis = np.asarray(basis, dtype=np.int64)
        if basis.shape[0] == 0:
            return zero_module(self.algebra)
        _, piv = la.rref(basis, self.p)
        moved = np.einsum("km,bmn->bkn", basis, self.action) % self.p
        return Module(self.algebra, moved[:, :, piv], name=name)

    def submodule(self, vectors, name: str = "") -> tuple["Module", np.ndarray]:
        """(U, inclusion matrix) for the submodule generated by ``vectors``."""
        basis = self.span_closure(vectors)
        return self.restrict(basis, name), basis

    def quotient(self, sub_basis, name: str = "") -> tuple["Module", np.ndarray]:
        """(M/U, projection matrix) for a submodule with RREF basis ``sub_basis``."""
        p, m = self.p, self.dim
        sub_basis = np.asarray(sub_basis, dtype=np.int64).reshape(-1, m) if m else np.zeros((0, 0), dtype=np.int64)
        if sub_basis.shape[0]:
            sub_basis, piv = la.rref(sub_basis, p)
            sub_basis = sub_basis[: len(piv)]
        else:
            piv = []
        keep = [c for c in range(m) if c not in set(piv)]
        reduce = np.eye(m, dtype=np.int64)
        if piv:
            reduce = (reduce - reduce[:, piv] @ sub_basis) % p
        proj = reduce[:, keep]
        action = np.einsum("bkn,nj->bkj", self.action[:, keep, :], proj) % p
        return Module(self.algebra, action, name=name), proj

    def direct_sum(self, other: "Module") -> "Module":
        _same_algebra(self, other)
        return Module(self.algebra, _block_diag(self.action, other.action))

    def change_basis(self, g: np.ndarray) -> "Module":
        """Isomorphic copy whose basis is the rows of the invertible ``g``."""
        p = self.p
        ginv = la.inverse(g, p)
        return Module(self.algebra, np.einsum("km,bmn,nj->bkj", g, self.action, ginv) % p,
                      name=self.name)


class ProjectiveModule(Module):
    """A direct sum of indecomposable projectives e_i A with chosen generators.

    ``summands`` lists vertices (1-based).  Row j of ``gen_elems`` is an
    algebra element x with basis vector j = (generator of summand
    ``owner[j]``) . x, and ``gen_vectors[k]`` is generator k in module
    coordinates.
    """

    def __init__(self, algebra, action, summands, gen_elems, owner, gen_vectors, name=""):
        super().__init__(algebra, action, name=name)
        self.summands = list(summands)
        self.gen_elems = np.asarray(gen_elems, dtype=np.int64).reshape(self.dim, algebra.dim)
        self.owner = np.asarray(owner, dtype=np.int64)
        self.gen_vectors = np.asarray(gen_vectors, dtype=np.int64).reshape(len(self.summands), self.dim)

    def map_to(self, target: Module, images) -> np.ndarray:
        """Module map sending generator k to ``images[k]`` (must lie in target e_{i_k})."""
        images = np.asarray(images, dtype=np.int64).reshape(len(self.summands), target.dim)
        if self.dim == 0:
            return np.zeros((0, target.dim), dtype=np.int64)
        acts = np.einsum("jb,bmn->jmn", self.gen_elems, target.action) % self.p
        return np.einsum("jm,jmn->jn", images[self.owner], acts) % self.p

    def hom_basis_to(self, target: Module) -> list[np.ndarray]:
        """Basis of Hom(P, N) from generator images, via Hom(e_i A, N) = N e_i."""
        out = []
        vb = target.vertex_bases
        for k, v in enumerate(self.summands):
            for y in vb[v - 1]:
                images = np.zeros((len(self.summands), target.dim), dtype=np.int64)
                images[k] = y
                out.append(self.map_to(target, images))
        return out

    def lift(self, through: np.ndarray, source_module: Module, target: np.ndarray) -> np.ndarray:
        """F: P -> Q with F @ through = target, where ``through``: Q -> N.

        ``source_module`` is Q.  Solved generator by generator inside Q e_i.
        Raises NoSolution when some generator image is not reachable.
        """
        p = self.p
        images = np.zeros((len(self.summands), source_module.dim), dtype=np.int64)
        want = self.gen_vectors @ target % p
        vb = source_module.vertex_bases
        for k, v in enumerate(self.summands):
            B = vb[v - 1]
            if not want[k].any():
                continue
            if B.shape[0] == 0:
                raise la.NoSolution("generator image unreachable")
            coeff = la.solve_left(B @ through % p, want[k].reshape(1, -1), p)
            images[k] = coeff.ravel() @ B % p
        return self.map_to(source_module, images)

    def direct_sum(self, other: "Module") -> "Module":
        if not isinstance(other, ProjectiveModule):
            return super().direct_sum(other)
        return projective_sum([self, other])


def _same_algebra(M: Module, N: Module):
    if M.algebra is not N.algebra:
        raise AlgebraMismatch("modules live over different algebras")


def _block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d, m, _ = a.shape
    n = b.shape[1]
    out = np.zeros((d, m + n, m + n), dtype=np.int64)
    out[:, :m, :m] = a
    out[:, m:, m:] = b
    return out


def zero_module(A: StructureConstAlgebra) -> ProjectiveModule:
    return ProjectiveModule(A, np.zeros((A.dim, 0, 0), dtype=np.int64), [],
                            np.zeros((0, A.dim)), [], np.zeros((0, 0)), name="0")


def projective_sum(parts: list[ProjectiveModule]) -> ProjectiveModule:
    parts = [P for P in parts if P.dim]
    if not parts:
        raise ValueError("empty projective sum; use zero_module")
    if len(parts) == 1:
        return parts[0]
    A = parts[0].algebra
    action = parts[0].action
    for P in parts[1:]:
        action = _block_diag(action, P.action)
    total = sum(P.dim for P in parts)
    summands, owner, gen_rows = [], [], []
    offset = 0
    for P in parts:
        owner.extend(int(o) + len(summands) for o in P.owner)
        for gv in P.gen_vectors:
            row = np.zeros(total, dtype=np.int64)
            row[offset:offset + P.dim] = gv
            gen_rows.append(row)
        summands.extend(P.summands)
        offset += P.dim
    return ProjectiveModule(A, action, summands, np.vstack([P.gen_elems for P in parts]),
                            owner, np.array(gen_rows),
                            name=" + ".join(P.name or "P" for P in parts))


def _check_vertex(A: StructureConstAlgebra, i: int):
    if A.idempotents is None:
        raise VertexOutOfRange("algebra has no vertex idempotents")
    if not 1 <= i <= len(A.idempotents):
        raise VertexOutOfRange(f"vertex {i} not in 1..{len(A.idempotents)}")


def projective(A: StructureConstAlgebra, i: int) -> ProjectiveModule:
    """P_i = e_i A with the right regular action."""
    _check_vertex(A, i)
    cache = A.__dict__.setdefault("_projective_cache", {})
    if i in cache:
        return cache[i]
    p = A.p
    e = A.idempotents[i - 1]
    V = la.row_basis(A.left_mult(e), p)
    _, piv = la.rref(V, p)
    action = np.einsum("ka,abc->bkc", V, A.struct) % p
    action = action[:, :, piv]
    gen = e[piv].reshape(1, -1)
    P = ProjectiveModule(A, action, [i], V, [0] * V.shape[0], gen, name=f"P{i}")
    cache[i] = P
    return P


def regular_module(A: StructureConstAlgebra) -> Module:
    return Module(A, np.transpose(A.struct, (1, 0, 2)), name="A_A")


def simple(A: StructureConstAlgebra, i: int) -> Module:
    """S_i = top of P_i; one-dimensional over a basic algebra."""
    _check_vertex(A, i)
    cache = A.__dict__.setdefault("_simple_cache", {})
    if i not in cache:
        S, _ = top(projective(A, i))
        S.name = f"S{i}"
        cache[i] = S
    return cache[i]


def injective(A: StructureConstAlgebra, i: int) -> Module:
    """I_i = D(A e_i), the linear dual of the left module A e_i."""
    _check_vertex(A, i)
    p = A.p
    e = A.idempotents[i - 1]
    V = la.row_basis(A.right_mult(e), p)  # rows span A e_i
    _, piv = la.rref(V, p)
    # coords(a . y) for y in the basis, restricted to A e_i
    left = np.einsum("km,amn->akn", V, A.struct) % p
    left = left[:, :, piv]
    action = np.transpose(left, (0, 2, 1))
    return Module(A, action, name=f"I{i}")


def radical(M: Module) -> tuple[Module, np.ndarray]:
    """(M . rad A, inclusion basis)."""
    basis = radical_basis_of(M)
    return M.restrict(basis, name=f"rad {M.name}"), basis


def radical_basis_of(M: Module) -> np.ndarray:
    rad = M.algebra.radical_basis
    if rad.shape[0] == 0 or M.dim == 0:
        return np.zeros((0, M.dim), dtype=np.int64)
    rows = np.tensordot(rad, M.action, axes=(1, 0)) % M.p
    return la.row_basis(rows.reshape(-1, M.dim), M.p)


def top(M: Module) -> tuple[Module, np.ndarray]:
    """(M / rad M, projection)."""
    return M.quotient(radical_basis_of(M), name=f"top {M.name}")


def socle(M: Module) -> tuple[Module, np.ndarray]:
    """(soc M, inclusion basis): vectors killed by the radical."""
    rad = M.algebra.radical_basis
    if M.dim == 0:
        return M, np.zeros((0, 0), dtype=np.int64)
    if rad.shape[0] == 0:
        basis = np.eye(M.dim, dtype=np.int64)
    else:
        basis = la.left_kernel(np.hstack([M.act(x) for x in rad]), M.p)
    return M.restrict(basis, name=f"soc {M.name}"), basis


def top_generators(M: Module) -> list[tuple[int, np.ndarray]]:
    """(vertex, vector) pairs whose images form a basis of top(M)."""
    p = M.p
    span = radical_basis_of(M)
    rank = span.shape[0]
    gens = []
    for v, B in enumerate(M.vertex_bases, start=1):
        for row in B:
            trial = np.vstack([span, row]) if span.shape[0] else row.reshape(1, -1)
            new_rank = la.rank_mod(trial, p)
            if new_rank > rank:
                gens.append((v, row))
                span, rank = trial, new_rank
    return gens


def projective_cover(M: Module) -> tuple[ProjectiveModule, np.ndarray]:
    """(P, surjection P -> M) with P = sum of P_i over the top of M."""
    A = M.algebra
    gens = top_generators(M)
    if not gens:
        return zero_module(A), np.zeros((0, M.dim), dtype=np.int64)
    P = projective_sum([projective(A, v) for v, _ in gens])
    return P, P.map_to(M, np.array([g for _, g in gens]))


def kernel(f: np.ndarray, M: Module) -> tuple[Module, np.ndarray]:
    """Kernel of f: M -> N as (module, inclusion basis)."""
    if M.dim == 0:
        return M, np.zeros((0, 0), dtype=np.int64)
    basis = la.left_kernel(f, M.p) if f.shape[1] else np.eye(M.dim, dtype=np.int64)
    return M.restrict(basis), basis


# ----------------------------------------------------------------------------
# homomorphisms


@dataclass
class HomSpace:
    source: Module
    target: Module
    basis: list[np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs) -> np.ndarray:
        out = np.zeros((self.source.dim, self.target.dim), dtype=np.int64)
        for c, f in zip(coeffs, self.basis):
            out = (out + int(c) * f) % self.source.p
        return out


def _vertex_frame(M: Module):
    blocks = M.vertex_bases
    sizes = [b.shape[0] for b in blocks]
    B = np.vstack(blocks) if M.dim else np.zeros((0, 0), dtype=np.int64)
    Binv = la.inverse(B, M.p) if M.dim else B
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    return B, Binv, sizes, offsets


def hom_space(M: Module, N: Module) -> HomSpace:
    """Basis of Hom_A(M, N) by solving the intertwining equations.

    Both modules are split into vertex components; unknowns are the
    vertex blocks and equations come from the Peirce pieces of the algebra
    generators.
    """
    _same_algebra(M, N)
    p = M.p
    if M.dim == 0 or N.dim == 0:
        return HomSpace(M, N, [])
    BM, BMi, ms, mo = _vertex_frame(M)
    BN, BNi, ns, no = _vertex_frame(N)
    nv = len(ms)
    uoff = np.concatenate([[0], np.cumsum([ms[j] * ns[j] for j in range(nv)])]).astype(int)
    nunk = int(uoff[-1])
    if nunk == 0:
        return HomSpace(M, N, [])
    rows = []
    for j, k, x in M.algebra.peirce_generators:
        mj, nk = ms[j], ns[k]
        if mj == 0 or nk == 0:
            continue
        AM = BM[mo[j]:mo[j + 1]] @ M.act(x) % p @ BMi[:, mo[k]:mo[k + 1]] % p
        AN = BN[no[j]:no[j + 1]] @ N.act(x) % p @ BNi[:, no[k]:no[k + 1]] % p
        eq = np.zeros((mj * nk, nunk), dtype=np.int64)
        if ns[j]:
            eq[:, uoff[j]:uoff[j + 1]] += np.kron(np.eye(mj, dtype=np.int64), AN.T)
        if ms[k]:
            eq[:, uoff[k]:uoff[k + 1]] -= np.kron(AM, np.eye(nk, dtype=np.int64))
        rows.append(eq % p)
    system = np.vstack(rows) if rows else np.zeros((0, nunk), dtype=np.int64)
    sol = la.nullspace(system, p)
    basis = []
    for c in sol.T:
        blk = np.zeros((M.dim, N.dim), dtype=np.int64)
        for j in range(nv):
            if ms[j] and ns[j]:
                blk[mo[j]:mo[j + 1], no[j]:no[j + 1]] = c[uoff[j]:uoff[j + 1]].reshape(ms[j], ns[j])
        basis.append(BMi @ blk % p @ BN % p)
    return HomSpace(M, N, basis)


def is_module_map(f: np.ndarray, M: Module, N: Module) -> bool:
    p = M.p
    for g in M.algebra.generators():
        if not np.array_equal(M.act(g) @ f % p, f @ N.act(g) % p):
            return False
    return True


def radical_layers(M: Module) -> list[tuple[int, ...]]:
    """Dimension vectors of rad^k M / rad^{k+1} M."""
    layers = []
    cur = M
    while cur.dim:
        nxt, _ = radical(cur)
        t, _ = top(cur)
        layers.append(t.dim_vector)
        cur = nxt
    return layers


def is_uniserial(M: Module) -> bool:
    return all(sum(layer) == 1 for layer in radical_layers(M))


def is_isomorphic(M: Module, N: Module, trials: int = 32, seed: int = 0) -> bool:
    """Isomorphism test.

    Dimension vectors of M and top(M) are compared first.  Then an
    invertible element of Hom(M, N) is sought among ``trials`` random
    combinations (one-sided error).  If none is found and both modules are
    uniserial over a Nakayama algebra, the radical series decides
    deterministically; otherwise ``Inconclusive`` is raised.  ``trials=0``
    forces the deterministic comparison.
    """
    _same_algebra(M, N)
    if M.dim != N.dim or M.dim_vector != N.dim_vector:
        return False
    if M.dim == 0:
        return True
    if top(M)[0].dim_vector != top(N)[0].dim_vector:
        return False
    H = hom_space(M, N)
    if H.dim == 0:
        return False
    rng = random.Random(seed)
    for _ in range(trials):
        f = H.element([rng.randrange(M.p) for _ in range(H.dim)])
        if la.rank_mod(f, M.p) == M.dim:
            return True
    if getattr(M.algebra, "is_nakayama", False) and is_uniserial(M) and is_uniserial(N):
        return radical_layers(M) == radical_layers(N)
    raise Inconclusive("no invertible homomorphism found in random trials")


def twist(M: Module, sigma: AlgebraMorphism) -> Module:
    """Transport of structure along the automorphism sigma.

    The new action of x is the old action of sigma^{-1}(x); with the rotation
    of Lambda_r this sends S_i to S_{i+1} and P_i to P_{i+1}.
    """
    A = M.algebra
    if sigma.source is not A or sigma.target is not A:
        raise NotAutomorphism("sigma must be an endomorphism of the module's algebra")
    inv = _automorphism_inverse(sigma)
    action = np.einsum("bc,cmn->bmn", inv, M.action) % M.p
    name = f"{M.name}^sigma" if M.name else ""
    if isinstance(M, ProjectiveModule):
        perm = sigma.idempotent_permutation()
        return ProjectiveModule(A, action, [perm[v] for v in M.summands],
                                M.gen_elems @ sigma.matrix % M.p, M.owner, M.gen_vectors,
                                name=name)
    return Module(A, action, name=name)


def _automorphism_inverse(sigma: AlgebraMorphism) -> np.ndarray:
    cached = getattr(sigma, "_inverse", None)
    if cached is not None:
        return cached
    A = sigma.source
    if not np.array_equal(sigma(A.one), A.one) or check_multiplicative(sigma) is not None:
        raise NotAutomorphism("sigma is not an algebra endomorphism")
    try:
        inv = la.inverse(sigma.matrix, A.p)
    except la.NoSolution as exc:
        raise NotAutomorphism("sigma is not invertible") from exc
    sigma._inverse = inv
    return inv


def pullback(M: Module, f: AlgebraMorphism) -> Module:
    """Restriction of scalars along f: source -> M.algebra."""
    if f.target is not M.algebra:
        raise AlgebraMismatch("morphism target differs from the module's algebra")
    action = np.einsum("bc,cmn->bmn", f.matrix, M.action) % M.p
    return Module(f.source, action, name=M.name)


def random_module(A: StructureConstAlgebra, rng: random.Random, max_summands: int = 3,
                  max_relations: int = 2) -> Module:
    """Random quotient of a random projective by a random cyclic-ish submodule,
    presented in a scrambled basis."""
    p = A.p
    n = A.vertex_count
    k = rng.randint(1, max_summands)
    P = projective_sum([projective(A, rng.randint(1, n)) for _ in range(k)])
    rels = [np.array([rng.randrange(p) if rng.random() < 0.5 else 0 for _ in range(P.dim)])
            for _ in range(rng.randint(0, max_relations))]
    if rels:
        Q, _ = P.quotient(P.span_closure(np.array(rels)))
    else:
        Q = Module(A, P.action)
    if Q.dim == 0:
        return Q
    while True:
        g = np.array([[rng.randrange(p) for _ in range(Q.dim)] for _ in range(Q.dim)])
        if la.rank_mod(g, p) == Q.dim:
            return Q.change_basis(g)
