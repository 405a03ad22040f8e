"""Finite-dimensional algebras given by structure constants or path bases.

Elements are coordinate row vectors.  ``struct[a, b, :]`` holds the
coordinates of ``x_a * x_b``.  Paths compose left to right: the product
``mu_{1,2} * mu_{2,3}`` is the path 1 -> 2 -> 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import exactlinalg as la
from .errors import (
    DimensionMismatch,
    IdempotentDiscoveryFailed,
    NotCyclicNakayama,
)


class StructureConstAlgebra:
    """Associative unital algebra over F_p presented by structure constants.

    ``idempotents`` (optional) is a complete set of primitive orthogonal
    idempotents, given as coordinate vectors; vertex labels are their
    1-based positions.  ``radical`` (optional) is a basis (rows) of the
    Jacobson radical when it is known by construction.
    """

    def __init__(self, struct, one, p: int, idempotents=None, radical=None,
                 labels: Sequence[str] | None = None, name: str = ""):
        self.p = p
        self.struct = np.mod(np.asarray(struct, dtype=np.int64), p)
        d = self.struct.shape[0]
        if self.struct.shape != (d, d, d):
            raise ValueError("structure constants must have shape (d, d, d)")
        self.one = np.mod(np.asarray(one, dtype=np.int64), p)
        self.idempotents = (
            None if idempotents is None
            else [np.mod(np.asarray(e, dtype=np.int64), p) for e in idempotents]
        )
        self._radical = None if radical is None else np.asarray(radical, dtype=np.int64)
        self.labels = list(labels) if labels is not None else [f"x{a}" for a in range(d)]
        self.name = name

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or ''} dim={self.dim} p={self.p}>"

    @property
    def dim(self) -> int:
        return self.struct.shape[0]

    @property
    def vertex_count(self) -> int:
        return 0 if self.idempotents is None else len(self.idempotents)

    def basis_vector(self, a: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[a] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def mul(self, x, y) -> np.ndarray:
        xy = np.tensordot(np.asarray(x, dtype=np.int64), self.struct, axes=(0, 0)) % self.p
        return np.asarray(y, dtype=np.int64) @ xy % self.p

    def product(self, *xs) -> np.ndarray:
        out = self.one
        for x in xs:
            out = self.mul(out, x)
        return out

    def right_mult(self, b) -> np.ndarray:
        """Matrix of x -> x*b on coordinate rows."""
        return np.tensordot(np.asarray(b, dtype=np.int64), self.struct, axes=(0, 1)) % self.p

    def left_mult(self, a) -> np.ndarray:
        """Matrix of y -> a*y on coordinate rows."""
        return np.tensordot(np.asarray(a, dtype=np.int64), self.struct, axes=(0, 0)) % self.p

    def is_associative(self) -> bool:
        p, s = self.p, self.struct
        left = np.einsum("abk,kcl->abcl", s, s) % p
        right = np.einsum("bck,akl->abcl", s, s) % p
        return bool(np.array_equal(left, right))

    def is_unital(self) -> bool:
        d = self.dim
        eye = np.eye(d, dtype=np.int64)
        left = np.stack([self.mul(self.one, eye[a]) for a in range(d)])
        right = np.stack([self.mul(eye[a], self.one) for a in range(d)])
        return bool(np.array_equal(left, eye) and np.array_equal(right, eye))

    def generators(self) -> list[np.ndarray]:
        """Vectors generating the algebra (all basis vectors by default)."""
        return [self.basis_vector(a) for a in range(self.dim)]

    @cached_property
    def peirce_generators(self) -> list[tuple[int, int, np.ndarray]]:
        """Nonzero pieces e_j g e_k of the generators, as (j, k, element).

        Vertices are 0-based here.  Without idempotents everything lives at
        the single pseudo-vertex 0.
        """
        if self.idempotents is None:
            return [(0, 0, g) for g in self.generators()]
        idem = self.idempotents
        out = []
        for g in self.generators():
            if any(np.array_equal(g, e) for e in idem):
                continue
            for j, ej in enumerate(idem):
                left = self.mul(ej, g)
                if not left.any():
                    continue
                for k, ek in enumerate(idem):
                    piece = self.mul(left, ek)
                    if piece.any():
                        out.append((j, k, piece))
        return out

    @cached_property
    def radical_basis(self) -> np.ndarray:
        """Basis (rows) of the Jacobson radical.

        Unless supplied at construction, computed as the kernel of the trace
        form (x, y) -> Tr(R_{xy}), which is exact when p exceeds the dimension.
        """
        if self._radical is not None:
            return la.row_basis(self._radical, self.p) if self._radical.size else \
                np.zeros((0, self.dim), dtype=np.int64)
        if self.p <= self.dim:
            raise ValueError(
                f"trace-form radical needs p > dim (p={self.p}, dim={self.dim}); "
                "supply the radical explicitly")
        return self.trace_form_kernel()

    def trace_form_kernel(self) -> np.ndarray:
        """Kernel of (x, y) -> Tr(R_{xy}); it always contains the radical."""
        tr = np.einsum("aba->b", self.struct) % self.p
        return la.left_kernel(self.struct @ tr % self.p, self.p)

    def corner(self, e) -> "StructureConstAlgebra":
        """The algebra eAe for an idempotent e, with ``inclusion`` into A."""
        return _corner_algebra(self, e, None)


class Quiver(NamedTuple):
    vertex_count: int
    arrows: tuple[tuple[int, int], ...]  # (source, target), 1-based

    def check(self):
        for s, t in self.arrows:
            if not (1 <= s <= self.vertex_count and 1 <= t <= self.vertex_count):
                raise ValueError(f"arrow ({s}, {t}) leaves the vertex range")


def cyclic_quiver(r: int) -> Quiver:
    return Quiver(r, tuple((i, i % r + 1) for i in range(1, r + 1)))


Path = tuple[int, tuple[int, ...]]  # (source vertex, arrow indices)


class PathBasisAlgebra(StructureConstAlgebra):
    """Monomial quotient kQ/I with the surviving paths as basis."""

    def __init__(self, quiver: Quiver, paths: list[Path], table: np.ndarray, p: int,
                 name: str = ""):
        self.quiver = quiver
        self.paths = paths
        self.index = {path: k for k, path in enumerate(paths)}
        self.table = table
        d = len(paths)
        struct = np.zeros((d, d, d), dtype=np.int64)
        a, b = np.nonzero(table >= 0)
        struct[a, b, table[a, b]] = 1
        lazy = [self.index[(v, ())] for v in range(1, quiver.vertex_count + 1)]
        one = np.zeros(d, dtype=np.int64)
        one[lazy] = 1
        idem = []
        for k in lazy:
            e = np.zeros(d, dtype=np.int64)
            e[k] = 1
            idem.append(e)
        rad = np.eye(d, dtype=np.int64)[[k for k, path in enumerate(paths) if path[1]]]
        super().__init__(struct, one, p, idempotents=idem, radical=rad,
                         labels=[self._label(path) for path in paths], name=name)

    def _label(self, path: Path) -> str:
        s, arrows = path
        if not arrows:
            return f"e{s}"
        verts = [s] + [self.quiver.arrows[a][1] for a in arrows]
        return "mu[" + ",".join(map(str, verts)) + "]"

    def path_end(self, path: Path) -> int:
        s, arrows = path
        return self.quiver.arrows[arrows[-1]][1] if arrows else s

    def generators(self) -> list[np.ndarray]:
        out = []
        for k, (_, arrows) in enumerate(self.paths):
            if len(arrows) <= 1:
                out.append(self.basis_vector(k))
        return out

    def element(self, path: Path) -> np.ndarray:
        """Coordinate vector of a path (zero if it lies in the ideal)."""
        k = self.index.get(path)
        return self.zero() if k is None else self.basis_vector(k)

    @property
    def is_nakayama(self) -> bool:
        q = self.quiver
        outs = [0] * q.vertex_count
        ins = [0] * q.vertex_count
        for s, t in q.arrows:
            outs[s - 1] += 1
            ins[t - 1] += 1
        return max(outs + ins, default=0) <= 1


def monomial_algebra(quiver: Quiver, relations: Sequence[Sequence[int]], p: int = la.DEFAULT_PRIME,
                     name: str = "", max_dim: int = 20000) -> PathBasisAlgebra:
    """kQ modulo the ideal generated by the given paths (arrow-index sequences)."""
    quiver.check()
    rels = {tuple(r) for r in relations}
    if any(len(r) == 0 for r in rels):
        raise ValueError("relations must be paths of positive length")
    out_arrows: dict[int, list[int]] = {v: [] for v in range(1, quiver.vertex_count + 1)}
    for k, (s, _) in enumerate(quiver.arrows):
        out_arrows[s].append(k)

    def survives(arrows: tuple[int, ...]) -> bool:
        return not any(arrows[len(arrows) - len(r):] == r for r in rels if len(r) <= len(arrows))

    paths: list[Path] = [(v, ()) for v in range(1, quiver.vertex_count + 1)]
    frontier = list(paths)
    while frontier:
        nxt = []
        for s, arrows in frontier:
            end = quiver.arrows[arrows[-1]][1] if arrows else s
            for a in out_arrows[end]:
                cand = arrows + (a,)
                if survives(cand):
                    nxt.append((s, cand))
        paths.extend(nxt)
        if len(paths) > max_dim:
            raise ValueError("quotient is infinite-dimensional or too large")
        frontier = nxt
    index = {path: k for k, path in enumerate(paths)}
    d = len(paths)
    table = -np.ones((d, d), dtype=np.int64)
    for i, (s1, a1) in enumerate(paths):
        end = quiver.arrows[a1[-1]][1] if a1 else s1
        for j, (s2, a2) in enumerate(paths):
            if s2 != end:
                continue
            k = index.get((s1, a1 + a2))
            if k is not None:
                table[i, j] = k
    return PathBasisAlgebra(quiver, paths, table, p, name=name)


@lru_cache(maxsize=64)
def build_cyclic_nakayama(r: int, p: int = la.DEFAULT_PRIME) -> PathBasisAlgebra:
    """The cyclic Nakayama algebra kQ_r / (all cycles of length r).

    Dimension r^2: the basis is every path of length 0..r-1.  For r = 1 the
    loop itself is killed and the algebra is k.  One instance is shared per
    (r, p), so modules built anywhere in the toolkit live over the same object.
    """
    if r < 1:
        raise ValueError("r must be positive")
    q = cyclic_quiver(r)
    cycles = [tuple((v - 1 + k) % r for k in range(r)) for v in range(1, r + 1)]
    A = monomial_algebra(q, cycles, p, name=f"Lambda_{r}")
    A.nakayama_r = r
    return A


def nakayama_path(A: PathBasisAlgebra, start: int, length: int) -> np.ndarray:
    """Coordinates of the path of the given length starting at ``start`` in Lambda_r."""
    r = A.nakayama_r
    arrows = tuple((start - 1 + k) % r for k in range(length))
    return A.element((start, arrows))


def arrow(A: PathBasisAlgebra, i: int) -> np.ndarray:
    """mu_{i,i+1} in Lambda_r."""
    return nakayama_path(A, i, 1)


# ----------------------------------------------------------------------------
# morphisms


@dataclass
class AlgebraMorphism:
    """Linear map between algebras; row a of ``matrix`` is the image of x_a."""

    source: StructureConstAlgebra
    target: StructureConstAlgebra
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.matrix = np.mod(np.asarray(self.matrix, dtype=np.int64), self.target.p)
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise DimensionMismatch("morphism matrix has the wrong shape")

    def __call__(self, x) -> np.ndarray:
        return np.asarray(x, dtype=np.int64) @ self.matrix % self.target.p

    def then(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        return AlgebraMorphism(self.source, other.target,
                               self.matrix @ other.matrix % self.target.p)

    def power(self, k: int) -> "AlgebraMorphism":
        return AlgebraMorphism(self.source, self.target,
                               la.mat_pow(self.matrix, k, self.target.p))

    def inverse(self) -> "AlgebraMorphism":
        return AlgebraMorphism(self.target, self.source, la.inverse(self.matrix, self.target.p))

    def is_identity(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1] and \
            bool(np.array_equal(self.matrix, np.eye(self.matrix.shape[0], dtype=np.int64)))

    def idempotent_permutation(self) -> dict[int, int]:
        """Vertex map i -> j with f(e_i) = e_j (1-based); requires it to exist."""
        src, tgt = self.source.idempotents, self.target.idempotents
        out = {}
        for i, e in enumerate(src):
            img = self(e)
            for j, f in enumerate(tgt):
                if np.array_equal(img, f):
                    out[i + 1] = j + 1
                    break
            else:
                raise ValueError(f"image of e_{i + 1} is not a vertex idempotent")
        return out


class IsoVerdict(NamedTuple):
    ok: bool
    witness: object


def check_multiplicative(f: AlgebraMorphism) -> tuple[int, int] | None:
    """First basis pair (a, b) with f(x_a x_b) != f(x_a) f(x_b), or None."""
    p = f.target.p
    M = f.matrix
    lhs = np.einsum("abc,cd->abd", f.source.struct, M) % p
    tmp = np.einsum("ia,abc->ibc", M, f.target.struct) % p
    rhs = np.einsum("jb,ibc->ijc", M, tmp) % p
    bad = np.argwhere(np.any(lhs != rhs, axis=2))
    if bad.size:
        return int(bad[0, 0]), int(bad[0, 1])
    return None


def verify_isomorphism(f: AlgebraMorphism) -> IsoVerdict:
    """True iff f is unital, multiplicative and bijective.

    The witness is the inverse matrix on success, otherwise a short reason
    (``("unit", image)``, ``("pair", (a, b))`` or ``("singular", rank)``).
    """
    if f.source.dim != f.target.dim:
        raise DimensionMismatch(f"dim {f.source.dim} vs dim {f.target.dim}")
    p = f.target.p
    unit = f(f.source.one)
    if not np.array_equal(unit, f.target.one):
        return IsoVerdict(False, ("unit", unit))
    pair = check_multiplicative(f)
    if pair is not None:
        return IsoVerdict(False, ("pair", pair))
    try:
        inv = la.inverse(f.matrix, p)
    except Exception:
        return IsoVerdict(False, ("singular", la.rank_mod(f.matrix, p)))
    return IsoVerdict(True, inv)


def rotation_automorphism(A: PathBasisAlgebra) -> AlgebraMorphism:
    """The index shift sigma: e_i -> e_{i+1}, mu_{i,i+1} -> mu_{i+1,i+2}."""
    r = getattr(A, "nakayama_r", None)
    if r is None:
        raise NotCyclicNakayama("rotation is defined for cyclic Nakayama algebras only")
    d = A.dim
    M = np.zeros((d, d), dtype=np.int64)
    for k, (s, arrows) in enumerate(A.paths):
        image = (s % r + 1, tuple((a + 1) % r for a in arrows))
        M[k, A.index[image]] = 1
    return AlgebraMorphism(A, A, M, name="sigma")


def morphism_from_arrows(A: PathBasisAlgebra, target: StructureConstAlgebra, vertex_images,
                         arrow_images, name: str = "") -> AlgebraMorphism:
    """Extend images of the vertices and arrows of A multiplicatively along paths.

    The result is only a homomorphism if the images satisfy the relations;
    check it with :func:`verify_isomorphism` or :func:`check_multiplicative`.
    """
    rows = []
    for s, arrows in A.paths:
        rows.append(target.product(vertex_images[s - 1], *[arrow_images[a] for a in arrows]))
    return AlgebraMorphism(A, target, np.array(rows), name=name)


# ----------------------------------------------------------------------------
# basic algebras


def _peirce_span(A: StructureConstAlgebra, e, f) -> np.ndarray:
    """Row basis of eAf."""
    rows = [A.mul(A.mul(e, A.basis_vector(b)), f) for b in range(A.dim)]
    return la.row_basis(np.array(rows), A.p)


def projectives_isomorphic(A: StructureConstAlgebra, e, f) -> bool:
    """Whether eA and fA are isomorphic, for primitive idempotents e, f.

    eA ~ fA iff e is a sum of products x*y with x in eAf, y in fAe; eAe is
    local, so this happens iff some product is a unit.
    """
    X = _peirce_span(A, e, f)
    Y = _peirce_span(A, f, e)
    if X.shape[0] == 0 or Y.shape[0] == 0:
        return False
    prods = np.array([A.mul(x, y) for x in X for y in Y])
    return la.in_span(la.row_basis(prods, A.p), e, A.p)


def _corner_algebra(A: StructureConstAlgebra, e, chosen) -> StructureConstAlgebra:
    p = A.p
    C = _peirce_span(A, e, e)
    _, piv = la.rref(C, p)
    k = C.shape[0]
    struct = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            struct[i, j] = A.mul(C[i], C[j])[piv]
    one = np.asarray(e)[piv]
    idem = None if chosen is None else [np.asarray(c)[piv] for c in chosen]
    rad = None
    if A._radical is not None:
        pieces = [A.mul(A.mul(e, x), e) for x in A.radical_basis]
        rad = la.row_basis(np.array(pieces), p)[:, piv] if pieces else np.zeros((0, k), dtype=np.int64)
    B = StructureConstAlgebra(struct, one, p, idempotents=idem, radical=rad,
                              name=f"corner of {A.name}")
    B.inclusion = C
    B.parent = A
    return B


def basic_algebra(A: StructureConstAlgebra, idempotents=None):
    """Return (eAe, chosen idempotents) with one idempotent per class of eA.

    ``idempotents`` defaults to the algebra's own complete set (for orders
    these are the block-diagonal elementary matrices).  When A is already
    basic it is returned unchanged.
    """
    idem = idempotents if idempotents is not None else A.idempotents
    if idem is None:
        raise IdempotentDiscoveryFailed(
            "no complete set of orthogonal idempotents supplied or attached")
    idem = [np.mod(np.asarray(e, dtype=np.int64), A.p) for e in idem]
    reps: list[np.ndarray] = []
    for e in idem:
        if not any(projectives_isomorphic(A, e, f) for f in reps):
            reps.append(e)
    if len(reps) == len(idem):
        return A, idem
    e = np.sum(reps, axis=0) % A.p
    B = _corner_algebra(A, e, reps)
    return B, B.idempotents


def matrix_algebra(n: int, p: int = la.DEFAULT_PRIME) -> StructureConstAlgebra:
    """Mat_n(F_p) with basis E_ab (index a*n + b) and idempotents E_aa."""
    d = n * n
    struct = np.zeros((d, d, d), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                struct[a * n + b, b * n + c, a * n + c] = 1
    one = np.zeros(d, dtype=np.int64)
    idem = []
    for a in range(n):
        one[a * n + a] = 1
        e = np.zeros(d, dtype=np.int64)
        e[a * n + a] = 1
        idem.append(e)
    return StructureConstAlgebra(struct, one, p, idempotents=idem,
                                 radical=np.zeros((0, d), dtype=np.int64),
                                 labels=[f"E{a + 1}{b + 1}" for a in range(n) for b in range(n)],
                                 name=f"Mat_{n}")
