"""Orthonormal Hermitian Lie-algebra bases on qudit Hilbert spaces.

All bases satisfy Tr(G_mu G_nu) = C delta_{mu nu} in the Hilbert-Schmidt
inner product, with the norm constant C recorded on the basis object.
Generator ordering is fixed everywhere: x/y-like pair operators indexed by
k(m, n) = (n-1)(n-2)/2 + m for 1 <= m < n <= d, followed by the d-1
diagonal operators.  Norm constants by construction:

* ``build_gellmann(d)``             unhalved single-particle matrices, C = 2
* ``build_collective_symmetric``    halved operators summed over N particles
  on the symmetric subspace, C = binom(N+d, d+1) / 2
* ``build_spin1_dipole(N)``         {S_x, S_y, S_z} on symmetric qutrits,
  C = N(N+1)(N+2)(N+3) / 12
* ``build_su3_collective(N)``       {Q_1..Q_8}, C = N(N+1)(N+2)(N+3) / 48
* ``build_full_observable_basis``   all traceless observables su(D), C = 1/2

The symmetric subspace of N qudits is indexed by occupation tuples
(n_1, ..., n_d) with sum N, ordered lexicographically descending
(n_1-major), so (N, 0, ..., 0) is index 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._linalg import dagger, max_abs, readonly, require_hermitian, trace_product
from .exceptions import DimensionCapError, InvalidDimensionError, ValidationError

DIM_CAP_DEFAULT = 5000

_HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class LieBasis:
    """An ordered set of Hermitian generators sharing one Hilbert space.

    Orthonormality and closure are guaranteed by the build_* constructors
    and can be re-measured with :func:`verify_basis`; the constructor only
    enforces the cheap structural invariants (shape and hermiticity).
    """

    name: str
    hilbert_dim: int
    generators: tuple
    norm_constant: float
    d: int | None = None
    n_particles: int | None = None

    def __post_init__(self):
        if self.hilbert_dim < 1:
            raise InvalidDimensionError(f"hilbert_dim must be >= 1, got {self.hilbert_dim}")
        if self.norm_constant <= 0:
            raise ValidationError(f"norm_constant must be positive, got {self.norm_constant}")
        gens = []
        for i, g in enumerate(self.generators):
            g = np.asarray(g, dtype=np.complex128)
            if g.shape != (self.hilbert_dim, self.hilbert_dim):
                raise ValidationError(
                    f"generator {i} has shape {g.shape}, expected "
                    f"({self.hilbert_dim}, {self.hilbert_dim})"
                )
            require_hermitian(g, _HERMITICITY_TOL, f"generator {i}")
            gens.append(readonly(g))
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def dim_g(self) -> int:
        return len(self.generators)

    def stacked(self) -> np.ndarray:
        """Generators as one (dim_g, D, D) array."""
        return np.stack(self.generators)


@dataclass(frozen=True)
class SymmetricIndex:
    """Bijection between occupation tuples of N qudits and basis indices."""

    d: int
    n_particles: int
    occupations: tuple = field(repr=False)
    _index: dict = field(repr=False)

    @classmethod
    def build(cls, d: int, n_particles: int) -> "SymmetricIndex":
        if d < 2:
            raise InvalidDimensionError(f"need d >= 2 levels, got {d}")
        if n_particles < 1:
            raise InvalidDimensionError(f"need N >= 1 particles, got {n_particles}")
        occs = tuple(_compositions(n_particles, d))
        return cls(d, n_particles, occs, {occ: i for i, occ in enumerate(occs)})

    @property
    def dim(self) -> int:
        return len(self.occupations)

    def index_of(self, occ: Sequence[int]) -> int:
        return self._index[tuple(occ)]

    def occupation_of(self, i: int) -> tuple:
        return self.occupations[i]


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    # Descending-lexicographic compositions of `total` into `parts` parts.
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def symmetric_dimension(d: int, n_particles: int) -> int:
    """binom(N + d - 1, d - 1): dimension of the symmetric subspace."""
    return math.comb(n_particles + d - 1, d - 1)


def pair_index_order(d: int) -> list:
    """State pairs (m, n), 1-based, in k(m, n) = (n-1)(n-2)/2 + m order."""
    return [(m, n) for n in range(2, d + 1) for m in range(1, n)]


def _iter_gellmann(d: int) -> Iterator[np.ndarray]:
    # Pair operators first: for pair (m, n) the x-like operator
    # |m><n| + |n><m| and the y-like operator -i(|m><n| - |n><m|),
    # then the d-1 diagonal operators.
    for m, n in pair_index_order(d):
        x = np.zeros((d, d), dtype=np.complex128)
        x[m - 1, n - 1] = 1.0
        x[n - 1, m - 1] = 1.0
        yield x
        y = np.zeros((d, d), dtype=np.complex128)
        y[m - 1, n - 1] = -1.0j
        y[n - 1, m - 1] = 1.0j
        yield y
    for ell in range(1, d):
        w = math.sqrt(2.0 / (ell * (ell + 1)))
        diag = np.zeros(d)
        diag[:ell] = 1.0
        diag[ell] = -ell
        yield np.diag(w * diag).astype(np.complex128)


def build_gellmann(d: int) -> LieBasis:
    """Generalized Gell-Mann basis of su(d), unhalved, Tr(s_mu s_nu) = 2 delta."""
    if d < 2:
        raise InvalidDimensionError(f"need d >= 2 for su(d), got {d}")
    return LieBasis(
        name=f"gellmann(d={d})",
        hilbert_dim=d,
        generators=tuple(_iter_gellmann(d)),
        norm_constant=2.0,
        d=d,
    )


def collective_from_single(
    single: np.ndarray, index: SymmetricIndex, halved: bool = False
) -> np.ndarray:
    """Second-quantized collective operator sum_ij c_ij a_i^dag a_j.

    ``single`` is the d x d coefficient matrix c; with ``halved`` the
    coefficients are divided by two (the su(d) collective convention).
    """
    d, n = index.d, index.dim
    coeff = np.asarray(single, dtype=np.complex128) / (2.0 if halved else 1.0)
    out = np.zeros((n, n), dtype=np.complex128)
    for col, occ in enumerate(index.occupations):
        for i in range(d):
            for j in range(d):
                c = coeff[i, j]
                if c == 0:
                    continue
                if i == j:
                    out[col, col] += c * occ[i]
                elif occ[j] > 0:
                    shifted = list(occ)
                    shifted[j] -= 1
                    shifted[i] += 1
                    row = index.index_of(shifted)
                    out[row, col] += c * math.sqrt(occ[j] * (occ[i] + 1))
    return out


def collective_norm_constant(d: int, n_particles: int) -> float:
    """Tr(O_mu O_nu) = delta * binom(N+d, d+1) / 2 on the symmetric subspace."""
    return math.comb(n_particles + d, d + 1) / 2.0


def _check_cap(dim: int, cap: int, what="Hilbert space"):
    if dim > cap:
        raise DimensionCapError(dim, cap, what)


def build_collective_symmetric(
    d: int, n_particles: int, cap: int = DIM_CAP_DEFAULT
) -> LieBasis:
    """Collective su(d) generators O_mu = sum_j sigma_mu^(j)/2 on the
    symmetric subspace, realized as D x D matrices with D = binom(N+d-1, d-1)."""
    if d < 2:
        raise InvalidDimensionError(f"need d >= 2 levels, got {d}")
    if n_particles < 1:
        raise InvalidDimensionError(f"need N >= 1 particles, got {n_particles}")
    _check_cap(symmetric_dimension(d, n_particles), cap, "symmetric subspace")
    index = SymmetricIndex.build(d, n_particles)
    gens = tuple(
        collective_from_single(s, index, halved=True) for s in _iter_gellmann(d)
    )
    return LieBasis(
        name=f"su_collective(d={d},N={n_particles})",
        hilbert_dim=index.dim,
        generators=gens,
        norm_constant=collective_norm_constant(d, n_particles),
        d=d,
        n_particles=n_particles,
    )


def spin1_matrices() -> tuple:
    """Single-particle spin-1 operators (s_x, s_y, s_z) in the basis
    (|+1>, |0>, |-1>)."""
    r = 1.0 / math.sqrt(2.0)
    sx = np.array([[0, r, 0], [r, 0, r], [0, r, 0]], dtype=np.complex128)
    sy = np.array(
        [[0, -1j * r, 0], [1j * r, 0, -1j * r], [0, 1j * r, 0]], dtype=np.complex128
    )
    sz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
    return sx, sy, sz


def dipole_norm_constant(n_particles: int) -> float:
    n = n_particles
    return n * (n + 1) * (n + 2) * (n + 3) / 12.0


def build_spin1_dipole(n_particles: int, cap: int = DIM_CAP_DEFAULT) -> LieBasis:
    """Collective dipole operators {S_x, S_y, S_z} of N symmetric qutrits.

    Second-quantized with modes (a, b, c) = (|+1>, |0>, |-1>):
    S_x = (a^dag b + b^dag c + h.c.)/sqrt(2), S_z = a^dag a - c^dag c.
    """
    if n_particles < 1:
        raise InvalidDimensionError(f"need N >= 1 particles, got {n_particles}")
    _check_cap(symmetric_dimension(3, n_particles), cap, "symmetric subspace")
    index = SymmetricIndex.build(3, n_particles)
    gens = tuple(collective_from_single(s, index) for s in spin1_matrices())
    return LieBasis(
        name=f"spin1_dipole(N={n_particles})",
        hilbert_dim=index.dim,
        generators=gens,
        norm_constant=dipole_norm_constant(n_particles),
        d=3,
        n_particles=n_particles,
    )


def build_su3_collective(n_particles: int, cap: int = DIM_CAP_DEFAULT) -> LieBasis:
    """Collective su(3) basis {Q_1..Q_8}; identical operators to
    build_collective_symmetric(3, N), C = N(N+1)(N+2)(N+3)/48."""
    base = build_collective_symmetric(3, n_particles, cap=cap)
    return LieBasis(
        name=f"su3_collective(N={n_particles})",
        hilbert_dim=base.hilbert_dim,
        generators=base.generators,
        norm_constant=base.norm_constant,
        d=3,
        n_particles=n_particles,
    )


def iter_full_observable_generators(hilbert_dim: int) -> Iterator[np.ndarray]:
    """Yield the D^2 - 1 halved traceless generators of su(D) one at a time."""
    for g in _iter_gellmann(hilbert_dim):
        yield g / 2.0


def build_full_observable_basis(
    hilbert_dim: int, cap: int = DIM_CAP_DEFAULT
) -> LieBasis:
    """All traceless Hermitian observables su(D) on an arbitrarily numbered
    D-dimensional space; halved operators with Tr(T_mu T_nu) = delta / 2."""
    if hilbert_dim < 2:
        raise InvalidDimensionError(f"need D >= 2, got {hilbert_dim}")
    _check_cap(hilbert_dim**2 - 1, cap, "generator count")
    return LieBasis(
        name=f"full_observable(D={hilbert_dim})",
        hilbert_dim=hilbert_dim,
        generators=tuple(iter_full_observable_generators(hilbert_dim)),
        norm_constant=0.5,
    )


def build_collective_full(d: int, n_particles: int, cap: int = DIM_CAP_DEFAULT) -> LieBasis:
    """Collective su(d) generators on the full d^N tensor-product space.

    Oracle-scale construction (intended for N <= 5): O_mu = sum_j sigma_mu^(j)/2
    as dense d^N x d^N matrices.
    """
    if d < 2:
        raise InvalidDimensionError(f"need d >= 2 levels, got {d}")
    if n_particles < 1:
        raise InvalidDimensionError(f"need N >= 1 particles, got {n_particles}")
    dim = d**n_particles
    _check_cap(dim, cap, "tensor-product space")
    eye = np.eye(d, dtype=np.complex128)
    gens = []
    for sigma in _iter_gellmann(d):
        total = np.zeros((dim, dim), dtype=np.complex128)
        for j in range(n_particles):
            factors = [eye] * n_particles
            factors[j] = sigma / 2.0
            op = factors[0]
            for f in factors[1:]:
                op = np.kron(op, f)
            total += op
        gens.append(total)
    c = n_particles / 2.0 * d ** (n_particles - 1)
    return LieBasis(
        name=f"su_collective_full(d={d},N={n_particles})",
        hilbert_dim=dim,
        generators=tuple(gens),
        norm_constant=c,
        d=d,
        n_particles=n_particles,
    )


def symmetric_embedding(d: int, n_particles: int) -> np.ndarray:
    """Isometry V (d^N x D) from the symmetric subspace into the full
    tensor-product space; columns follow the SymmetricIndex ordering."""
    index = SymmetricIndex.build(d, n_particles)
    dim_full = d**n_particles
    v = np.zeros((dim_full, index.dim), dtype=np.complex128)
    fact_n = math.factorial(n_particles)
    for seq in np.ndindex(*([d] * n_particles)):
        occ = [0] * d
        for s in seq:
            occ[s] += 1
        col = index.index_of(occ)
        row = 0
        for s in seq:
            row = row * d + s
        amp = math.sqrt(math.prod(math.factorial(k) for k in occ) / fact_n)
        v[row, col] = amp
    return v


def casimir(basis: LieBasis) -> tuple:
    """Quadratic Casimir sum_mu G_mu^2 and its largest eigenvalue zeta."""
    total = np.zeros((basis.hilbert_dim, basis.hilbert_dim), dtype=np.complex128)
    for g in basis.generators:
        total += g @ g
    zeta = float(np.linalg.eigvalsh(total)[-1])
    return total, zeta


@dataclass(frozen=True)
class BasisVerification:
    """Measured orthonormality/closure residuals for a basis.

    ``max_orthonormality_residual`` is max |Tr(G_mu G_nu) - C delta| (absolute,
    compare against tol * C); ``max_closure_residual`` is the max-abs norm of
    the worst commutator expansion remainder (compare against closure tol * C).
    """

    c_measured: float
    max_orthonormality_residual: float
    max_closure_residual: float
    orthonormality_ok: bool
    closure_ok: bool
    orthonormality_pairs_checked: int
    closure_pairs_checked: int


def verify_basis(
    basis: LieBasis,
    orthonormality_tol: float = 1e-10,
    closure_tol: float = 1e-9,
    sample_pairs: int | None = None,
    seed: int = 0,
    check_closure: bool = True,
) -> BasisVerification:
    """Measure how well a basis satisfies its orthonormality and closure
    contracts.  With ``sample_pairs`` set, only a random subset of index
    pairs is checked (for large algebras)."""
    gens = basis.generators
    k = len(gens)
    c = basis.norm_constant

    pairs = [(i, j) for i in range(k) for j in range(i, k)]
    rng = np.random.default_rng(seed)
    if sample_pairs is not None and sample_pairs < len(pairs):
        chosen = rng.choice(len(pairs), size=sample_pairs, replace=False)
        pairs = [pairs[i] for i in chosen]

    c_measured = float(np.mean([trace_product(g, g).real for g in gens[: min(k, 64)]]))
    orth_res = 0.0
    for i, j in pairs:
        t = trace_product(gens[i], gens[j])
        target = c if i == j else 0.0
        orth_res = max(orth_res, abs(t - target))

    closure_res = 0.0
    closure_pairs = []
    if check_closure:
        closure_pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
        if sample_pairs is not None and sample_pairs < len(closure_pairs):
            chosen = rng.choice(len(closure_pairs), size=sample_pairs, replace=False)
            closure_pairs = [closure_pairs[i] for i in chosen]
        for i, j in closure_pairs:
            comm = gens[i] @ gens[j] - gens[j] @ gens[i]
            target = -1j * comm
            recon = np.zeros_like(comm)
            for g in gens:
                recon += (trace_product(target, g) / c) * g
            closure_res = max(closure_res, max_abs(comm - 1j * recon))

    return BasisVerification(
        c_measured=c_measured,
        max_orthonormality_residual=orth_res,
        max_closure_residual=closure_res,
        orthonormality_ok=orth_res <= orthonormality_tol * c,
        closure_ok=(not check_closure) or closure_res <= closure_tol * c,
        orthonormality_pairs_checked=len(pairs),
        closure_pairs_checked=len(closure_pairs),
    )
