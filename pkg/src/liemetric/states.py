"""Probe states: coherent spin states, NOON/GHZ states, density matrices,
and the Uhlmann distance between them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import (
    as_complex_matrix,
    dagger,
    expi,
    hermitian_sqrt,
    max_abs,
    readonly,
    require_hermitian,
)
from .basis import SymmetricIndex, spin1_matrices, symmetric_dimension
from .exceptions import (
    NormalizationError,
    OrthogonalityError,
    ValidationError,
)

_NORM_TOL = 1e-12
_INPUT_NORM_TOL = 1e-10
_PSD_TOL = 1e-10


@dataclass(frozen=True)
class PureState:
    """Unit-norm complex vector."""

    hilbert_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (self.hilbert_dim,):
            raise ValidationError(
                f"amplitudes have shape {amp.shape}, expected ({self.hilbert_dim},)"
            )
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > _NORM_TOL:
            raise NormalizationError(f"state norm {norm!r} deviates from 1 beyond {_NORM_TOL}")
        object.__setattr__(self, "amplitudes", readonly(amp))

    def expectation(self, op: np.ndarray) -> float:
        """<psi| op |psi> for Hermitian op."""
        return float(np.real(self.amplitudes.conj() @ (op @ self.amplitudes)))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    hilbert_dim: int
    entries: np.ndarray

    def __post_init__(self):
        m = as_complex_matrix(self.entries, "density matrix")
        if m.shape != (self.hilbert_dim, self.hilbert_dim):
            raise ValidationError(
                f"entries have shape {m.shape}, expected square of dim {self.hilbert_dim}"
            )
        require_hermitian(m, _NORM_TOL, "density matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > _NORM_TOL:
            raise ValidationError(f"density matrix trace {tr!r} deviates from 1")
        if np.linalg.eigvalsh(m).min() < -_PSD_TOL:
            raise ValidationError("density matrix has a negative eigenvalue beyond tolerance")
        object.__setattr__(self, "entries", readonly(m))

    def purity(self) -> float:
        return float(np.real(np.sum(self.entries * self.entries.T)))

    def expectation(self, op: np.ndarray) -> float:
        return float(np.real(np.sum(self.entries * op.T)))


def _require_unit(vec: np.ndarray, what: str) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > _INPUT_NORM_TOL:
        raise NormalizationError(f"{what} must be unit-norm, got norm {norm!r}")
    return vec


def css(d: int, n_particles: int, single_particle_amplitudes) -> PureState:
    """Coherent spin state |psi>^(x)N on the symmetric subspace.

    The amplitude on occupation (n_1..n_d) is sqrt(N!/prod n_i!) prod psi_i^n_i.
    """
    psi = np.asarray(single_particle_amplitudes, dtype=np.complex128).reshape(-1)
    if psi.shape != (d,):
        raise ValidationError(f"expected a {d}-component single-particle state")
    _require_unit(psi, "single-particle state")
    psi = psi / np.linalg.norm(psi)
    index = SymmetricIndex.build(d, n_particles)
    amp = np.zeros(index.dim, dtype=np.complex128)
    fact_n = math.factorial(n_particles)
    for i, occ in enumerate(index.occupations):
        value = math.sqrt(fact_n / math.prod(math.factorial(k) for k in occ))
        for level, k in enumerate(occ):
            if k:
                value = value * psi[level] ** k
        amp[i] = value
    return PureState(index.dim, amp)


def noon(d: int, n_particles: int, psi, perp) -> PureState:
    """(|psi>^N + |perp>^N)/sqrt(2) for orthogonal single-particle states."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    perp = np.asarray(perp, dtype=np.complex128).reshape(-1)
    overlap = abs(np.vdot(perp, psi))
    if overlap > 1e-10:
        raise OrthogonalityError(f"|<perp|psi>| = {overlap:.3e} exceeds 1e-10")
    a = css(d, n_particles, psi).amplitudes
    b = css(d, n_particles, perp).amplitudes
    return PureState(len(a), (a + b) / math.sqrt(2.0))


def ghz_balanced(d: int, n_particles: int) -> PureState:
    """Balanced GHZ state sum_n |n>^(x)N / sqrt(d) in the occupation basis."""
    index = SymmetricIndex.build(d, n_particles)
    amp = np.zeros(index.dim, dtype=np.complex128)
    for level in range(d):
        occ = [0] * d
        occ[level] = n_particles
        amp[index.index_of(occ)] = 1.0
    return PureState(index.dim, amp / math.sqrt(d))


def initial_example_state(n_particles: int) -> PureState:
    """Coherent spin state along S_x: exp(+i pi/2 S_y) |-1>^(x)N.

    Built as the CSS of the rotated single-particle state, which is the same
    state because S_y generates a collective rotation.
    """
    _, sy, _ = spin1_matrices()
    single = expi(sy, -math.pi / 2.0) @ np.array([0.0, 0.0, 1.0], dtype=np.complex128)
    return css(3, n_particles, single)


def density(psi: PureState) -> DensityMatrix:
    """Rank-one density matrix |psi><psi|."""
    return DensityMatrix(psi.hilbert_dim, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def mix(components) -> DensityMatrix:
    """Convex mixture sum_k w_k rho_k of density matrices."""
    components = list(components)
    if not components:
        raise ValidationError("mixture needs at least one component")
    weights = np.array([w for w, _ in components], dtype=float)
    if weights.min() < 0:
        raise ValidationError("mixture weights must be non-negative")
    if abs(weights.sum() - 1.0) > _INPUT_NORM_TOL:
        raise NormalizationError(f"mixture weights sum to {weights.sum()!r}, expected 1")
    dim = components[0][1].hilbert_dim
    out = np.zeros((dim, dim), dtype=np.complex128)
    for w, rho in components:
        if rho.hilbert_dim != dim:
            raise ValidationError("mixture components live on different Hilbert spaces")
        out += w * rho.entries
    return DensityMatrix(dim, out)


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(dim, np.eye(dim, dtype=np.complex128) / dim)


def sqrt_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr((sqrt(rho) sigma sqrt(rho))^(1/2)).

    When either argument is pure (purity > 1 - 1e-12) the cheaper
    sqrt(<psi|sigma|psi>) = sqrt(Tr(rho sigma)) path is used.
    """
    if rho.hilbert_dim != sigma.hilbert_dim:
        raise ValidationError(
            f"dimension mismatch: {rho.hilbert_dim} vs {sigma.hilbert_dim}"
        )
    if rho.purity() > 1.0 - 1e-12 or sigma.purity() > 1.0 - 1e-12:
        overlap = float(np.real(np.sum(rho.entries * sigma.entries.T)))
        return math.sqrt(max(overlap, 0.0))
    s = hermitian_sqrt(rho.entries)
    w = np.linalg.eigvalsh(s @ sigma.entries @ s)
    # sqrt amplifies eigenvalue noise at rank boundaries (infinite slope at
    # zero); drop numerically-zero eigenvalues so the result stays symmetric
    # in its arguments.
    floor = max(w.max(initial=0.0), 0.0) * 1e-14
    w = w[w > floor]
    return float(np.sqrt(w).sum())


def uhlmann_distance_sq(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Squared Uhlmann distance 1 - Tr((sqrt(rho) sigma sqrt(rho))^(1/2)), in [0, 1]."""
    return max(0.0, 1.0 - sqrt_fidelity(rho, sigma))


def conjugate(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    """U rho U^dag."""
    u = np.asarray(unitary, dtype=np.complex128)
    return DensityMatrix(rho.hilbert_dim, u @ rho.entries @ dagger(u))
