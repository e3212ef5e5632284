"""Quantum information geometry: symmetric logarithmic derivatives, the
quantum Fisher information matrix (QFIM), the Uhlmann curvature tensor (UCT),
the metrological incompatibility parameter, the classical Fisher information
matrix of a POVM, and the Cramer-Rao precision bound.

Conventions.  Parameters are unitarily encoded by the generators of a
:class:`~liemetric.basis.LieBasis`, so the derivative of the state in
direction mu is d rho = -i [G_mu, rho].  The SLD L_mu solves
d rho = (L_mu rho + rho L_mu)/2 and is gauged to zero on the kernel of rho
(the Moore-Penrose choice; the QFIM and UCT do not depend on this gauge).
Entries are

    F_mu,nu = Re Tr(rho L_mu L_nu),   U_mu,nu = Im Tr(rho L_mu L_nu),

i.e. the real and imaginary parts of one sesquilinear object.  For pure
states the equivalent forms F = 4 Re(<G_mu G_nu> - <G_mu><G_nu>) and
U = 4 Im <G_mu G_nu> are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import dagger, max_abs, readonly
from .basis import LieBasis, iter_full_observable_generators
from .exceptions import (
    NumericalError,
    UndefinedIncompatibilityError,
    ValidationError,
)
from .states import DensityMatrix, PureState

RHO_SUPPORT_REL_DEFAULT = 1e-12
RANK_REL_DEFAULT = 1e-10

_SYM_TOL = 1e-10
_PSD_REL_TOL = 1e-8
_ABS_SLACK = 1e-12


class Qfim:
    """Real symmetric QFIM with its spectral decomposition cached.

    ``eigenvalues`` are sorted descending; ``eigenvectors`` holds the matching
    orthonormal eigenvectors as columns.
    """

    def __init__(self, matrix, basis_name: str, cutoff: float | None = None):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"QFIM must be square, got shape {m.shape}")
        asym = max_abs(m - m.T)
        scale = max(1.0, max_abs(m))
        if asym > _SYM_TOL * scale:
            raise NumericalError(f"QFIM asymmetry {asym:.3e} exceeds tolerance")
        m = (m + m.T) / 2.0
        w, v = np.linalg.eigh(m)
        lam_max = max(w[-1], 0.0)
        if w[0] < -(_PSD_REL_TOL * lam_max + _ABS_SLACK):
            raise NumericalError(f"QFIM eigenvalue {w[0]:.3e} violates positivity")
        self.matrix = readonly(m)
        self.eigenvalues = readonly(w[::-1].copy())
        self.eigenvectors = readonly(v[:, ::-1].copy())
        self.basis_name = basis_name
        self.cutoff = cutoff

    @property
    def dim_g(self) -> int:
        return self.matrix.shape[0]

    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    def trace(self) -> float:
        return float(self.eigenvalues.sum())


@dataclass(frozen=True)
class Uct:
    """Real antisymmetric Uhlmann curvature tensor."""

    matrix: np.ndarray
    basis_name: str
    cutoff: float | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        asym = max_abs(m + m.T)
        if asym > _SYM_TOL * max(1.0, max_abs(m)):
            raise NumericalError(f"UCT symmetric part {asym:.3e} exceeds tolerance")
        object.__setattr__(self, "matrix", readonly((m - m.T) / 2.0))


@dataclass(frozen=True)
class SldSet:
    """SLD operators for every generator of a basis, with the support
    bookkeeping used to compute them."""

    operators: tuple
    support_rank: int
    cutoff_used: float


@dataclass(frozen=True)
class IncompatibilityResult:
    """Spectrum of the raised-index UCT and the incompatibility parameter.

    ``raised_eigenvalues`` are the (real) eigenvalues of i F^+ U, which come
    in +/- pairs bounded by 1; ``gamma`` is the largest modulus.
    """

    gamma: float
    raised_eigenvalues: tuple
    rank_cutoff: float


def _eig_rho(rho: DensityMatrix):
    p, v = np.linalg.eigh(rho.entries)
    return np.clip(p, 0.0, None), v


def _sld_tilde(p: np.ndarray, g_tilde: np.ndarray, cutoff_abs: float) -> np.ndarray:
    # L in the eigenbasis of rho: L_jk = 2 (d rho)_jk / (p_j + p_k) on the
    # support, zero where p_j + p_k falls below the cutoff.
    psum = p[:, None] + p[None, :]
    pdiff = p[None, :] - p[:, None]
    keep = psum > cutoff_abs
    denom = np.where(keep, psum, 1.0)
    return np.where(keep, -2j * g_tilde * pdiff / denom, 0.0)


def sld(rho: DensityMatrix, generator: np.ndarray, support_cutoff: float = RHO_SUPPORT_REL_DEFAULT) -> np.ndarray:
    """SLD of rho for one unitary-encoding generator.

    ``support_cutoff`` is relative to the largest eigenvalue of rho; matrix
    elements between eigenvectors with p_j + p_k below it are set to zero.
    """
    if support_cutoff < 0:
        raise ValidationError("support cutoff must be >= 0")
    p, v = _eig_rho(rho)
    cutoff_abs = support_cutoff * p[-1]
    g_tilde = dagger(v) @ np.asarray(generator, dtype=np.complex128) @ v
    l_tilde = _sld_tilde(p, g_tilde, cutoff_abs)
    out = v @ l_tilde @ dagger(v)
    return (out + dagger(out)) / 2.0


def sld_set(rho: DensityMatrix, basis: LieBasis, support_cutoff: float = RHO_SUPPORT_REL_DEFAULT) -> SldSet:
    """SLDs for every generator of ``basis``."""
    p, v = _eig_rho(rho)
    cutoff_abs = support_cutoff * p[-1]
    ops = []
    for g in basis.generators:
        g_tilde = dagger(v) @ g @ v
        l_tilde = _sld_tilde(p, g_tilde, cutoff_abs)
        full = v @ l_tilde @ dagger(v)
        ops.append(readonly((full + dagger(full)) / 2.0))
    rank = int(np.count_nonzero(p > cutoff_abs))
    return SldSet(tuple(ops), rank, support_cutoff)


def _qgt(rho: DensityMatrix, basis: LieBasis, support_cutoff: float):
    """QFIM and UCT together, as Re/Im of Z_mu,nu = Tr(rho L_mu L_nu)."""
    if rho.hilbert_dim != basis.hilbert_dim:
        raise ValidationError(
            f"state dim {rho.hilbert_dim} does not match basis dim {basis.hilbert_dim}"
        )
    p, v = _eig_rho(rho)
    cutoff_abs = support_cutoff * p[-1]
    vh = dagger(v)
    l_stack = np.empty((basis.dim_g, rho.hilbert_dim, rho.hilbert_dim), dtype=np.complex128)
    for mu, g in enumerate(basis.generators):
        l_stack[mu] = _sld_tilde(p, vh @ g @ v, cutoff_abs)
    z = np.einsum("j,mjk,nkj->mn", p, l_stack, l_stack, optimize=True)
    return z.real, z.imag


def qfim(rho: DensityMatrix, basis: LieBasis, support_cutoff: float = RHO_SUPPORT_REL_DEFAULT) -> Qfim:
    """QFIM of a (generally mixed) state over a Lie-algebra basis."""
    f, _ = _qgt(rho, basis, support_cutoff)
    return Qfim(f, basis.name, cutoff=support_cutoff)


def uct(rho: DensityMatrix, basis: LieBasis, support_cutoff: float = RHO_SUPPORT_REL_DEFAULT) -> Uct:
    """Uhlmann curvature tensor of a (generally mixed) state."""
    _, u = _qgt(rho, basis, support_cutoff)
    return Uct(u, basis.name, cutoff=support_cutoff)


def qgt_pure(psi: PureState, basis: LieBasis):
    """(F, U) for a pure state from first and second moments of the
    generators: Z = 4(<G_mu G_nu> - <G_mu><G_nu>), F = Re Z, U = Im Z."""
    if psi.hilbert_dim != basis.hilbert_dim:
        raise ValidationError(
            f"state dim {psi.hilbert_dim} does not match basis dim {basis.hilbert_dim}"
        )
    amp = psi.amplitudes
    vecs = np.stack([g @ amp for g in basis.generators])
    means = (vecs @ amp.conj()).real
    gram = vecs.conj() @ vecs.T
    z = 4.0 * (gram - np.outer(means, means))
    return z.real, z.imag


def qfim_pure(psi: PureState, basis: LieBasis) -> Qfim:
    """QFIM of a pure state, F = 2<{G_mu, G_nu}> - 4<G_mu><G_nu>."""
    f, _ = qgt_pure(psi, basis)
    return Qfim(f, basis.name)


def uct_pure(psi: PureState, basis: LieBasis) -> Uct:
    """UCT of a pure state, U = 4 Im <G_mu G_nu>."""
    _, u = qgt_pure(psi, basis)
    return Uct(u, basis.name)


def trace_qfim_pure(psi: PureState, generators) -> float:
    """Trace-only pure-state QFIM, 4 sum_mu (<G_mu^2> - <G_mu>^2).

    ``generators`` is any iterable of Hermitian matrices, so very large
    algebras can be streamed without assembling the full QFIM.
    """
    amp = psi.amplitudes
    total = 0.0
    for g in generators:
        v = g @ amp
        mean = (amp.conj() @ v).real
        total += (v.conj() @ v).real - mean * mean
    return 4.0 * total


def full_observable_qfim_trace(psi: PureState) -> float:
    """Trace of the pure-state QFIM over the full traceless observable
    algebra su(D), evaluated without materializing the D^2 - 1 generators.

    Componentwise sum of 4(<G^2> - <G>^2) over the halved pair and diagonal
    operators; cross-checked in tests against the streamed generic path.
    """
    amp = psi.amplitudes
    d = amp.shape[0]
    p = np.abs(amp) ** 2
    # Pair operators (m < n): <X^2> + <Y^2> = (p_m + p_n)/2 and
    # <X>^2 + <Y>^2 = |conj(psi_m) psi_n|^2.
    outer = amp.conj()[:, None] * amp[None, :]
    abs_sq = np.abs(outer) ** 2
    upper = np.triu_indices(d, k=1)
    pair_second = 0.5 * (p[:, None] + p[None, :])[upper].sum()
    pair_first = abs_sq[upper].sum()
    # Diagonal operators ell = 1..d-1 with weight sqrt(2/(ell(ell+1)))/2.
    csum = np.cumsum(p)
    ells = np.arange(1, d)
    w_sq = 2.0 / (ells * (ells + 1.0))
    head, next_p = csum[:-1], p[1:]
    diag_second = 0.25 * (w_sq * (head + ells**2 * next_p)).sum()
    diag_first = 0.25 * (w_sq * (head - ells * next_p) ** 2).sum()
    return 4.0 * (pair_second + diag_second - pair_first - diag_first)


def pseudo_inverse(matrix: np.ndarray, rel_tol: float = RANK_REL_DEFAULT) -> np.ndarray:
    """Moore-Penrose inverse of a real symmetric matrix by spectral cutoff:
    eigenvalues above rel_tol * lambda_max are inverted, the rest zeroed."""
    m = np.asarray(matrix, dtype=float)
    m = (m + m.T) / 2.0
    w, v = np.linalg.eigh(m)
    lam_max = np.abs(w).max(initial=0.0)
    keep = np.abs(w) > rel_tol * lam_max
    inv_w = np.zeros_like(w)
    inv_w[keep] = 1.0 / w[keep]
    return (v * inv_w) @ v.T


def incompatibility_from_matrices(
    f_matrix: np.ndarray, u_matrix: np.ndarray, rank_rel: float = RANK_REL_DEFAULT
) -> IncompatibilityResult:
    """Incompatibility from an already-assembled (F, U) pair."""
    f = np.asarray(f_matrix, dtype=float)
    u = np.asarray(u_matrix, dtype=float)
    scale = max_abs(f)
    if scale < 1e-14:
        raise UndefinedIncompatibilityError(
            "QFIM is zero: no direction carries information, incompatibility undefined"
        )
    raised = pseudo_inverse(f, rank_rel) @ u
    ev = np.linalg.eigvals(raised)
    mod = np.abs(ev)
    big = mod.max(initial=0.0)
    if np.abs(ev.real).max(initial=0.0) > 1e-8 * max(1.0, big):
        raise NumericalError(
            "raised-index UCT spectrum is not purely imaginary; rank cutoff "
            "or input matrices are inconsistent"
        )
    if big > 1.0 + 1e-8:
        raise NumericalError(f"raised-index UCT eigenvalue modulus {big!r} exceeds 1")
    # i * (i y) = -y: the spectrum of i F^+ U is real.
    raised_eigs = tuple(sorted(-ev.imag))
    return IncompatibilityResult(float(big), raised_eigs, rank_rel)


def incompatibility(
    rho: DensityMatrix,
    basis: LieBasis,
    rank_rel: float = RANK_REL_DEFAULT,
    support_cutoff: float = RHO_SUPPORT_REL_DEFAULT,
) -> IncompatibilityResult:
    """Metrological incompatibility gamma = ||i F^+ U||_inf of a state.

    gamma = 0 means every parameter encoded by the basis can be estimated
    simultaneously at the quantum limit; gamma = 1 is maximal back-action.
    Raises UndefinedIncompatibilityError when F vanishes entirely.
    """
    f, u = _qgt(rho, basis, support_cutoff)
    return incompatibility_from_matrices(f, u, rank_rel)


def cfim(rho: DensityMatrix, basis: LieBasis, povm) -> np.ndarray:
    """Classical Fisher information matrix of a POVM for unitary encoding.

    I_mu,nu = -sum_m Tr([G_mu, rho] Pi_m) Tr([G_nu, rho] Pi_m) / Tr(rho Pi_m),
    skipping outcomes with probability below 1e-14.
    """
    povm = [np.asarray(e, dtype=np.complex128) for e in povm]
    total = sum(povm)
    if max_abs(total - np.eye(rho.hilbert_dim)) > 1e-10:
        raise ValidationError("POVM elements do not sum to the identity")
    comms = [g @ rho.entries - rho.entries @ g for g in basis.generators]
    out = np.zeros((basis.dim_g, basis.dim_g))
    for element in povm:
        prob = float(np.real(np.sum(rho.entries * element.T)))
        if prob < 1e-14:
            continue
        # Tr([G, rho] Pi) is purely imaginary for Hermitian G, rho, Pi.
        t = np.array([np.sum(k * element.T).imag for k in comms])
        out += np.outer(t, t) / prob
    return out


def precision_bound(eigenvalue: float, v_norm_sq: float = 1.0, trials: int = 1, duration: float = 1.0) -> float:
    """Quantum Cramer-Rao lower bound 1 / (M t^2 |V|^2 lambda) on the
    variance of the encoded frequency; infinite when lambda = 0."""
    if eigenvalue < 0:
        raise ValidationError("QFIM eigenvalue must be >= 0")
    if v_norm_sq <= 0 or trials < 1 or duration <= 0:
        raise ValidationError("need |V|^2 > 0, trials >= 1 and duration > 0")
    if eigenvalue == 0.0:
        return math.inf
    return 1.0 / (trials * duration**2 * v_norm_sq * eigenvalue)
