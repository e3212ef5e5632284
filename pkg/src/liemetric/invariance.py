"""Executable checks of the spectrum conservation law: sampling of group
elements, adjoint matrices, and invariance of the QFIM spectrum, the
transformation law, the UCT law and the incompatibility parameter.

A unitary U = exp(-i sum_mu c_mu G_mu) generated by the basis acts on the
generator space through the orthogonal adjoint matrix
Lambda[a, m] = Tr(G_a U^dag G_m U) / C, and the information matrices
transform as F -> Lambda^T F Lambda, U -> Lambda^T U Lambda, leaving every
spectrum functional unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import dagger, expi, max_abs
from .basis import LieBasis
from .exceptions import AlgebraMembershipError, ValidationError
from .geometry import (
    RANK_REL_DEFAULT,
    RHO_SUPPORT_REL_DEFAULT,
    Qfim,
    _qgt,
    incompatibility_from_matrices,
)
from .states import DensityMatrix, conjugate

_ORTH_TOL = 1e-8


@dataclass(frozen=True)
class GroupElement:
    """exp(-i sum_mu c_mu G_mu) together with its coefficient vector."""

    unitary: np.ndarray
    coefficients: np.ndarray
    basis_name: str

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=np.complex128)
        res = max_abs(dagger(u) @ u - np.eye(u.shape[0]))
        if res > 1e-10:
            raise ValidationError(f"matrix is not unitary (residual {res:.3e})")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=float))


@dataclass(frozen=True)
class AdjointMatrix:
    """Orthogonal matrix of the adjoint action on the generator basis."""

    matrix: np.ndarray
    orthogonality_residual: float
    determinant: float


@dataclass(frozen=True)
class SpectrumInvarianceCheck:
    passed: bool
    max_eigenvalue_deviation: float


@dataclass(frozen=True)
class TransformationLawCheck:
    passed: bool
    residual: float


@dataclass(frozen=True)
class UctInvarianceCheck:
    passed: bool
    uct_residual: float
    gamma_deviation: float
    gamma_defined: bool
    max_pair_residual: float
    max_modulus: float


def random_group_element(basis: LieBasis, seed: int, scale: float = np.pi) -> GroupElement:
    """Group element with coefficients drawn uniformly from [-scale, scale]."""
    rng = np.random.default_rng(seed)
    coeff = rng.uniform(-scale, scale, size=basis.dim_g)
    h = np.tensordot(coeff, basis.stacked(), axes=1)
    return GroupElement(expi(h, 1.0), coeff, basis.name)


def _as_unitary(u) -> np.ndarray:
    if isinstance(u, GroupElement):
        return u.unitary
    return np.asarray(u, dtype=np.complex128)


def adjoint_matrix(element, basis: LieBasis, orth_tol: float = _ORTH_TOL) -> AdjointMatrix:
    """Adjoint matrix Lambda[a, m] = Tr(G_a U^dag G_m U) / C.

    For a unitary actually generated by the basis algebra Lambda is special
    orthogonal; a violation of orthogonality is diagnosed as non-membership.
    """
    u = _as_unitary(element)
    gens = basis.stacked()
    conjugated = np.einsum("ij,mjk,kl->mil", dagger(u), gens, u, optimize=True)
    lam_c = np.einsum("aji,mij->am", gens, conjugated, optimize=True) / basis.norm_constant
    lam = lam_c.real
    imag_res = max_abs(lam_c.imag)
    res = max_abs(lam @ lam.T - np.eye(basis.dim_g))
    res = max(res, imag_res)
    if res > orth_tol:
        raise AlgebraMembershipError(
            f"unitary is not generated by '{basis.name}' (adjoint orthogonality "
            f"residual {res:.3e})"
        )
    return AdjointMatrix(lam, res, float(np.linalg.det(lam)))


def _sorted_qfim_spectra(rho, basis, u, support_cutoff):
    f1, u1 = _qgt(rho, basis, support_cutoff)
    f2, u2 = _qgt(conjugate(rho, u), basis, support_cutoff)
    return f1, u1, f2, u2


def check_spectrum_invariance(
    rho: DensityMatrix,
    basis: LieBasis,
    element,
    tol: float = 1e-7,
    support_cutoff: float = RHO_SUPPORT_REL_DEFAULT,
) -> SpectrumInvarianceCheck:
    """Compare sorted QFIM spectra of rho and U rho U^dag.

    Sorted eigenvalues are compared rather than eigenvectors: degenerate
    subspaces make vector matching ill-posed, and the conservation law is a
    statement about the spectrum.
    """
    u = _as_unitary(element)
    f1, _, f2, _ = _sorted_qfim_spectra(rho, basis, u, support_cutoff)
    w1 = np.linalg.eigvalsh(f1)
    w2 = np.linalg.eigvalsh(f2)
    deviation = float(np.max(np.abs(w1 - w2)))
    lam_max = max(w1[-1], 0.0)
    return SpectrumInvarianceCheck(
        passed=deviation < tol * max(lam_max, 1.0),
        max_eigenvalue_deviation=deviation,
    )


def check_transformation_law(
    rho: DensityMatrix,
    basis: LieBasis,
    element,
    tol: float = 1e-7,
    support_cutoff: float = RHO_SUPPORT_REL_DEFAULT,
) -> TransformationLawCheck:
    """Residual of F[U rho U^dag] = Lambda^T F[rho] Lambda (max-abs norm)."""
    u = _as_unitary(element)
    lam = adjoint_matrix(element, basis).matrix
    f1, _, f2, _ = _sorted_qfim_spectra(rho, basis, u, support_cutoff)
    residual = max_abs(f2 - lam.T @ f1 @ lam)
    lam_max = max(np.linalg.eigvalsh(f1)[-1], 0.0)
    return TransformationLawCheck(passed=residual < tol * (1.0 + lam_max), residual=residual)


def check_uct_invariance(
    rho: DensityMatrix,
    basis: LieBasis,
    element,
    tol: float = 1e-7,
    support_cutoff: float = RHO_SUPPORT_REL_DEFAULT,
    rank_rel: float = RANK_REL_DEFAULT,
) -> UctInvarianceCheck:
    """Residual of the UCT law U[rho~] = Lambda^T U[rho] Lambda, plus
    invariance of the raised-index spectrum and of gamma.

    When the QFIM vanishes identically (so gamma is undefined) the gamma
    comparison is skipped and reported as such.
    """
    u = _as_unitary(element)
    lam = adjoint_matrix(element, basis).matrix
    f1, u1, f2, u2 = _sorted_qfim_spectra(rho, basis, u, support_cutoff)
    uct_residual = max_abs(u2 - lam.T @ u1 @ lam)
    lam_max = max(np.linalg.eigvalsh(f1)[-1], 0.0)

    gamma_defined = max_abs(f1) >= 1e-14
    gamma_deviation = 0.0
    pair_residual = 0.0
    max_modulus = 0.0
    if gamma_defined:
        inc1 = incompatibility_from_matrices(f1, u1, rank_rel)
        inc2 = incompatibility_from_matrices(f2, u2, rank_rel)
        gamma_deviation = abs(inc1.gamma - inc2.gamma)
        eigs = np.asarray(inc1.raised_eigenvalues)
        pair_residual = float(np.max(np.abs(eigs + eigs[::-1])))
        max_modulus = float(np.max(np.abs(eigs))) if eigs.size else 0.0

    passed = uct_residual < tol * (1.0 + lam_max) and gamma_deviation < tol
    return UctInvarianceCheck(
        passed=passed,
        uct_residual=uct_residual,
        gamma_deviation=gamma_deviation,
        gamma_defined=gamma_defined,
        max_pair_residual=pair_residual,
        max_modulus=max_modulus,
    )


def manifold_dimension(q: Qfim, rel_tol: float = RANK_REL_DEFAULT) -> int:
    """Number of nonzero QFIM eigenvalues: the dimension of the equivalence
    class manifold, and the maximum number of statistically independent
    parameters the algebra can encode in the state."""
    lam = np.asarray(q.eigenvalues)
    if lam.size == 0:
        return 0
    return int(np.count_nonzero(lam > rel_tol * max(lam[0], 0.0)))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like random state vector (normalized complex Gaussian)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_mixed_state(dim: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """Random rank-r mixture of Haar-like pure states with uniform-ish weights."""
    if not 1 <= rank <= dim:
        raise ValidationError(f"rank must be in [1, {dim}], got {rank}")
    weights = rng.uniform(0.2, 1.0, size=rank)
    weights /= weights.sum()
    out = np.zeros((dim, dim), dtype=np.complex128)
    for w in weights:
        psi = random_pure_state(dim, rng)
        out += w * np.outer(psi, psi.conj())
    return DensityMatrix(dim, out)


@dataclass(frozen=True)
class PairCheck:
    """All residuals for one (state, group element) pair."""

    state_rank: int
    seed: int
    spectrum_deviation: float
    law_residual: float
    uct_residual: float
    gamma_deviation: float
    gamma_defined: bool
    pair_residual: float
    max_modulus: float
    adjoint_orthogonality: float
    adjoint_determinant: float
    passed: bool


def run_invariance_suite(
    basis: LieBasis,
    n_pairs: int = 20,
    seed: int = 0,
    tol: float = 1e-7,
    scale: float = np.pi,
    ranks: tuple = (1, 2, -1),
    support_cutoff: float = RHO_SUPPORT_REL_DEFAULT,
    rank_rel: float = RANK_REL_DEFAULT,
) -> list:
    """Run all invariance checks on ``n_pairs`` random (state, element)
    pairs; rank -1 stands for full rank.  Returns one PairCheck per pair."""
    rng = np.random.default_rng(seed)
    dim = basis.hilbert_dim
    checks = []
    for i in range(n_pairs):
        rank = ranks[i % len(ranks)]
        rank = dim if rank == -1 else min(rank, dim)
        rho = random_mixed_state(dim, rank, rng)
        element_seed = int(rng.integers(0, 2**31 - 1))
        element = random_group_element(basis, element_seed, scale)
        spec_check = check_spectrum_invariance(rho, basis, element, tol, support_cutoff)
        law_check = check_transformation_law(rho, basis, element, tol, support_cutoff)
        uct_check = check_uct_invariance(
            rho, basis, element, tol, support_cutoff, rank_rel
        )
        adj = adjoint_matrix(element, basis)
        checks.append(
            PairCheck(
                state_rank=rank,
                seed=element_seed,
                spectrum_deviation=spec_check.max_eigenvalue_deviation,
                law_residual=law_check.residual,
                uct_residual=uct_check.uct_residual,
                gamma_deviation=uct_check.gamma_deviation,
                gamma_defined=uct_check.gamma_defined,
                pair_residual=uct_check.max_pair_residual,
                max_modulus=uct_check.max_modulus,
                adjoint_orthogonality=adj.orthogonality_residual,
                adjoint_determinant=adj.determinant,
                passed=spec_check.passed and law_check.passed and uct_check.passed,
            )
        )
    return checks
