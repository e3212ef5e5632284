"""Optimality criteria derived from the QFIM spectrum, the entanglement
witness, the average response of a state to an algebra, and the first-moment
diagnostic for trace optimality."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import expi
from .basis import LieBasis, casimir
from .exceptions import RegimeError, ValidationError
from .geometry import RANK_REL_DEFAULT, Qfim
from .states import DensityMatrix, PureState, conjugate, uhlmann_distance_sq


@dataclass(frozen=True)
class CriteriaReport:
    """Scalar criteria of one QFIM.

    a_opt (trace), d_opt (pseudo-determinant) and the two e_opt variants are
    spectrum functionals, hence invariant under group actions; s_opt is basis
    dependent and flagged as such.  d_opt/s_opt/e_opt_nonzero are None when
    undefined (no nonzero eigenvalues / zero diagonal).  Witness fields are
    filled only when particle number and level count are supplied.
    """

    a_opt: float
    d_opt: float | None
    e_opt_all: float
    e_opt_nonzero: float | None
    s_opt: float | None
    s_opt_basis_dependent: bool
    nonzero_count: int
    jeffreys_volume: float | None
    zero_tol_rel: float
    witness_violated: bool | None = None
    witness_threshold: float | None = None


@dataclass(frozen=True)
class WitnessResult:
    violated: bool
    threshold: float
    trace: float
    max_eig: float
    k_partite_hint: int


@dataclass(frozen=True)
class McResponse:
    mean: float
    std_error: float
    n_samples: int
    eps: float
    seed: int


@dataclass(frozen=True)
class AOptDiagnostic:
    sum_sq_means: float
    four_zeta: float
    trace_check: float


_WITNESS_REL_SLACK = 1e-9


def evaluate_criteria(
    q: Qfim,
    zero_tol_rel: float = RANK_REL_DEFAULT,
    n_particles: int | None = None,
    levels: int | None = None,
) -> CriteriaReport:
    """Evaluate the scalar optimality criteria of a QFIM.

    The zero cutoff is relative to the largest eigenvalue and shared with the
    pseudo-inverse rank decision so the pseudo-determinant and the manifold
    dimension are mutually consistent.
    """
    lam = np.asarray(q.eigenvalues)
    lam_max = max(float(lam[0]), 0.0) if lam.size else 0.0
    thresh = zero_tol_rel * lam_max
    nonzero = lam[lam > thresh]

    a_opt = float(lam.sum())
    d_opt = float(np.prod(nonzero)) if nonzero.size else None
    e_all = float(lam[-1])
    e_nonzero = float(nonzero[-1]) if nonzero.size else None

    diag = np.diag(q.matrix)
    diag_nonzero = diag[diag > thresh]
    s_opt = None
    if d_opt is not None and diag_nonzero.size:
        s_opt = float(d_opt / np.prod(diag_nonzero))

    witness_violated = None
    witness_threshold = None
    if n_particles is not None and levels is not None:
        witness_threshold = 2.0 * n_particles * (levels - 1)
        witness_violated = a_opt > witness_threshold * (1.0 + _WITNESS_REL_SLACK)

    return CriteriaReport(
        a_opt=a_opt,
        d_opt=d_opt,
        e_opt_all=e_all,
        e_opt_nonzero=e_nonzero,
        s_opt=s_opt,
        s_opt_basis_dependent=True,
        nonzero_count=int(nonzero.size),
        jeffreys_volume=math.sqrt(d_opt) if d_opt is not None and d_opt >= 0 else None,
        zero_tol_rel=zero_tol_rel,
        witness_violated=witness_violated,
        witness_threshold=witness_threshold,
    )


def c_opt(q: Qfim, direction) -> float:
    """Quadratic form V^T F V: the information about the single parameter
    encoded along V.  Bounded by lambda_max |V|^2."""
    v = np.asarray(direction, dtype=float)
    if v.shape != (q.dim_g,):
        raise ValidationError(f"direction must have shape ({q.dim_g},)")
    return float(v @ q.matrix @ v)


def entanglement_witness(q: Qfim, n_particles: int, levels: int) -> WitnessResult:
    """Trace witness over collective su(d): a trace above 2N(d-1) certifies
    inter-particle entanglement; the hint floor(lambda_max / N) estimates the
    certified k-partite depth."""
    trace = q.trace()
    threshold = 2.0 * n_particles * (levels - 1)
    lam_max = q.lambda_max()
    return WitnessResult(
        violated=trace > threshold * (1.0 + _WITNESS_REL_SLACK),
        threshold=threshold,
        trace=trace,
        max_eig=lam_max,
        k_partite_hint=int(math.floor(lam_max / n_particles + 1e-9)),
    )


def avg_response(q: Qfim, eps: float) -> float:
    """Mean squared distance Tr(F)/dim(g) * eps^2/8 of the eps-ball of group
    actions around the identity."""
    return q.trace() / q.dim_g * eps**2 / 8.0


def avg_response_mc(
    rho: DensityMatrix,
    basis: LieBasis,
    eps: float,
    n_samples: int,
    seed: int,
) -> McResponse:
    """Monte Carlo estimate of the average squared Uhlmann distance under
    e^(-i eps G_n) for n uniform on the unit sphere in generator space.

    Valid only in the small-angle regime (eps <= 0.05).
    """
    if eps > 0.05:
        raise RegimeError(f"eps = {eps} is outside the small-angle regime (max 0.05)")
    if n_samples < 100:
        raise RegimeError(f"need at least 100 samples, got {n_samples}")
    rng = np.random.default_rng(seed)
    stacked = basis.stacked()
    values = np.empty(n_samples)
    for i in range(n_samples):
        direction = rng.standard_normal(basis.dim_g)
        direction /= np.linalg.norm(direction)
        h = np.tensordot(direction, stacked, axes=1)
        u = expi(h, eps)
        values[i] = uhlmann_distance_sq(rho, conjugate(rho, u))
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / math.sqrt(n_samples))
    return McResponse(mean, std_error, n_samples, eps, seed)


def sphere_directions(dim: int, n_samples: int, seed: int) -> np.ndarray:
    """Deterministic uniform samples on the unit sphere (Gaussian normalized)."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n_samples, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def a_opt_diagnostic(psi: PureState, basis: LieBasis) -> AOptDiagnostic:
    """First-moment diagnostic of trace optimality for pure states.

    trace_check = 4 zeta - 4 sum_mu <G_mu>^2 equals the QFIM trace for states
    in the highest-weight (symmetric) subspace; it is maximal, 4 zeta, exactly
    when all first moments vanish.
    """
    _, zeta = casimir(basis)
    means = np.array([psi.expectation(g) for g in basis.generators])
    ssm = float(means @ means)
    return AOptDiagnostic(
        sum_sq_means=ssm,
        four_zeta=4.0 * zeta,
        trace_check=4.0 * zeta - 4.0 * ssm,
    )
