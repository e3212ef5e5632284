"""Unitary dynamics of the symmetric-qutrit example: one-axis twisting,
the collective two-photon hyperfine rotation, and (alpha, beta) parameter
sweeps of the resulting geometric quantities.

alpha is the accumulated twisting angle chi*t_S of H_S = chi S_z^2 and beta
the accumulated rotation angle Omega*t_R of H_R = Omega Q_3.  Both rotations
act on the N-particle symmetric subspace (dimension (N+1)(N+2)/2).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._linalg import expi_apply
from .basis import (
    DIM_CAP_DEFAULT,
    SymmetricIndex,
    build_spin1_dipole,
    build_su3_collective,
    symmetric_dimension,
)
from .exceptions import DimensionCapError, ValidationError
from .geometry import (
    RANK_REL_DEFAULT,
    full_observable_qfim_trace,
    incompatibility_from_matrices,
    qgt_pure,
)
from .states import PureState, initial_example_state

SWEEP_QUANTITIES = (
    "lambda_max_g1",
    "lambda_max_g2",
    "gamma_g1",
    "gamma_g2",
    "trace_g3",
    "spectrum_g1",
    "spectrum_g2",
)


def evolve(psi: PureState, hamiltonian: np.ndarray, t: float) -> PureState:
    """exp(-i H t) |psi> via Hermitian eigendecomposition."""
    h = np.asarray(hamiltonian, dtype=np.complex128)
    if h.shape != (psi.hilbert_dim, psi.hilbert_dim):
        raise ValidationError(
            f"Hamiltonian shape {h.shape} does not match state dim {psi.hilbert_dim}"
        )
    return PureState(psi.hilbert_dim, expi_apply(h, t, psi.amplitudes))


@lru_cache(maxsize=16)
def _sz_eigenvalues(n_particles: int) -> np.ndarray:
    # S_z is diagonal in the occupation basis with integer eigenvalues
    # n_{+1} - n_{-1}.
    index = SymmetricIndex.build(3, n_particles)
    return np.array([occ[0] - occ[2] for occ in index.occupations], dtype=float)


@lru_cache(maxsize=16)
def _total_spin_eig(n_particles: int):
    basis = build_spin1_dipole(n_particles)
    s_sq = sum(g @ g for g in basis.generators)
    return np.linalg.eigh(s_sq)


@lru_cache(maxsize=16)
def _q3_eig(n_particles: int):
    q3 = build_su3_collective(n_particles).generators[2]
    return np.linalg.eigh(q3)


def oat_unitary_apply(
    psi: PureState, n_particles: int, alpha: float, include_total_spin: bool = False
) -> PureState:
    """One-axis twisting e^(-i alpha S_z^2): a pure phase in the occupation
    basis.  With ``include_total_spin`` the constant-on-eigenspaces e^(-i
    alpha S^2) factor is applied as well."""
    m = _sz_eigenvalues(n_particles)
    if psi.hilbert_dim != m.shape[0]:
        raise ValidationError("state is not on the N-particle symmetric qutrit space")
    amp = np.exp(-1j * alpha * m**2) * psi.amplitudes
    if include_total_spin:
        w, v = _total_spin_eig(n_particles)
        amp = v @ (np.exp(-1j * alpha * w) * (v.conj().T @ amp))
    return PureState(psi.hilbert_dim, amp)


def hyperfine_unitary_apply(psi: PureState, n_particles: int, beta: float) -> PureState:
    """Collective two-photon rotation e^(-i beta Q_3) between |+1> and |-1>."""
    w, v = _q3_eig(n_particles)
    if psi.hilbert_dim != w.shape[0]:
        raise ValidationError("state is not on the N-particle symmetric qutrit space")
    amp = v @ (np.exp(-1j * beta * w) * (v.conj().T @ psi.amplitudes))
    return PureState(psi.hilbert_dim, amp)


def example_state(n_particles: int, alpha: float, beta: float) -> PureState:
    """Twisted-then-rotated probe state of the squeezing example."""
    psi = initial_example_state(n_particles)
    psi = oat_unitary_apply(psi, n_particles, alpha)
    return hyperfine_unitary_apply(psi, n_particles, beta)


@dataclass(frozen=True)
class SweepSpec:
    """Grid specification for an (alpha, beta) sweep."""

    n_particles: int
    alpha_grid: tuple
    beta_grid: tuple
    quantities: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        object.__setattr__(self, "beta_grid", tuple(float(b) for b in self.beta_grid))
        object.__setattr__(self, "quantities", tuple(self.quantities))
        for grid, name in ((self.alpha_grid, "alpha_grid"), (self.beta_grid, "beta_grid")):
            if not grid:
                raise ValidationError(f"{name} must be non-empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValidationError(f"{name} must be strictly increasing")
        unknown = [q for q in self.quantities if q not in SWEEP_QUANTITIES]
        if unknown:
            raise ValidationError(
                f"unknown sweep quantities {unknown}; valid: {list(SWEEP_QUANTITIES)}"
            )
        if not self.quantities:
            raise ValidationError("at least one sweep quantity is required")

    def to_dict(self) -> dict:
        return {
            "N": self.n_particles,
            "alpha_grid": list(self.alpha_grid),
            "beta_grid": list(self.beta_grid),
            "quantities": list(self.quantities),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        return cls(
            n_particles=int(data["N"]),
            alpha_grid=tuple(data["alpha_grid"]),
            beta_grid=tuple(data["beta_grid"]),
            quantities=tuple(data["quantities"]),
        )


@dataclass(frozen=True)
class SweepResult:
    """One record per grid point, in grid order (alpha-major)."""

    spec: SweepSpec
    records: tuple
    metadata: dict = field(default_factory=dict)


def _point_record(psi, alpha, beta, spec, bases, rank_rel):
    record = {"alpha": alpha, "beta": beta}
    for tag in ("g1", "g2"):
        wanted = [q for q in spec.quantities if q.endswith(tag)]
        if not wanted:
            continue
        f, u = qgt_pure(psi, bases[tag])
        eigs = np.linalg.eigvalsh(f)[::-1]
        if f"lambda_max_{tag}" in wanted:
            record[f"lambda_max_{tag}"] = float(eigs[0])
        if f"spectrum_{tag}" in wanted:
            record[f"spectrum_{tag}"] = [float(x) for x in eigs]
        if f"gamma_{tag}" in wanted:
            record[f"gamma_{tag}"] = incompatibility_from_matrices(f, u, rank_rel).gamma
    if "trace_g3" in spec.quantities:
        record["trace_g3"] = full_observable_qfim_trace(psi)
    return record


def run_sweep(
    spec: SweepSpec,
    rank_rel: float = RANK_REL_DEFAULT,
    threads: int = 1,
    cap: int = DIM_CAP_DEFAULT,
) -> SweepResult:
    """Evaluate the requested quantities on every (alpha, beta) grid point.

    Deterministic for a fixed spec; the thread count changes wall time only.
    """
    n = spec.n_particles
    dim = symmetric_dimension(3, n)
    if dim > cap:
        raise DimensionCapError(dim, cap, "symmetric subspace")
    started = time.perf_counter()
    bases = {"g1": build_spin1_dipole(n), "g2": build_su3_collective(n)}
    psi0 = initial_example_state(n)

    def alpha_row(alpha):
        twisted = oat_unitary_apply(psi0, n, alpha)
        return [
            _point_record(
                hyperfine_unitary_apply(twisted, n, beta), alpha, beta, spec, bases, rank_rel
            )
            for beta in spec.beta_grid
        ]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(alpha_row, spec.alpha_grid))
    else:
        rows = [alpha_row(a) for a in spec.alpha_grid]

    records = tuple(rec for row in rows for rec in row)
    metadata = {
        "cutoffs": {"rank_rel": rank_rel},
        "runtime_s": time.perf_counter() - started,
        "n_particles": n,
        "hilbert_dim": dim,
    }
    return SweepResult(spec, records, metadata)
