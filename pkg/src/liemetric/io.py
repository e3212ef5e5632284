"""JSON/CSV serialization of bases, states, matrices and sweep results.

Floats are emitted through Python's shortest round-trip repr, so JSON
round-trips are numerically exact.  Complex matrices are stored as row-major
lists of [re, im] pairs.
"""

from __future__ import annotations

import csv
import io as _io
import json

import numpy as np

from .basis import LieBasis
from .criteria import CriteriaReport, WitnessResult
from .dynamics import SweepResult, SweepSpec
from .exceptions import ConfigError
from .geometry import IncompatibilityResult, Qfim, Uct
from .states import DensityMatrix, PureState


def complex_to_pairs(array: np.ndarray) -> list:
    """Row-major [re, im] pairs of a complex array."""
    flat = np.asarray(array, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_complex(pairs, shape) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return flat.reshape(shape)


def real_matrix_to_lists(m: np.ndarray) -> list:
    return [[float(x) for x in row] for row in np.asarray(m, dtype=float)]


def basis_to_jsonable(basis: LieBasis) -> dict:
    return {
        "name": basis.name,
        "d": basis.d,
        "N": basis.n_particles,
        "D": basis.hilbert_dim,
        "C": basis.norm_constant,
        "generators": [complex_to_pairs(g) for g in basis.generators],
    }


def basis_from_jsonable(data: dict) -> LieBasis:
    dim = int(data["D"])
    gens = tuple(pairs_to_complex(g, (dim, dim)) for g in data["generators"])
    return LieBasis(
        name=data["name"],
        hilbert_dim=dim,
        generators=gens,
        norm_constant=float(data["C"]),
        d=data.get("d"),
        n_particles=data.get("N"),
    )


def pure_state_to_jsonable(psi: PureState) -> dict:
    return {"D": psi.hilbert_dim, "amplitudes": complex_to_pairs(psi.amplitudes)}


def pure_state_from_jsonable(data: dict) -> PureState:
    dim = int(data["D"])
    return PureState(dim, pairs_to_complex(data["amplitudes"], (dim,)))


def density_to_jsonable(rho: DensityMatrix) -> dict:
    return {"D": rho.hilbert_dim, "entries": complex_to_pairs(rho.entries)}


def density_from_jsonable(data: dict) -> DensityMatrix:
    dim = int(data["D"])
    return DensityMatrix(dim, pairs_to_complex(data["entries"], (dim, dim)))


def qfim_to_jsonable(q: Qfim, cutoffs: dict | None = None) -> dict:
    return {
        "basis": q.basis_name,
        "matrix": real_matrix_to_lists(q.matrix),
        "eigenvalues": [float(x) for x in q.eigenvalues],
        "eigenvectors": real_matrix_to_lists(q.eigenvectors),
        "cutoffs": dict(cutoffs or {}, rho_support_rel=q.cutoff),
    }


def uct_to_jsonable(u: Uct, cutoffs: dict | None = None) -> dict:
    return {
        "basis": u.basis_name,
        "matrix": real_matrix_to_lists(u.matrix),
        "cutoffs": dict(cutoffs or {}, rho_support_rel=u.cutoff),
    }


def incompatibility_to_jsonable(r: IncompatibilityResult) -> dict:
    return {
        "gamma": r.gamma,
        "raised_eigenvalues": [float(x) for x in r.raised_eigenvalues],
        "rank_cutoff": r.rank_cutoff,
    }


def criteria_to_jsonable(report: CriteriaReport) -> dict:
    return {
        "a_opt": report.a_opt,
        "d_opt": report.d_opt,
        "e_opt_all": report.e_opt_all,
        "e_opt_nonzero": report.e_opt_nonzero,
        "s_opt": report.s_opt,
        "s_opt_basis_dependent": report.s_opt_basis_dependent,
        "nonzero_count": report.nonzero_count,
        "jeffreys_volume": report.jeffreys_volume,
        "zero_tol_rel": report.zero_tol_rel,
        "witness_violated": report.witness_violated,
        "witness_threshold": report.witness_threshold,
    }


def witness_to_jsonable(w: WitnessResult) -> dict:
    return {
        "violated": w.violated,
        "threshold": w.threshold,
        "trace": w.trace,
        "max_eig": w.max_eig,
        "k_partite_hint": w.k_partite_hint,
    }


def _record_columns(spec: SweepSpec) -> list:
    cols = []
    for q in spec.quantities:
        if q.startswith("spectrum_"):
            dim = 3 if q.endswith("g1") else 8
            cols.extend(f"{q}_{i}" for i in range(dim))
        else:
            cols.append(q)
    return cols


def sweep_result_to_jsonable(result: SweepResult, metadata: dict | None = None) -> dict:
    return {
        "spec": result.spec.to_dict(),
        "records": list(result.records),
        "metadata": dict(result.metadata, **(metadata or {})),
    }


def sweep_result_to_csv(result: SweepResult) -> str:
    """RFC-4180-style CSV with one row per grid point; spectra are expanded
    into indexed columns."""
    buf = _io.StringIO()
    cols = ["alpha", "beta"] + _record_columns(result.spec)
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for rec in result.records:
        row = []
        for col in cols:
            if col in rec:
                row.append(repr(rec[col]))
            else:
                base, _, idx = col.rpartition("_")
                row.append(repr(rec[base][int(idx)]))
        writer.writerow(row)
    return buf.getvalue()


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON from {path}: {exc}") from exc


def dump_json(obj, path: str | None = None) -> str:
    text = json.dumps(obj, indent=2, allow_nan=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
