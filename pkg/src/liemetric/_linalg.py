"""Small dense linear-algebra helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .exceptions import NumericalError, ValidationError


def as_complex_matrix(a, name="matrix") -> np.ndarray:
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


def readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_residual(a: np.ndarray) -> float:
    return max_abs(a - dagger(a))


def require_hermitian(a: np.ndarray, tol: float, name="matrix") -> np.ndarray:
    res = hermiticity_residual(a)
    if res > tol:
        raise ValidationError(f"{name} is not Hermitian (residual {res:.3e} > {tol:.0e})")
    return a


def hermitian_sqrt(a: np.ndarray, clamp_tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix via eigendecomposition.

    Eigenvalues in [-clamp_tol, 0) are clamped to zero; anything more
    negative raises, since the input was supposed to be PSD.
    """
    w, v = np.linalg.eigh(a)
    if w.min(initial=0.0) < -clamp_tol:
        raise NumericalError(f"matrix has negative eigenvalue {w.min():.3e}; not PSD")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def expi_apply(h: np.ndarray, t: float, vec: np.ndarray) -> np.ndarray:
    """Apply exp(-i h t) to a vector, with h Hermitian."""
    w, v = np.linalg.eigh(h)
    return v @ (np.exp(-1j * w * t) * (dagger(v) @ vec))


def expi(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h, as a dense unitary."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """Tr(a b) without forming the product matrix."""
    return complex(np.sum(a * b.T))


def real_part(z, tol: float = 1e-9, what="value") -> float:
    """Real part of a value that must be real up to numerical noise."""
    z = complex(z)
    if abs(z.imag) > tol * max(1.0, abs(z.real)):
        raise NumericalError(f"{what} has non-negligible imaginary part {z.imag:.3e}")
    return z.real
