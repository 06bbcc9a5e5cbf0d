"""Matrix *-algebra layer: adjoints, positivity, the semidefinite order,
square roots and norms of square complex matrices.

The norm is the largest singular value, so the C*-identity
``alg_norm(a* a) == alg_norm(a)**2`` holds up to roundoff.  Positivity is
decided on the Hermitian part with a tolerance scaled by ``max(1, norm)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositive

# Default working tolerance, relative; every predicate takes an override.
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A square complex matrix, immutable after construction."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int) -> "AlgebraElement":
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def zero(cls, n: int) -> "AlgebraElement":
        return cls(np.zeros((n, n), dtype=np.complex128))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_dim(self, other)
        return AlgebraElement(self.entries + other.entries)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_dim(self, other)
        return AlgebraElement(self.entries - other.entries)

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same_dim(self, other)
        return AlgebraElement(self.entries @ other.entries)

    def __mul__(self, scalar) -> "AlgebraElement":
        return AlgebraElement(self.entries * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(-self.entries)


def _check_same_dim(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def alg_adjoint(a: AlgebraElement) -> AlgebraElement:
    """Conjugate transpose."""
    return AlgebraElement(a.entries.conj().T)


def alg_norm(a: AlgebraElement) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(a.entries, 2))


def is_positive(a: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefinite within ``tol``: Hermitian up to ``tol * max(1, norm)``
    and smallest eigenvalue of the Hermitian part >= ``-tol * max(1, norm)``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    scale = max(1.0, alg_norm(a))
    asym = float(np.linalg.norm(a.entries - a.entries.conj().T, 2))
    if asym > tol * scale:
        return False
    lo = float(np.linalg.eigvalsh(_hermitian_part(a.entries))[0])
    return lo >= -tol * scale


def loewner_leq(a: AlgebraElement, b: AlgebraElement, tol: float = DEFAULT_TOL) -> bool:
    """Semidefinite order: true iff ``b - a`` is positive within ``tol``."""
    _check_same_dim(a, b)
    return is_positive(b - a, tol)


def alg_sqrt(a: AlgebraElement, tol: float = DEFAULT_TOL) -> AlgebraElement:
    """Positive square root of a positive element via an eigendecomposition.

    Raises ``NotPositive`` if ``a`` fails ``is_positive`` at ``tol``.  Eigenvalues
    pushed below zero by roundoff are clamped to zero before the square root, so
    the result is always Hermitian positive semidefinite.
    """
    if not is_positive(a, tol):
        raise NotPositive(f"element is not positive within tol={tol}")
    w, v = np.linalg.eigh(_hermitian_part(a.entries))
    w = np.clip(w, 0.0, None)
    return AlgebraElement((v * np.sqrt(w)) @ v.conj().T)
