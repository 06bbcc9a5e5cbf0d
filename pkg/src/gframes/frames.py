"""Weighted operator families and their frame operator.

A family is a finite set of weighted points, each carrying an operator from
the common module into its own block-vector space.  The frame operator is
the weighted sum of gram terms ``adjoint(lam) o lam``; the family is a frame
exactly when that operator's spectrum is bounded away from zero, and the
optimal bounds are its extreme eigenvalues.  Sums over points are always
accumulated in point order so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, loewner_leq
from .errors import NotAFrame
from .module_space import ModuleVector, inner
from .operators import ModuleOperator, op_apply
from .rng import complex_normal, stream

# A family counts as a frame when lambda_min exceeds this fraction of lambda_max.
FRAME_TOL_RELATIVE = 1e-8

FRAME = "frame"
BESSEL_ONLY = "bessel_only"
NOT_BESSEL = "not_bessel"  # unreachable for finite families; kept for reports


@dataclass(frozen=True, eq=False)
class MeasurePoint:
    """One weighted point: a positive weight and the operator attached to it."""

    weight: float
    lam: ModuleOperator

    def __post_init__(self):
        w = float(self.weight)
        if not np.isfinite(w) or w <= 0:
            raise ValueError(f"weight must be positive and finite, got {self.weight}")
        object.__setattr__(self, "weight", w)

    @property
    def codomain_rank(self) -> int:
        return self.lam.codomain_rank


@dataclass(frozen=True, eq=False)
class GFrameFamily:
    """A finite weighted family of operators out of a common module."""

    algebra_dim: int
    module_rank: int
    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ValueError("a family needs at least one point")
        for i, p in enumerate(pts):
            if p.lam.algebra_dim != self.algebra_dim or p.lam.domain_rank != self.module_rank:
                raise ValueError(
                    f"point {i} operator domain ({p.lam.algebra_dim}, {p.lam.domain_rank}) "
                    f"does not match family ({self.algebra_dim}, {self.module_rank})")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float


@dataclass(frozen=True, eq=False)
class FrameVerdict:
    """Classification outcome; ``bounds`` is present exactly for frames and
    ``witnesses`` records the extreme eigenvalues either way."""

    kind: str
    bounds: FrameBounds | None
    witnesses: dict


def frame_operator(family: GFrameFamily) -> ModuleOperator:
    """Weighted sum of ``adjoint(lam) o lam`` over points, in point order."""
    n, d = family.algebra_dim, family.module_rank
    acc = np.zeros((d * n, d * n), dtype=np.complex128)
    for p in family.points:
        l = p.lam.action
        acc = acc + p.weight * (l @ l.conj().T)
    return ModuleOperator(n, d, d, acc)


def _spectrum(op: ModuleOperator) -> tuple[float, float]:
    h = 0.5 * (op.action + op.action.conj().T)
    w = np.linalg.eigvalsh(h)
    return float(w[0]), float(w[-1])


def _frame_threshold(lambda_max: float, tol: float | None) -> float:
    # tol=None means the relative default; an explicit tol is absolute.
    return FRAME_TOL_RELATIVE * lambda_max if tol is None else tol


def optimal_bounds(family: GFrameFamily, tol: float | None = None) -> FrameBounds:
    """Extreme eigenvalues of the frame operator; ``NotAFrame`` if the lower
    one does not clear the threshold."""
    lo, hi = _spectrum(frame_operator(family))
    if lo <= _frame_threshold(hi, tol):
        raise NotAFrame(f"lower spectral edge {lo:.3e} is not positive")
    return FrameBounds(lo, hi)


def classify(family: GFrameFamily, tol: float | None = None) -> FrameVerdict:
    """Frame / Bessel-only verdict from the frame operator's spectrum."""
    lo, hi = _spectrum(frame_operator(family))
    witnesses = {"lambda_min": lo, "lambda_max": hi}
    if lo > _frame_threshold(hi, tol):
        return FrameVerdict(FRAME, FrameBounds(lo, hi), witnesses)
    return FrameVerdict(BESSEL_ONLY, None, witnesses)


def sandwich_sum(family: GFrameFamily, x: ModuleVector):
    """Pointwise-accumulated energy ``sum_w weight * inner(lam_w x, lam_w x)``.

    Deliberately sums per-point inner products instead of using the assembled
    frame operator, so checks against it exercise an independent path.
    """
    acc = None
    for p in family.points:
        lx = op_apply(p.lam, x)
        term = p.weight * inner(lx, lx)
        acc = term if acc is None else acc + term
    return acc


def check_sandwich(family: GFrameFamily, lower: float, upper: float,
                   samples: int, seed: int, tol: float = DEFAULT_TOL) -> bool:
    """Test the algebra-valued two-sided bound on ``samples`` seeded random
    vectors: ``lower * inner(x,x) <= sandwich_sum(x) <= upper * inner(x,x)``."""
    if lower <= 0 or upper <= 0:
        raise ValueError("bounds must be positive")
    if samples < 1:
        raise ValueError("need at least one sample")
    n, d = family.algebra_dim, family.module_rank
    rng = stream(seed, 0)
    for _ in range(samples):
        x = ModuleVector(n, d, complex_normal(rng, (n, d * n)))
        xx = inner(x, x)
        val = sandwich_sum(family, x)
        if not (loewner_leq(lower * xx, val, tol) and loewner_leq(val, upper * xx, tol)):
            return False
    return True
