"""Controlled frame machinery: two positive invertible controls bracket the
family, giving the controlled operator ``sum_w weight * c (gram_w) c'`` with
the first control applied before each point operator and the second after
each adjoint.

Everything here is gated on a commutation certificate: the controls must
commute with each other and with every gram term ``adjoint(lam_w) o lam_w``.
Under that certificate the controlled operator is Hermitian, equals the
conjugation of the plain frame operator by ``sqrt(c c')``, and factors
through the synthesis and analysis maps below.

Weighting convention: the coefficient space stacks one block-vector per
point; its inner product carries the point weights, so the stacked matrix
representation of synthesis scales each block row by ``sqrt(weight)``.  The
per-point ``synthesis`` / ``analysis`` APIs work with unweighted coefficient
lists and put the weights into the sums, matching the defining formulas.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL
from .errors import (CommutationViolated, MeasureMismatch, NotAFrame,
                     PreconditionViolated)
from .frames import (BESSEL_ONLY, FRAME, FrameBounds, FrameVerdict,
                     GFrameFamily, _frame_threshold, _spectrum, frame_operator)
from .module_space import ModuleVector, vec_norm
from .operators import (ModuleOperator, PositiveInvertibleOperator,
                        SURJECTIVITY_TOL, is_bounded_below, op_adjoint,
                        op_norm)


@dataclass(frozen=True, eq=False)
class CommutationReport:
    """Commutator norms backing the certificate: controls against each other
    and each control against every gram term, relative to the factor norms."""

    cc_commutator: float
    per_point: tuple
    tol: float
    passed: bool


@dataclass(frozen=True, eq=False)
class ControlPair:
    """Two certified positive invertible controls with the square root of
    their product cached.  ``product_sqrt`` is only meaningful when the
    commutation certificate passed."""

    c: PositiveInvertibleOperator
    cp: PositiveInvertibleOperator
    product_sqrt: ModuleOperator
    commutation: CommutationReport


@dataclass(frozen=True, eq=False)
class ControlledScenario:
    """A family together with a control pair certified against it."""

    family: GFrameFamily
    pair: ControlPair

    def __post_init__(self):
        f, c = self.family, self.pair.c.base
        if c.algebra_dim != f.algebra_dim or c.domain_rank != f.module_rank:
            raise ValueError("control shape does not match the family")


def _rel_commutator(a: np.ndarray, b: np.ndarray) -> float:
    num = float(np.linalg.norm(a @ b - b @ a, 2))
    scale = max(1.0, float(np.linalg.norm(a, 2)) * float(np.linalg.norm(b, 2)))
    return num / scale


def validate_commutation(family: GFrameFamily, c: PositiveInvertibleOperator,
                         cp: PositiveInvertibleOperator,
                         tol: float = DEFAULT_TOL) -> CommutationReport:
    """Measure every commutator the controlled formulas rely on.

    Never raises; the report carries the verdict so callers can decide.
    """
    ca, cpa = c.base.action, cp.base.action
    cc = _rel_commutator(ca, cpa)
    rows = []
    for p in family.points:
        l = p.lam.action
        gram = l @ l.conj().T
        rows.append((_rel_commutator(ca, gram), _rel_commutator(cpa, gram)))
    entries = [cc] + [r for pair in rows for r in pair]
    passed = all(e <= tol for e in entries)
    return CommutationReport(cc, tuple(rows), tol, passed)


def make_control_pair(family: GFrameFamily, c: PositiveInvertibleOperator,
                      cp: PositiveInvertibleOperator,
                      tol: float = DEFAULT_TOL) -> ControlPair:
    """Bundle two controls with their product square root and the commutation
    report against ``family``."""
    ca, cpa = c.base.action, cp.base.action
    if ca.shape != cpa.shape:
        raise ValueError("controls must act on the same space")
    product = cpa @ ca  # right-action matrix of the composition c o cp
    w, v = np.linalg.eigh(0.5 * (product + product.conj().T))
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    product_sqrt = ModuleOperator(c.base.algebra_dim, c.base.domain_rank,
                                  c.base.domain_rank, root)
    report = validate_commutation(family, c, cp, tol)
    return ControlPair(c, cp, product_sqrt, report)


def make_scenario(family: GFrameFamily, c: PositiveInvertibleOperator,
                  cp: PositiveInvertibleOperator,
                  tol: float = DEFAULT_TOL) -> ControlledScenario:
    return ControlledScenario(family, make_control_pair(family, c, cp, tol))


def _require_certificate(pair: ControlPair) -> None:
    if not pair.commutation.passed:
        worst = max([pair.commutation.cc_commutator]
                    + [r for row in pair.commutation.per_point for r in row])
        raise CommutationViolated(
            f"commutation certificate failed (worst relative commutator "
            f"{worst:.3e} > tol {pair.commutation.tol:.3e})")


def controlled_frame_operator(scenario: ControlledScenario) -> ModuleOperator:
    """``sum_w weight * c (gram_w) c'`` accumulated in point order."""
    _require_certificate(scenario.pair)
    f = scenario.family
    ca = scenario.pair.c.base.action
    cpa = scenario.pair.cp.base.action
    n, d = f.algebra_dim, f.module_rank
    acc = np.zeros((d * n, d * n), dtype=np.complex128)
    for p in f.points:
        l = p.lam.action
        acc = acc + p.weight * (ca @ (l @ l.conj().T) @ cpa)
    return ModuleOperator(n, d, d, acc)


def controlled_classify(scenario: ControlledScenario,
                        tol: float | None = None) -> FrameVerdict:
    """Frame / Bessel-only verdict for the controlled operator.

    Witnesses carry the controlled extremes plus the plain family's upper
    spectral edge, so both Bessel bounds are reported side by side.
    """
    sc = controlled_frame_operator(scenario)
    lo, hi = _spectrum(sc)
    _, plain_hi = _spectrum(frame_operator(scenario.family))
    witnesses = {"lambda_min": lo, "lambda_max": hi,
                 "uncontrolled_bessel_bound": plain_hi}
    if lo > _frame_threshold(hi, tol):
        return FrameVerdict(FRAME, FrameBounds(lo, hi), witnesses)
    return FrameVerdict(BESSEL_ONLY, None, witnesses)


def synthesis(scenario: ControlledScenario,
              coefficients: Sequence[ModuleVector]) -> ModuleVector:
    """Weighted sum ``sum_w weight * sqrt(c c') adjoint(lam_w) y_w`` mapping a
    coefficient list back into the module."""
    _require_certificate(scenario.pair)
    f = scenario.family
    if len(coefficients) != f.size:
        raise ValueError(f"expected {f.size} coefficient vectors, got {len(coefficients)}")
    p_act = scenario.pair.product_sqrt.action
    n, d = f.algebra_dim, f.module_rank
    acc = np.zeros((n, d * n), dtype=np.complex128)
    for p, y in zip(f.points, coefficients):
        if y.algebra_dim != n or y.rank != p.codomain_rank:
            raise ValueError(
                f"coefficient shape ({y.algebra_dim}, {y.rank}) does not match "
                f"point codomain ({n}, {p.codomain_rank})")
        acc = acc + p.weight * (y.flat @ (p.lam.action.conj().T @ p_act))
    return ModuleVector(n, d, acc)


def analysis(scenario: ControlledScenario, x: ModuleVector) -> list[ModuleVector]:
    """Coefficient list ``[lam_w (sqrt(c c') x)]`` of a module vector."""
    _require_certificate(scenario.pair)
    f = scenario.family
    if x.algebra_dim != f.algebra_dim or x.rank != f.module_rank:
        raise ValueError("vector does not live in the family's module")
    xp = x.flat @ scenario.pair.product_sqrt.action
    return [ModuleVector(f.algebra_dim, p.codomain_rank, xp @ p.lam.action)
            for p in f.points]


def synthesis_operator(scenario: ControlledScenario) -> ModuleOperator:
    """Synthesis as one stacked operator from the weighted coefficient space.

    Block row w is ``sqrt(weight_w) * adjoint(lam_w).action @ product_sqrt``;
    with the sqrt-weight convention its Gram ``t* t`` reproduces the
    controlled frame operator and its norm is the true synthesis norm.
    """
    _require_certificate(scenario.pair)
    f = scenario.family
    p_act = scenario.pair.product_sqrt.action
    blocks = [np.sqrt(p.weight) * (p.lam.action.conj().T @ p_act) for p in f.points]
    stacked = np.vstack(blocks)
    total_rank = sum(p.codomain_rank for p in f.points)
    return ModuleOperator(f.algebra_dim, total_rank, f.module_rank, stacked)


def synthesis_norm_check(scenario: ControlledScenario,
                         tol: float = 1e-8) -> bool:
    """Check the synthesis norm against the controlled upper bound:
    ``op_norm(synthesis) <= sqrt(lambda_max) + tol * scale``."""
    hi = _spectrum(controlled_frame_operator(scenario))[1]
    sigma = op_norm(synthesis_operator(scenario))
    root = float(np.sqrt(max(hi, 0.0)))
    return sigma <= root + tol * max(1.0, root)


@dataclass(frozen=True)
class CrossAdjointDiagnostic:
    """Relative residuals of the true adjoint against the two printed
    closed forms (controls swapped between them)."""

    statement_residual: float
    proof_residual: float
    matches_statement: bool
    matches_proof: bool


def _check_same_measure(lam: GFrameFamily, gam: GFrameFamily) -> None:
    if lam.algebra_dim != gam.algebra_dim or lam.module_rank != gam.module_rank:
        raise MeasureMismatch("families live over different modules")
    if lam.size != gam.size:
        raise MeasureMismatch(f"point counts differ: {lam.size} vs {gam.size}")
    for i, (p, q) in enumerate(zip(lam.points, gam.points)):
        if p.weight != q.weight:
            raise MeasureMismatch(f"weights differ at point {i}")
        if p.codomain_rank != q.codomain_rank:
            raise MeasureMismatch(f"codomain ranks differ at point {i}")


def _require_pair_on(family: GFrameFamily, pair: ControlPair,
                     what: str) -> CommutationReport:
    report = validate_commutation(family, pair.c, pair.cp, pair.commutation.tol)
    if not report.passed:
        raise CommutationViolated(f"controls do not commute with the {what} family")
    return report


def cross_operator(lam: GFrameFamily, gam: GFrameFamily,
                   pair: ControlPair) -> ModuleOperator:
    """Mixed operator ``sum_w weight * c adjoint(gam_w) lam_w c'`` of two
    families sharing the same weighted points."""
    _check_same_measure(lam, gam)
    _require_pair_on(lam, pair, "first")
    _require_pair_on(gam, pair, "second")
    ca, cpa = pair.c.base.action, pair.cp.base.action
    n, d = lam.algebra_dim, lam.module_rank
    acc = np.zeros((d * n, d * n), dtype=np.complex128)
    for p, q in zip(lam.points, gam.points):
        acc = acc + p.weight * (ca @ p.lam.action @ q.lam.action.conj().T @ cpa)
    return ModuleOperator(n, d, d, acc)


def cross_adjoint_resolve(lam: GFrameFamily, gam: GFrameFamily,
                          pair: ControlPair, tol: float = 1e-10
                          ) -> tuple[ModuleOperator, CrossAdjointDiagnostic]:
    """True adjoint of the cross operator plus residuals against both closed
    forms in circulation: controls in original order around the swapped
    family product, and controls swapped.

    The swapped-controls form is the conjugate transpose term by term, so its
    residual is roundoff; the original-order form only matches when the
    controls also commute with the mixed products, which the certificate does
    not guarantee.  Both residuals are reported rather than picking one.
    """
    cross = cross_operator(lam, gam, pair)
    adj = op_adjoint(cross)
    ca, cpa = pair.c.base.action, pair.cp.base.action
    n, d = lam.algebra_dim, lam.module_rank
    stmt = np.zeros((d * n, d * n), dtype=np.complex128)
    proof = np.zeros((d * n, d * n), dtype=np.complex128)
    for p, q in zip(lam.points, gam.points):
        mixed = q.lam.action @ p.lam.action.conj().T
        stmt = stmt + p.weight * (ca @ mixed @ cpa)
        proof = proof + p.weight * (cpa @ mixed @ ca)
    scale = max(1.0, float(np.linalg.norm(adj.action, 2)))
    r_stmt = float(np.linalg.norm(adj.action - stmt, 2)) / scale
    r_proof = float(np.linalg.norm(adj.action - proof, 2)) / scale
    diag = CrossAdjointDiagnostic(r_stmt, r_proof, r_stmt <= tol, r_proof <= tol)
    return adj, diag


def bounds_plain_from_cc(lower: float, upper: float,
                         c: PositiveInvertibleOperator) -> FrameBounds:
    """Transfer bounds of a same-control controlled frame to the plain family:
    ``(lower / norm(c)^2, upper * norm(c^-1)^2)``.  Valid, not tight."""
    if lower <= 0 or upper <= 0:
        raise ValueError("bounds must be positive")
    nc = op_norm(c.base)
    ninv = op_norm(c.inverse)
    return FrameBounds(lower / (nc * nc), upper * (ninv * ninv))


def bounds_cc_from_plain(lower: float, upper: float,
                         c: PositiveInvertibleOperator) -> FrameBounds:
    """Transfer plain frame bounds to the same-control controlled family:
    ``(lower / norm(c^-1)^2, upper * norm(c)^2)``.  Valid, not tight."""
    if lower <= 0 or upper <= 0:
        raise ValueError("bounds must be positive")
    nc = op_norm(c.base)
    ninv = op_norm(c.inverse)
    return FrameBounds(lower / (ninv * ninv), upper * (nc * nc))


@dataclass(frozen=True)
class TransferResult:
    surjective: bool
    gamma_lower_bound: float | None


def surjectivity_transfer(lam: GFrameFamily, gam: GFrameFamily,
                          pair: ControlPair,
                          tol: float = SURJECTIVITY_TOL) -> TransferResult:
    """If the mixed operator of a controlled frame (first family) against a
    second family is surjective, produce an explicit lower bound for the
    second family's controlled operator.

    The bound is ``m = 1 / norm(inverse of (k k*))`` for the second family's
    stacked synthesis ``k``; the sandwich ``m * id <= controlled operator`` is
    verified before returning.  Raises ``PreconditionViolated`` naming the
    failing hypothesis, or ``CommutationViolated`` from the certificate.
    """
    _check_same_measure(lam, gam)
    rep_lam = _require_pair_on(lam, pair, "first")
    rep_gam = _require_pair_on(gam, pair, "second")
    pair_lam = dataclasses.replace(pair, commutation=rep_lam)
    pair_gam = dataclasses.replace(pair, commutation=rep_gam)
    verdict = controlled_classify(ControlledScenario(lam, pair_lam))
    if verdict.kind != FRAME:
        raise PreconditionViolated("first family is not a controlled frame")
    cross = cross_operator(lam, gam, pair)
    ok, _ = is_bounded_below(op_adjoint(cross), tol)
    if not ok:
        return TransferResult(False, None)
    scen_gam = ControlledScenario(gam, pair_gam)
    k = synthesis_operator(scen_gam)
    gram = k.action.conj().T @ k.action
    m = float(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))[0])
    m = max(m, 0.0)
    sc = controlled_frame_operator(scen_gam)
    lo = _spectrum(sc)[0]
    if lo < m - tol * max(1.0, m):
        raise ArithmeticError(
            f"derived bound {m:.6e} exceeds the spectral floor {lo:.6e}")
    return TransferResult(True, m)


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    xhat: ModuleVector
    error: float


def reconstruct(scenario: ControlledScenario, x: ModuleVector,
                tol: float | None = None) -> ReconstructionResult:
    """Round-trip a vector through analysis, synthesis, and the inverse of the
    controlled operator; returns the reconstruction and its norm error.

    Raises ``NotAFrame`` when the controlled verdict is not a frame.
    """
    verdict = controlled_classify(scenario, tol)
    if verdict.kind != FRAME:
        raise NotAFrame("reconstruction requires a controlled frame")
    y = synthesis(scenario, analysis(scenario, x))
    sc = controlled_frame_operator(scenario)
    # y.flat @ inverse(sc.action), via a solve against the transposed action
    xhat_flat = np.linalg.solve(sc.action.T, y.flat.T).T
    xhat = ModuleVector(x.algebra_dim, x.rank, xhat_flat)
    return ReconstructionResult(xhat, vec_norm(x - xhat))
