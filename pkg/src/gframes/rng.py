"""Counter-based random streams.

Every random draw in the library comes from a Philox generator keyed by
(seed, stream index), so any point of any scenario can be regenerated in
isolation and results do not depend on draw interleaving, thread count, or
call order.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for sub-stream ``index`` of ``seed``; streams never overlap."""
    key = ((seed & _MASK64) << 64) | (index & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex normal array: unit variance, independent entries."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def random_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    """Haar-ish unitary from a QR factorization with the phase fixed."""
    q, r = np.linalg.qr(complex_normal(rng, (k, k)))
    diag = np.diagonal(r)
    phase = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phase
