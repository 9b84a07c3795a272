"""Completion theory for (N-1) x N partial Hadamard matrices.

The rows of such a matrix leave a one-dimensional orthogonal complement,
spanned by the cofactor vector Z with Z_j = (-1)^j * conj(det H^(j)), where
H^(j) drops column j (j is 1-based, matching the sign convention that makes
the N = 2 case complete to a valid Hadamard matrix).  The matrix completes to
an N x N complex Hadamard matrix exactly when the minor moduli |det H^(j)|
are constant in j, in which case they all equal N^(N/2 - 1) and the missing
row is ``(-1)^j * N^(1 - N/2) * conj(det H^(j))``.

Two further tests decide whether the associated rank-one projection grid
completes to a magic grid: the Gram test (``G - (N-2)`` must be a projection,
where G collects squared column inner products over N) and the weighted test
(``H D H* = c`` with D the diagonal of |Z_j|^2).  Whether all these
conditions are mutually equivalent is empirically probed, never assumed.

Tolerances on determinant moduli scale with N^(N/2 - 1), since that is the
natural magnitude of the minors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import DEFAULT_TOL, spectral_norm
from .errors import IllConditioned, NotCompletable, NotHadamard
from .torus import TorusMatrix, TorusScalar, is_partial_hadamard, minor_det

__all__ = [
    "KernelData",
    "ModulusProfile",
    "WeightedResult",
    "kernel_vector",
    "modulus_profile",
    "complete_row",
    "gram_criterion",
    "weighted_criterion",
]


@dataclass(frozen=True)
class KernelData:
    """Cofactor kernel vector of an (N-1) x N matrix.

    ``z`` spans the orthogonal complement of the rows; ``minors[j-1]`` is
    det H^(j) and ``moduli`` its absolute values (equal to |z| entrywise).
    """

    z: np.ndarray
    minors: np.ndarray
    moduli: np.ndarray


@dataclass(frozen=True)
class ModulusProfile:
    """Minor determinant moduli |det H^(j)| and the two derived flags:
    ``constant`` (all moduli agree within tol * N^(N/2-1), equivalent to
    completability) and ``hadamard_value`` (all moduli sit at N^(N/2-1))."""

    moduli: tuple[float, ...]
    constant: bool
    hadamard_value: bool


@dataclass(frozen=True)
class WeightedResult:
    """Outcome of the weighted column test: ``H D H*`` must be ``c`` times the
    identity with c the total squared kernel mass."""

    passes: bool
    c: float
    deviation: float


def _require_shape(h: TorusMatrix) -> int:
    if h.rows != h.cols - 1:
        raise ValueError(
            f"completion theory needs an (N-1) x N matrix, got {h.rows} x {h.cols}"
        )
    return h.cols


def _kernel(h: TorusMatrix, tol: float) -> KernelData:
    """Cofactor kernel data without the partial Hadamard precondition check."""
    n = _require_shape(h)
    minors = np.array([minor_det(h, j) for j in range(1, n + 1)], dtype=complex)
    signs = np.array([(-1) ** j for j in range(1, n + 1)], dtype=float)
    z = signs * minors.conj()
    # The cofactor identity makes <R_i, z> an N x N determinant with a
    # repeated row, hence zero; deviations beyond rounding mean the minor
    # determinants themselves are unreliable.
    residual = float(np.abs(h.to_complex() @ z.conj()).max())
    allowance = max(tol, 1e3 * np.finfo(float).eps) * n ** (n / 2.0)
    if residual > allowance:
        raise IllConditioned(
            f"kernel vector fails row orthogonality: residual {residual:.3e} "
            f"exceeds {allowance:.3e}"
        )
    return KernelData(z=z, minors=minors, moduli=np.abs(minors))


def kernel_vector(h: TorusMatrix, *, tol: float = DEFAULT_TOL) -> KernelData:
    """Kernel vector of a certified (N-1) x N partial Hadamard matrix.

    ``z_j = (-1)^j * conj(det H^(j))``; orthogonality against every row is
    verified internally at a scale of N^(N/2).
    """
    report = is_partial_hadamard(h, tol)
    if not report.ok:
        raise NotHadamard(
            f"not partial Hadamard at tol {tol}: worst pair {report.worst_pair}, "
            f"value {report.worst_value:.3e}",
            report=report,
        )
    return _kernel(h, tol)


def modulus_profile(h: TorusMatrix, tol: float = DEFAULT_TOL) -> ModulusProfile:
    """Report all |det H^(j)| together with the constancy flags.

    ``constant`` is the completability test; ``hadamard_value`` additionally
    pins the common value at N^(N/2-1).  Both comparisons are relative to
    N^(N/2-1).
    """
    n = _require_shape(h)
    moduli = np.abs([minor_det(h, j) for j in range(1, n + 1)])
    scale = n ** (n / 2.0 - 1.0)
    constant = bool(moduli.max() - moduli.min() <= tol * scale)
    hadamard_value = bool(np.abs(moduli - scale).max() <= tol * scale)
    return ModulusProfile(
        moduli=tuple(float(v) for v in moduli),
        constant=constant,
        hadamard_value=hadamard_value,
    )


def complete_row(h: TorusMatrix, *, tol: float = DEFAULT_TOL) -> TorusMatrix:
    """Append the unique completing row to an (N-1) x N partial Hadamard
    matrix: ``H[N, j] = (-1)^j * N^(1 - N/2) * conj(det H^(j))``.

    Requires a constant modulus profile; the profile travels on the
    :class:`NotCompletable` witness otherwise.  Existing rows are preserved
    bit-exactly; the appended row is float, so the result is a float matrix.
    """
    n = _require_shape(h)
    profile = modulus_profile(h, tol)
    if not profile.constant:
        raise NotCompletable(
            f"minor moduli are not constant: {profile.moduli}", witness=profile
        )
    data = _kernel(h, tol)
    row = n ** (1.0 - n / 2.0) * data.z
    try:
        new_row = [TorusScalar.from_complex(z) for z in row]
    except ValueError as exc:
        raise NotCompletable(
            f"appended row is not unit-modulus: {exc}", witness=profile
        ) from exc
    return TorusMatrix(list(h.entries) + [new_row])


def gram_criterion(h: TorusMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Projection test on the column Gram data.

    With ``G[k, l] = |<C_k, C_l>|^2 / N`` built from the columns of H, the
    associated rank-one grid completes to a magic grid exactly when
    ``Q = G - (N-2)`` is a projection; this checks ``||Q^2 - Q|| <= tol``.
    """
    n = _require_shape(h)
    a = h.to_complex()
    gram = np.abs(a.conj().T @ a) ** 2 / n
    q = gram - (n - 2) * np.eye(n)
    return bool(spectral_norm(q @ q - q) <= tol)


def weighted_criterion(h: TorusMatrix, tol: float = DEFAULT_TOL) -> WeightedResult:
    """Weighted column test: ``H D H* = c`` with ``D = diag(|z_j|^2)``.

    c is the total squared kernel mass ``sum_k |z_k|^2`` and the deviation is
    measured relative to c.  Equivalent to completability of the associated
    grid, like the Gram test.
    """
    n = _require_shape(h)
    data = _kernel(h, tol)
    weights = data.moduli**2
    c = float(weights.sum())
    a = h.to_complex()
    deviation = spectral_norm((a * weights) @ a.conj().T - c * np.eye(n - 1))
    return WeightedResult(passes=bool(deviation <= tol * c), c=c, deviation=deviation)
