"""Finite-dimensional grids of orthogonal projections.

A grid is an M x M array of d x d complex blocks.  It is *submagic* when
every block is an orthogonal projection and blocks are pairwise orthogonal
along each row and each column, and *magic* when additionally every row and
column sums to the identity.  This module builds such grids from partial
Hadamard matrices (block (i,j) projects onto the entrywise quotient of rows
i and j), certifies the submagic/magic/commuting properties, extracts the
pre-Latin square and classical points of commuting grids, and implements the
three completion procedures: adding one final row and column, completing a
commuting grid through total-permutation embeddings of its classical points,
and the unconditional 2x2 -> 4x4 completion.

Spectral (operator) norms are used throughout; ``tol`` defaults to 1e-9
everywhere and is overridable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._linalg import (
    DEFAULT_TOL,
    hermitize,
    kernel_basis,
    random_projection,
    spectral_norm,
    spectral_norms,
)
from .errors import (
    DegenerateSplit,
    FormatError,
    NotCommuting,
    NotCompletable,
    NotHadamard,
    NotSubmagic,
    RankError,
    Unsupported,
)
from .pperm import PartialPermutation, embed_total
from .prelatin import PreLatinSquare
from .torus import TorusMatrix, is_partial_hadamard

__all__ = [
    "ProjGrid",
    "GridReport",
    "grid_from_hadamard",
    "check_grid",
    "pre_latin_from_rank_one",
    "classical_points",
    "complete_last",
    "complete_commuting",
    "complete_2x2_to_4x4",
    "sum_bound_check",
    "SumBoundResult",
    "random_grid",
    "parse_pgrid",
    "format_pgrid",
    "read_pgrid",
    "write_pgrid",
]

_RETRY_BUDGET = 3


class ProjGrid:
    """An M x M grid of d x d complex blocks, immutable after construction.

    ``blocks`` is a read-only complex array of shape (M, M, d, d); block
    (i, j) in 1-based grid coordinates sits at ``blocks[i-1, j-1]``.
    """

    __slots__ = ("size", "dim", "blocks")

    def __init__(self, blocks):
        arr = np.array(blocks, dtype=complex)
        if arr.ndim != 4 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[3]:
            raise ValueError(f"expected (M, M, d, d) blocks, got shape {arr.shape}")
        arr.setflags(write=False)
        self.size = int(arr.shape[0])
        self.dim = int(arr.shape[2])
        self.blocks = arr

    def block(self, i: int, j: int) -> np.ndarray:
        """Read-only block at 1-based grid position (i, j)."""
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise ValueError(f"grid index ({i},{j}) out of range")
        return self.blocks[i - 1, j - 1]

    def total_sum(self) -> np.ndarray:
        """Sum of all blocks."""
        return self.blocks.sum(axis=(0, 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjGrid):
            return NotImplemented
        return self.blocks.shape == other.blocks.shape and bool(
            np.array_equal(self.blocks, other.blocks)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ProjGrid(size={self.size}, dim={self.dim})"


@dataclass(frozen=True)
class GridReport:
    """Certification result for a grid.

    ``submagic`` requires every block to be a Hermitian idempotent and blocks
    to be pairwise orthogonal along each row and column; ``magic`` adds unit
    row and column sums (so magic implies submagic); ``commuting`` bounds the
    largest commutator between any two blocks.  ``worst_violations`` maps a
    label to the largest observed spectral-norm defect of that kind.
    """

    submagic: bool
    magic: bool
    commuting: bool
    worst_violations: dict[str, float]


def grid_from_hadamard(h: TorusMatrix, *, tol: float = DEFAULT_TOL) -> ProjGrid:
    """Rank-one grid of a partial Hadamard matrix: block (i, j) projects onto
    the entrywise row quotient R_i / R_j.

    The input is certified partial Hadamard at ``tol`` first; orthogonality of
    the quotients along rows and columns then makes the output submagic.
    Ambient dimension equals the number of columns, and every diagonal block
    projects onto the all-ones vector.
    """
    report = is_partial_hadamard(h, tol)
    if not report.ok:
        raise NotHadamard(
            f"not partial Hadamard at tol {tol}: worst row pair {report.worst_pair} "
            f"has |<R_i,R_j>| = {report.worst_value:.3e}, worst modulus error "
            f"{report.worst_modulus_error:.3e}",
            report=report,
        )
    a = h.to_complex()
    m, n = a.shape
    blocks = np.empty((m, m, n, n), dtype=complex)
    for i in range(m):
        for j in range(m):
            xi = a[i] / a[j]
            blocks[i, j] = np.outer(xi, xi.conj()) / n
    return ProjGrid(blocks)


def check_grid(grid: ProjGrid, tol: float = DEFAULT_TOL) -> GridReport:
    """Certify the submagic, magic and commuting properties at ``tol``."""
    m, d = grid.size, grid.dim
    blocks = grid.blocks
    flat = blocks.reshape(m * m, d, d)
    eye = np.eye(d)

    proj_err = float(spectral_norms(np.matmul(flat, flat) - flat).max())
    herm_err = float(spectral_norms(flat - flat.conj().transpose(0, 2, 1)).max())

    # Row and column orthogonality of distinct blocks.
    if m == 1:
        row_orth = 0.0
        col_orth = 0.0
    else:
        off = ~np.eye(m, dtype=bool)
        prods = np.matmul(blocks[:, :, None, :, :], blocks[:, None, :, :, :])
        row_orth = float(spectral_norms(prods[:, off]).max())
        cols = blocks.transpose(1, 0, 2, 3)
        prods = np.matmul(cols[:, :, None, :, :], cols[:, None, :, :, :])
        col_orth = float(spectral_norms(prods[:, off]).max())

    row_sum_err = float(spectral_norms(blocks.sum(axis=1) - eye).max())
    col_sum_err = float(spectral_norms(blocks.sum(axis=0) - eye).max())

    commutator = _worst_commutator(flat, tol)

    submagic = max(proj_err, herm_err, row_orth, col_orth) <= tol
    magic = submagic and max(row_sum_err, col_sum_err) <= tol
    return GridReport(
        submagic=submagic,
        magic=magic,
        commuting=commutator <= tol,
        worst_violations={
            "projection": proj_err,
            "hermitian": herm_err,
            "row_orthogonality": row_orth,
            "column_orthogonality": col_orth,
            "row_sum": row_sum_err,
            "column_sum": col_sum_err,
            "commutator": commutator,
        },
    )


def _worst_commutator(flat: np.ndarray, tol: float) -> float:
    """Largest spectral norm of a pairwise commutator.

    For small grids this is the exact maximum over all pairs.  Large grids
    are scanned with Frobenius norms (an upper bound on the spectral norm)
    and exact spectral norms are computed only for pairs above ``tol``, so
    the commuting verdict stays exact while certified grids stay cheap; the
    reported value is then the worst pair found by the scan.
    """
    count = flat.shape[0]
    if count < 2:
        return 0.0
    if count <= 64:
        diffs = [
            np.matmul(flat[a], flat[a + 1 :]) - np.matmul(flat[a + 1 :], flat[a])
            for a in range(count - 1)
        ]
        return float(spectral_norms(np.concatenate(diffs)).max())
    worst_spec = 0.0
    fallback = None  # commutator of the largest sub-tol pair
    fallback_fro = -1.0
    for a in range(count - 1):
        diff = np.matmul(flat[a], flat[a + 1 :]) - np.matmul(flat[a + 1 :], flat[a])
        fro = np.sqrt((np.abs(diff) ** 2).sum(axis=(1, 2)))
        over = fro > tol
        if over.any():
            worst_spec = max(worst_spec, float(spectral_norms(diff[over]).max()))
        top = int(np.argmax(fro))
        if fro[top] > fallback_fro:
            fallback_fro = float(fro[top])
            fallback = diff[top]
    if worst_spec > 0.0:
        return worst_spec
    return float(spectral_norm(fallback))


def pre_latin_from_rank_one(
    grid: ProjGrid, n_target: int, *, tol: float = DEFAULT_TOL
) -> PreLatinSquare:
    """Recover the pre-Latin square of a commuting rank-one submagic grid.

    Two commuting rank-one projections have images that are either equal or
    orthogonal, so the block images cluster into mutually orthogonal lines.
    Labels 1, 2, ... are assigned in row-major first-seen order and the
    alphabet is padded to ``n_target``.  Raises :class:`RankError` if some
    block is not a rank-one projection and :class:`NotCommuting` if a pair of
    images is neither parallel nor orthogonal within tolerance.
    """
    m, d = grid.size, grid.dim
    cluster_tol = max(1e3 * tol, 1e-12)
    reps: list[np.ndarray] = []
    entries = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            block = grid.blocks[i, j]
            w, v = np.linalg.eigh(hermitize(block))
            # ascending eigenvalues: top one must be 1, all others pinched
            # between w[0] and w[-2], so those two endpoints bound the rest
            rest = max(abs(w[0]), abs(w[-2])) if d > 1 else 0.0
            if abs(w[-1] - 1.0) > cluster_tol or rest > cluster_tol:
                raise RankError(
                    f"block ({i + 1},{j + 1}) is not a rank-one projection "
                    f"(top eigenvalue {w[-1]:.6f}, remaining bound {rest:.6f})"
                )
            vec = v[:, -1]
            label = None
            for idx, rep in enumerate(reps):
                overlap = abs(np.dot(vec, rep.conj()))
                if overlap >= 1.0 - cluster_tol:
                    label = idx + 1
                    break
                if overlap > cluster_tol:
                    raise NotCommuting(
                        f"images of blocks are neither parallel nor orthogonal "
                        f"(overlap {overlap:.6f} at block ({i + 1},{j + 1}))"
                    )
            if label is None:
                reps.append(vec)
                label = len(reps)
            entries[i][j] = label
    return PreLatinSquare(entries, n_target)


def _split_by_eigenvalues(
    basis: np.ndarray, op: np.ndarray, gap: float
) -> list[np.ndarray]:
    """Refine an orthonormal subspace basis into eigenspace clusters of the
    operator compressed to the subspace, splitting at eigenvalue gaps."""
    compressed = hermitize(basis.conj().T @ op @ basis)
    w, u = np.linalg.eigh(compressed)
    pieces = []
    start = 0
    for idx in range(1, len(w)):
        if w[idx] - w[idx - 1] > gap:
            pieces.append(basis @ u[:, start:idx])
            start = idx
    pieces.append(basis @ u[:, start:])
    return pieces


def _joint_eigensystem(
    grid: ProjGrid, tol: float, seed: int
) -> tuple[np.ndarray, list[PartialPermutation]]:
    """Joint eigenbasis of all blocks of a commuting grid.

    Returns (V, sigmas): V has the d joint eigenvectors as columns and
    sigmas[c] is the classical point of column c, i.e. sigma(j) = i exactly
    when block (i, j) fixes the vector.

    Strategy: split ambient space by a random real-weighted sum of all
    blocks, then refine each subspace against every block in row-major
    order; eigenvalue clusters separated by gaps above 10*tol are split.
    Residuals are verified at the end; on failure the procedure reseeds and
    retries before raising :class:`DegenerateSplit`.
    """
    report = check_grid(grid, tol)
    if not report.commuting:
        raise NotCommuting(
            f"largest commutator {report.worst_violations['commutator']:.3e} "
            f"exceeds tol {tol}"
        )
    m, d = grid.size, grid.dim
    ops = grid.blocks.reshape(m * m, d, d)
    gap = 10.0 * tol
    cls_tol = min(0.1, max(1e4 * tol, 1e-8))
    last_error: DegenerateSplit | None = None
    for attempt in range(_RETRY_BUDGET):
        rng = np.random.default_rng(seed + attempt)
        weights = rng.standard_normal(m * m)
        combo = hermitize(np.tensordot(weights, ops, axes=1))
        subspaces = _split_by_eigenvalues(np.eye(d, dtype=complex), combo, gap)
        for op in ops:
            refined: list[np.ndarray] = []
            for basis in subspaces:
                if basis.shape[1] == 1:
                    refined.append(basis)
                else:
                    refined.extend(_split_by_eigenvalues(basis, op, gap))
            subspaces = refined
        vectors = np.hstack(subspaces)
        try:
            sigmas = _classify_columns(ops, vectors, m, cls_tol)
        except DegenerateSplit as exc:
            last_error = exc
            continue
        return vectors, sigmas
    raise DegenerateSplit(
        f"joint eigenbasis refinement failed after {_RETRY_BUDGET} attempts: {last_error}"
    )


def _classify_columns(
    ops: np.ndarray, vectors: np.ndarray, m: int, cls_tol: float
) -> list[PartialPermutation]:
    """Read off the classical point of every joint eigenvector column."""
    d = vectors.shape[1]
    # lam[b, c] = <op_b v_c, v_c>; for a genuine joint eigenvector this is the
    # block's eigenvalue on the vector, which must sit at 0 or 1.
    applied = np.matmul(ops, vectors)
    lam = np.einsum("dc,bdc->bc", vectors.conj(), applied).real
    residual = np.linalg.norm(applied - lam[:, None, :] * vectors[None, :, :], axis=1)
    if float(residual.max()) > cls_tol:
        raise DegenerateSplit(
            f"eigenvector residual {float(residual.max()):.3e} exceeds {cls_tol:.3e}"
        )
    if float(np.abs(lam - np.round(lam)).max()) > cls_tol:
        raise DegenerateSplit("block eigenvalues are not 0/1 on the joint basis")
    fixed = np.round(lam).astype(int).reshape(m, m, d)
    sigmas = []
    for c in range(d):
        img = [0] * m
        for j in range(m):
            hits = np.flatnonzero(fixed[:, j, c])
            if len(hits) > 1:
                raise NotSubmagic(
                    f"column {j + 1} fixes eigenvector {c + 1} under several blocks"
                )
            if len(hits) == 1:
                img[j] = int(hits[0]) + 1
        sigmas.append(PartialPermutation(img))
    return sigmas


def classical_points(
    grid: ProjGrid, *, tol: float = DEFAULT_TOL, seed: int = 0
) -> Counter[PartialPermutation]:
    """Multiset of classical points of a commuting grid.

    Computes a joint eigenbasis of all blocks; each joint eigenvector v
    yields the partial permutation with sigma(j) = i exactly when block
    (i, j) fixes v.  Multiplicities sum to the ambient dimension.  The
    semigroup of the grid is generated by the distinct points.
    """
    _, sigmas = _joint_eigensystem(grid, tol, seed)
    return Counter(sigmas)


def complete_last(grid: ProjGrid, *, tol: float = DEFAULT_TOL) -> ProjGrid:
    """Complete an M x M submagic grid to an (M+1) x (M+1) magic grid.

    The border is forced: block (i, M+1) complements row i, block (M+1, j)
    complements column j, and the corner is ``sum of all blocks - (M-1)``.
    The completion exists exactly when the corner is a projection; otherwise
    :class:`NotCompletable` is raised with the corner's idempotency defect as
    witness.
    """
    m, d = grid.size, grid.dim
    eye = np.eye(d)
    row_sums = grid.blocks.sum(axis=1)
    col_sums = grid.blocks.sum(axis=0)
    corner = grid.total_sum() - (m - 1) * eye
    defect = spectral_norm(corner @ corner - corner)
    if defect > tol:
        raise NotCompletable(
            f"corner block is not a projection: ||P^2 - P|| = {defect:.3e} > {tol}",
            witness=defect,
        )
    blocks = np.empty((m + 1, m + 1, d, d), dtype=complex)
    blocks[:m, :m] = grid.blocks
    for i in range(m):
        blocks[i, m] = eye - row_sums[i]
    for j in range(m):
        blocks[m, j] = eye - col_sums[j]
    blocks[m, m] = corner
    return ProjGrid(blocks)


def complete_commuting(
    grid: ProjGrid, n: int, *, tol: float = DEFAULT_TOL, seed: int = 0
) -> ProjGrid:
    """Complete a commuting submagic M x M grid to a commuting magic N x N grid.

    Each classical point is extended to a total permutation of {1, ..., N};
    this requires every point to have at most N - M undefined values, and the
    first offender is reported as the :class:`NotCompletable` witness.  Block
    (i, j) of the completion sums the eigenprojections of the vectors whose
    extended point maps j to i; the top-left M x M corner is the input grid,
    bit-exact.
    """
    m = grid.size
    if n < m:
        raise ValueError(f"target size {n} smaller than grid size {m}")
    slack = n - m
    vectors, sigmas = _joint_eigensystem(grid, tol, seed)
    distinct = dict.fromkeys(sigmas)
    for sigma in distinct:
        if sigma.defect > slack:
            raise NotCompletable(
                f"classical point {sigma} has {sigma.defect} undefined values, "
                f"more than N - M = {slack}",
                witness=sigma,
            )
    extended = {sigma: embed_total(sigma, n) for sigma in distinct}
    d = grid.dim
    blocks = np.zeros((n, n, d, d), dtype=complex)
    for c, sigma in enumerate(sigmas):
        vec = vectors[:, c]
        proj = np.outer(vec, vec.conj())
        total = extended[sigma]
        for j in range(1, n + 1):
            i = total(j)
            blocks[i - 1, j - 1] += proj
    blocks[:m, :m] = grid.blocks
    return ProjGrid(blocks)


def complete_2x2_to_4x4(grid: ProjGrid, *, tol: float = DEFAULT_TOL) -> ProjGrid:
    """Complete any 2 x 2 submagic grid to a 4 x 4 magic grid.

    With input blocks p, r / s, q, the ambient space splits into the kernel
    of p + q (which supports r and s, completed antidiagonally with
    complements relative to the kernel projection z) and its orthocomplement
    (completed diagonally with complements relative to 1 - z).  The direct
    sum of the two pieces collapses to the closed form below: complements of
    the input's rows and columns fill the off-corner, and p, q, r, s repeat
    in the opposite corner.
    """
    if grid.size != 2:
        raise ValueError(f"expected a 2 x 2 grid, got {grid.size} x {grid.size}")
    report = check_grid(grid, tol)
    if not report.submagic:
        raise NotSubmagic(
            f"input is not submagic at tol {tol}: {report.worst_violations}"
        )
    p, r = grid.blocks[0, 0], grid.blocks[0, 1]
    s, q = grid.blocks[1, 0], grid.blocks[1, 1]
    eye = np.eye(grid.dim)
    zeros = np.zeros_like(p)
    blocks = np.array(
        [
            [p, r, eye - p - r, zeros],
            [s, q, zeros, eye - q - s],
            [eye - p - s, zeros, p, s],
            [zeros, eye - q - r, r, q],
        ]
    )
    return ProjGrid(blocks)


@dataclass(frozen=True)
class SumBoundResult:
    """Outcome of the necessary trace-bound test for completability to size N:
    the total block sum must dominate M - (N - M)."""

    lambda_min: float
    passes: bool


def sum_bound_check(
    grid: ProjGrid, n: int, *, tol: float = DEFAULT_TOL
) -> SumBoundResult:
    """Necessary condition for completing an M x M submagic grid to an N x N
    magic grid: the smallest eigenvalue of the sum of all blocks must be at
    least M - K with K = N - M.  Failure certifies non-completability; a pass
    is only necessary, not sufficient."""
    m = grid.size
    bound = m - (n - m)
    lambda_min = float(np.linalg.eigvalsh(hermitize(grid.total_sum()))[0])
    return SumBoundResult(lambda_min=lambda_min, passes=lambda_min >= bound - tol)


def random_grid(m: int, d: int, seed: int) -> ProjGrid:
    """Deterministic random submagic grid for M in {1, 2}.

    For M = 2, samples random projections p and q of uniformly random rank,
    then supports the antidiagonal blocks r and s inside the kernel of p + q,
    which is exactly the freedom the submagic relations allow.  Larger grids
    have no generic submagic sampler; build them from Hadamard inputs instead.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = np.random.default_rng(seed)
    if m == 1:
        p = random_projection(d, int(rng.integers(0, d + 1)), rng)
        return ProjGrid(p[None, None])
    if m == 2:
        p = random_projection(d, int(rng.integers(0, d + 1)), rng)
        q = random_projection(d, int(rng.integers(0, d + 1)), rng)
        basis = kernel_basis(p + q, 1e-9 * d)
        free = basis.shape[1]
        r = np.zeros((d, d), dtype=complex)
        s = np.zeros((d, d), dtype=complex)
        if free:
            r = basis @ random_projection(free, int(rng.integers(0, free + 1)), rng) @ basis.conj().T
            s = basis @ random_projection(free, int(rng.integers(0, free + 1)), rng) @ basis.conj().T
        return ProjGrid([[p, r], [s, q]])
    raise Unsupported(f"random submagic sampling is only supported for M in {{1, 2}}, got {m}")


# --------------------------------------------------------------------------
# .pgrid text format:
#
#   pgrid v1
#   M d
#   <M*M blocks in row-major order, each d lines of d '(a,b)' tokens,
#    blocks separated by blank lines>

def parse_pgrid(text: str) -> ProjGrid:
    lines = [ln.strip() for ln in text.splitlines()]
    payload = [ln for ln in lines if ln]
    if not payload or payload[0] != "pgrid v1":
        raise FormatError("expected 'pgrid v1' header")
    if len(payload) < 2:
        raise FormatError("missing dimension line")
    dims = payload[1].split()
    if len(dims) != 2:
        raise FormatError(f"expected 'M d', got {payload[1]!r}")
    try:
        m, d = int(dims[0]), int(dims[1])
    except ValueError as exc:
        raise FormatError(f"bad dimensions {payload[1]!r}") from exc
    if m < 1 or d < 1:
        raise FormatError("dimensions must be positive")
    body = payload[2:]
    if len(body) != m * m * d:
        raise FormatError(
            f"expected {m * m * d} block rows, found {len(body)}"
        )
    blocks = np.empty((m, m, d, d), dtype=complex)
    pos = 0
    for i in range(m):
        for j in range(m):
            for row in range(d):
                tokens = body[pos].split()
                pos += 1
                if len(tokens) != d:
                    raise FormatError(
                        f"expected {d} entries per block row, got {len(tokens)}"
                    )
                blocks[i, j, row] = [_parse_pair(tok) for tok in tokens]
    return ProjGrid(blocks)


def _parse_pair(token: str) -> complex:
    if not (token.startswith("(") and token.endswith(")")) or "," not in token:
        raise FormatError(f"expected '(a,b)' token, got {token!r}")
    re_part, _, im_part = token[1:-1].partition(",")
    try:
        return complex(float(re_part), float(im_part))
    except ValueError as exc:
        raise FormatError(f"bad complex token {token!r}") from exc


def format_pgrid(grid: ProjGrid) -> str:
    chunks = [f"pgrid v1\n{grid.size} {grid.dim}"]
    for i in range(grid.size):
        for j in range(grid.size):
            block = grid.blocks[i, j]
            rows = [
                " ".join(f"({float(z.real)!r},{float(z.imag)!r})" for z in row)
                for row in block
            ]
            chunks.append("\n".join(rows))
    return "\n\n".join(chunks) + "\n"


def read_pgrid(path) -> ProjGrid:
    return parse_pgrid(Path(path).read_text(encoding="utf-8"))


def write_pgrid(path, grid: ProjGrid) -> None:
    Path(path).write_text(format_pgrid(grid), encoding="utf-8")
