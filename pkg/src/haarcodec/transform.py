"""Forward/inverse 2x2 block Haar transforms and multilevel decomposition.

Coefficient conventions: the literal transform keeps ``a`` as the block mean
and the detail sums ``v``, ``h``, ``d`` unnormalized; the ``scaled`` variant
divides the details by 4 as well, which keeps set1 coefficients inside
``[-255, 255]`` for 8-bit input.  Adaptive selection energies are always
computed on the literal values, so both variants pick identical banks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CorruptStreamError, ParameterError
from .filterbank import WaveletBasis, all_builtin_bases, basis_index, builtin_basis

MODE_FIXED = "fixed"
MODE_PER_BLOCK = "per-block"
MODE_GLOBAL = "global"
MODES = (MODE_FIXED, MODE_PER_BLOCK, MODE_GLOBAL)


@dataclass(frozen=True)
class BlockCoeffs:
    """Transform of one 2x2 block: mean ``a`` plus details ``v``, ``h``, ``d``."""

    a: float
    v: float
    h: float
    d: float
    basis_id: str


@dataclass(frozen=True)
class BasisIdMap:
    """Which bank produced each block: a grid in per-block mode, one id otherwise."""

    mode: str
    ids: np.ndarray | int

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_PER_BLOCK:
            ids = np.asarray(self.ids)
            if ids.ndim != 2:
                raise ParameterError("per-block mode needs a 2D id grid")
            if ids.size and (ids.min() < 0 or ids.max() > 3):
                raise CorruptStreamError("basis id outside 0..3")
        else:
            if not 0 <= int(self.ids) <= 3:
                raise CorruptStreamError("basis id outside 0..3")


@dataclass(frozen=True)
class SubbandSet:
    """One decomposition level: A/V/H/D matrices of half the parent size."""

    A: np.ndarray
    V: np.ndarray
    H: np.ndarray
    D: np.ndarray
    ids: BasisIdMap


@dataclass(frozen=True)
class SubbandPyramid:
    """Multi-level decomposition, finest level first.

    ``orig_dims[k]`` holds the pre-padding (height, width) fed into level k+1;
    the inverse crops back to those sizes, so odd dimensions round-trip.
    """

    levels: tuple[SubbandSet, ...]
    coarse_a: np.ndarray
    orig_dims: tuple[tuple[int, int], ...]


def _resolve_basis(basis) -> WaveletBasis:
    if isinstance(basis, WaveletBasis):
        return basis
    if isinstance(basis, str):
        return builtin_basis(basis)
    if isinstance(basis, (int, np.integer)):
        return all_builtin_bases()[int(basis)]
    raise ParameterError(f"cannot interpret {basis!r} as a wavelet basis")


def _resolve_index(basis) -> int:
    if isinstance(basis, (int, np.integer)):
        idx = int(basis)
        if not 0 <= idx <= 3:
            raise ParameterError(f"basis index {idx} outside 0..3")
        return idx
    if isinstance(basis, str):
        return basis_index(basis)
    if isinstance(basis, WaveletBasis):
        return basis_index(basis.id)
    raise ParameterError(f"cannot interpret {basis!r} as a builtin basis id")


def block_forward(block, basis, scaled: bool = False) -> BlockCoeffs:
    """Transform one 2x2 block.

    ``a`` is the mean of the four samples; ``v``, ``h``, ``d`` are the sums
    ``sum(psi_ij * m_ij)`` for psi^1..psi^3 (divided by 4 when ``scaled``).
    """
    basis = _resolve_basis(basis)
    m = np.asarray(block, dtype=np.float64)
    if m.shape != (2, 2):
        raise ParameterError(f"expected a 2x2 block, got shape {m.shape}")
    a = (m[0, 0] + m[0, 1] + m[1, 0] + m[1, 1]) / 4.0
    details = [float(np.sum(psi * m)) for psi in basis.psi]
    if scaled:
        details = [x / 4.0 for x in details]
    return BlockCoeffs(a=float(a), v=details[0], h=details[1], d=details[2], basis_id=basis.id)


def block_inverse(coeffs: BlockCoeffs, basis=None, scaled: bool = False) -> np.ndarray:
    """Invert :func:`block_forward` through the synthesis matrix."""
    basis = _resolve_basis(coeffs.basis_id if basis is None else basis)
    scale = 4.0 if scaled else 1.0
    vec = np.array([coeffs.a, coeffs.v * scale, coeffs.h * scale, coeffs.d * scale])
    return (basis.synthesis @ vec).reshape(2, 2)


def _block_energy(coeffs: BlockCoeffs) -> float:
    return coeffs.v**2 + coeffs.h**2 + coeffs.d**2


def adaptive_block_forward(block, scaled: bool = False) -> BlockCoeffs:
    """Pick the builtin bank minimizing ``v^2 + h^2 + d^2`` on this block.

    Energies are compared on the literal (unnormalized) coefficients; ties go
    to the lowest basis id.
    """
    candidates = [block_forward(block, b, scaled=False) for b in all_builtin_bases()]
    best = min(range(4), key=lambda k: (_block_energy(candidates[k]), k))
    chosen = candidates[best]
    if scaled:
        return BlockCoeffs(chosen.a, chosen.v / 4.0, chosen.h / 4.0, chosen.d / 4.0, chosen.basis_id)
    return chosen


# ---------------------------------------------------------------------------
# Whole-matrix operations (vectorized over the 2x2 block grid)


def _corner_views(m: np.ndarray):
    return m[0::2, 0::2], m[0::2, 1::2], m[1::2, 0::2], m[1::2, 1::2]


def _detail_arrays(corners, basis: WaveletBasis) -> list[np.ndarray]:
    m11, m12, m21, m22 = corners
    out = []
    for psi in basis.psi:
        out.append(psi[0, 0] * m11 + psi[0, 1] * m12 + psi[1, 0] * m21 + psi[1, 1] * m22)
    return out


def _function_sq_norms(basis: WaveletBasis) -> np.ndarray:
    return np.sum(basis.psi.reshape(3, 4) ** 2, axis=1) / 4.0


def subband_forward(
    matrix,
    mode: str = MODE_PER_BLOCK,
    fixed_id=None,
    scaled: bool = False,
    normalized_energy: bool = False,
) -> SubbandSet:
    """One decomposition level of an even-dimensioned matrix.

    Parameters
    ----------
    matrix : array-like, shape (2r, 2c)
        Input samples; the caller pads odd dimensions first.
    mode : str
        ``"per-block"`` minimizes detail energy per 2x2 block, ``"global"``
        keeps the single bank minimizing ``sum(V^2) + sum(H^2) + sum(D^2)``
        over the whole matrix, ``"fixed"`` uses ``fixed_id``.
    fixed_id : int or str, optional
        Builtin bank for fixed mode.
    scaled : bool
        Divide detail coefficients by 4 (codec convention).
    normalized_energy : bool
        Experiment flag: divide each function's squared coefficients by its
        squared norm before comparing energies, compensating the sparse
        banks' smaller support.  Off by default to match the literal rule.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] % 2 or m.shape[1] % 2 or m.size == 0:
        raise ParameterError(f"matrix must be non-empty with even dimensions, got shape {m.shape}")
    if mode not in MODES:
        raise ParameterError(f"unknown mode {mode!r}")
    corners = _corner_views(m)
    a = (corners[0] + corners[1] + corners[2] + corners[3]) / 4.0

    if mode == MODE_FIXED:
        if fixed_id is None:
            raise ParameterError("fixed mode needs fixed_id")
        idx = _resolve_index(fixed_id)
        v, h, d = _detail_arrays(corners, all_builtin_bases()[idx])
        ids = BasisIdMap(MODE_FIXED, idx)
    else:
        per_basis = [_detail_arrays(corners, b) for b in all_builtin_bases()]
        stacks = [np.stack(x) for x in zip(*per_basis)]  # V, H, D each (4, r, c)
        weights = np.ones((4, 3))
        if normalized_energy:
            weights = 1.0 / np.stack([_function_sq_norms(b) for b in all_builtin_bases()])
        energy = sum(w[:, None, None] * s**2 for w, s in zip(weights.T, stacks))
        if mode == MODE_PER_BLOCK:
            grid = np.argmin(energy, axis=0).astype(np.uint8)
            sel = grid[None, :, :]
            v, h, d = (np.take_along_axis(s, sel, axis=0)[0] for s in stacks)
            ids = BasisIdMap(MODE_PER_BLOCK, grid)
        else:
            totals = energy.reshape(4, -1).sum(axis=1)
            idx = int(np.argmin(totals))
            v, h, d = (s[idx] for s in stacks)
            ids = BasisIdMap(MODE_GLOBAL, idx)

    if scaled:
        v, h, d = v / 4.0, h / 4.0, d / 4.0
    return SubbandSet(A=a, V=v, H=h, D=d, ids=ids)


def subband_inverse(s: SubbandSet, scaled: bool = False) -> np.ndarray:
    """Reassemble the parent matrix from one :class:`SubbandSet`."""
    a = np.asarray(s.A, dtype=np.float64)
    if not (a.shape == s.V.shape == s.H.shape == s.D.shape):
        raise ParameterError("subband dimensions disagree")
    scale = 4.0 if scaled else 1.0
    v, h, d = s.V * scale, s.H * scale, s.D * scale
    out = np.empty((a.shape[0] * 2, a.shape[1] * 2), dtype=np.float64)
    corners = _corner_views(out)

    def apply_basis(idx: int, mask=None):
        syn = all_builtin_bases()[idx].synthesis
        for corner, row in zip(corners, syn):
            rec = row[0] * a + row[1] * v + row[2] * h + row[3] * d
            if mask is None:
                corner[...] = rec
            else:
                corner[mask] = rec[mask]

    if s.ids.mode == MODE_PER_BLOCK:
        grid = np.asarray(s.ids.ids)
        if grid.shape != a.shape:
            raise ParameterError("id grid does not match subband dimensions")
        if grid.min() < 0 or grid.max() > 3:
            raise CorruptStreamError("basis id outside 0..3")
        for idx in np.unique(grid):
            apply_basis(int(idx), grid == idx)
    else:
        apply_basis(_resolve_index(int(s.ids.ids)))
    return out


def pad_to_even(matrix: np.ndarray) -> np.ndarray:
    """Edge-replicate the last row/column so both dimensions are even."""
    h, w = matrix.shape
    if h % 2 == 0 and w % 2 == 0:
        return matrix
    return np.pad(matrix, ((0, h % 2), (0, w % 2)), mode="edge")


def level_grid_dims(width: int, height: int, levels: int) -> list[tuple[int, int]]:
    """Block-grid (rows, cols) per level for a width x height matrix.

    Matches the padding arithmetic of :func:`pyramid_forward`; raises
    :class:`ParameterError` for level counts the dimensions cannot support.
    """
    if levels < 1:
        raise ParameterError("need at least one decomposition level")
    if width < 1 or height < 1:
        raise ParameterError("dimensions must be positive")
    dims = []
    h, w = height, width
    for k in range(levels):
        if k > 0 and h == 1 and w == 1:
            raise ParameterError(f"level {k + 1} would decompose a 1x1 matrix; reduce levels")
        gh, gw = (h + 1) // 2, (w + 1) // 2
        dims.append((gh, gw))
        h, w = gh, gw
    return dims


def pyramid_forward(
    matrix,
    levels: int,
    mode: str = MODE_PER_BLOCK,
    fixed_id=None,
    scaled: bool = False,
    normalized_energy: bool = False,
) -> SubbandPyramid:
    """Decompose ``levels`` times, each level splitting the previous A band."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ParameterError(f"expected a non-empty 2D matrix, got shape {m.shape}")
    level_grid_dims(m.shape[1], m.shape[0], levels)
    sets = []
    orig_dims = []
    for _ in range(levels):
        orig_dims.append(m.shape)
        s = subband_forward(pad_to_even(m), mode=mode, fixed_id=fixed_id,
                            scaled=scaled, normalized_energy=normalized_energy)
        sets.append(s)
        m = s.A
    return SubbandPyramid(levels=tuple(sets), coarse_a=m, orig_dims=tuple(orig_dims))


def pyramid_inverse(p: SubbandPyramid, scaled: bool = False) -> np.ndarray:
    """Unwind a pyramid coarse to fine, cropping each level's padding."""
    m = np.asarray(p.coarse_a, dtype=np.float64)
    for s, (h, w) in zip(reversed(p.levels), reversed(p.orig_dims)):
        level = SubbandSet(A=m, V=s.V, H=s.H, D=s.D, ids=s.ids)
        m = subband_inverse(level, scaled=scaled)[:h, :w]
    return m
