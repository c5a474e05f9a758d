"""2x2 piecewise-constant Haar wavelet banks: builtins, generators, validators.

A bank is three functions psi^1, psi^2, psi^3 on the unit square, each constant
on the four quarter cells.  Coefficients are handled in two layouts:

* "rows": ``(a1, a2, a3, a4)`` where a1 lives on ``[0,.5]x[0,.5]``,
  a2 on ``[0,.5]x[.5,1]``, a3 on ``[.5,1]x[.5,1]`` and a4 on ``[.5,1]x[0,.5]``
  (x = horizontal, y = vertical).
* "tables": 2x2 arrays indexed like an image block ``[[m11, m12], [m21, m22]]``
  with row index increasing downward, i.e. ``[[a1, a4], [a2, a3]]``.

The inner product used throughout is ``<f, g> = 1/4 * sum(f_k * g_k)`` over the
four cells (each cell has area 1/4).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConstructionError, DegenerateParameterError, ParameterError

BUILTIN_IDS = ("set1", "set2", "set3", "set4")

DEFAULT_TOL = 1e-9

# Corrected banks: set1 is the classical Haar table; sets 2-4 carry minimal
# sign/placement fixes so that every function is zero-mean and the three
# functions are pairwise orthogonal (norms are 1, 1/2, 1/2 for sets 2-4).
_CORRECTED_TABLES = {
    "set1": (((1, -1), (1, -1)), ((1, 1), (-1, -1)), ((1, -1), (-1, 1))),
    "set2": (((1, -1), (1, -1)), ((1, 0), (-1, 0)), ((0, 1), (0, -1))),
    "set3": (((1, 1), (-1, -1)), ((1, -1), (0, 0)), ((0, 0), (1, -1))),
    "set4": (((1, -1), (-1, 1)), ((1, 0), (0, -1)), ((0, 1), (-1, 0))),
}

# Tables exactly as published; sets 2-4 fail zero-mean and/or orthogonality
# and two of them have singular analysis matrices.  Kept for auditing only.
_PRINTED_TABLES = {
    "set1": _CORRECTED_TABLES["set1"],
    "set2": (((1, -1), (1, -1)), ((1, 0), (-1, 0)), ((0, 1), (0, 1))),
    "set3": (((1, -1), (1, -1)), ((1, -1), (0, 0)), ((0, 0), (1, -1))),
    "set4": (((1, -1), (1, -1)), ((1, 0), (0, -1)), ((0, 1), (-1, -1))),
}

# Cell offsets of a1..a4 inside the doubled unit square, used by the masks.
_CELL_OFFSETS = ((0, 0), (0, 1), (1, 1), (1, 0))

# Digit representatives of Z^2 / 2Z^2 indexing the modulation-matrix columns.
_DIGITS = ((0, 0), (1, 0), (0, 1), (1, 1))

# Admissible zero-position triples (one zero per function, positions 1-based).
_COROLLARY_PATTERNS = {
    1: (4, 1, 2),
    2: (2, 3, 4),
    3: (1, 2, 3),
    4: (3, 4, 1),
}


def rows_to_tables(rows) -> np.ndarray:
    """Convert three ``(a1, a2, a3, a4)`` rows to 2x2 image-layout tables."""
    r = np.asarray(rows, dtype=np.float64)
    if r.shape != (3, 4):
        raise ParameterError(f"expected three coefficient rows of four values, got shape {r.shape}")
    tables = np.empty((3, 2, 2), dtype=np.float64)
    tables[:, 0, 0] = r[:, 0]
    tables[:, 0, 1] = r[:, 3]
    tables[:, 1, 0] = r[:, 1]
    tables[:, 1, 1] = r[:, 2]
    return tables


def tables_to_rows(tables) -> np.ndarray:
    """Convert 2x2 image-layout tables to ``(a1, a2, a3, a4)`` rows."""
    t = np.asarray(tables, dtype=np.float64)
    if t.shape != (3, 2, 2):
        raise ParameterError(f"expected three 2x2 tables, got shape {t.shape}")
    return np.stack([t[:, 0, 0], t[:, 1, 0], t[:, 1, 1], t[:, 0, 1]], axis=1)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class WaveletBasis:
    """One 2x2 Haar-type bank plus its 4x4 analysis/synthesis matrices.

    ``analysis`` row 0 is the averaging row ``[1/4]*4``; rows 1-3 are the psi
    tables flattened in ``m11, m12, m21, m22`` order.  ``synthesis`` is the
    exact matrix inverse, so reconstruction never relies on orthonormality.
    """

    id: str
    psi: np.ndarray        # (3, 2, 2) quarter-cell values, image layout
    analysis: np.ndarray   # (4, 4)
    synthesis: np.ndarray  # (4, 4)

    @property
    def rows(self) -> np.ndarray:
        """Coefficient rows in ``(a1, a2, a3, a4)`` cell order."""
        return tables_to_rows(self.psi)


def _invert_exact(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over exact rationals; raises on singularity."""
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ConstructionError("analysis matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = Fraction(1) / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _analysis_from_tables(tables: np.ndarray) -> np.ndarray:
    analysis = np.empty((4, 4), dtype=np.float64)
    analysis[0] = 0.25
    analysis[1:] = tables.reshape(3, 4)
    return analysis


def make_basis(tables, basis_id: str = "custom", exact: bool | None = None) -> WaveletBasis:
    """Build a :class:`WaveletBasis` from three 2x2 tables.

    Parameters
    ----------
    tables : array-like, shape (3, 2, 2)
        Quarter-cell values of psi^1..psi^3 in image layout.
    basis_id : str
        Identifier stored on the basis.
    exact : bool, optional
        Force exact rational inversion (requires entries representable as
        ``Fraction``).  Defaults to exact when all entries are integers.

    Raises
    ------
    ConstructionError
        If the analysis matrix is singular or numerically unusable.
    """
    t = np.asarray(tables, dtype=np.float64)
    if t.shape != (3, 2, 2):
        raise ParameterError(f"expected three 2x2 tables, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ParameterError("table entries must be finite")
    analysis = _analysis_from_tables(t)
    if exact is None:
        exact = bool(np.all(t == np.round(t)))
    if exact:
        frac_rows = [[Fraction(1, 4)] * 4] + [
            [Fraction(v).limit_denominator(10**9) for v in row] for row in t.reshape(3, 4).tolist()
        ]
        synthesis = np.array(_invert_exact(frac_rows), dtype=np.float64)
    else:
        det = np.linalg.det(analysis)
        if not np.isfinite(det) or abs(det) < 1e-12 or np.linalg.cond(analysis) > 1e12:
            raise ConstructionError("analysis matrix is singular or ill-conditioned")
        synthesis = np.linalg.inv(analysis)
    residual = np.max(np.abs(analysis @ synthesis - np.eye(4)))
    if residual > 1e-12:
        raise ConstructionError(f"analysis/synthesis inverse check failed (residual {residual:.3e})")
    return WaveletBasis(
        id=basis_id,
        psi=_frozen(t),
        analysis=_frozen(analysis),
        synthesis=_frozen(synthesis),
    )


def builtin_tables(basis_id: str, as_printed: bool = False) -> np.ndarray:
    """Quarter-cell tables of a builtin bank.

    ``as_printed=True`` returns the published tables verbatim for auditing;
    those are not all invertible and are rejected by :func:`builtin_basis`.
    """
    source = _PRINTED_TABLES if as_printed else _CORRECTED_TABLES
    if basis_id not in source:
        raise ParameterError(f"unknown basis id {basis_id!r}; expected one of {BUILTIN_IDS}")
    return np.array(source[basis_id], dtype=np.float64)


@functools.lru_cache(maxsize=None)
def builtin_basis(basis_id: str) -> WaveletBasis:
    """Return the (corrected) builtin bank ``set1`` .. ``set4``."""
    return make_basis(builtin_tables(basis_id), basis_id=basis_id, exact=True)


def basis_index(basis_id: str) -> int:
    """Map ``set1`` .. ``set4`` to the 2-bit ids 0..3 used on the wire."""
    try:
        return BUILTIN_IDS.index(basis_id)
    except ValueError:
        raise ParameterError(f"unknown basis id {basis_id!r}; expected one of {BUILTIN_IDS}") from None


@functools.lru_cache(maxsize=1)
def all_builtin_bases() -> tuple[WaveletBasis, ...]:
    return tuple(builtin_basis(name) for name in BUILTIN_IDS)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    """Orthogonality audit of one bank, deterministic for (coefficients, tol).

    ``gram[i, j]`` holds ``<psi^i, psi^j> = 1/4 * sum_cells``, ``norms`` the
    squared norms (the diagonal), ``sums`` the plain coefficient sums.
    """

    sums: np.ndarray                 # (3,)
    zero_mean: np.ndarray            # (3,) bool
    gram: np.ndarray                 # (3, 3)
    pairwise_orthogonal: np.ndarray  # (3, 3) bool, diagonal vacuously True
    norms: np.ndarray                # (3,) squared norms
    orthogonal: bool
    orthonormal: bool
    tol: float


def coefficient_rows(bank) -> np.ndarray:
    """Coerce a basis, 3x4 row array, or 3x2x2 table array to rows."""
    if isinstance(bank, WaveletBasis):
        return bank.rows
    arr = np.asarray(bank, dtype=np.float64)
    if arr.shape == (3, 4):
        return arr
    if arr.shape == (3, 2, 2):
        return tables_to_rows(arr)
    raise ParameterError(f"cannot interpret shape {arr.shape} as wavelet coefficients")


def validate_orthogonality(bank, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check zero means, pairwise orthogonality, and unit norms of a bank.

    Sums are accumulated left to right so that generators which close the mean
    with ``a4 = -(a1 + a2 + a3)`` validate to exactly zero.
    """
    if not tol > 0:
        raise ParameterError("tolerance must be positive")
    rows = coefficient_rows(bank)
    sums = np.array([float(r[0]) + float(r[1]) + float(r[2]) + float(r[3]) for r in rows])
    zero_mean = np.abs(sums) <= tol
    gram = (rows @ rows.T) / 4.0
    off = ~np.eye(3, dtype=bool)
    pairwise = np.abs(gram) <= tol
    pairwise[np.eye(3, dtype=bool)] = True
    norms = np.diag(gram).copy()
    orthogonal = bool(np.all(pairwise[off]))
    orthonormal = orthogonal and bool(np.all(np.abs(norms - 1.0) <= tol)) and bool(np.all(zero_mean))
    return ValidationReport(
        sums=_frozen(sums),
        zero_mean=zero_mean,
        gram=_frozen(gram),
        pairwise_orthogonal=pairwise,
        norms=_frozen(norms),
        orthogonal=orthogonal,
        orthonormal=orthonormal,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Parameterized families


@dataclass(frozen=True)
class Family1Params:
    """First solution branch: lambda plus three free detail coefficients."""

    lam: float
    a21: float
    a22: float
    a31: float


@dataclass(frozen=True)
class AngleParams:
    """Second solution branch: three alpha in [0, pi], three beta in [0, 2*pi)."""

    alpha: tuple[float, float, float]
    beta: tuple[float, float, float]

    def __post_init__(self):
        if len(self.alpha) != 3 or len(self.beta) != 3:
            raise ParameterError("need exactly three alpha and three beta angles")
        for a in self.alpha:
            if not 0.0 <= a <= np.pi:
                raise ParameterError(f"alpha {a!r} outside [0, pi]")
        for b in self.beta:
            if not 0.0 <= b < 2.0 * np.pi:
                raise ParameterError(f"beta {b!r} outside [0, 2*pi)")


def family1_rows(p: Family1Params) -> np.ndarray:
    """Coefficient rows of the first branch.

    psi^1 is ``(lam, lam, -3*lam, lam)``; rows 2 and 3 have ``a_i4 = 0`` and
    ``a_i3 = -a_i1 - a_i2``; ``a32`` solves the bilinear constraint
    ``2*a21*a31 + 2*a22*a32 + a21*a32 + a22*a31 = 0``.
    """
    denom = 2.0 * p.a22 + p.a21
    if abs(denom) <= 1e-12:
        raise DegenerateParameterError("2*a22 + a21 is (near) zero; a32 is undetermined")
    a32 = -p.a31 * (2.0 * p.a21 + p.a22) / denom
    return np.array(
        [
            [p.lam, p.lam, -3.0 * p.lam, p.lam],
            [p.a21, p.a22, -(p.a21 + p.a22), 0.0],
            [p.a31, a32, -(p.a31 + a32), 0.0],
        ]
    )


def basis_from_family1(p: Family1Params) -> WaveletBasis:
    """Construct a bank from first-branch parameters.

    Raises
    ------
    DegenerateParameterError
        If ``2*a22 + a21`` vanishes.
    ConstructionError
        If the resulting analysis matrix is singular (e.g. ``lam == 0``).
    """
    return make_basis(rows_to_tables(family1_rows(p)), basis_id="custom", exact=False)


def angle_rows(p: AngleParams) -> np.ndarray:
    """Coefficient rows of the second branch.

    No a4 formula is published; the zero-mean closure ``a4 = -(a1 + a2 + a3)``
    is used, so generated functions are exactly zero-mean but not unit-norm
    for arbitrary angles.
    """
    rows = np.empty((3, 4), dtype=np.float64)
    s3, s2, s6 = np.sqrt(3.0), np.sqrt(2.0), np.sqrt(6.0)
    for i, (alpha, beta) in enumerate(zip(p.alpha, p.beta)):
        ca, sa = np.cos(alpha), np.sin(alpha)
        cb, sb = np.cos(beta), np.sin(beta)
        a1 = ca / s3 - 2.0 * sa * cb / s6
        a2 = ca / s3 + sa * cb / s2 + sa * sb / s6
        a3 = ca / s3 - sa * cb / s2 + sa * sb / s6
        a4 = -(a1 + a2 + a3)
        rows[i] = (a1, a2, a3, a4)
    return rows


def basis_from_angles(p: AngleParams) -> tuple[WaveletBasis, ValidationReport]:
    """Construct a candidate bank from angles, together with its audit.

    The branch's printed parameter constraints are incomplete, so arbitrary
    angle combinations are accepted and orthogonality is *reported*, never
    assumed.  Raises :class:`ConstructionError` when the candidate's analysis
    matrix is singular (e.g. all three functions identical).
    """
    rows = angle_rows(p)
    report = validate_orthogonality(rows)
    basis = make_basis(rows_to_tables(rows), basis_id="custom", exact=False)
    return basis, report


# ---------------------------------------------------------------------------
# Corollary zero patterns


def corollary_applicable(bank, tol: float = DEFAULT_TOL) -> bool:
    """True when every function has exactly one (near-)zero coefficient."""
    rows = coefficient_rows(bank)
    return all(int(np.sum(np.abs(row) <= tol)) == 1 for row in rows)


def corollary_pattern_check(bank, tol: float = DEFAULT_TOL):
    """Match single-zero positions against the four admissible patterns.

    Returns the pattern id 1..4, or ``None`` when the bank is not applicable
    (zero counts differ from one) or the positions match no admissible form.
    """
    rows = coefficient_rows(bank)
    positions = []
    for row in rows:
        zeros = np.flatnonzero(np.abs(row) <= tol)
        if len(zeros) != 1:
            return None
        positions.append(int(zeros[0]) + 1)
    triple = tuple(positions)
    for pattern_id, pattern in _COROLLARY_PATTERNS.items():
        if triple == pattern:
            return pattern_id
    return None


# ---------------------------------------------------------------------------
# Masks and the modulation matrix


def _mask_coefficient_rows(bank) -> np.ndarray:
    """Rows 0..3 of mask coefficients: the averaging row then psi rows."""
    rows = coefficient_rows(bank)
    return np.vstack([np.ones(4), rows])


def modulation_matrix(bank, xi) -> np.ndarray:
    """Modulation matrix ``{m_nu(xi + s_k/2)}`` of the bank at frequency xi.

    The mask of each function is ``m_nu(z) = 1/4 * sum_j c_j exp(-2*pi*i n_j.z)``
    over the four cell offsets ``n_j``, where ``c`` are the quarter-cell values
    (all ones for the scaling mask m_0).  Unitarity of this matrix for almost
    every xi certifies a valid wavelet set; for these piecewise-constant banks
    ``M M*`` is independent of xi and equals the 4x4 Gram matrix of the scaled
    coefficient rows.
    """
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (2,):
        raise ParameterError("xi must be a frequency pair")
    coeffs = _mask_coefficient_rows(bank)
    offsets = np.array(_CELL_OFFSETS, dtype=np.float64)   # (4, 2)
    digits = np.array(_DIGITS, dtype=np.float64)          # (4, 2)
    # phase[j, k] = exp(-2*pi*i * n_j . (xi + s_k / 2))
    args = offsets @ (xi[:, None] + digits.T / 2.0)
    phase = np.exp(-2j * np.pi * args)
    return (coeffs / 4.0) @ phase


def unitarity_check(bank, samples: int = 16, tol: float = DEFAULT_TOL, seed: int = 0) -> bool:
    """Sample ``samples`` pseudo-random xi in [0,1)^2 and test ``||MM* - I||_inf <= tol``."""
    if samples < 1:
        raise ParameterError("need at least one sample frequency")
    if not tol > 0:
        raise ParameterError("tolerance must be positive")
    rng = np.random.default_rng(seed)
    identity = np.eye(4)
    for xi in rng.random((samples, 2)):
        m = modulation_matrix(bank, xi)
        if np.max(np.abs(m @ m.conj().T - identity)) > tol:
            return False
    return True
