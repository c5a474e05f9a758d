import numpy as np
import pytest

from haarcodec import filterbank as fb
from haarcodec.errors import ConstructionError, DegenerateParameterError, ParameterError


def quarter_inner(u, v):
    """Independent oracle: <u, v> = 1/4 * sum over the four quarter cells."""
    return sum(a * b for a, b in zip(u, v)) / 4.0


class TestBuiltinTables:
    def test_set1_tables_match_published_values(self):
        b = fb.builtin_basis("set1")
        assert b.psi.tolist() == [
            [[1, -1], [1, -1]],
            [[1, 1], [-1, -1]],
            [[1, -1], [-1, 1]],
        ]

    def test_corrected_tables(self):
        assert fb.builtin_basis("set2").psi.tolist() == [
            [[1, -1], [1, -1]],
            [[1, 0], [-1, 0]],
            [[0, 1], [0, -1]],
        ]
        assert fb.builtin_basis("set3").psi.tolist() == [
            [[1, 1], [-1, -1]],
            [[1, -1], [0, 0]],
            [[0, 0], [1, -1]],
        ]
        assert fb.builtin_basis("set4").psi.tolist() == [
            [[1, -1], [-1, 1]],
            [[1, 0], [0, -1]],
            [[0, 1], [-1, 0]],
        ]

    def test_unknown_id_rejected(self):
        with pytest.raises(ParameterError):
            fb.builtin_basis("set5")
        with pytest.raises(ParameterError):
            fb.builtin_tables("classic")

    def test_set1_validates_orthonormal(self):
        rep = fb.validate_orthogonality(fb.builtin_basis("set1"), tol=1e-12)
        assert rep.orthonormal
        assert np.all(rep.norms == 1.0)
        off = ~np.eye(3, dtype=bool)
        assert np.all(rep.gram[off] == 0.0)

    def test_set4_cross_products_and_means(self):
        rows = fb.builtin_basis("set4").rows
        assert quarter_inner(rows[1], rows[2]) == 0.0
        for row in rows:
            assert row.sum() == 0.0

    def test_analysis_synthesis_exact_inverse(self):
        for name in fb.BUILTIN_IDS:
            b = fb.builtin_basis(name)
            assert np.max(np.abs(b.analysis @ b.synthesis - np.eye(4))) <= 1e-12

    def test_sparse_sets_have_half_norms(self):
        for name in ("set2", "set3", "set4"):
            rep = fb.validate_orthogonality(fb.builtin_basis(name))
            assert rep.orthogonal and not rep.orthonormal
            assert rep.norms.tolist() == [1.0, 0.5, 0.5]

    def test_printed_set2_and_set4_fail_validation(self):
        rep2 = fb.validate_orthogonality(fb.builtin_tables("set2", as_printed=True))
        assert not rep2.zero_mean[2] and rep2.sums[2] == 2.0
        rep4 = fb.validate_orthogonality(fb.builtin_tables("set4", as_printed=True))
        assert not rep4.zero_mean[2] and rep4.sums[2] == -1.0
        rep3 = fb.validate_orthogonality(fb.builtin_tables("set3", as_printed=True))
        assert not rep3.orthogonal

    def test_printed_set2_not_constructible(self):
        with pytest.raises(ConstructionError):
            fb.make_basis(fb.builtin_tables("set2", as_printed=True))


class TestFamily1:
    def test_simple_parameters(self):
        rows = fb.family1_rows(fb.Family1Params(lam=1, a21=1, a22=0, a31=0))
        assert rows[1].tolist() == [1, 0, -1, 0]
        assert rows[2, 1] == 0.0 and rows[2, 2] == 0.0
        for row in rows:
            assert row[0] + row[1] + row[2] + row[3] == 0.0

    def test_a32_solves_bilinear_constraint(self):
        rows = fb.family1_rows(fb.Family1Params(lam=1, a21=1, a22=1, a31=1))
        a21, a22, a31, a32 = rows[1, 0], rows[1, 1], rows[2, 0], rows[2, 1]
        assert a32 == -1.0
        assert 2 * a21 * a31 + 2 * a22 * a32 + a21 * a32 + a22 * a31 == 0.0

    def test_zero_lambda_is_singular(self):
        with pytest.raises(ConstructionError):
            fb.basis_from_family1(fb.Family1Params(lam=0, a21=1, a22=2, a31=3))

    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateParameterError):
            fb.family1_rows(fb.Family1Params(lam=1, a21=2, a22=-1, a31=1))

    def test_random_parameters_satisfy_branch_equalities(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            lam = rng.uniform(0.2, 3.0) * rng.choice([-1, 1])
            a21, a22, a31 = rng.uniform(-2, 2, size=3)
            if abs(2 * a22 + a21) < 0.05:
                continue
            rows = fb.family1_rows(fb.Family1Params(lam, a21, a22, a31))
            assert np.allclose(rows[0], [lam, lam, -3 * lam, lam])
            for i in (1, 2):
                assert rows[i, 3] == 0.0
                assert abs(rows[i, 2] + rows[i, 0] + rows[i, 1]) <= 1e-12
            residual = (
                2 * rows[1, 0] * rows[2, 0]
                + 2 * rows[1, 1] * rows[2, 1]
                + rows[1, 0] * rows[2, 1]
                + rows[1, 1] * rows[2, 0]
            )
            assert abs(residual) <= 1e-9


class TestAngles:
    def test_alpha_zero(self):
        rows = fb.angle_rows(fb.AngleParams((0.0, 0.5, 1.0), (0.0, 0.0, 0.0)))
        s3 = np.sqrt(3.0)
        assert np.allclose(rows[0], [1 / s3, 1 / s3, 1 / s3, -s3], atol=1e-15)
        rep = fb.validate_orthogonality(rows)
        assert abs(rep.norms[0] - 1.0) <= 1e-12

    def test_alpha_half_pi_beta_zero(self):
        rows = fb.angle_rows(fb.AngleParams((np.pi / 2, 0.5, 1.0), (0.0, 0.0, 0.0)))
        s2, s6 = np.sqrt(2.0), np.sqrt(6.0)
        assert np.allclose(rows[0], [-2 / s6, 1 / s2, -1 / s2, 2 / s6], atol=1e-15)

    def test_zero_mean_exact_by_construction(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = fb.AngleParams(tuple(rng.uniform(0, np.pi, 3)), tuple(rng.uniform(0, 2 * np.pi, 3)))
            for row in fb.angle_rows(p):
                assert row[0] + row[1] + row[2] + row[3] == 0.0

    def test_out_of_range_angles_rejected(self):
        with pytest.raises(ParameterError):
            fb.AngleParams((-0.1, 0, 0), (0, 0, 0))
        with pytest.raises(ParameterError):
            fb.AngleParams((0, 0, 0), (0, 2 * np.pi, 0))

    def test_identical_angles_reported_not_accepted(self):
        p = fb.AngleParams((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
        rep = fb.validate_orthogonality(fb.angle_rows(p))
        assert not rep.orthogonal
        with pytest.raises(ConstructionError):
            fb.basis_from_angles(p)

    def test_candidate_with_report(self):
        p = fb.AngleParams((0.3, 1.1, 2.0), (0.2, 4.0, 5.5))
        basis, report = fb.basis_from_angles(p)
        assert basis.id == "custom"
        assert np.max(np.abs(basis.analysis @ basis.synthesis - np.eye(4))) <= 1e-12
        assert report.zero_mean.all()


class TestCorollary:
    def test_pattern_one(self):
        rows = np.array([[2.0, 1, -3, 0], [0, 1, -1, 2], [1, 0, -2, 1]])
        assert fb.corollary_pattern_check(rows) == 1

    def test_all_patterns(self):
        base = np.array([[2.0, 1, -3, 4], [5, 1, -1, 2], [1, 7, -2, 1]])
        for pattern_id, zero_pos in {1: (4, 1, 2), 2: (2, 3, 4), 3: (1, 2, 3), 4: (3, 4, 1)}.items():
            rows = base.copy()
            for i, pos in enumerate(zero_pos):
                rows[i, pos - 1] = 0.0
            assert fb.corollary_pattern_check(rows) == pattern_id

    def test_inadmissible_triple(self):
        rows = np.array([[0.0, 1, -3, 2], [0, 1, -1, 2], [0, 3, -2, 1]])
        assert fb.corollary_applicable(rows)
        assert fb.corollary_pattern_check(rows) is None

    def test_set1_not_applicable(self):
        b = fb.builtin_basis("set1")
        assert not fb.corollary_applicable(b)
        assert fb.corollary_pattern_check(b) is None


class TestModulationMatrix:
    def test_set1_unitary_everywhere(self):
        assert fb.unitarity_check(fb.builtin_basis("set1"), samples=16, tol=1e-12)

    def test_set2_not_unitary(self):
        assert not fb.unitarity_check(fb.builtin_basis("set2"), samples=4, tol=1e-9)

    def test_set2_rescaled_is_unitary(self):
        tables = fb.builtin_tables("set2")
        tables[1] *= np.sqrt(2.0)
        tables[2] *= np.sqrt(2.0)
        assert fb.unitarity_check(tables, samples=16, tol=1e-9)

    def test_mm_star_equals_quarter_gram(self):
        # For piecewise-constant masks M M* is constant in xi and equals the
        # Gram of the coefficient rows (averaging row included) in the 1/4
        # inner product.
        rng = np.random.default_rng(3)
        rows = rng.normal(size=(3, 4))
        full = np.vstack([np.ones(4), rows])
        gram = full @ full.T / 4.0
        for xi in rng.random((5, 2)):
            m = fb.modulation_matrix(rows, xi)
            assert np.allclose(m @ m.conj().T, gram, atol=1e-12)

    def test_agreement_with_coefficient_criterion(self):
        rng = np.random.default_rng(19)
        set1_rows = fb.builtin_basis("set1").rows
        for trial in range(40):
            if trial % 2 == 0:
                # random rotation of an orthonormal bank stays orthonormal
                q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
                rows = q @ set1_rows
            else:
                p = fb.AngleParams(tuple(rng.uniform(0, np.pi, 3)), tuple(rng.uniform(0, 2 * np.pi, 3)))
                rows = fb.angle_rows(p)
            report = fb.validate_orthogonality(rows, tol=1e-9)
            assert report.orthonormal == fb.unitarity_check(rows, samples=16, tol=1e-9)


class TestLayoutConversions:
    def test_rows_tables_roundtrip(self):
        rng = np.random.default_rng(0)
        rows = rng.normal(size=(3, 4))
        assert np.array_equal(fb.tables_to_rows(fb.rows_to_tables(rows)), rows)

    def test_cell_placement(self):
        rows = np.array([[1.0, 2, 3, 4]] * 3)
        assert fb.rows_to_tables(rows)[0].tolist() == [[1, 4], [2, 3]]

    def test_basis_arrays_immutable(self):
        b = fb.builtin_basis("set1")
        with pytest.raises(ValueError):
            b.psi[0, 0, 0] = 5.0
