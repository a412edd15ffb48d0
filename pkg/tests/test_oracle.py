import numpy as np
import pytest

from postselect import (
    default_rng,
    fuzz_projective,
    oracle_max_s,
    oracle_min_s,
    run_campaign,
    sample_projective,
    sample_state,
    sample_unitary,
)
from postselect.oracle import merge_reports


class TestSamplers:
    def test_state_is_unit(self, rng):
        for d in (1, 2, 5):
            psi = sample_state(d, rng)
            assert psi.shape == (d,)
            assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)

    def test_unitary(self, rng):
        for d in (2, 4):
            u = sample_unitary(d, rng)
            assert np.allclose(u.conj().T @ u, np.eye(d), atol=1e-12)

    def test_unitary_phase_convention_deterministic(self):
        a = sample_unitary(3, default_rng(7))
        b = sample_unitary(3, default_rng(7))
        assert np.array_equal(a, b)

    def test_projective_sets(self, rng):
        for d, n in ((2, 2), (4, 2), (5, 3)):
            projectors = sample_projective(d, n, rng)
            assert len(projectors) == n
            total = sum(projectors)
            assert np.allclose(total, np.eye(d), atol=1e-12)
            for p in projectors:
                assert np.allclose(p @ p, p, atol=1e-12)
                assert np.allclose(p, p.conj().T, atol=1e-12)

    def test_projective_rejects_bad_counts(self, rng):
        with pytest.raises(ValueError):
            sample_projective(2, 3, rng)


class TestFuzz:
    def test_no_violations_small(self, rng):
        for d, n in ((2, 2), (3, 2), (3, 3), (4, 4)):
            report = fuzz_projective(d, n, 5000, rng)
            assert report.samples == 5000
            assert report.violations == ()

    def test_coverage_accumulates(self, rng):
        report = fuzz_projective(2, 2, 20_000, rng)
        assert sum(report.coverage_grid.values()) <= report.samples
        assert len(report.coverage_grid) > 100

    def test_ternary_slice_only_for_three_outcomes(self, rng):
        assert fuzz_projective(3, 3, 3000, rng).ternary_grid
        assert not fuzz_projective(3, 2, 3000, rng).ternary_grid

    def test_merge_is_associative_on_digest(self, rng):
        a = fuzz_projective(2, 2, 1000, default_rng(1))
        b = fuzz_projective(2, 2, 1000, default_rng(2))
        c = fuzz_projective(2, 2, 1000, default_rng(3))
        left = merge_reports([merge_reports([a, b]), c])
        right = merge_reports([a, merge_reports([b, c])])
        assert left.digest() == right.digest()
        assert left.samples == 3000


class TestCampaign:
    def test_deterministic_across_worker_counts(self):
        serial = run_campaign(3, 2, 30_000, 42, max_workers=1, chunk=10_000)
        parallel = run_campaign(3, 2, 30_000, 42, max_workers=4, chunk=10_000)
        assert serial.digest() == parallel.digest()
        assert serial.violations == ()

    def test_seed_changes_digest(self):
        a = run_campaign(2, 2, 5000, 0, max_workers=1)
        b = run_campaign(2, 2, 5000, 1, max_workers=1)
        assert a.digest() != b.digest()


class TestExtremalSearch:
    def test_max_s_orthogonal_qubit(self):
        # Orthogonal pre/post states on a qubit cap success at 1/2.
        best = oracle_max_s(0.0, 2, 2, 4000, default_rng(5))
        assert 0.45 <= best <= 0.5 + 1e-9

    def test_max_s_upper_bound_half_t_plus_one(self, rng):
        for t in (0.2, 0.7):
            best = oracle_max_s(t, 2, 2, 3000, rng)
            assert best <= (t + 1.0) / 2.0 + 1e-9

    def test_min_s_lower_bound_t_over_n(self, rng):
        t = 0.6
        best = oracle_min_s(t, 3, 3, 4000, rng)
        assert best >= t / 3.0 - 1e-9
        assert best <= t / 3.0 + 0.05
