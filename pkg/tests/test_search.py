"""Subspace enumeration and extremal-dimension scans."""

import os

import pytest

import trimat.search as search
from trimat.field import InfiniteField, field_by_name
from trimat.matspace import Matrix, Subspace, random_subspace
from trimat.poly import char_poly, split_completely
from trimat.search import (
    BudgetExceeded,
    classify_optimal,
    compute_dn,
    compute_tn,
    enumerate_gl,
    enumerate_subspaces,
    gaussian_binomial,
    gl_order,
    pivot_patterns,
    scan_dimension,
    tn_base_witness,
)
from trimat.spaces import (
    diagonal_space,
    projective_members,
    sl_space,
    upper_triangular_space,
    weakly_triangularizable,
)

F2 = field_by_name("F2")
F3 = field_by_name("F3")
F5 = field_by_name("F5")
Q = field_by_name("Q")


class TestCounting:
    def test_known_values(self):
        assert gaussian_binomial(4, 3, 3) == 40
        assert gaussian_binomial(4, 3, 5) == 156
        assert gaussian_binomial(9, 7, 2) == 43435
        assert gaussian_binomial(9, 6, 2) == 788035
        assert gaussian_binomial(9, 7, 3) == 8069620

    def test_edges(self):
        assert gaussian_binomial(5, 0, 2) == 1
        assert gaussian_binomial(5, 5, 2) == 1
        assert gaussian_binomial(3, 4, 2) == 0

    def test_pattern_sum_matches(self):
        # free-entry counts add up to the subspace count
        for m, d, q in [(4, 2, 3), (6, 3, 2), (9, 7, 3)]:
            total = sum(q ** len(search.free_slots(p, m))
                        for p in pivot_patterns(m, d))
            assert total == gaussian_binomial(m, d, q)

    def test_colex_order(self):
        assert pivot_patterns(4, 2) == [(0, 1), (0, 2), (1, 2),
                                        (0, 3), (1, 3), (2, 3)]

    def test_gl_order(self):
        assert gl_order(2, 2) == 6
        assert gl_order(3, 2) == 48
        assert gl_order(2, 3) == 168
        assert len(enumerate_gl(F2, 2)) == 6
        assert len(enumerate_gl(F3, 2)) == 48


class TestEnumeration:
    def test_counts_and_canonicity(self):
        for ctx in (F2, F3):
            q = ctx.order()
            for d in range(5):
                seen = set()
                for s in enumerate_subspaces(2, d, ctx):
                    assert s.dim == d
                    assert Subspace.from_vectors(ctx, 2, s.basis) == s
                    seen.add(s.basis)
                assert len(seen) == gaussian_binomial(4, d, q)

    def test_first_subspace(self):
        first = next(enumerate_subspaces(2, 1, F3))
        assert first.basis == ((1, 0, 0, 0),)

    def test_infinite_field_rejected(self):
        with pytest.raises(InfiniteField):
            next(enumerate_subspaces(2, 1, Q))
        with pytest.raises(InfiniteField):
            compute_tn(Q, 2)


class TestScanEngines:
    def test_split_scan_parity(self):
        for ctx in (F2, F3, F5):
            a = scan_dimension(ctx, 2, 3, oracle="split", engine="numpy")
            b = scan_dimension(ctx, 2, 3, oracle="split", engine="generic")
            assert (a.subspaces, a.matrices, a.pass_count) == \
                   (b.subspaces, b.matrices, b.pass_count)
            assert a.first_witness == b.first_witness

    def test_diag_scan_parity(self):
        a = scan_dimension(F3, 2, 2, oracle="diag", engine="numpy")
        b = scan_dimension(F3, 2, 2, oracle="diag", engine="generic")
        assert (a.subspaces, a.matrices, a.pass_count) == \
               (b.subspaces, b.matrices, b.pass_count)

    def test_collect_returns_all_passes(self):
        scan = scan_dimension(F2, 2, 3, collect=True)
        assert len(scan.witnesses) == scan.pass_count == 4
        for s in scan.witnesses:
            assert weakly_triangularizable(s).ok
        assert scan.witnesses[0] == scan.first_witness

    def test_projective_pruning_sound(self):
        # a space passes on projective representatives iff it passes on
        # every nonzero member
        import random
        rng = random.Random(7)
        for _ in range(50):
            s = random_subspace(F3, 2, rng.choice([2, 3]), rng=rng)
            pruned = all(split_completely(char_poly(m)).splits
                         for m in projective_members(s))
            full = all(split_completely(char_poly(m)).splits
                       for m in s.members() if not m.is_zero())
            assert pruned == full


class TestComputeTn:
    def test_small_fields_n2(self):
        expected = {"F2": (16, 4), "F3": (41, 4), "F4": (86, 6), "F5": (157, 6)}
        for spec, (subs, opt) in expected.items():
            rep = compute_tn(field_by_name(spec), 2)
            assert rep.value == 3
            assert rep.exhaustive
            assert rep.subspaces_scanned == subs
            assert rep.optimal_count == opt
            assert rep.base_census
            assert weakly_triangularizable(rep.witness).ok

    def test_f2_witness_is_sl2(self):
        rep = compute_tn(F2, 2)
        assert rep.witness == sl_space(F2, 2)

    def test_f2_n3(self):
        rep = compute_tn(F2, 3)
        assert rep.value == 6
        assert rep.exhaustive
        assert rep.subspaces_scanned == 788035 + 43435
        assert rep.witness.dim == 6

    def test_n1(self):
        rep = compute_tn(F3, 1)
        assert rep.value == 1
        assert rep.exhaustive

    def test_base_witness(self):
        assert tn_base_witness(F3, 3) == upper_triangular_space(F3, 3)
        w2 = tn_base_witness(F2, 3)
        assert w2.dim == 6
        assert weakly_triangularizable(w2).ok
        assert tn_base_witness(F2, 2) == sl_space(F2, 2)
        assert tn_base_witness(field_by_name("F4"), 2) == \
            sl_space(field_by_name("F4"), 2)

    def test_determinism_across_threads(self):
        a = compute_tn(F2, 3, threads=1)
        b = compute_tn(F2, 3, threads=2)
        assert a.value == b.value
        assert a.subspaces_scanned == b.subspaces_scanned
        assert a.matrices_checked == b.matrices_checked
        assert a.witness == b.witness


class TestComputeDn:
    def test_small_fields_n2(self):
        for ctx in (F2, F3, F5):
            rep = compute_dn(ctx, 2)
            assert rep.value == 2
            assert rep.exhaustive
            assert rep.witness == diagonal_space(ctx, 2)
            assert rep.value <= compute_tn(ctx, 2).value

    def test_engine_parity(self):
        a = compute_dn(F3, 2, engine="numpy")
        b = compute_dn(F3, 2, engine="generic")
        assert a.value == b.value
        assert a.matrices_checked == b.matrices_checked
        assert a.witness == b.witness


class TestBudget:
    def test_zero_budget(self):
        with pytest.raises(BudgetExceeded) as exc:
            compute_tn(F3, 3, budget=0)
        assert exc.value.report.exhaustive is False
        assert exc.value.report.subspaces_scanned == 0

    def test_partial_counters(self):
        try:
            rep = compute_tn(F3, 3, budget=1.0, threads=1)
        except BudgetExceeded as exc:
            rep = exc.report
            assert not rep.exhaustive
            assert 0 < rep.subspaces_scanned < 8069620
        else:
            # machine fast enough to finish inside the budget
            assert rep.exhaustive


class TestCheckpoint:
    def test_round_trip(self, tmp_path):
        path = str(tmp_path / "scan.ck")
        stats = {0: [10, 55, 3, 1, [3]]}
        chunks = {2: {1: (7, 30, None, 0, [])}}
        search._checkpoint_save(path, F3, 2, 3, 4, stats, chunks)
        got_stats, got_chunks = search._checkpoint_load(path, F3, 2, 3, 4)
        assert got_stats == stats
        assert got_chunks == chunks
        # header mismatch discards the file
        assert search._checkpoint_load(path, F3, 2, 4, 4) == ({}, {})
        assert search._checkpoint_load(path, F2, 2, 3, 4) == ({}, {})

    def test_resume_matches_clean_run(self, tmp_path, monkeypatch):
        monkeypatch.setattr(search, "CHECKPOINT_SAVE_INTERVAL", 0.05)
        path = str(tmp_path / "resume.ck")
        clean = compute_tn(F2, 3, threads=1)
        try:
            compute_tn(F2, 3, budget=0.25, threads=1, checkpoint=path)
        except BudgetExceeded:
            pass
        rep = compute_tn(F2, 3, threads=1, checkpoint=path)
        assert rep.value == clean.value
        assert rep.subspaces_scanned == clean.subspaces_scanned
        assert rep.matrices_checked == clean.matrices_checked
        assert rep.witness == clean.witness
        assert not os.path.exists(path)


class TestClassify:
    @staticmethod
    def _lower_triangular(ctx, n):
        mats = [m.transpose() for m in
                upper_triangular_space(ctx, n).basis_matrices()]
        return Subspace.span(mats)

    def test_f2(self):
        classes = classify_optimal(F2, 2)
        assert [(c.orbit_size, c.representative.dim) for c in classes] == \
            [(3, 3), (1, 3)]
        # the orbit representative is its least canonical form, which for
        # the triangular orbit is the lower triangular space
        assert classes[0].representative == self._lower_triangular(F2, 2)
        assert classes[1].representative == sl_space(F2, 2)

    def test_f3_only_triangular(self):
        classes = classify_optimal(F3, 2)
        assert len(classes) == 1
        assert classes[0].orbit_size == 4
        assert classes[0].representative == self._lower_triangular(F3, 2)

    def test_sizes_sum_to_census(self):
        for ctx in (F2, F3):
            rep = compute_tn(ctx, 2)
            classes = classify_optimal(ctx, 2)
            assert sum(c.orbit_size for c in classes) == rep.optimal_count
            for c in classes:
                assert weakly_triangularizable(c.representative).ok

    def test_too_large(self):
        with pytest.raises(search.TooLarge):
            classify_optimal(F5, 4)
