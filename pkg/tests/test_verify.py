import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.stats import unitary_group

from src.core.coins import CoinKind, make_coin
from src.core.graphshift import PaperVariant, audit_shift
from src.core.hilbert import StateVector
from src.core.models import ClaimReport, ClaimStatus
from src.core.protocol import conditional_map, outcome_ledger, paper_protocol, random_amplitudes
from src.core.verify import analyze_feasibility, audit_paper, compare_terms, expand_terms, synthesize_recovery_table


# -- feasibility -----------------------------------------------------------------

def test_fourier_is_feasible():
    f3 = make_coin(CoinKind.fourier(3))
    result = analyze_feasibility(f3)
    assert result.proportional_unitary
    assert result.scale == pytest.approx(1.0)
    assert_allclose(result.synthesized_recovery.matrix, f3.matrix.conj().T, atol=1e-12)


def test_scaled_identity_is_feasible():
    result = analyze_feasibility(2 * np.eye(3))
    assert result.proportional_unitary
    assert result.scale == pytest.approx(2.0)
    assert_allclose(result.synthesized_recovery.matrix, np.eye(3), atol=1e-12)


def test_zero_matrix_is_infeasible():
    result = analyze_feasibility(np.zeros((3, 3)))
    assert not result.proportional_unitary
    assert result.scale == 0.0
    assert result.synthesized_recovery is None


@pytest.mark.parametrize("variant, deviation", [(PaperVariant.ORIGINAL, 1.0), (PaperVariant.REARRANGED, 0.75)])
def test_paper_f0_branch_is_infeasible(variant, deviation):
    m = conditional_map(paper_protocol(variant), 1, 0)
    result = analyze_feasibility(m)
    assert not result.proportional_unitary
    assert result.gram_deviation >= 0.3
    assert result.gram_deviation == pytest.approx(deviation)


def test_random_unitaries_are_feasible():
    for seed in range(100):
        u = unitary_group.rvs(3, random_state=seed)
        result = analyze_feasibility(u)
        assert result.proportional_unitary
        assert result.scale == pytest.approx(1.0, abs=1e-10)
        assert_allclose(result.synthesized_recovery.matrix @ u, np.eye(3), atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-np.pi, np.pi), st.floats(1e-3, 1e3))
def test_feasibility_ignores_phase_and_scale(seed, theta, c):
    rng = np.random.default_rng(seed)
    u = unitary_group.rvs(3, random_state=seed)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    for matrix in (u, m):
        base = analyze_feasibility(matrix).proportional_unitary
        assert analyze_feasibility(np.exp(1j * theta) * matrix).proportional_unitary == base
        assert analyze_feasibility(c * matrix).proportional_unitary == base


def test_feasible_recovery_scales_back():
    u = unitary_group.rvs(3, random_state=7)
    result = analyze_feasibility(u / 3)
    assert result.scale == pytest.approx(1 / 3)
    assert_allclose(result.synthesized_recovery.matrix @ (u / 3), np.eye(3) / 3, atol=1e-10)


# -- positive control ------------------------------------------------------------------

def test_sanity_shift_is_permutation(sanity_spec):
    assert audit_shift(sanity_spec.graph).is_permutation
    assert len(sanity_spec.recovery_table) == 9


def test_sanity_branches_are_proportional_unitary(sanity_spec):
    for p, j in sanity_spec.outcomes:
        m = conditional_map(sanity_spec, p, j)
        assert_allclose(m.conj().T @ m, np.eye(3) / 9, atol=1e-12)


def test_sanity_teleports_perfectly(sanity_spec):
    rng = np.random.default_rng(1234)
    for _ in range(100):
        ledger = outcome_ledger(sanity_spec, random_amplitudes(rng))
        assert ledger.total_probability == pytest.approx(1.0, abs=1e-10)
        for record in ledger.records:
            assert record.probability == pytest.approx(1 / 9, abs=1e-10)
            assert record.fidelity_vs_input >= 1 - 1e-10
            assert not record.flags


def test_synthesis_skips_infeasible_outcomes(original_spec):
    assert synthesize_recovery_table(original_spec) == {}


# -- term expansion ----------------------------------------------------------------

def test_compare_terms():
    s = 1 / np.sqrt(3)
    computed = {((3, 0, 0), 0): s, ((1, 0, 2), 0): s, ((1, 1, 0), 1): -s}
    expected = {((3, 0, 0), 0): s, ((1, 1, 0), 1): s, ((1, 2, 1), 2): s}
    diff = compare_terms(computed, expected)
    assert diff == {
        "extra": [((1, 0, 2), 0)],
        "missing": [((1, 2, 1), 2)],
        "differing": [((1, 1, 0), 1)],
    }


def test_expand_terms():
    columns = [StateVector.from_amplitudes([0, 1, 0]), StateVector.from_amplitudes([0.5, 0, 0])]
    assert expand_terms(columns) == {((1,), 0): 1, ((0,), 1): 0.5}


# -- claim audit -------------------------------------------------------------------

@pytest.fixture(scope="module")
def rearranged_report() -> ClaimReport:
    return audit_paper(PaperVariant.REARRANGED, seed=1234, samples=20)


@pytest.fixture(scope="module")
def original_report() -> ClaimReport:
    return audit_paper(PaperVariant.ORIGINAL, seed=1234, samples=20)


def _keys(entries):
    return {(tuple(e["ket"]), e["input"]) for e in entries}


def test_claim_catalog_is_complete(rearranged_report):
    assert [c.claim_id for c in rearranged_report.claims] == ["C1", "C2", "C3", "C4", "C5", "C6"]


def test_first_step_matches_for_both_variants(rearranged_report):
    claim = rearranged_report.get("C1")
    assert claim.status is ClaimStatus.MATCH
    assert set(claim.computed) == {"original", "rearranged"}


def test_rearranged_final_state_extra_terms(rearranged_report):
    claim = rearranged_report.get("C2")
    assert claim.status is ClaimStatus.MISMATCH
    assert _keys(claim.computed["extra"]) == {((1, 0, 2), 0), ((3, 2, 2), 2)}
    assert claim.computed["missing"] == []
    assert claim.computed["two_path_max_deviation"] <= 1e-12
    assert len(claim.computed["terms"]) == 6
    for term in claim.computed["terms"]:
        assert complex(*term["coeff"]) == pytest.approx(1 / np.sqrt(3), abs=1e-12)


def test_original_final_state_extra_term(original_report):
    claim = original_report.get("C2")
    assert _keys(claim.computed["extra"]) == {((3, 2, 2), 2)}


def test_collapsed_state_depends_on_variant(rearranged_report, original_report):
    assert original_report.get("C3").status is ClaimStatus.MATCH
    assert rearranged_report.get("C3").status is ClaimStatus.MISMATCH


def test_shift_unitarity_claim(original_report):
    claim = original_report.get("C4")
    assert claim.status is ClaimStatus.MISMATCH
    assert [3, 1] in claim.computed["original"]["colliding_out"]
    assert {(0, 1), (0, 2), (8, 0), (9, 0)} <= {tuple(p) for p in claim.computed["rearranged"]["missing"]}


def test_completed_variant_is_audited_too():
    claim = audit_paper(PaperVariant.COMPLETED, samples=5).get("C4")
    assert claim.computed["completed"]["is_permutation"]


def test_recovery_claim_is_infeasible(rearranged_report):
    claim = rearranged_report.get("C5")
    assert claim.status is ClaimStatus.INFEASIBLE
    assert set(claim.computed) == {"conjugate", "paper"}
    for row in claim.computed["conjugate"]:
        assert not row["proportional_unitary"]
        assert row["min_fidelity"] < 1.0


def test_fourier_claim_matches(rearranged_report):
    assert rearranged_report.get("C6").status is ClaimStatus.MATCH


def test_report_metadata(rearranged_report):
    run = rearranged_report.to_dict()["run"]
    assert run["variant"] == "rearranged"
    assert run["seed"] == 1234
    assert run["tolerance"] == 1e-10
    assert run["samples"] == 20
    assert run["norm_loss"] == pytest.approx([0.0, 2 / 3, 1 / 3], abs=1e-12)


def test_report_is_deterministic(rearranged_report):
    again = audit_paper(PaperVariant.REARRANGED, seed=1234, samples=20)
    assert json.dumps(again.to_dict()) == json.dumps(rearranged_report.to_dict())


def test_report_json_round_trip(rearranged_report):
    data = json.loads(json.dumps(rearranged_report.to_dict()))
    assert ClaimReport.from_dict(data).to_dict() == data
