"""
Verify - Recovery synthesis, feasibility analysis and the claim audit
"""

import dataclasses
import logging
from typing import Any, Sequence, Union

import numpy as np

from src.core.coins import CoinKind, fourier_basis, gram_matrix
from src.core.graphshift import PaperVariant, audit_shift, cyclic_shift_graph, paper_graph
from src.core.hilbert import (
    EXACT_TOLERANCE,
    TOLERANCE,
    ZERO_PROBABILITY,
    OperatorMatrix,
    SpaceShape,
    StateVector,
    apply,
    basis_state,
    project_subsystem,
)
from src.core.models import ClaimEntry, ClaimReport, ClaimStatus, FeasibilityResult
from src.core.protocol import (
    CONVENTIONS,
    ProtocolSpec,
    conditional_map,
    outcome_ledger,
    paper_protocol,
    prepare_initial,
    random_amplitudes,
)
from src.core.walk import WalkStep, evolve, walk_operator
from src.utils.formatting import complex_to_pair, format_complex, format_ket

logger = logging.getLogger(__name__)

DEFAULT_SEED = 1234
DEFAULT_SAMPLES = 100

TermKey = tuple[tuple[int, ...], int]  # (ket indices, input index k)


def analyze_feasibility(m: Union[np.ndarray, OperatorMatrix]) -> FeasibilityResult:
    """
    Decide whether M†M = c·I for some c > 0.

    When it is, the recovery (1/√c)·M† satisfies R·M = √c·I. The deviation is
    measured relative to c = tr(M†M)/d so the verdict does not depend on the
    overall scale of M.
    """
    m = np.asarray(m.matrix if isinstance(m, OperatorMatrix) else m, dtype=np.complex128)
    d = m.shape[1]
    gram = m.conj().T @ m
    c = float(np.trace(gram).real) / d

    if c <= ZERO_PROBABILITY:
        raw = float(np.max(np.abs(gram)))
        return FeasibilityResult(False, 0.0, None, float("inf"), raw)

    raw = float(np.max(np.abs(gram - c * np.eye(d))))
    relative = raw / c
    scale = float(np.sqrt(c))
    feasible = relative <= TOLERANCE and m.shape[0] == d
    recovery = OperatorMatrix.from_array(m / scale).dagger() if feasible else None
    return FeasibilityResult(feasible, scale, recovery, relative, raw)


def synthesize_recovery_table(spec: ProtocolSpec, convention: str = "conjugate") -> dict[tuple[int, int], OperatorMatrix]:
    """Recovery operators for every outcome whose branch map is proportional-unitary"""
    table = {}
    for p, j in spec.outcomes:
        result = analyze_feasibility(conditional_map(spec, p, j, convention))
        if result.proportional_unitary:
            table[(p, j)] = result.synthesized_recovery
        else:
            logger.debug("Outcome (%d, %d) of %s admits no unitary recovery", p, j, spec.name)
    return table


def sanity_protocol() -> ProtocolSpec:
    """
    Positive control on a 3-vertex cyclic-shift graph.

    Step one moves the walker by the payload digit k, step two by a
    Fourier-spread digit l; measuring the position fixes k + l, so every
    branch map is a phased permutation and has an exact recovery.
    """
    graph = cyclic_shift_graph(3, 3)
    spec = ProtocolSpec(
        name="sanity",
        graph=graph,
        start_vertex=0,
        coin_dims=(3, 3),
        steps=(
            WalkStep(1, CoinKind.identity(3), graph),
            WalkStep(2, CoinKind.fourier(3), graph),
        ),
        position_outcomes=tuple(range(graph.n_vertices)),
        coin1_basis=tuple(fourier_basis(3)),
    )
    return dataclasses.replace(spec, recovery_table=synthesize_recovery_table(spec))


# -- term expansions ---------------------------------------------------------

def expand_terms(columns: Sequence[StateVector], tol: float = EXACT_TOLERANCE) -> dict[TermKey, complex]:
    """Non-zero coefficients of a linear map e_k ↦ columns[k], keyed by (ket, k)"""
    terms = {}
    for k, column in enumerate(columns):
        for ket, coeff in column.support(tol).items():
            terms[(ket, k)] = coeff
    return terms


def compare_terms(
    computed: dict[TermKey, complex],
    expected: dict[TermKey, complex],
    tol: float = EXACT_TOLERANCE,
) -> dict[str, list[TermKey]]:
    extra = sorted(key for key in computed if key not in expected)
    missing = sorted(key for key in expected if key not in computed)
    differing = sorted(
        key for key in computed
        if key in expected and abs(computed[key] - expected[key]) > tol
    )
    return {"extra": extra, "missing": missing, "differing": differing}


def format_term(key: TermKey, coeff: complex) -> str:
    ket, k = key
    return f"{format_complex(coeff)}·a{k}{format_ket(ket)}"


def _terms_to_json(terms: dict[TermKey, complex]) -> list[dict[str, Any]]:
    return [
        {"ket": list(ket), "input": k, "coeff": complex_to_pair(coeff)}
        for (ket, k), coeff in sorted(terms.items(), key=lambda item: (item[0][1], item[0][0]))
    ]


def _describe(diff: dict[str, list[TermKey]], computed: dict, expected: dict) -> str:
    parts = []
    for name, source in (("extra", computed), ("missing", expected), ("differing", computed)):
        keys = diff[name]
        if keys:
            parts.append(f"{name}: " + ", ".join(format_term(k, source[k]) for k in keys))
    return "; ".join(parts) if parts else "all terms agree"


def _has_difference(diff: dict[str, list[TermKey]]) -> bool:
    return any(diff.values())


# -- evolution paths -----------------------------------------------------------

def _basis_inputs(d: int) -> list[np.ndarray]:
    return list(np.eye(d, dtype=np.complex128))


def _two_path_finals(spec: ProtocolSpec) -> tuple[list[StateVector], float]:
    """Final states for payload inputs e_k, plus the full-space evolve/oracle deviation"""
    oracle = walk_operator(spec.shape, spec.steps)
    finals = [evolve(prepare_initial(spec, e), spec.steps) for e in _basis_inputs(spec.coin_dims[0])]

    deviation = 0.0
    for flat in range(spec.shape.total):
        state = basis_state(spec.shape, spec.shape.multi_index(flat))
        stepwise = evolve(state, spec.steps)
        dense = apply(oracle, state)
        deviation = max(deviation, float(np.max(np.abs(stepwise.amps - dense.amps))))
    return finals, deviation


# -- claims --------------------------------------------------------------------

_S = 1.0 / np.sqrt(3.0)

_FIRST_STEP_EXPECTED = {((2, 0, 0), 0): 1.0, ((0, 1, 0), 1): 1.0, ((8, 2, 0), 2): 1.0}
_FINAL_EXPECTED = {((3, 0, 0), 0): _S, ((1, 0, 1), 0): _S, ((1, 1, 0), 1): _S, ((1, 2, 1), 2): _S}
_COLLAPSED_EXPECTED = {((0, 1), 0): _S, ((1, 0), 1): _S, ((2, 1), 2): _S}


def _claim_first_step() -> ClaimEntry:
    computed, details, differs = {}, [], False
    for variant in (PaperVariant.ORIGINAL, PaperVariant.REARRANGED):
        spec = paper_protocol(variant)
        columns = [evolve(prepare_initial(spec, e), spec.steps[:1]) for e in _basis_inputs(3)]
        terms = expand_terms(columns)
        diff = compare_terms(terms, _FIRST_STEP_EXPECTED)
        differs = differs or _has_difference(diff)
        computed[variant.value] = _terms_to_json(terms)
        details.append(f"{variant.value}: {_describe(diff, terms, _FIRST_STEP_EXPECTED)}")
    return ClaimEntry(
        claim_id="C1",
        paper_location="state after the first walk step",
        status=ClaimStatus.MISMATCH if differs else ClaimStatus.MATCH,
        computed=computed,
        expected=_terms_to_json(_FIRST_STEP_EXPECTED),
        detail="; ".join(details),
    )


def _claim_final_state(spec: ProtocolSpec, finals: list[StateVector], deviation: float) -> ClaimEntry:
    terms = expand_terms(finals)
    diff = compare_terms(terms, _FINAL_EXPECTED)
    return ClaimEntry(
        claim_id="C2",
        paper_location="final state after two walk steps",
        status=ClaimStatus.MISMATCH if _has_difference(diff) else ClaimStatus.MATCH,
        computed={
            "terms": _terms_to_json(terms),
            "extra": _terms_to_json({k: terms[k] for k in diff["extra"]}),
            "missing": _terms_to_json({k: _FINAL_EXPECTED[k] for k in diff["missing"]}),
            "two_path_max_deviation": deviation,
        },
        expected=_terms_to_json(_FINAL_EXPECTED),
        detail=f"{spec.name}: {_describe(diff, terms, _FINAL_EXPECTED)}",
    )


def _claim_collapsed_state(spec: ProtocolSpec, finals: list[StateVector]) -> ClaimEntry:
    position = basis_state(SpaceShape((spec.graph.n_vertices,)), (1,))
    columns = [project_subsystem(final, 0, position).unnormalized for final in finals]
    terms = expand_terms(columns)
    diff = compare_terms(terms, _COLLAPSED_EXPECTED)
    return ClaimEntry(
        claim_id="C3",
        paper_location="collapsed state after A1 yields |1>",
        status=ClaimStatus.MISMATCH if _has_difference(diff) else ClaimStatus.MATCH,
        computed=_terms_to_json(terms),
        expected=_terms_to_json(_COLLAPSED_EXPECTED),
        detail=f"{spec.name}: {_describe(diff, terms, _COLLAPSED_EXPECTED)}",
    )


def _claim_shift_unitarity(variant: PaperVariant) -> ClaimEntry:
    variants = [PaperVariant.ORIGINAL, PaperVariant.REARRANGED]
    audits = {v.value: audit_shift(paper_graph(v)) for v in variants}
    if variant not in variants:
        audits[variant.value] = audit_shift(paper_graph(variant))

    details = []
    for name, audit in audits.items():
        if audit.is_permutation:
            details.append(f"{name}: permutation")
        else:
            details.append(
                f"{name}: missing {audit.missing}; colliding out {audit.colliding_out}; "
                f"colliding in {audit.colliding_in}"
            )
    paper_ok = all(audits[v.value].is_permutation for v in variants)
    return ClaimEntry(
        claim_id="C4",
        paper_location="evolution operator stated unitary",
        status=ClaimStatus.MATCH if paper_ok else ClaimStatus.MISMATCH,
        computed={name: audit.to_dict() for name, audit in audits.items()},
        expected={"is_permutation": True},
        detail="; ".join(details),
    )


def _claim_recovery(spec: ProtocolSpec, seed: int, samples: int) -> ClaimEntry:
    rows = sorted(spec.recovery_table)
    if not rows:
        return ClaimEntry(
            "C5", "measurement and recovery table", ClaimStatus.NOT_CHECKABLE,
            {}, {"fidelity": 1.0}, f"{spec.name} has no recovery table",
        )

    rng = np.random.default_rng(seed)
    inputs = [random_amplitudes(rng, spec.coin_dims[0]) for _ in range(samples)]

    computed: dict[str, Any] = {}
    perfect_conventions, infeasible_rows = [], set()
    for convention in CONVENTIONS:
        fidelities: dict[tuple[int, int], list[float]] = {row: [] for row in rows}
        for a in inputs:
            for record in outcome_ledger(spec, a, convention, rows).records:
                if record.fidelity_vs_input is not None:
                    fidelities[(record.position_outcome, record.coin1_outcome_index)].append(record.fidelity_vs_input)

        entries = []
        all_perfect = True
        for row in rows:
            feasibility = analyze_feasibility(conditional_map(spec, row[0], row[1], convention))
            if not feasibility.proportional_unitary and convention == "conjugate":
                infeasible_rows.add(row)
            values = fidelities[row]
            min_fidelity = float(np.min(values)) if values else None
            if min_fidelity is None or min_fidelity < 1.0 - TOLERANCE:
                all_perfect = False
            entries.append({
                "position": row[0],
                "coin1_outcome": row[1],
                "mean_fidelity": float(np.mean(values)) if values else None,
                "min_fidelity": min_fidelity,
                "proportional_unitary": feasibility.proportional_unitary,
                "gram_deviation": feasibility.gram_deviation,
            })
        computed[convention] = entries
        if all_perfect:
            perfect_conventions.append(convention)

    if perfect_conventions:
        status = ClaimStatus.MATCH
    elif infeasible_rows:
        status = ClaimStatus.INFEASIBLE
    else:
        status = ClaimStatus.MISMATCH

    details = []
    for convention, entries in computed.items():
        summary = ", ".join(
            f"({e['position']},f{e['coin1_outcome']}) min {e['min_fidelity']:.6f}"
            if e["min_fidelity"] is not None else f"({e['position']},f{e['coin1_outcome']}) n/a"
            for e in entries
        )
        details.append(f"{convention}: {summary}")
    if infeasible_rows:
        details.append(f"no unitary recovery exists for {sorted(infeasible_rows)}")
    return ClaimEntry(
        claim_id="C5",
        paper_location="measurement and recovery table",
        status=status,
        computed=computed,
        expected={"fidelity": 1.0},
        detail=f"{spec.name}, {samples} inputs, seed {seed}; " + "; ".join(details),
    )


def _claim_fourier_basis() -> ClaimEntry:
    deviation = float(np.max(np.abs(gram_matrix(fourier_basis(3)) - np.eye(3))))
    return ClaimEntry(
        claim_id="C6",
        paper_location="Fourier measurement basis states",
        status=ClaimStatus.MATCH if deviation <= EXACT_TOLERANCE else ClaimStatus.MISMATCH,
        computed={"gram_max_deviation": deviation},
        expected={"gram_max_deviation": 0.0},
        detail=f"max |G - I| = {deviation:.3e}",
    )


def audit_paper(
    variant: PaperVariant | str = PaperVariant.REARRANGED,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
) -> ClaimReport:
    """Evaluate the fixed claim catalog C1-C6 for one shift variant"""
    variant = PaperVariant(variant)
    spec = paper_protocol(variant)
    finals, deviation = _two_path_finals(spec)

    claims = [
        _claim_first_step(),
        _claim_final_state(spec, finals, deviation),
        _claim_collapsed_state(spec, finals),
        _claim_shift_unitarity(variant),
        _claim_recovery(spec, seed, samples),
        _claim_fourier_basis(),
    ]
    for claim in claims:
        logger.debug("Claim %s: %s", claim.claim_id, claim.status.value)

    norm_loss = [1.0 - float(np.vdot(f.amps, f.amps).real) for f in finals]
    return ClaimReport(
        variant=variant.value,
        seed=seed,
        tolerance=TOLERANCE,
        claims=claims,
        metadata={"samples": samples, "norm_loss": norm_loss},
    )
