"""
Protocol - Teleportation via a two-coin walk: preparation, evolution,
two-stage measurement, recovery and fidelity
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from src.core.coins import CoinKind, fourier_basis, gram_matrix
from src.core.graphshift import EdgeLabeledGraph, PaperVariant, paper_graph
from src.core.hilbert import (
    TOLERANCE,
    ZERO_PROBABILITY,
    OperatorMatrix,
    SpaceShape,
    StateVector,
    apply,
    basis_state,
    fidelity,
    project_subsystem,
)
from src.core.models import OutcomeLedger, OutcomeRecord
from src.core.walk import WalkStep, evolve

logger = logging.getLogger(__name__)

CONVENTIONS = ("conjugate", "paper")

Outcome = tuple[int, int]


@dataclass(frozen=True)
class ProtocolSpec:
    """Everything needed to run one teleportation scenario"""

    name: str
    graph: EdgeLabeledGraph
    start_vertex: int
    coin_dims: tuple[int, int]
    steps: tuple[WalkStep, ...]
    position_outcomes: tuple[int, ...]
    coin1_basis: tuple[StateVector, ...]
    recovery_table: Mapping[Outcome, OperatorMatrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coin_dims", tuple(int(d) for d in self.coin_dims))
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "position_outcomes", tuple(int(p) for p in self.position_outcomes))
        object.__setattr__(self, "coin1_basis", tuple(self.coin1_basis))
        object.__setattr__(self, "recovery_table", dict(self.recovery_table))

        if len(self.coin_dims) != 2:
            raise ValueError(f"Protocol needs exactly two coin dimensions, got {list(self.coin_dims)}")
        if not 0 <= self.start_vertex < self.graph.n_vertices:
            raise ValueError(f"Start vertex {self.start_vertex} outside 0..{self.graph.n_vertices - 1}")
        for p in self.position_outcomes:
            if not 0 <= p < self.graph.n_vertices:
                raise ValueError(f"Position outcome {p} outside 0..{self.graph.n_vertices - 1}")
        for step in self.steps:
            if step.graph.n_vertices != self.graph.n_vertices:
                raise ValueError(f"Step {step} uses a graph with {step.graph.n_vertices} vertices")

        d1, d2 = self.coin_dims
        if len(self.coin1_basis) != d1 or any(b.shape.total != d1 for b in self.coin1_basis):
            raise ValueError(f"Coin-1 measurement basis must hold {d1} vectors of dimension {d1}")
        deviation = np.max(np.abs(gram_matrix(list(self.coin1_basis)) - np.eye(d1)))
        if deviation > TOLERANCE:
            raise ValueError(f"Coin-1 measurement basis is not orthonormal (deviation {deviation:.3g})")

        for (p, j), op in self.recovery_table.items():
            if op.dim != d2:
                raise ValueError(
                    f"Recovery operator for outcome ({p}, {j}) is {op.dim}x{op.dim}; Bob's space has dimension {d2}"
                )

    @property
    def shape(self) -> SpaceShape:
        return SpaceShape((self.graph.n_vertices, *self.coin_dims))

    @property
    def outcomes(self) -> list[Outcome]:
        return [(p, j) for p in self.position_outcomes for j in range(len(self.coin1_basis))]


def _check_convention(convention: str):
    if convention not in CONVENTIONS:
        raise ValueError(f"Unknown measurement convention '{convention}'. Supported: {list(CONVENTIONS)}")


def _payload(spec: ProtocolSpec, a: Sequence[complex]) -> StateVector:
    d1 = spec.coin_dims[0]
    amps = np.asarray(list(a), dtype=np.complex128)
    if amps.shape != (d1,):
        raise ValueError(f"Expected {d1} input amplitudes, got {amps.shape[0]}")
    payload = StateVector(SpaceShape((d1,)), amps)
    if not payload.is_normalized():
        raise ValueError(f"Input amplitudes must be normalized (Σ|a_k|² = {payload.norm() ** 2:.12g})")
    return payload


def prepare_initial(spec: ProtocolSpec, a: Sequence[complex]) -> StateVector:
    """|start> ⊗ (Σ a_k|k>) ⊗ |0>"""
    payload = _payload(spec, a)
    position = basis_state(SpaceShape((spec.graph.n_vertices,)), (spec.start_vertex,))
    bob = basis_state(SpaceShape((spec.coin_dims[1],)), (0,))
    return StateVector.tensor(position, payload, bob)


def _coin1_vector(spec: ProtocolSpec, j: int, convention: str) -> StateVector:
    if not 0 <= j < len(spec.coin1_basis):
        raise ValueError(f"Coin-1 outcome {j} outside 0..{len(spec.coin1_basis) - 1}")
    vector = spec.coin1_basis[j]
    if convention == "paper":
        # <conj(f_j)|ψ> yields the un-conjugated expansion coefficients
        return StateVector(vector.shape, vector.amps.conj())
    return vector


def bob_branch(spec: ProtocolSpec, final: StateVector, position: int, j: int, convention: str = "conjugate") -> StateVector:
    """Un-normalized Bob state for one (position, coin-1) outcome of `final`"""
    _check_convention(convention)
    if not 0 <= position < spec.graph.n_vertices:
        raise ValueError(f"Position outcome {position} outside 0..{spec.graph.n_vertices - 1}")
    position_ket = basis_state(SpaceShape((spec.graph.n_vertices,)), (position,))
    after_position = project_subsystem(final, 0, position_ket).unnormalized
    return project_subsystem(after_position, 0, _coin1_vector(spec, j, convention)).unnormalized


def _record(
    spec: ProtocolSpec,
    payload: StateVector,
    final: StateVector,
    position: int,
    j: int,
    convention: str,
) -> OutcomeRecord:
    bob = bob_branch(spec, final, position, j, convention)
    probability = float(np.vdot(bob.amps, bob.amps).real)
    record = OutcomeRecord(
        position_outcome=position,
        coin1_outcome_index=j,
        probability=probability,
        bob_unnormalized=bob,
        bob_state=bob.normalize() if probability > ZERO_PROBABILITY else None,
        convention=convention,
    )
    if record.bob_state is None:
        logger.debug("Outcome (%d, %d) has zero probability", position, j)
        return record

    recovery = spec.recovery_table.get((position, j))
    if recovery is None:
        record.recovery_missing = True
        return record

    record.recovery_non_unitary = not recovery.is_unitary()
    recovered = apply(recovery, record.bob_state)
    if recovered.norm() ** 2 <= ZERO_PROBABILITY:
        # recovery annihilates Bob's state
        record.fidelity_vs_input = 0.0
        return record
    record.recovered_state = recovered.normalize()
    if record.recovered_state.shape == payload.shape:
        record.fidelity_vs_input = fidelity(record.recovered_state, payload)
    return record


def run_outcome(
    spec: ProtocolSpec,
    a: Sequence[complex],
    position_outcome: int,
    coin1_outcome_index: int,
    convention: str = "conjugate",
) -> OutcomeRecord:
    """Evolve, measure position then coin 1, apply the tabulated recovery"""
    _check_convention(convention)
    payload = _payload(spec, a)
    final = evolve(prepare_initial(spec, a), spec.steps)
    return _record(spec, payload, final, position_outcome, coin1_outcome_index, convention)


def outcome_ledger(
    spec: ProtocolSpec,
    a: Sequence[complex],
    convention: str = "conjugate",
    outcomes: Optional[Iterable[Outcome]] = None,
) -> OutcomeLedger:
    """Records for every (or the selected) measurement outcome of one input"""
    _check_convention(convention)
    payload = _payload(spec, a)
    final = evolve(prepare_initial(spec, a), spec.steps)
    selected = list(outcomes) if outcomes is not None else spec.outcomes
    records = [_record(spec, payload, final, p, j, convention) for p, j in selected]
    return OutcomeLedger(
        protocol=spec.name,
        amplitudes=payload.amps,
        records=records,
        final_norm_squared=float(np.vdot(final.amps, final.amps).real),
    )


def conditional_map(spec: ProtocolSpec, position_outcome: int, coin1_outcome_index: int, convention: str = "conjugate") -> np.ndarray:
    """
    Linear map from input amplitudes to Bob's un-normalized branch state.

    Column k is the branch state for input e_k, branch factors included.
    """
    d1, d2 = spec.coin_dims
    columns = np.zeros((d2, d1), dtype=np.complex128)
    for k in range(d1):
        e_k = np.eye(d1, dtype=np.complex128)[k]
        final = evolve(prepare_initial(spec, e_k), spec.steps)
        columns[:, k] = bob_branch(spec, final, position_outcome, coin1_outcome_index, convention).amps
    return columns


def paper_recovery_operator() -> OperatorMatrix:
    """|0><1| + |1><0| + |2><1|"""
    matrix = np.zeros((3, 3), dtype=np.complex128)
    matrix[0, 1] = 1.0
    matrix[1, 0] = 1.0
    matrix[2, 1] = 1.0
    return OperatorMatrix.from_array(matrix)


def phase_correction(j: int) -> OperatorMatrix:
    """diag(exp(-2πi·j/3), exp(-4πi·j/3), 1); j=1 and j=2 give P₁ and P₂ as printed"""
    phases = [np.exp(-2j * np.pi * j / 3), np.exp(-4j * np.pi * j / 3), 1.0]
    return OperatorMatrix.from_array(np.diag(np.asarray(phases, dtype=np.complex128)))


def paper_protocol(variant: PaperVariant | str = PaperVariant.REARRANGED) -> ProtocolSpec:
    """Cycled-path protocol: I₃ then F₃ coins, start at vertex 1, tabulated recovery for A₁ = |1>"""
    variant = PaperVariant(variant)
    graph = paper_graph(variant)
    recovery = paper_recovery_operator()
    return ProtocolSpec(
        name=f"paper:{variant.value}",
        graph=graph,
        start_vertex=1,
        coin_dims=(3, 3),
        steps=(
            WalkStep(1, CoinKind.identity(3), graph),
            WalkStep(2, CoinKind.fourier(3), graph),
        ),
        position_outcomes=tuple(range(graph.n_vertices)),
        coin1_basis=tuple(fourier_basis(3)),
        recovery_table={
            (1, 0): recovery,
            (1, 1): recovery @ phase_correction(1),
            (1, 2): recovery @ phase_correction(2),
        },
    )


def random_amplitudes(rng: np.random.Generator, d: int = 3) -> np.ndarray:
    """Normalized complex Gaussian amplitudes"""
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return z / np.linalg.norm(z)


def summarize_sweep(ledgers: Sequence[OutcomeLedger]) -> list[dict]:
    """Mean/min fidelity and mean probability per outcome over a sweep"""
    by_outcome: dict[Outcome, list[OutcomeRecord]] = {}
    for ledger in ledgers:
        for record in ledger.records:
            by_outcome.setdefault((record.position_outcome, record.coin1_outcome_index), []).append(record)

    summary = []
    for (p, j), records in by_outcome.items():
        fidelities = [r.fidelity_vs_input for r in records if r.fidelity_vs_input is not None]
        summary.append({
            "position": p,
            "coin1_outcome": j,
            "runs": len(records),
            "mean_probability": float(np.mean([r.probability for r in records])),
            "mean_fidelity": float(np.mean(fidelities)) if fidelities else None,
            "min_fidelity": float(np.min(fidelities)) if fidelities else None,
        })
    return summary
