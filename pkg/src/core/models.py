"""
Data Models for Walk Teleport Auditor
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from src.core.hilbert import OperatorMatrix, StateVector
from src.utils.formatting import matrix_to_pairs, vector_to_pairs


VertexLabel = tuple[int, int]


@dataclass(frozen=True)
class ShiftAudit:
    """Well-formedness audit of a conditional shift"""

    n_vertices: int
    n_labels: int
    missing: list[VertexLabel]  # no outgoing edge
    colliding_out: list[VertexLabel]  # >= 2 outgoing edges
    colliding_in: list[VertexLabel]  # >= 2 incoming edges
    column_norms: dict[VertexLabel, float] = field(compare=False)

    @property
    def is_permutation(self) -> bool:
        return not (self.missing or self.colliding_out or self.colliding_in)

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_vertices": self.n_vertices,
            "n_labels": self.n_labels,
            "is_permutation": self.is_permutation,
            "missing": [list(p) for p in self.missing],
            "colliding_out": [list(p) for p in self.colliding_out],
            "colliding_in": [list(p) for p in self.colliding_in],
        }


@dataclass
class OutcomeRecord:
    """One measurement branch of a protocol run"""

    position_outcome: int
    coin1_outcome_index: int
    probability: float
    bob_unnormalized: StateVector
    bob_state: Optional[StateVector]  # None for an impossible branch
    recovered_state: Optional[StateVector] = None
    fidelity_vs_input: Optional[float] = None  # None when not applicable
    convention: str = "conjugate"
    recovery_missing: bool = False
    recovery_non_unitary: bool = False

    @property
    def zero_probability(self) -> bool:
        return self.bob_state is None

    @property
    def flags(self) -> list[str]:
        flags = []
        if self.zero_probability:
            flags.append("zero-probability")
        if self.recovery_missing:
            flags.append("no-recovery")
        if self.recovery_non_unitary:
            flags.append("non-unitary-recovery")
        return flags

    def to_dict(self) -> dict[str, Any]:
        return {
            "position": self.position_outcome,
            "coin1_outcome": self.coin1_outcome_index,
            "convention": self.convention,
            "probability": self.probability,
            "bob_state": vector_to_pairs(self.bob_state.amps) if self.bob_state is not None else None,
            "recovered_state": vector_to_pairs(self.recovered_state.amps) if self.recovered_state is not None else None,
            "fidelity": self.fidelity_vs_input,
            "flags": self.flags,
        }


@dataclass
class OutcomeLedger:
    """All branches of one protocol run for one input"""

    protocol: str
    amplitudes: np.ndarray
    records: list[OutcomeRecord]
    final_norm_squared: float

    @property
    def total_probability(self) -> float:
        return float(sum(r.probability for r in self.records))

    @property
    def norm_deficit(self) -> float:
        """1 - <φ_t|φ_t>, the probability lost by a non-unitary walk"""
        return 1.0 - self.final_norm_squared

    def to_dict(self) -> dict[str, Any]:
        return {
            "protocol": self.protocol,
            "input": vector_to_pairs(self.amplitudes),
            "total_probability": self.total_probability,
            "final_norm_squared": self.final_norm_squared,
            "norm_deficit": self.norm_deficit,
            "outcomes": [r.to_dict() for r in self.records],
        }


@dataclass(frozen=True)
class FeasibilityResult:
    """Whether a branch map admits a perfect unitary recovery"""

    proportional_unitary: bool
    scale: float
    synthesized_recovery: Optional[OperatorMatrix]
    gram_deviation: float  # relative to the mean Gram diagonal
    raw_gram_deviation: float  # max |M†M - c·I|

    def to_dict(self) -> dict[str, Any]:
        return {
            "proportional_unitary": self.proportional_unitary,
            "scale": self.scale,
            "gram_deviation": self.gram_deviation,
            "raw_gram_deviation": self.raw_gram_deviation,
            "synthesized_recovery": (
                matrix_to_pairs(self.synthesized_recovery.matrix)
                if self.synthesized_recovery is not None else None
            ),
        }


class ClaimStatus(str, Enum):
    MATCH = "match"
    MISMATCH = "mismatch"
    INFEASIBLE = "infeasible"
    NOT_CHECKABLE = "not-checkable"


@dataclass
class ClaimEntry:
    """Computed vs printed value for one audited claim"""

    claim_id: str
    paper_location: str
    status: ClaimStatus
    computed: Any
    expected: Any
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "paper_location": self.paper_location,
            "status": self.status.value,
            "computed": self.computed,
            "expected": self.expected,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ClaimEntry":
        return cls(
            claim_id=data["claim_id"],
            paper_location=data["paper_location"],
            status=ClaimStatus(data["status"]),
            computed=data["computed"],
            expected=data["expected"],
            detail=data["detail"],
        )


@dataclass
class ClaimReport:
    """Ordered claim entries plus run metadata"""

    variant: str
    seed: int
    tolerance: float
    claims: list[ClaimEntry]
    metadata: dict[str, Any] = field(default_factory=dict)

    def get(self, claim_id: str) -> ClaimEntry:
        for claim in self.claims:
            if claim.claim_id == claim_id:
                return claim
        raise KeyError(claim_id)

    def to_dict(self) -> dict[str, Any]:
        return {
            "run": {
                "variant": self.variant,
                "seed": self.seed,
                "tolerance": self.tolerance,
                **self.metadata,
            },
            "claims": [c.to_dict() for c in self.claims],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ClaimReport":
        run = dict(data["run"])
        variant = run.pop("variant")
        seed = run.pop("seed")
        tolerance = run.pop("tolerance")
        return cls(
            variant=variant,
            seed=seed,
            tolerance=tolerance,
            claims=[ClaimEntry.from_dict(c) for c in data["claims"]],
            metadata=run,
        )


@dataclass(frozen=True)
class RunConfig:
    """Options for the `run` command"""

    protocol: str  # builtin name or path to a protocol JSON file
    variant: Optional[str] = None  # only for the builtin paper protocol
    amplitudes: Optional[tuple[complex, ...]] = None
    random_count: Optional[int] = None
    seed: int = 1234
    outcome: Optional[tuple[int, int]] = None
    convention: str = "conjugate"
    output_format: str = "text"

    def __post_init__(self):
        if (self.amplitudes is None) == (self.random_count is None):
            raise ValueError("Exactly one input mode is required: explicit amplitudes or random")
        if self.random_count is not None and self.random_count < 1:
            raise ValueError(f"Random input count must be >= 1 (got {self.random_count})")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"Unsupported output format '{self.output_format}'")

    @property
    def is_random(self) -> bool:
        return self.random_count is not None

