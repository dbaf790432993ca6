"""
Walk - Multi-coin discrete-time quantum walk steps and evolution
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from src.core.coins import CoinKind, make_coin
from src.core.graphshift import EdgeLabeledGraph, build_shift
from src.core.hilbert import OperatorMatrix, SpaceShape, StateVector, apply, embed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkStep:
    """One walk step: a coin on one coin subsystem, then the shift conditioned on it"""

    active_coin: int  # subsystem index; 0 is position
    coin: CoinKind
    graph: EdgeLabeledGraph

    def __post_init__(self):
        if self.active_coin < 1:
            raise ValueError(f"Active coin must index a coin subsystem (>= 1), got {self.active_coin}")
        if self.coin.dim != self.graph.n_labels:
            raise ValueError(
                f"Coin {self.coin} does not match the graph's {self.graph.n_labels} edge labels"
            )

    def __str__(self) -> str:
        return f"coin{self.active_coin}:{self.coin}"


def _check_step(shape: SpaceShape, step: WalkStep):
    if len(shape) < 2:
        raise ValueError(f"Walk shape needs a position and at least one coin, got {list(shape.dims)}")
    if step.active_coin >= len(shape):
        raise ValueError(f"Active coin {step.active_coin} does not exist in shape {list(shape.dims)}")
    if shape.dims[0] != step.graph.n_vertices:
        raise ValueError(
            f"Position dimension {shape.dims[0]} does not match the graph's {step.graph.n_vertices} vertices"
        )
    coin_dim = shape.dims[step.active_coin]
    if coin_dim != step.coin.dim:
        raise ValueError(
            f"Coin {step.coin} does not fit subsystem {step.active_coin} of dimension {coin_dim}"
        )


@lru_cache(maxsize=64)
def step_operator(shape: SpaceShape, step: WalkStep) -> OperatorMatrix:
    """
    U = S_embedded · C_embedded for one step.

    The coin acts on the active coin subsystem; the shift acts on
    (position, active coin) with identity on every other coin.
    """
    _check_step(shape, step)
    coin = embed(make_coin(step.coin), shape, (step.active_coin,))
    shift = embed(build_shift(step.graph), shape, (0, step.active_coin))
    logger.debug("Materialized step operator %s on %s", step, list(shape.dims))
    return shift @ coin


def evolve(initial: StateVector, steps: Sequence[WalkStep]) -> StateVector:
    """Apply steps in order, steps[0] first"""
    state = initial
    for step in steps:
        state = apply(step_operator(initial.shape, step), state)
    return state


def walk_operator(shape: SpaceShape, steps: Sequence[WalkStep]) -> OperatorMatrix:
    """Dense product U_n ··· U_1"""
    total = OperatorMatrix.identity(shape)
    for step in steps:
        total = step_operator(shape, step) @ total
    return total
