"""
Sweep Worker - Runs a protocol over many inputs in a thread pool
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from src.core.models import OutcomeLedger
from src.core.protocol import Outcome, ProtocolSpec, outcome_ledger, random_amplitudes

logger = logging.getLogger(__name__)


class SweepWorker:
    """Evaluate outcome ledgers for a batch of inputs"""

    def __init__(
        self,
        spec: ProtocolSpec,
        inputs: Sequence[np.ndarray],
        convention: str = "conjugate",
        outcomes: Optional[Iterable[Outcome]] = None,
        max_workers: Optional[int] = None,
        status_callback: Optional[Callable[[str], None]] = None,
        progress_callback: Optional[Callable[[float], None]] = None,
    ):
        self.spec = spec
        self.inputs = list(inputs)
        self.convention = convention
        self.outcomes = list(outcomes) if outcomes is not None else None
        self.max_workers = max_workers
        self.status_callback = status_callback
        self.progress_callback = progress_callback
        self._is_running = True

    @classmethod
    def seeded(cls, spec: ProtocolSpec, count: int, seed: int, **kwargs) -> "SweepWorker":
        """Worker over `count` random normalized inputs drawn from `seed`"""
        rng = np.random.default_rng(seed)
        inputs = [random_amplitudes(rng, spec.coin_dims[0]) for _ in range(count)]
        return cls(spec, inputs, **kwargs)

    def _run_one(self, a: np.ndarray) -> Optional[OutcomeLedger]:
        if not self._is_running:
            return None
        return outcome_ledger(self.spec, a, self.convention, self.outcomes)

    def run(self) -> list[OutcomeLedger]:
        """
        Run the sweep.

        Returns:
            Ledgers in input order; inputs skipped after stop() are omitted
        """
        total = len(self.inputs)
        self._emit_status(f"Running {self.spec.name} on {total} inputs...")

        ledgers: list[Optional[OutcomeLedger]] = []
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            # map() yields in submission order
            for done, ledger in enumerate(pool.map(self._run_one, self.inputs), start=1):
                ledgers.append(ledger)
                if self.progress_callback and self._is_running:
                    self.progress_callback(100.0 * done / total)

        finished = [ledger for ledger in ledgers if ledger is not None]
        logger.debug("Sweep finished: %d/%d inputs", len(finished), total)
        return finished

    def stop(self):
        self._is_running = False

    def _emit_status(self, message: str):
        logger.debug(message)
        if self.status_callback:
            self.status_callback(message)
