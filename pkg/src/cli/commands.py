"""
Commands - verify-paper, run, graph-check
"""

import json
import logging
import sys
from typing import Any, Optional

from src.cli.report_view import ReportView
from src.core.config_loader import ConfigLoader
from src.core.graphshift import audit_shift
from src.core.models import RunConfig
from src.core.protocol import outcome_ledger, summarize_sweep
from src.core.sweep_worker import SweepWorker
from src.core.verify import DEFAULT_SAMPLES, DEFAULT_SEED, audit_paper

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_PERMUTATION = 2


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_output(text: str, out: Optional[str] = None):
    """Write to `out` or standard output"""
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify_paper(
    variant: str = "rearranged",
    seed: int = DEFAULT_SEED,
    output_format: str = "text",
    out: Optional[str] = None,
    samples: int = DEFAULT_SAMPLES,
) -> int:
    """Audit the claim catalog; mismatches are data, so this returns 0"""
    report = audit_paper(variant, seed=seed, samples=samples)
    if output_format == "json":
        text = to_json(report.to_dict())
    else:
        text = ReportView().render_claim_report(report) + "\n"
    write_output(text, out)
    return EXIT_OK


def cmd_run(config: RunConfig, out: Optional[str] = None, loader: Optional[ConfigLoader] = None) -> int:
    """Run a protocol for one input or a seeded random sweep"""
    loader = loader or ConfigLoader()
    spec = loader.load_protocol(config.protocol, config.variant)
    outcomes = [config.outcome] if config.outcome is not None else None
    view = ReportView()

    if config.is_random:
        worker = SweepWorker.seeded(
            spec, config.random_count, config.seed,
            convention=config.convention, outcomes=outcomes,
            status_callback=logger.info,
        )
        ledgers = worker.run()
        summary = summarize_sweep(ledgers)
        if config.output_format == "json":
            text = to_json({
                "protocol": spec.name,
                "seed": config.seed,
                "convention": config.convention,
                "ledgers": [ledger.to_dict() for ledger in ledgers],
                "summary": summary,
            })
        else:
            blocks = [view.render_ledger(ledger) for ledger in ledgers]
            blocks.append(view.render_sweep_summary(summary))
            text = ("\n" + view.RULE + "\n").join(blocks) + "\n"
    else:
        ledger = outcome_ledger(spec, config.amplitudes, config.convention, outcomes)
        if config.output_format == "json":
            text = to_json(ledger.to_dict())
        else:
            text = view.render_ledger(ledger, show_zero=outcomes is not None) + "\n"

    write_output(text, out)
    return EXIT_OK


def cmd_graph_check(
    source: str,
    output_format: str = "text",
    out: Optional[str] = None,
    loader: Optional[ConfigLoader] = None,
) -> int:
    """Audit a graph's shift; exit 0 for a permutation, 2 otherwise"""
    loader = loader or ConfigLoader()
    audit = audit_shift(loader.load_graph(source))
    if output_format == "json":
        text = to_json({"graph": source, **audit.to_dict()})
    else:
        text = ReportView().render_audit(source, audit) + "\n"
    write_output(text, out)
    return EXIT_OK if audit.is_permutation else EXIT_NOT_PERMUTATION
