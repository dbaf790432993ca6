"""
Report View - Text rendering of audits, ledgers and claim reports
"""

from typing import Optional

from src.core.models import ClaimReport, OutcomeLedger, OutcomeRecord, ShiftAudit
from src.utils.formatting import format_probability, format_vector


class ReportView:
    """Render engine results as plain text"""

    RULE = "-" * 72

    def format_fidelity(self, value: Optional[float]) -> str:
        return "n/a" if value is None else f"{value:.6f}"

    def render_audit(self, name: str, audit: ShiftAudit) -> str:
        """Shift audit with its deficiency lists"""
        verdict = "permutation" if audit.is_permutation else "NOT a permutation"
        lines = [
            f"Graph: {name} ({audit.n_vertices} vertices, {audit.n_labels} labels)",
            f"Shift: {verdict}",
        ]
        if not audit.is_permutation:
            lines.append(f"  missing (vertex, label):       {self._pairs(audit.missing)}")
            lines.append(f"  colliding out (vertex, label): {self._pairs(audit.colliding_out)}")
            lines.append(f"  colliding in (vertex, label):  {self._pairs(audit.colliding_in)}")
        return "\n".join(lines)

    def _pairs(self, pairs: list[tuple[int, int]]) -> str:
        return ", ".join(f"({v},{l})" for v, l in pairs) if pairs else "none"

    def render_record(self, record: OutcomeRecord) -> str:
        outcome = f"|{record.position_outcome}>, f{record.coin1_outcome_index}"
        line = f"  ({outcome})  p={format_probability(record.probability)}"
        if record.bob_state is None:
            return line + "  [zero-probability]"
        line += f"  bob={format_vector(record.bob_state.amps)}"
        if record.recovered_state is not None:
            line += f"  recovered={format_vector(record.recovered_state.amps)}"
        line += f"  F={self.format_fidelity(record.fidelity_vs_input)}"
        flags = [f for f in record.flags if f != "zero-probability"]
        if flags:
            line += "  [" + ", ".join(flags) + "]"
        return line

    def render_ledger(self, ledger: OutcomeLedger, show_zero: bool = False) -> str:
        lines = [
            f"Protocol: {ledger.protocol}",
            f"Input: {format_vector(ledger.amplitudes)}",
        ]
        for record in ledger.records:
            if record.zero_probability and not show_zero:
                continue
            lines.append(self.render_record(record))
        lines.append(
            f"Total branch probability: {format_probability(ledger.total_probability)}"
            f"  (norm deficit {ledger.norm_deficit:.6f})"
        )
        return "\n".join(lines)

    def render_sweep_summary(self, summary: list[dict]) -> str:
        lines = ["Sweep summary (per outcome):"]
        for row in summary:
            if row["mean_probability"] <= 0.0 and row["mean_fidelity"] is None:
                continue
            lines.append(
                f"  (|{row['position']}>, f{row['coin1_outcome']})  runs={row['runs']}"
                f"  mean p={format_probability(row['mean_probability'])}"
                f"  mean F={self.format_fidelity(row['mean_fidelity'])}"
                f"  min F={self.format_fidelity(row['min_fidelity'])}"
            )
        return "\n".join(lines)

    def render_claim_report(self, report: ClaimReport) -> str:
        lines = [
            f"Claim audit: variant {report.variant}, seed {report.seed}, tolerance {report.tolerance:g}",
            self.RULE,
        ]
        for claim in report.claims:
            lines.append(f"{claim.claim_id} [{claim.status.value}] {claim.paper_location}")
            lines.append(f"    {claim.detail}")
        norm_loss = report.metadata.get("norm_loss")
        if norm_loss is not None:
            lines.append(self.RULE)
            lines.append("Norm loss per basis input: " + ", ".join(f"e{k}: {v:.6f}" for k, v in enumerate(norm_loss)))
        return "\n".join(lines)
