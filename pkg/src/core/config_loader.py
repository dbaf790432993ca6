"""
Config Loader - Resolve builtin scenarios and load graph/protocol JSON files
"""

import json
import logging
import os
from typing import Any, Optional

from src.core.coins import CoinKind, measurement_basis
from src.core.graphshift import EdgeLabeledGraph, PaperVariant, cycle_graph, paper_graph, path_graph
from src.core.hilbert import OperatorMatrix
from src.core.protocol import ProtocolSpec, paper_protocol
from src.core.verify import sanity_protocol
from src.core.walk import WalkStep
from src.utils.formatting import pairs_to_matrix

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid or unreadable configuration"""


class ConfigLoader:
    """Turn builtin names and JSON files into graphs and protocol specs"""

    SUPPORTED_FORMATS = ['json']
    GRAPH_BUILTINS = ['paper:original', 'paper:rearranged', 'paper:completed', 'cycle:N', 'path:N']
    PROTOCOL_BUILTINS = ['paper', 'paper:original', 'paper:rearranged', 'paper:completed', 'sanity']

    def is_supported(self, path: str) -> bool:
        return self._get_extension(path) in self.SUPPORTED_FORMATS

    def _get_extension(self, path: str) -> str:
        return path.lower().split('.')[-1]

    def read_json(self, path: str) -> Any:
        """
        Read a JSON file.

        Raises:
            ConfigError: If the file is missing, unsupported or malformed
        """
        if not os.path.exists(path):
            raise ConfigError(f"File not found: {path}")
        if not self.is_supported(path):
            raise ConfigError(f"Unsupported config format: {path}. Supported: {self.SUPPORTED_FORMATS}")
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}") from e

    # -- graphs ----------------------------------------------------------------

    def load_graph(self, source: str) -> EdgeLabeledGraph:
        """Builtin graph name (`paper:original`, `cycle:10`, ...) or graph JSON path"""
        builtin = self._builtin_graph(source)
        if builtin is not None:
            return builtin
        return self.parse_graph(self.read_json(source))

    def parse_graph(self, data: Any) -> EdgeLabeledGraph:
        if not isinstance(data, dict):
            raise ConfigError("Graph definition must be a JSON object")
        try:
            return EdgeLabeledGraph.from_dict(data)
        except (ValueError, TypeError) as e:
            raise ConfigError(f"Invalid graph: {e}") from e

    def _builtin_graph(self, name: str) -> Optional[EdgeLabeledGraph]:
        family, _, arg = name.partition(":")
        if family == "paper" and arg:
            try:
                return paper_graph(PaperVariant(arg))
            except ValueError:
                raise ConfigError(f"Unknown paper variant '{arg}'. Supported: {[v.value for v in PaperVariant]}") from None
        if family in ("cycle", "path") and arg:
            try:
                n = int(arg)
            except ValueError:
                raise ConfigError(f"Graph size must be an integer in '{name}'") from None
            try:
                return cycle_graph(n) if family == "cycle" else path_graph(n)
            except ValueError as e:
                raise ConfigError(str(e)) from e
        return None

    # -- protocols -------------------------------------------------------------

    def load_protocol(self, source: str, variant: Optional[str] = None) -> ProtocolSpec:
        """
        Builtin protocol name or protocol JSON path.

        `variant` only applies to the builtin `paper` protocol.
        """
        if source in self.PROTOCOL_BUILTINS:
            return self._builtin_protocol(source, variant)
        if variant is not None:
            raise ConfigError("--variant applies only to the builtin paper protocol")
        if not os.path.exists(source):
            raise ConfigError(f"Unknown protocol '{source}'. Builtins: {self.PROTOCOL_BUILTINS}, or a JSON file path")
        return self.parse_protocol(self.read_json(source))

    def _builtin_protocol(self, name: str, variant: Optional[str]) -> ProtocolSpec:
        if name == "sanity":
            if variant is not None:
                raise ConfigError("--variant applies only to the builtin paper protocol")
            return sanity_protocol()
        _, _, named_variant = name.partition(":")
        if named_variant and variant is not None and variant != named_variant:
            raise ConfigError(f"Conflicting variants '{named_variant}' and '{variant}'")
        chosen = named_variant or variant or PaperVariant.REARRANGED.value
        try:
            return paper_protocol(PaperVariant(chosen))
        except ValueError:
            raise ConfigError(f"Unknown paper variant '{chosen}'. Supported: {[v.value for v in PaperVariant]}") from None

    def parse_protocol(self, data: Any) -> ProtocolSpec:
        """Build a ProtocolSpec from the protocol JSON schema"""
        if not isinstance(data, dict):
            raise ConfigError("Protocol definition must be a JSON object")
        try:
            return self._parse_protocol(data)
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as e:
            raise ConfigError(f"Invalid protocol: {e}") from e

    def _parse_protocol(self, data: dict[str, Any]) -> ProtocolSpec:
        graph_source = data["graph"]
        if isinstance(graph_source, str):
            graph = self._builtin_graph(graph_source)
            if graph is None:
                raise ConfigError(f"Unknown builtin graph '{graph_source}'. Supported: {self.GRAPH_BUILTINS}")
            name = data.get("name", graph_source)
        else:
            graph = self.parse_graph(graph_source)
            name = data.get("name", "custom")

        steps_data = data["steps"]
        if not isinstance(steps_data, list) or not steps_data:
            raise ConfigError("'steps' must be a non-empty array")
        coin_dims = {1: None, 2: None}
        steps = []
        for i, step in enumerate(steps_data):
            subsystem = int(step["coin_subsystem"])
            if subsystem not in coin_dims:
                raise ConfigError(f"Step #{i}: coin_subsystem must be 1 or 2, got {subsystem}")
            coin = CoinKind.parse(step["coin_kind"], step["dim"])
            if coin_dims[subsystem] not in (None, coin.dim):
                raise ConfigError(f"Step #{i}: coin {subsystem} dimension {coin.dim} conflicts with {coin_dims[subsystem]}")
            coin_dims[subsystem] = coin.dim
            steps.append(WalkStep(subsystem, coin, graph))

        if "coin_dims" in data:
            dims = tuple(int(d) for d in data["coin_dims"])
        elif None in coin_dims.values():
            raise ConfigError("'coin_dims' is required when a coin has no step")
        else:
            dims = (coin_dims[1], coin_dims[2])

        measurement = data.get("measurement", {})
        if not isinstance(measurement, dict):
            raise ConfigError(f"'measurement' must be an object, got {measurement!r}")
        if measurement.get("position", "computational") != "computational":
            raise ConfigError("Position measurement supports only the 'computational' basis")
        coin1_basis = measurement_basis(measurement.get("coin1", "fourier"), dims[0])

        recovery_table = {}
        for i, entry in enumerate(data.get("recovery", [])):
            matrix = pairs_to_matrix(entry["matrix"])
            if matrix.ndim != 2 or matrix.shape != (dims[1], dims[1]):
                raise ConfigError(
                    f"Recovery #{i}: matrix of shape {matrix.shape} does not act on Bob's {dims[1]}-dimensional space"
                )
            recovery_table[(int(entry["position"]), int(entry["coin1_outcome"]))] = OperatorMatrix.from_array(matrix)

        spec = ProtocolSpec(
            name=name,
            graph=graph,
            start_vertex=int(data["start_vertex"]),
            coin_dims=dims,
            steps=tuple(steps),
            position_outcomes=tuple(data.get("position_outcomes", range(graph.n_vertices))),
            coin1_basis=tuple(coin1_basis),
            recovery_table=recovery_table,
        )
        logger.debug("Loaded protocol %s with %d steps", spec.name, len(spec.steps))
        return spec
