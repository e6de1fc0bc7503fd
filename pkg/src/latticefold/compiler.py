"""Gate-count estimates for diagonal Hamiltonians.

A k-local Z string is a CNOT ladder onto one qubit, an Rz, and the ladder
undone. Routing cost is estimated per term from shortest paths on a hardware
connectivity graph.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import networkx as nx

from .pauli import PauliSum

SWAP_CNOTS = 3
ILLUSTRATIVE_GRAPH = "ring19_illustrative.json"


def term_cnot_cost(k: int) -> tuple[int, int]:
    """``(cnots, single_qubit_gates)`` for exp(-i theta Z...Z) on ``k`` qubits."""
    if k < 1:
        raise ValueError(f"locality must be >= 1, got {k}")
    return 2 * k - 2, 1


@dataclass
class TermCost:
    term: str
    locality: int
    cnot_count: int
    single_qubit_count: int
    routing_cnots: int = 0


@dataclass
class GateCostReport:
    terms: list[TermCost] = field(default_factory=list)
    routing_overhead_cnots: int = 0

    @property
    def total_cnots(self) -> int:
        return sum(t.cnot_count for t in self.terms)

    @property
    def total_single_qubit(self) -> int:
        return sum(t.single_qubit_count for t in self.terms)

    @property
    def max_locality(self) -> int:
        return max((t.locality for t in self.terms), default=0)

    def locality_histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t in self.terms:
            out[t.locality] = out.get(t.locality, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "terms": [asdict(t) for t in self.terms],
            "totals": {
                "terms": len(self.terms),
                "cnots": self.total_cnots,
                "single_qubit_gates": self.total_single_qubit,
                "routing_overhead_cnots": self.routing_overhead_cnots,
                "cnots_with_routing": self.total_cnots + self.routing_overhead_cnots,
                "max_locality": self.max_locality,
            },
            "locality_histogram": {str(k): v for k, v in self.locality_histogram().items()},
        }

    def to_table(self) -> str:
        lines = [f"{'locality':>8} {'terms':>7} {'cnots':>8} {'1q':>6}"]
        for k, count in self.locality_histogram().items():
            cn, sq = term_cnot_cost(k)
            lines.append(f"{k:>8} {count:>7} {cn * count:>8} {sq * count:>6}")
        lines.append(f"{'total':>8} {len(self.terms):>7} {self.total_cnots:>8} "
                     f"{self.total_single_qubit:>6}")
        lines.append(f"routing overhead: {self.routing_overhead_cnots} cnots")
        return "\n".join(lines) + "\n"


def _support(term: str) -> tuple[int, ...]:
    return tuple(i for i, p in enumerate(term) if p != "I")


def logical_cost(h: PauliSum) -> GateCostReport:
    """Per-term CNOT and rotation counts, identity terms free."""
    if not h.is_diagonal():
        raise ValueError("gate costing needs a diagonal (I/Z only) operator")
    report = GateCostReport()
    for term, _ in h.sorted_terms():
        k = len(_support(term))
        if k == 0:
            continue
        cn, sq = term_cnot_cost(k)
        report.terms.append(TermCost(term, k, cn, sq))
    return report


# ---------------------------------------------------------------------------
# hardware


@dataclass
class HardwareGraph:
    graph: nx.Graph
    name: str = ""

    def __post_init__(self):
        if self.graph.number_of_nodes() == 0:
            raise ValueError("hardware graph has no nodes")
        if nx.number_of_selfloops(self.graph):
            raise ValueError("hardware graph has self-loops")
        if not nx.is_connected(self.graph):
            raise ValueError("hardware graph is not connected")
        self._dist = dict(nx.all_pairs_shortest_path_length(self.graph))

    @classmethod
    def from_edges(cls, nodes: Sequence, edges: Sequence[Sequence], name: str = ""):
        g = nx.Graph()
        g.add_nodes_from(nodes)
        for edge in edges:
            if len(edge) != 2:
                raise ValueError(f"edge {edge!r} does not have two endpoints")
            a, b = edge
            if a not in g or b not in g:
                raise ValueError(f"edge {edge!r} uses an undeclared node")
            g.add_edge(a, b)
        return cls(g, name)

    @classmethod
    def from_json(cls, path: "str | Path") -> "HardwareGraph":
        try:
            doc = json.loads(Path(path).read_text())
            return cls.from_edges(doc["nodes"], doc["edges"], Path(path).stem)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}: not a graph file ({exc})") from None

    @classmethod
    def illustrative(cls) -> "HardwareGraph":
        ref = resources.files("latticefold") / "data" / ILLUSTRATIVE_GRAPH
        doc = json.loads(ref.read_text())
        return cls.from_edges(doc["nodes"], doc["edges"], "ring19_illustrative")

    @property
    def nodes(self) -> list:
        return sorted(self.graph.nodes)

    def distance(self, a, b) -> int:
        return self._dist[a][b]

    def default_placement(self, n_qubits: int) -> dict[int, object]:
        nodes = self.nodes
        if n_qubits > len(nodes):
            raise ValueError(f"{n_qubits} qubits do not fit on {len(nodes)} hardware nodes")
        return {q: nodes[q] for q in range(n_qubits)}


def _tree_weight(g: HardwareGraph, nodes: Sequence) -> int:
    """Weight of a minimum spanning tree of the shortest-path metric on ``nodes``."""
    closure = nx.Graph()
    ordered = sorted(nodes)
    closure.add_nodes_from(ordered)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            closure.add_edge(a, b, weight=g.distance(a, b))
    tree = nx.minimum_spanning_tree(closure, algorithm="kruskal")
    return int(tree.size(weight="weight"))


def term_routing_cnots(support_nodes: Sequence, g: HardwareGraph) -> int:
    k = len(support_nodes)
    if k < 2:
        return 0
    return SWAP_CNOTS * (_tree_weight(g, support_nodes) - (k - 1))


def _check_placement(placement: Mapping[int, object], g: HardwareGraph, n_qubits: int):
    missing = [q for q in range(n_qubits) if q not in placement]
    if missing:
        raise ValueError(f"qubits {missing} have no hardware node")
    targets = list(placement.values())
    if len(set(targets)) != len(targets):
        raise ValueError("placement maps two qubits to the same node")
    unknown = [t for t in targets if t not in g.graph]
    if unknown:
        raise ValueError(f"placement uses nodes {unknown} that are not in the graph")


def routing_overhead(
    h: PauliSum, g: HardwareGraph, placement: Mapping[int, object] | None = None
) -> int:
    """Lower-bound SWAP cost (in CNOTs) of bringing every term's qubits together.

    Per term: spanning-tree weight over hardware distances minus the ``k - 1``
    edges a connected support needs anyway, times three CNOTs per SWAP.
    """
    if placement is None:
        placement = g.default_placement(h.n_qubits)
    _check_placement(placement, g, h.n_qubits)
    total = 0
    for term, _ in h.sorted_terms():
        total += term_routing_cnots([placement[q] for q in _support(term)], g)
    return total


def cost_report(
    h: PauliSum, g: HardwareGraph | None = None, placement: Mapping[int, object] | None = None
) -> GateCostReport:
    report = logical_cost(h)
    if g is None:
        return report
    if placement is None:
        placement = g.default_placement(h.n_qubits)
    _check_placement(placement, g, h.n_qubits)
    for t in report.terms:
        t.routing_cnots = term_routing_cnots([placement[q] for q in _support(t.term)], g)
    report.routing_overhead_cnots = sum(t.routing_cnots for t in report.terms)
    return report
