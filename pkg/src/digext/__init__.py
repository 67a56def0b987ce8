"""Weighted Turan-type extremal problems for digraphs: exact search at desk scale."""
from __future__ import annotations

__version__ = "0.1.0"

from .constructions import blow_up, complete_digraph, directed_cycle, dturan, dturan_parts, transitive_tournament, turan_number
from .digraph import LOG2_3, Digraph, WeightParam, canonical_key, from_edge_list, parse_text, read_digraph, weighted_size
from .errors import DigraphError

__all__ = [
    "Digraph",
    "DigraphError",
    "LOG2_3",
    "WeightParam",
    "blow_up",
    "canonical_key",
    "complete_digraph",
    "directed_cycle",
    "dturan",
    "dturan_parts",
    "from_edge_list",
    "parse_text",
    "read_digraph",
    "transitive_tournament",
    "turan_number",
    "weighted_size",
]
