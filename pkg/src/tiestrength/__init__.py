"""Tie-strength inference under the strong triadic closure property.

Edge strengths are inferred from graph structure alone by relaxing the
strong/weak labeling into linear programs, solved exactly either by a
rational simplex or, where the constraints allow, by a minimum-cut
algorithm for two-variable-per-constraint systems.
"""

from .graph import (ContractedGraph, EdgeList, Graph, GroundTruth, analyze, contract,
                    enumerate_triangles, enumerate_wedges, load_edge_list, read_edge_list,
                    strip_clique_components)
from .inference import infer
from .lp import Params, StrengthAssignment

__all__ = [
    "ContractedGraph", "EdgeList", "Graph", "GroundTruth", "Params", "StrengthAssignment",
    "analyze", "contract", "enumerate_triangles", "enumerate_wedges", "infer",
    "load_edge_list", "read_edge_list", "strip_clique_components",
]
