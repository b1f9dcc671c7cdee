"""Isometric Ramsey relations for oriented graphs: exact arrow checks, constructive
embeddings and numeric bounds."""

__version__ = "0.1.0"

from .graph import (CapExceeded, Digraph, Graph, canonical_form, chromatic_number,
                    complete_graph, cycle_graph, distance_matrix, girth, path_graph,
                    rectangular_product)
from .catalog import directed_path, enumerate_graphs, enumerate_oriented_trees, gamma_construction
from .arrows import (ArrowVerdict, EmbeddingCertificate, Orientation, Variant, arrow_check, ddiam,
                     find_embedding, ghrv_check, ir_search)
from .formats import FormatError, from_graph6, to_graph6

__all__ = [
    "ArrowVerdict", "CapExceeded", "Digraph", "EmbeddingCertificate", "FormatError", "Graph",
    "Orientation", "Variant", "arrow_check", "canonical_form", "chromatic_number", "complete_graph",
    "cycle_graph", "ddiam", "directed_path", "distance_matrix", "enumerate_graphs",
    "enumerate_oriented_trees", "find_embedding", "from_graph6", "gamma_construction", "ghrv_check",
    "girth", "ir_search", "path_graph", "rectangular_product", "to_graph6",
]
