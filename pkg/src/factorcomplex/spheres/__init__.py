from .enumerate import canonical_graph, enumerate_graphs, is_isomorphic
from .graph import (
    LabeledGraph,
    collapse_edge,
    decomposition_ranks,
    degree,
    has_ball_vertex,
    in_FCDg,
    in_FCDg_loose,
    is_cut,
    is_cut_basepoint,
    pillar_edges,
    tau_d_graph,
)
from .verify import (
    verify_all,
    verify_decomposition_sums,
    verify_degree_inclusion,
    verify_degree_pillar,
    verify_face_closure,
    verify_tau_d,
)

__all__ = [
    "LabeledGraph",
    "degree",
    "pillar_edges",
    "is_cut_basepoint",
    "is_cut",
    "in_FCDg",
    "in_FCDg_loose",
    "has_ball_vertex",
    "collapse_edge",
    "decomposition_ranks",
    "tau_d_graph",
    "enumerate_graphs",
    "canonical_graph",
    "is_isomorphic",
    "verify_degree_pillar",
    "verify_degree_inclusion",
    "verify_face_closure",
    "verify_decomposition_sums",
    "verify_tau_d",
    "verify_all",
]
