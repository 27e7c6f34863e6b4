from .dag_builder import (
    CHILD, PARENT, TEMPORAL_EDGE, TEMPORAL_ID, UNKNOWN_EDGE, UNKNOWN_ID,
    DagGraph, EdgeType, EdgeTypeVocab, build_dags, edge_type_vocab,
)

__all__ = [
    'CHILD', 'PARENT', 'TEMPORAL_EDGE', 'TEMPORAL_ID', 'UNKNOWN_EDGE', 'UNKNOWN_ID',
    'DagGraph', 'EdgeType', 'EdgeTypeVocab', 'build_dags', 'edge_type_vocab',
]
