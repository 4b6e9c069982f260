"""Labels as directed maps between nested text regions, and the
information flow they carry."""

from .dataset import (
    AnnotationSet,
    Finding,
    build_graph,
    parse_dataset,
    serialize_dataset,
    validate,
)
from .errors import (
    BadNesting,
    ContradictoryRules,
    DomainGap,
    DuplicateDocId,
    DuplicateLabelName,
    EmptyUniverse,
    IncompleteRules,
    InvalidRuleSpec,
    LabelFlowError,
    MalformedInput,
    MapNotWellDefined,
    SpanOutOfBounds,
    UniverseMismatch,
    UnknownAttribute,
    UnknownDocument,
    UnknownLabel,
    UnknownNode,
)
from .info import (
    DependencyReport,
    DistanceResult,
    InfoReport,
    composite_loss,
    dependency,
    dependency_loss,
    entropy,
    entropy_loss,
    label_report,
    path_distance,
    path_report,
    propagation_probability,
    relevancy_score,
)
from .model import (
    Annotation,
    Direction,
    Document,
    LabelDecl,
    LabeledGraph,
    MapEdge,
    Node,
    Region,
    add_annotation,
    map_endpoints,
    region_contains,
)
from .partition import (
    Partition,
    common_domain,
    composite_domain,
    composite_partition,
    directed_intersection_count,
    fibers,
    meet,
)
from .synth import (
    RuleSpec,
    generate_universe,
    oracle_counts,
    rulespec_from_json,
    universe_layout,
)

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "AnnotationSet",
    "BadNesting",
    "ContradictoryRules",
    "DependencyReport",
    "Direction",
    "DistanceResult",
    "Document",
    "DomainGap",
    "DuplicateDocId",
    "DuplicateLabelName",
    "EmptyUniverse",
    "Finding",
    "IncompleteRules",
    "InfoReport",
    "InvalidRuleSpec",
    "LabelDecl",
    "LabelFlowError",
    "LabeledGraph",
    "MalformedInput",
    "MapEdge",
    "MapNotWellDefined",
    "Node",
    "Partition",
    "Region",
    "RuleSpec",
    "SpanOutOfBounds",
    "UniverseMismatch",
    "UnknownAttribute",
    "UnknownDocument",
    "UnknownLabel",
    "UnknownNode",
    "add_annotation",
    "build_graph",
    "common_domain",
    "composite_domain",
    "composite_loss",
    "composite_partition",
    "dependency",
    "dependency_loss",
    "directed_intersection_count",
    "entropy",
    "entropy_loss",
    "fibers",
    "generate_universe",
    "label_report",
    "map_endpoints",
    "meet",
    "oracle_counts",
    "parse_dataset",
    "path_distance",
    "path_report",
    "propagation_probability",
    "region_contains",
    "relevancy_score",
    "rulespec_from_json",
    "serialize_dataset",
    "universe_layout",
    "validate",
]
