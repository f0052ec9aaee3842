"""Fuzzy semantic network engine.

Knowledge bases hold objects, goals and instances described by fuzzy sets
of labels.  The package measures graded similarity between descriptions,
partitions a knowledge base into four similarity classes around synthetic
prototypes, and resolves partial queries through interactive accept/reject
sessions that only evaluate the classes a dialog actually reaches.
"""

from .core import DEGREE_TOLERANCE, FuzzySet, normalize_label
from .errors import (
    BothEmptyError,
    ComparisonError,
    EmptyKindError,
    EmptyLabelError,
    EmptyPartitionError,
    FingerprintMismatchError,
    FnetError,
    KindMismatchError,
    NoCurrentCandidateError,
    NoPairedAttributesError,
    NoPairedFacetsError,
    NoPairedValuesError,
    ParseError,
    QueryKindMismatchError,
    SessionNotActiveError,
    UnknownEntityError,
    UnknownPivotError,
    ValidationError,
)
from .model import (
    COMPOSITE,
    KIND_GOALS,
    KIND_INSTANCES,
    KIND_OBJECTS,
    KINDS,
    ORIGIN_SYSTEM,
    ORIGIN_USER,
    SIMPLE,
    Attribute,
    FuzzyInstance,
    FuzzyObject,
    FuzzyValue,
    Goal,
    KnowledgeBase,
    composite_attribute,
    simple_attribute,
)
from .partition import (
    Partition,
    ReferenceEntity,
    SimilarityBand,
    SimilarityClass,
    assign_class,
    build_reference_entity,
    choose_level,
    class_visit_order,
    partition_by_pivot,
    partition_kb,
    standard_bands,
)
from .session import (
    Candidate,
    Query,
    ResolutionRecord,
    Session,
    SessionLog,
    exhaustive_resolve,
    start_session,
)
from .similarity import (
    SimilarityMatrix,
    UnmatchedPolicy,
    sim_attribute,
    sim_composite_attribute,
    sim_entities,
    sim_goal,
    sim_instance,
    sim_object,
    sim_sets,
    sim_value,
    similarity_matrix,
)
from .store import (
    ValidationReport,
    canonical_bytes,
    canonical_json,
    dumps_kb,
    dumps_partition,
    format_number,
    kb_fingerprint,
    load_kb,
    load_partition,
    load_query,
    loads_kb,
    loads_partition,
    loads_query,
    parse_query,
    round_score,
    save_kb,
    save_partition,
    validate_kb,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]


def sample_kb_path():
    """Path of the bundled sample knowledge base."""
    from pathlib import Path

    return Path(__file__).parent / "data" / "sample_kb.json"
