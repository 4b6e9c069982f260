"""Dataset ingest: parse, validate, serialize, and build the map graph.

A dataset is one JSON object::

    {
      "documents":   [ { "id": str, "text": str } ],
      "labels":      [ { "name": str, "direction": "forward" | "backward" } ],
      "annotations": [ { "doc": str, "label": str,
                         "mention": [start, end],
                         "entity":  [start, end] } ]
    }

All three keys are required and no others are allowed. Offsets are byte
offsets into the UTF-8 encoding of the document text, half-open. Canonical
serialization sorts documents by id, labels by name, and annotations by
(doc, mention.start, mention.end, label), with the entity span as a final
tiebreak, and drops exact duplicate annotations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from .errors import (
    BadNesting,
    DuplicateDocId,
    DuplicateLabelName,
    MalformedInput,
    MapNotWellDefined,
    SpanOutOfBounds,
    UnknownDocument,
    UnknownLabel,
)
from .model import (
    Annotation,
    Direction,
    Document,
    LabelDecl,
    LabeledGraph,
    Region,
    map_endpoints,
    region_contains,
)


@dataclass(frozen=True)
class Finding:
    """One validation violation, as data.

    ``annotations`` holds the zero-based indices of the annotations
    involved (empty for document- or label-level findings).
    """

    kind: str
    message: str
    annotations: tuple[int, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "message": self.message,
            "annotations": list(self.annotations),
        }


def _ann_sort_key(ann: Annotation):
    return (ann.mention.doc_id, ann.mention.start, ann.mention.end, ann.label,
            ann.entity.start, ann.entity.end)


@dataclass
class AnnotationSet:
    """Documents, label declarations, and annotations, in input order.

    Equality is order-insensitive (canonical forms are compared), so a
    parse of a canonical serialization compares equal to the original.
    """

    documents: list[Document] = field(default_factory=list)
    labels: list[LabelDecl] = field(default_factory=list)
    annotations: list[Annotation] = field(default_factory=list)

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise UnknownDocument(f"document {doc_id!r} is not declared")

    def canonical(self) -> "AnnotationSet":
        """Sorted, deduplicated copy in the serialization order."""
        seen: set[Annotation] = set()
        anns = []
        for ann in sorted(self.annotations, key=_ann_sort_key):
            if ann not in seen:
                seen.add(ann)
                anns.append(ann)
        return AnnotationSet(
            documents=sorted(self.documents, key=lambda d: d.id),
            labels=sorted(self.labels, key=lambda l: l.name),
            annotations=anns,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnnotationSet):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.documents == b.documents and a.labels == b.labels
                and a.annotations == b.annotations)


# -- parsing -----------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise MalformedInput(message)


def _as_str(obj: dict, key: str, where: str) -> str:
    value = obj.get(key)
    _require(isinstance(value, str), f"{where}: field {key!r} must be a string")
    return value


def _as_span(obj: dict, key: str, where: str) -> tuple[int, int]:
    value = obj.get(key)
    _require(
        isinstance(value, list) and len(value) == 2
        and all(type(v) is int for v in value),
        f"{where}: field {key!r} must be a two-integer array",
    )
    return value[0], value[1]


def structural_parse(data: Union[bytes, str]) -> AnnotationSet:
    """Parse the JSON shape only; the result may violate semantic
    invariants. Raises MalformedInput for anything not matching the
    schema."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedInput(f"input is not UTF-8: {exc}") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"input is not valid JSON: {exc}") from None

    _require(isinstance(obj, dict), "top level must be a JSON object")
    expected = {"documents", "labels", "annotations"}
    _require(
        set(obj) == expected,
        "top level must have exactly the keys documents, labels, annotations",
    )
    for key in expected:
        _require(isinstance(obj[key], list), f"field {key!r} must be an array")

    documents = []
    for i, raw in enumerate(obj["documents"]):
        where = f"documents[{i}]"
        _require(isinstance(raw, dict) and set(raw) == {"id", "text"},
                 f"{where} must be an object with keys id, text")
        documents.append(Document(_as_str(raw, "id", where),
                                  _as_str(raw, "text", where)))

    labels = []
    for i, raw in enumerate(obj["labels"]):
        where = f"labels[{i}]"
        _require(isinstance(raw, dict) and set(raw) == {"name", "direction"},
                 f"{where} must be an object with keys name, direction")
        name = _as_str(raw, "name", where)
        direction = _as_str(raw, "direction", where)
        _require(direction in ("forward", "backward"),
                 f"{where}: direction must be \"forward\" or \"backward\"")
        labels.append(LabelDecl(name, Direction(direction)))

    annotations = []
    for i, raw in enumerate(obj["annotations"]):
        where = f"annotations[{i}]"
        _require(
            isinstance(raw, dict)
            and set(raw) == {"doc", "label", "mention", "entity"},
            f"{where} must be an object with keys doc, label, mention, entity",
        )
        doc_id = _as_str(raw, "doc", where)
        label = _as_str(raw, "label", where)
        ms, me = _as_span(raw, "mention", where)
        es, ee = _as_span(raw, "entity", where)
        annotations.append(Annotation(label,
                                      mention=Region(doc_id, ms, me),
                                      entity=Region(doc_id, es, ee)))

    return AnnotationSet(documents, labels, annotations)


# -- validation --------------------------------------------------------

_FINDING_ERRORS = {
    "duplicate-doc-id": DuplicateDocId,
    "duplicate-label-name": DuplicateLabelName,
    "empty-label-name": DuplicateLabelName,
    "unknown-document": UnknownDocument,
    "unknown-label": UnknownLabel,
    "span-out-of-bounds": SpanOutOfBounds,
    "bad-nesting": BadNesting,
}


def _span_finding(region: Region, byte_length: int, index: int,
                  role: str) -> Finding | None:
    if not (0 <= region.start < region.end <= byte_length):
        return Finding(
            "span-out-of-bounds",
            f"annotation {index}: {role} span [{region.start}, {region.end}) "
            f"is outside document {region.doc_id!r} of {byte_length} bytes",
            (index,),
        )
    return None


def validate(annset: AnnotationSet, *, conflicts: bool = True) -> list[Finding]:
    """All violations in a deterministic order: document findings, label
    findings, per-annotation findings in input order, then per-label
    functionality conflicts.

    The list is empty iff build_graph would succeed. With
    ``conflicts=False`` the functionality scan is skipped; that is the
    part of validation that parse_dataset defers to build_graph.
    """
    findings: list[Finding] = []

    doc_lengths: dict[str, int] = {}
    for doc in annset.documents:
        if doc.id in doc_lengths:
            findings.append(Finding("duplicate-doc-id",
                                    f"document id {doc.id!r} declared twice"))
        else:
            doc_lengths[doc.id] = doc.byte_length

    decls: dict[str, LabelDecl] = {}
    for decl in annset.labels:
        if not decl.name:
            findings.append(Finding("empty-label-name",
                                    "label with empty name"))
        elif decl.name in decls:
            findings.append(Finding("duplicate-label-name",
                                    f"label {decl.name!r} declared twice"))
        else:
            decls[decl.name] = decl

    clean: list[tuple[int, Annotation]] = []
    for i, ann in enumerate(annset.annotations):
        ok = True
        if ann.label not in decls:
            findings.append(Finding("unknown-label",
                                    f"annotation {i}: label {ann.label!r} "
                                    f"is not declared", (i,)))
            ok = False
        if ann.mention.doc_id not in doc_lengths:
            findings.append(Finding("unknown-document",
                                    f"annotation {i}: document "
                                    f"{ann.mention.doc_id!r} is not declared",
                                    (i,)))
            ok = False
            continue
        length = doc_lengths[ann.mention.doc_id]
        spans_ok = True
        for region, role in ((ann.mention, "mention"), (ann.entity, "entity")):
            bad = _span_finding(region, length, i, role)
            if bad is not None:
                findings.append(bad)
                spans_ok = False
        if not spans_ok:
            continue
        if not region_contains(ann.entity, ann.mention):
            findings.append(Finding(
                "bad-nesting",
                f"annotation {i}: mention [{ann.mention.start}, "
                f"{ann.mention.end}) is not strictly inside entity "
                f"[{ann.entity.start}, {ann.entity.end})", (i,)))
            continue
        if ok:
            clean.append((i, ann))

    if conflicts:
        first: dict[tuple, tuple[int, Region]] = {}
        seen: set[Annotation] = set()
        for i, ann in clean:
            if ann in seen:
                continue  # exact duplicates are deduplicated silently
            seen.add(ann)
            decl = decls[ann.label]
            source, target = map_endpoints(decl, ann)
            prev = first.get((ann.label, source))
            if prev is None:
                first[(ann.label, source)] = (i, target.region)
            elif prev[1] != target.region:
                findings.append(Finding(
                    "map-conflict",
                    f"annotations {prev[0]} and {i}: label {ann.label!r} "
                    f"maps {source.key} to both {prev[1].key} and "
                    f"{target.region.key}", (prev[0], i)))

    return findings


def parse_dataset(data: Union[bytes, str]) -> AnnotationSet:
    """Parse and fully validate a dataset.

    Exact duplicate annotations are dropped silently. Raises the typed
    error for the first validation finding; functionality conflicts are
    not checked here (build_graph reports them with both annotations
    identified).
    """
    annset = structural_parse(data)
    findings = validate(annset, conflicts=False)
    if findings:
        first = findings[0]
        raise _FINDING_ERRORS[first.kind](first.message)
    deduped: list[Annotation] = []
    seen: set[Annotation] = set()
    for ann in annset.annotations:
        if ann not in seen:
            seen.add(ann)
            deduped.append(ann)
    annset.annotations = deduped
    return annset


# -- serialization -----------------------------------------------------


def to_json_obj(annset: AnnotationSet) -> dict:
    """Canonical plain-JSON form of a dataset."""
    canon = annset.canonical()
    return {
        "documents": [{"id": d.id, "text": d.text} for d in canon.documents],
        "labels": [{"name": l.name, "direction": l.direction.value}
                   for l in canon.labels],
        "annotations": [
            {
                "doc": a.mention.doc_id,
                "label": a.label,
                "mention": [a.mention.start, a.mention.end],
                "entity": [a.entity.start, a.entity.end],
            }
            for a in canon.annotations
        ],
    }


def serialize_dataset(annset: AnnotationSet) -> bytes:
    """Canonical UTF-8 JSON bytes. parse_dataset(serialize_dataset(x)) == x
    for every valid set."""
    text = json.dumps(to_json_obj(annset), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# -- graph construction ------------------------------------------------


def build_graph(annset: AnnotationSet) -> LabeledGraph:
    """Fold all annotations into a LabeledGraph, in input order.

    The result is order-insensitive for valid sets. On a functionality
    conflict the raised MapNotWellDefined names both annotation indices.
    """
    graph = LabeledGraph(annset.labels)
    first: dict[tuple, int] = {}
    for i, ann in enumerate(annset.annotations):
        decl = graph.label(ann.label)
        source, _ = map_endpoints(decl, ann)
        try:
            graph.add(ann)
        except MapNotWellDefined as exc:
            raise MapNotWellDefined(
                f"annotations {first[(ann.label, source)]} and {i}: {exc}",
                label=exc.label,
                source=exc.source,
                first_target=exc.first_target,
                second_target=exc.second_target,
                first_index=first[(ann.label, source)],
                second_index=i,
            ) from None
        first.setdefault((ann.label, source), i)
    return graph
