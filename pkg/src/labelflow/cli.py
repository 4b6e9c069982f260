"""Command-line interface.

Every command reads input from file paths, writes a single JSON payload
to stdout, and reports problems on stderr. Exit codes: 0 success, 1 the
input failed validation (payload describes why), 2 usage error
(unreadable file, unknown label or node, bad flags), 3 internal error.
Identical inputs always produce byte-identical payloads.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .dataset import AnnotationSet, build_graph, serialize_dataset, \
    structural_parse, validate
from .errors import (
    ContradictoryRules,
    DomainGap,
    EmptyUniverse,
    IncompleteRules,
    InvalidRuleSpec,
    LabelFlowError,
    MalformedInput,
    UnknownLabel,
    UnknownNode,
)
from .info import dependency, label_report, path_distance, path_report
from .model import LabeledGraph, Node, Region
from .synth import generate_universe, rulespec_from_json

NODE_KEY = re.compile(r"^(.+):(\d+)-(\d+)$")


class _Failure(Exception):
    def __init__(self, code: int, payload=None, message: str | None = None):
        super().__init__(message or "")
        self.code = code
        self.payload = payload
        self.message = message


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise _Failure(2, message=f"cannot read {path}: {exc}") from None


def _load_dataset(path: str) -> AnnotationSet:
    data = _read_bytes(path)
    try:
        annset = structural_parse(data)
    except MalformedInput as exc:
        raise _Failure(1, payload=[{
            "kind": "malformed-input",
            "message": str(exc),
            "annotations": [],
        }]) from None
    findings = validate(annset)
    if findings:
        raise _Failure(1, payload=[f.to_json_dict() for f in findings])
    return annset


def _checked_labels(graph: LabeledGraph, names: list[str]) -> list[str]:
    for name in names:
        try:
            graph.label(name)
        except UnknownLabel as exc:
            raise _Failure(2, message=str(exc)) from None
    return names


def _parse_node_key(key: str) -> Region:
    match = NODE_KEY.match(key)
    if not match:
        raise _Failure(2, message=f"bad node key {key!r}; "
                                  f"expected doc:start-end")
    return Region(match.group(1), int(match.group(2)), int(match.group(3)))


# -- commands ----------------------------------------------------------


def cmd_validate(args) -> list:
    _load_dataset(args.dataset)
    return []


def _surface_label(annset: AnnotationSet, node: Node) -> str:
    doc = annset.document(node.region.doc_id)
    surface = doc.surface(node.region).split("\n", 1)[0]
    if len(surface) > 40:
        surface = surface[:40] + "…"
    return surface


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def cmd_graph(args):
    annset = _load_dataset(args.dataset)
    graph = build_graph(annset)
    if args.format == "json":
        return {
            "nodes": [
                {"key": n.key, "surface": _surface_label(annset, n)}
                for n in graph.sorted_nodes()
            ],
            "edges": [
                {
                    "label": e.label,
                    "direction": graph.label(e.label).direction.value,
                    "source": e.source.key,
                    "target": e.target.key,
                }
                for e in graph.sorted_edges()
            ],
        }
    lines = ["digraph labelflow {"]
    for node in graph.sorted_nodes():
        lines.append(f'  "{_dot_escape(node.key)}" '
                     f'[label="{_dot_escape(_surface_label(annset, node))}"];')
    for edge in graph.sorted_edges():
        direction = graph.label(edge.label).direction.value
        lines.append(f'  "{_dot_escape(edge.source.key)}" -> '
                     f'"{_dot_escape(edge.target.key)}" '
                     f'[label="{_dot_escape(edge.label)} ({direction})"];')
    lines.append("}")
    sys.stdout.write("\n".join(lines) + "\n")
    return None


def cmd_entropy(args):
    graph = build_graph(_load_dataset(args.dataset))
    try:
        if args.label is not None:
            _checked_labels(graph, [args.label])
            report = label_report(graph, args.label)
        else:
            labels = _checked_labels(graph, args.path.split(","))
            report = path_report(graph, labels)
    except DomainGap as exc:
        raise _Failure(1, payload={
            "error": "domain-gap",
            "message": str(exc),
            "label": exc.label,
            "nodes": [n.key for n in exc.nodes],
            "step": exc.step,
        }) from None
    except EmptyUniverse as exc:
        raise _Failure(1, payload={"error": "empty-universe",
                                   "message": str(exc)}) from None
    return report.to_json_dict()


def cmd_depend(args):
    graph = build_graph(_load_dataset(args.dataset))
    from_labels = _checked_labels(graph, args.from_labels.split(","))
    (to_label,) = _checked_labels(graph, [args.to_label])
    try:
        report = dependency(graph, from_labels, to_label)
    except EmptyUniverse as exc:
        raise _Failure(1, payload={"error": "empty-universe",
                                   "message": str(exc)}) from None
    return report.to_json_dict()


def cmd_distance(args):
    graph = build_graph(_load_dataset(args.dataset))
    source = Node(_parse_node_key(args.source))
    target = Node(_parse_node_key(args.target))
    try:
        result = path_distance(graph, source, target)
    except UnknownNode as exc:
        raise _Failure(2, message=str(exc)) from None
    return result.to_json_dict()


def cmd_synth(args):
    data = _read_bytes(args.rulespec)
    try:
        obj = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise _Failure(1, payload={
            "error": "invalid-rule-spec",
            "message": f"rule spec is not valid JSON: {exc}",
        }) from None
    try:
        spec = rulespec_from_json(obj)
        annset = generate_universe(spec)
    except InvalidRuleSpec as exc:
        raise _Failure(1, payload={"error": "invalid-rule-spec",
                                   "message": str(exc)}) from None
    except IncompleteRules as exc:
        raise _Failure(1, payload={
            "error": "incomplete-rules",
            "message": str(exc),
            "combination": list(exc.combination),
        }) from None
    except ContradictoryRules as exc:
        raise _Failure(1, payload={
            "error": "contradictory-rules",
            "message": str(exc),
            "combination": list(exc.combination),
            "values": list(exc.values),
        }) from None
    payload = serialize_dataset(annset)
    try:
        with open(args.out, "wb") as handle:
            handle.write(payload)
    except OSError as exc:
        raise _Failure(2, message=f"cannot write {args.out}: {exc}") from None
    return {
        "out": args.out,
        "documents": len(annset.documents),
        "labels": len(annset.labels),
        "annotations": len(annset.annotations),
    }


# -- wiring ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelflow",
        description="Inspect information flow over label-map graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dataset file")
    p.add_argument("dataset")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("graph", help="export the induced graph")
    p.add_argument("dataset")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("entropy", help="entropy of a label or label path")
    p.add_argument("dataset")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--label")
    group.add_argument("--path", help="comma-separated label names")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("depend",
                       help="how far one property determines another")
    p.add_argument("dataset")
    p.add_argument("--from", dest="from_labels", required=True,
                   help="comma-separated source labels")
    p.add_argument("--to", dest="to_label", required=True)
    p.set_defaults(func=cmd_depend)

    p = sub.add_parser("distance",
                       help="accumulated-loss distance between two nodes")
    p.add_argument("dataset")
    p.add_argument("--from", dest="source", required=True,
                   help="node key doc:start-end")
    p.add_argument("--to", dest="target", required=True,
                   help="node key doc:start-end")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("synth",
                       help="generate a dataset from a rule spec")
    p.add_argument("rulespec")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload = args.func(args)
    except _Failure as failure:
        if failure.message:
            print(failure.message, file=sys.stderr)
        if failure.payload is not None:
            _emit(failure.payload)
        return failure.code
    except LabelFlowError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    if payload is not None:
        _emit(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
