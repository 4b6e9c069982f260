"""Rule-driven synthetic universes with known quotient structure.

A RuleSpec describes a family of entities: free attributes enumerate a
cross product, derived attributes are assigned by rules over the free
values. generate_universe lays the family out as one document in which
each entity is a line-anchored region and each attribute value is a
single shared mention, so the induced graph's fibers coincide with the
attribute columns. oracle_counts computes class and intersection counts
straight from the rule table, with no graph machinery, for use as an
independent check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .dataset import AnnotationSet
from .errors import (
    ContradictoryRules,
    IncompleteRules,
    InvalidRuleSpec,
    UnknownAttribute,
)
from .model import Annotation, Direction, Document, LabelDecl, Region

_NAME_BAD = set(" \t\n\r=.")


def _check_token(kind: str, token: object) -> str:
    if not isinstance(token, str) or not token:
        raise InvalidRuleSpec(f"{kind} must be a non-empty string: {token!r}")
    if _NAME_BAD & set(token):
        raise InvalidRuleSpec(
            f"{kind} {token!r} may not contain whitespace, '=', or '.'")
    return token


# -- condition language ------------------------------------------------


@dataclass(frozen=True)
class IsValue:
    attr: str
    value: str

    def evaluate(self, row: dict) -> bool:
        return row[self.attr] == self.value

    def referenced(self):
        yield self.attr, self.value


@dataclass(frozen=True)
class NotValue:
    attr: str
    value: str

    def evaluate(self, row: dict) -> bool:
        return row[self.attr] != self.value

    def referenced(self):
        yield self.attr, self.value


@dataclass(frozen=True)
class AllOf:
    items: tuple

    def evaluate(self, row: dict) -> bool:
        return all(item.evaluate(row) for item in self.items)

    def referenced(self):
        for item in self.items:
            yield from item.referenced()


@dataclass(frozen=True)
class AnyOf:
    items: tuple

    def evaluate(self, row: dict) -> bool:
        return any(item.evaluate(row) for item in self.items)

    def referenced(self):
        for item in self.items:
            yield from item.referenced()


Condition = Union[IsValue, NotValue, AllOf, AnyOf]


def condition_from_json(obj) -> Condition:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InvalidRuleSpec(
            f"a condition must be an object with one key: {obj!r}")
    key, value = next(iter(obj.items()))
    if key in ("is", "not"):
        if (not isinstance(value, list) or len(value) != 2
                or not all(isinstance(v, str) for v in value)):
            raise InvalidRuleSpec(
                f"{key!r} takes a two-string array: {value!r}")
        cls = IsValue if key == "is" else NotValue
        return cls(value[0], value[1])
    if key in ("all", "any"):
        if not isinstance(value, list):
            raise InvalidRuleSpec(f"{key!r} takes an array: {value!r}")
        items = tuple(condition_from_json(v) for v in value)
        return AllOf(items) if key == "all" else AnyOf(items)
    raise InvalidRuleSpec(f"unknown condition kind {key!r}")


# -- spec --------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    when: Condition
    then: str


@dataclass(frozen=True)
class FreeAttribute:
    name: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class DerivedAttribute:
    name: str
    rules: tuple[Rule, ...]

    def value_order(self) -> list[str]:
        seen = []
        for rule in self.rules:
            if rule.then not in seen:
                seen.append(rule.then)
        return seen


@dataclass(frozen=True)
class RuleSpec:
    """Free attributes (with ordered value domains) plus derived
    attributes (with rule lists). Conditions may only test free
    attributes."""

    free: tuple[FreeAttribute, ...]
    derived: tuple[DerivedAttribute, ...] = ()

    def __post_init__(self):
        if not self.free:
            raise InvalidRuleSpec("at least one free attribute is required")
        names = set()
        for attr in self.free:
            _check_token("attribute name", attr.name)
            if attr.name in names:
                raise InvalidRuleSpec(f"attribute {attr.name!r} declared twice")
            names.add(attr.name)
            if not attr.values:
                raise InvalidRuleSpec(
                    f"free attribute {attr.name!r} has no values")
            for value in attr.values:
                _check_token("value", value)
            if len(set(attr.values)) != len(attr.values):
                raise InvalidRuleSpec(
                    f"free attribute {attr.name!r} repeats a value")
        free_domains = {a.name: set(a.values) for a in self.free}
        for attr in self.derived:
            _check_token("attribute name", attr.name)
            if attr.name in names:
                raise InvalidRuleSpec(f"attribute {attr.name!r} declared twice")
            names.add(attr.name)
            for rule in attr.rules:
                _check_token("value", rule.then)
                for ref_attr, ref_value in rule.when.referenced():
                    if ref_attr not in free_domains:
                        raise InvalidRuleSpec(
                            f"rule for {attr.name!r} tests {ref_attr!r}, "
                            f"which is not a free attribute")
                    if ref_value not in free_domains[ref_attr]:
                        raise InvalidRuleSpec(
                            f"rule for {attr.name!r} tests "
                            f"{ref_attr}={ref_value}, not in that "
                            f"attribute's domain")

    def attribute_names(self) -> list[str]:
        return [a.name for a in self.free] + [a.name for a in self.derived]

    def rows(self) -> list[dict[str, str]]:
        """The full entity table: one row per free-value combination,
        derived columns filled in by the rules.

        Checks totality and consistency for every combination before
        assigning: a combination no rule covers raises IncompleteRules,
        one covered by disagreeing rules raises ContradictoryRules.
        Overlapping rules that agree are fine.
        """
        rows = []
        for combo in itertools.product(*(a.values for a in self.free)):
            row = {a.name: v for a, v in zip(self.free, combo)}
            for attr in self.derived:
                outcomes = []
                for rule in attr.rules:
                    if rule.when.evaluate(row) and rule.then not in outcomes:
                        outcomes.append(rule.then)
                if len(outcomes) != 1:
                    pairs = tuple(
                        (a.name, v) for a, v in zip(self.free, combo))
                    if not outcomes:
                        raise IncompleteRules(
                            f"no rule for {attr.name!r} covers "
                            f"{_combo_name(combo)}",
                            combination=pairs)
                    raise ContradictoryRules(
                        f"rules for {attr.name!r} assign "
                        f"{', '.join(outcomes)} to {_combo_name(combo)}",
                        combination=pairs, values=tuple(outcomes))
                row[attr.name] = outcomes[0]
            rows.append(row)
        return rows


def _combo_name(combo: Sequence[str]) -> str:
    return ".".join(combo)


def rulespec_from_json(obj) -> RuleSpec:
    if not isinstance(obj, dict) or set(obj) != {"free", "derived"}:
        raise InvalidRuleSpec(
            "a rule spec must be an object with exactly the keys "
            "free and derived")
    if not all(isinstance(obj[k], list) for k in ("free", "derived")):
        raise InvalidRuleSpec("free and derived must be arrays")
    free = []
    for raw in obj["free"]:
        if not isinstance(raw, dict) or set(raw) != {"name", "values"}:
            raise InvalidRuleSpec(
                f"a free attribute needs exactly name and values: {raw!r}")
        if not isinstance(raw["values"], list):
            raise InvalidRuleSpec(f"values must be an array: {raw!r}")
        free.append(FreeAttribute(raw["name"], tuple(raw["values"])))
    derived = []
    for raw in obj["derived"]:
        if not isinstance(raw, dict) or set(raw) != {"name", "rules"}:
            raise InvalidRuleSpec(
                f"a derived attribute needs exactly name and rules: {raw!r}")
        if not isinstance(raw["rules"], list):
            raise InvalidRuleSpec(f"rules must be an array: {raw!r}")
        rules = []
        for r in raw["rules"]:
            if not isinstance(r, dict) or set(r) != {"when", "then"}:
                raise InvalidRuleSpec(
                    f"a rule needs exactly when and then: {r!r}")
            if not isinstance(r["then"], str):
                raise InvalidRuleSpec(f"then must be a string: {r!r}")
            rules.append(Rule(condition_from_json(r["when"]), r["then"]))
        derived.append(DerivedAttribute(raw["name"], tuple(rules)))
    return RuleSpec(tuple(free), tuple(derived))


# -- layout ------------------------------------------------------------

DOC_ID = "synthetic"


@dataclass(frozen=True)
class UniverseLayout:
    """Where everything landed in the generated document."""

    text: str
    entity_regions: dict[str, Region]
    mention_regions: dict[tuple[str, str], Region]


def universe_layout(spec: RuleSpec) -> UniverseLayout:
    """Deterministic text layout for a spec's entity table.

    One line per entity, named by its dotted free-value combination,
    then one legend line holding every attribute=value token once. An
    entity's region runs from its line to the end of the document, so
    it strictly contains all the value mentions; the mention region of
    (attribute, value) is the value substring of its legend token.
    """
    rows = spec.rows()
    entity_names = [_combo_name([row[a.name] for a in spec.free])
                    for row in rows]

    value_order: list[tuple[str, str]] = []
    for attr in spec.free:
        value_order.extend((attr.name, v) for v in attr.values)
    for attr in spec.derived:
        value_order.extend((attr.name, v) for v in attr.value_order())

    lines = entity_names + [
        " ".join(f"{a}={v}" for a, v in value_order)]
    text = "".join(line + "\n" for line in lines)
    data = text.encode("utf-8")
    total = len(data)

    entity_regions: dict[str, Region] = {}
    offset = 0
    for name in entity_names:
        entity_regions[name] = Region(DOC_ID, offset, total)
        offset += len(name.encode("utf-8")) + 1

    mention_regions: dict[tuple[str, str], Region] = {}
    cursor = offset
    for i, (a, v) in enumerate(value_order):
        if i:
            cursor += 1  # the separating space
        cursor += len(a.encode("utf-8")) + 1
        end = cursor + len(v.encode("utf-8"))
        mention_regions[(a, v)] = Region(DOC_ID, cursor, end)
        cursor = end

    return UniverseLayout(text, entity_regions, mention_regions)


def generate_universe(spec: RuleSpec) -> AnnotationSet:
    """One document, one backward label per attribute, one annotation
    per entity and attribute. Always passes validation."""
    rows = spec.rows()
    layout = universe_layout(spec)
    labels = [LabelDecl(name, Direction.BACKWARD)
              for name in spec.attribute_names()]
    annotations = []
    for row in rows:
        name = _combo_name([row[a.name] for a in spec.free])
        entity = layout.entity_regions[name]
        for attr in spec.attribute_names():
            mention = layout.mention_regions[(attr, row[attr])]
            annotations.append(Annotation(attr, mention=mention,
                                          entity=entity))
    return AnnotationSet(
        documents=[Document(DOC_ID, layout.text)],
        labels=labels,
        annotations=annotations,
    )


# -- brute-force oracle ------------------------------------------------


def oracle_counts(spec: RuleSpec, from_attrs: Sequence[str],
                  to_attr: str) -> tuple[int, int]:
    """(class count of the from-attribute tuple, directed intersection
    count toward to_attr), both straight from the rule table.

    Grouping and the subset scan use plain dicts and sets on row
    indices; nothing is shared with the graph pipeline.
    """
    rows = spec.rows()
    known = set(spec.attribute_names())
    for name in [*from_attrs, to_attr]:
        if name not in known:
            raise UnknownAttribute(f"unknown attribute {name!r}")
    from_classes: dict[tuple, set[int]] = {}
    to_classes: dict[str, set[int]] = {}
    for i, row in enumerate(rows):
        from_classes.setdefault(
            tuple(row[a] for a in from_attrs), set()).add(i)
        to_classes.setdefault(row[to_attr], set()).add(i)
    count = 0
    for a_members in from_classes.values():
        for b_members in to_classes.values():
            if a_members <= b_members:
                count += 1
                break
    return len(from_classes), count
