"""Exception types shared across the package."""

from __future__ import annotations


class LabelFlowError(Exception):
    """Base class for every error raised by labelflow."""


class MalformedInput(LabelFlowError):
    """Input is not parseable as the expected JSON shape."""


class SpanOutOfBounds(LabelFlowError):
    """A region is empty, inverted, or extends past its document."""


class BadNesting(LabelFlowError):
    """An annotation's mention region is not strictly inside its entity region."""


class UnknownLabel(LabelFlowError):
    """A label name does not resolve to a declaration."""


class UnknownDocument(LabelFlowError):
    """An annotation references a document id that is not declared."""


class DuplicateDocId(LabelFlowError):
    """Two documents share an id."""


class DuplicateLabelName(LabelFlowError):
    """Two label declarations share a name."""


class MapNotWellDefined(LabelFlowError):
    """A label would map one source node to two different targets.

    Carries enough structure for callers to report the offending pair:
    ``label``, ``source`` (node key), ``first_target`` / ``second_target``
    (node keys), and, when raised while building from an annotation list,
    the zero-based ``first_index`` / ``second_index`` of the two
    conflicting annotations.
    """

    def __init__(self, message, *, label=None, source=None,
                 first_target=None, second_target=None,
                 first_index=None, second_index=None):
        super().__init__(message)
        self.label = label
        self.source = source
        self.first_target = first_target
        self.second_target = second_target
        self.first_index = first_index
        self.second_index = second_index


class DomainGap(LabelFlowError):
    """Nodes are missing from the domain of a label along a map path.

    ``label`` is the label that is undefined, ``step`` the zero-based
    position in the path at which it failed, and ``nodes`` the offending
    Node objects.
    """

    def __init__(self, message, *, label=None, nodes=(), step=0):
        super().__init__(message)
        self.label = label
        self.step = step
        self.nodes = tuple(nodes)


class UniverseMismatch(LabelFlowError):
    """Two partitions over different universes were combined."""


class EmptyUniverse(LabelFlowError):
    """An operation needing at least one element got an empty universe."""


class UnknownNode(LabelFlowError):
    """A node key does not resolve to a node of the graph."""


class InvalidRuleSpec(LabelFlowError):
    """A rule spec violates its structural invariants."""


class UnknownAttribute(LabelFlowError):
    """An attribute name does not resolve within a rule spec."""


class IncompleteRules(LabelFlowError):
    """Some combination of free attribute values matches no rule.

    ``combination`` is a tuple of (attribute, value) pairs.
    """

    def __init__(self, message, *, combination=()):
        super().__init__(message)
        self.combination = tuple(combination)


class ContradictoryRules(LabelFlowError):
    """A combination matches rules that assign different values."""

    def __init__(self, message, *, combination=(), values=()):
        super().__init__(message)
        self.combination = tuple(combination)
        self.values = tuple(values)
