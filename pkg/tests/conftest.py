import json
import random
from pathlib import Path

from hypothesis import settings

from labelflow import (
    AnnotationSet,
    Annotation,
    Direction,
    Document,
    LabelDecl,
    LabeledGraph,
    Node,
    Region,
    RuleSpec,
    build_graph,
    parse_dataset,
)
from labelflow.synth import DerivedAttribute, FreeAttribute, IsValue, NotValue, \
    AllOf, Rule

settings.register_profile("local", deadline=None)
settings.load_profile("local")

DATA = Path(__file__).parent / "data"


def node(start, end, doc="u"):
    return Node(Region(doc, start, end))


def abstract_nodes(n, doc="u"):
    """n distinct nodes on a synthetic byte line."""
    return [node(i, i + 1, doc) for i in range(n)]


def chain_graph(map1, map2, labels=("f", "g")):
    """Two-level forward chain realized as nested spans.

    map1[i] is the level-1 parent of leaf i, map2[j] the level-2 parent
    of level-1 node j. Leaves are unit spans; each upper node is a
    prefix span wide enough to contain everything below it, so any
    assignment is realizable. Returns (graph, leaves, level1, level2).
    """
    n = len(map1)
    k1 = len(map2)
    k2 = max(map2) + 1 if map2 else 0
    assert all(0 <= p < k1 for p in map1)
    total = n + k1 + k2 + 1
    text = "x" * total
    doc = Document("chain", text)
    leaves = [Node(Region("chain", i, i + 1)) for i in range(n)]
    level1 = [Node(Region("chain", 0, n + j + 1)) for j in range(k1)]
    level2 = [Node(Region("chain", 0, n + k1 + m + 1)) for m in range(k2)]
    graph = LabeledGraph([LabelDecl(labels[0], Direction.FORWARD),
                          LabelDecl(labels[1], Direction.FORWARD)])
    for i, p in enumerate(map1):
        graph.add(Annotation(labels[0], mention=leaves[i].region,
                             entity=level1[p].region))
    for j, p in enumerate(map2):
        graph.add(Annotation(labels[1], mention=level1[j].region,
                             entity=level2[p].region))
    return graph, leaves, level1, level2, doc


EQ12_TEXT = "animals.\nmammal: dog, cat.\nbird: crow.\n"


def _span_of(text, sub, occurrence=0):
    data = text.encode("utf-8")
    needle = sub.encode("utf-8")
    at = -1
    for _ in range(occurrence + 1):
        at = data.index(needle, at + 1)
    return [at, at + len(needle)]


def eq12_dataset():
    """Two-level category chain: dog and cat under one heading line,
    crow under another, both headings under the whole document."""
    text = EQ12_TEXT
    mammal_line = _span_of(text, "mammal: dog, cat.\n")
    bird_line = _span_of(text, "bird: crow.\n")
    whole = [0, len(text.encode("utf-8"))]
    return {
        "documents": [{"id": "d", "text": text}],
        "labels": [{"name": "class", "direction": "forward"}],
        "annotations": [
            {"doc": "d", "label": "class",
             "mention": _span_of(text, "dog"), "entity": mammal_line},
            {"doc": "d", "label": "class",
             "mention": _span_of(text, "cat"), "entity": mammal_line},
            {"doc": "d", "label": "class",
             "mention": _span_of(text, "crow"), "entity": bird_line},
            {"doc": "d", "label": "class",
             "mention": mammal_line, "entity": whole},
            {"doc": "d", "label": "class",
             "mention": bird_line, "entity": whole},
        ],
    }


FIG2_TEXT = "black bags: bag1, bag2.\nbag2 owners: woman, man.\n"


def fig2_spans():
    text = FIG2_TEXT
    man = _span_of(text, " man")
    return {
        "black": _span_of(text, "black"),
        "woman": _span_of(text, "woman"),
        "man": [man[0] + 1, man[1]],
        "bag1": [0, len("black bags: bag1, bag2.\n")],
        "bag2": [0, len(text.encode("utf-8"))],
    }


def fig2_dataset():
    """Two bags sharing a color mention; the second bag owned by two
    people. bag1 is the first line, bag2 the whole document."""
    spans = fig2_spans()
    return {
        "documents": [{"id": "d", "text": FIG2_TEXT}],
        "labels": [
            {"name": "color", "direction": "backward"},
            {"name": "owning", "direction": "forward"},
        ],
        "annotations": [
            {"doc": "d", "label": "color",
             "mention": spans["black"], "entity": spans["bag1"]},
            {"doc": "d", "label": "color",
             "mention": spans["black"], "entity": spans["bag2"]},
            {"doc": "d", "label": "owning",
             "mention": spans["woman"], "entity": spans["bag2"]},
            {"doc": "d", "label": "owning",
             "mention": spans["man"], "entity": spans["bag2"]},
        ],
    }


def graph_of(dataset_obj):
    return build_graph(parse_dataset(json.dumps(dataset_obj)))


def all_partitions(items):
    """Every set partition of items, as lists of lists."""
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for smaller in all_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[head] + smaller[i]] + smaller[i + 1:]
        yield [[head]] + smaller


EXAMPLE1_RULES = {
    "free": [
        {"name": "color", "values": ["red", "black", "blue"]},
        {"name": "size", "values": ["small", "large"]},
    ],
    "derived": [
        {"name": "price", "rules": [
            {"when": {"is": ["size", "small"]}, "then": "inexpensive"},
            {"when": {"is": ["size", "large"]}, "then": "expensive"},
        ]},
    ],
}

EXAMPLE2_RULES = {
    "free": [
        {"name": "color", "values": ["red", "black", "blue"]},
        {"name": "size", "values": ["small", "large"]},
    ],
    "derived": [
        {"name": "price", "rules": [
            {"when": {"all": [{"is": ["size", "small"]},
                              {"not": ["color", "red"]}]},
             "then": "inexpensive"},
            {"when": {"any": [{"is": ["size", "large"]},
                              {"is": ["color", "red"]}]},
             "then": "expensive"},
        ]},
    ],
}


def random_rulespec(rng: random.Random) -> RuleSpec:
    """A random valid spec: 1-3 free attributes (cross product capped at
    24 rows) and 0-2 derived attributes whose rules enumerate the
    combinations, so totality and consistency hold by construction."""
    n_free = rng.randint(1, 3)
    while True:
        sizes = [rng.randint(2, 4) for _ in range(n_free)]
        product = 1
        for s in sizes:
            product *= s
        if product <= 24:
            break
    free = tuple(
        FreeAttribute(f"a{i}", tuple(f"v{i}{j}" for j in range(size)))
        for i, size in enumerate(sizes)
    )
    n_derived = rng.randint(0, min(2, 4 - n_free))
    derived = []
    for d in range(n_derived):
        pool = [f"w{d}{j}" for j in range(rng.randint(1, 4))]
        rules = []
        combos = [[]]
        for attr in free:
            combos = [c + [(attr.name, v)] for c in combos
                      for v in attr.values]
        for combo in combos:
            atoms = []
            for attr_name, value in combo:
                attr = next(a for a in free if a.name == attr_name)
                if len(attr.values) == 2 and rng.random() < 0.3:
                    other = next(v for v in attr.values if v != value)
                    atoms.append(NotValue(attr_name, other))
                else:
                    atoms.append(IsValue(attr_name, value))
            rule = Rule(AllOf(tuple(atoms)), rng.choice(pool))
            rules.append(rule)
            if rng.random() < 0.2:
                rules.append(rule)  # agreeing overlap is allowed
        rng.shuffle(rules)
        derived.append(DerivedAttribute(f"d{d}", tuple(rules)))
    return RuleSpec(free, tuple(derived))
