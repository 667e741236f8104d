"""Plain-text instance files.

``pcm v1``::

    elements: 0 1 2
    sum: 1 1 2

``esp v1``::

    elements: {} {1}
    leq: {} {1}
    perp: {} {1}
    sim: {1} {1}

The first element is the zero.  ``#`` starts a comment.  Relations are
read literally (no closure is taken, except that ``sim`` becomes an
equivalence and the zero law is implied for sums), so a defective file
reaches the validators unchanged.
"""

from __future__ import annotations

from dimscale.errors import ParseError
from dimscale.espalier import EspalierTable
from dimscale.monoid import UNDEF, MonoidTable, iter_bits

HEADERS = {"pcm v1": "pcm", "esp v1": "esp"}
ARITY = {"pcm": {"sum": 3}, "esp": {"leq": 2, "perp": 2, "sim": 2}}


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse(text: str) -> MonoidTable | EspalierTable:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty file")
    no, head = lines[0]
    kind = HEADERS.get(" ".join(head.split()))
    if kind is None:
        raise ParseError(no, f"unknown header {head!r}")
    labels: list[str] | None = None
    index: dict[str, int] = {}
    rel: dict[str, list[tuple[int, ...]]] = {k: [] for k in ARITY[kind]}
    for no, line in lines[1:]:
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError(no, f"expected 'key: values', got {line!r}")
        words = rest.split()
        if key == "elements":
            if labels is not None:
                raise ParseError(no, "duplicate elements line")
            if not words:
                raise ParseError(no, "no elements declared")
            if len(set(words)) != len(words):
                raise ParseError(no, "duplicate element name")
            labels = words
            index = {w: i for i, w in enumerate(words)}
            continue
        if key not in ARITY[kind]:
            raise ParseError(no, f"unknown key {key!r} for {kind} file")
        if labels is None:
            raise ParseError(no, "relation before the elements line")
        if len(words) != ARITY[kind][key]:
            raise ParseError(no, f"{key} takes {ARITY[kind][key]} elements")
        try:
            rel[key].append(tuple(index[w] for w in words))
        except KeyError as exc:
            raise ParseError(no, f"undeclared element {exc.args[0]!r}") from None
    if labels is None:
        raise ParseError(lines[-1][0], "missing elements line")
    if kind == "pcm":
        seen: dict[tuple[int, int], int] = {}
        for i, j, k in rel["sum"]:
            if seen.setdefault((i, j), k) != k:
                raise ParseError(_line_of(lines, "sum"), f"two values for {labels[i]} + {labels[j]}")
        return MonoidTable.from_sums(labels, rel["sum"], symmetric=False, zero_law=True)
    return EspalierTable.from_relations(labels, rel["leq"], rel["perp"], rel["sim"])


def _line_of(lines, key: str) -> int:
    return next(no for no, line in lines if line.startswith(key))


def _sorted_block(head: list[str], body: list[str]) -> str:
    return "\n".join(head + sorted(body)) + "\n"


def emit(obj: MonoidTable | EspalierTable) -> str:
    """Canonical text: header, elements, relation lines sorted."""
    labels = obj.labels
    head = ["pcm v1" if isinstance(obj, MonoidTable) else "esp v1", "elements: " + " ".join(labels)]
    body = []
    if isinstance(obj, MonoidTable):
        for i in range(1, obj.n):
            for j in range(1, obj.n):
                k = obj.rows[i][j]
                if k != UNDEF:
                    body.append(f"sum: {labels[i]} {labels[j]} {labels[k]}")
        # only departures from the zero law need stating
        for i in range(obj.n):
            for a, b in ((i, 0), (0, i)):
                if obj.rows[a][b] != i:
                    if obj.rows[a][b] != UNDEF:
                        body.append(f"sum: {labels[a]} {labels[b]} {labels[obj.rows[a][b]]}")
        return _sorted_block(head, body)
    for b in range(obj.n):
        for a in iter_bits(obj.below[b]):
            body.append(f"leq: {labels[a]} {labels[b]}")
    for a in range(obj.n):
        for b in iter_bits(obj.perp[a]):
            body.append(f"perp: {labels[a]} {labels[b]}")
    for x in range(obj.n):
        rep = (obj.classes[obj.sim[x]] & -obj.classes[obj.sim[x]]).bit_length() - 1
        if rep != x:
            body.append(f"sim: {labels[x]} {labels[rep]}")
    return _sorted_block(head, body)


def load(path: str) -> MonoidTable | EspalierTable:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
