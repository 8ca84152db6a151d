"""Plain-text edge lists.

Undirected files hold one ``u v`` pair per line. Digraph files use ``u > v``
for an arc and ``u = v`` for a digon. ``#`` starts a comment and an optional
``n <count>`` header fixes the vertex count. Labels may be arbitrary tokens;
they are remapped to dense ids and the mapping is returned alongside.
"""

from __future__ import annotations

from pathlib import Path

from .errors import InvalidInputError
from .graph import Digraph, Graph


def _label_key(tok):
    return (0, int(tok), "") if _is_int(tok) else (1, 0, tok)


def _is_int(tok: str) -> bool:
    try:
        int(tok)
    except ValueError:
        return False
    return True


def parse_edge_list(text: str) -> tuple[Graph | Digraph, list]:
    n_header = None
    plain, arcs, digons = [], [], []
    labels = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "n" and len(toks) == 2:
            if n_header is not None or not _is_int(toks[1]):
                raise InvalidInputError(f"line {lineno}: bad header {raw!r}")
            n_header = int(toks[1])
            continue
        if len(toks) == 3 and toks[1] in (">", "="):
            (arcs if toks[1] == ">" else digons).append((toks[0], toks[2]))
        elif len(toks) == 2:
            plain.append((toks[0], toks[1]))
        else:
            raise InvalidInputError(f"line {lineno}: cannot parse {raw!r}")
        labels.update((toks[0], toks[-1]))
    if plain and (arcs or digons):
        raise InvalidInputError("file mixes undirected pairs with directed arcs")

    if n_header is not None and all(_is_int(x) and 0 <= int(x) < n_header for x in labels):
        mapping = list(range(n_header))
        index = {str(i): i for i in mapping}
        # tolerate labels like "07"
        index.update({x: int(x) for x in labels})
    else:
        if n_header is not None and len(labels) > n_header:
            raise InvalidInputError(f"header says n={n_header} but {len(labels)} labels appear")
        ordered = sorted(labels, key=_label_key)
        mapping = [int(x) if _is_int(x) else x for x in ordered]
        index = {x: i for i, x in enumerate(ordered)}
        if n_header is not None:
            mapping += [f"_isolated{i}" for i in range(len(mapping), n_header)]
    n = len(mapping)

    def conv(pairs):
        return [(index[a], index[b]) for a, b in pairs]

    if arcs or digons:
        g = Digraph.from_digons(n, conv(digons), conv(arcs))
    else:
        g = Graph(n, conv(plain))
    return g, mapping


def read_edge_list(path: str | Path) -> tuple[Graph | Digraph, list]:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(g: Graph | Digraph) -> str:
    """Byte-stable export: header, then edges in sorted order."""
    lines = [f"n {g.n}"]
    if isinstance(g, Digraph):
        for u, v in sorted(g.digons):
            lines.append(f"{u} = {v}")
        for u, v in g.arcs():
            if not g.is_digon(u, v):
                lines.append(f"{u} > {v}")
    else:
        lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph | Digraph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g))
