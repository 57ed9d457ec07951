"""OR-Library MKP instance files.

Layout (whitespace separated integers)::

    n m best_known        # best_known 0 means unknown
    p_1 ... p_n
    w_11 ... w_1n         # one block of n weights per resource
    ...
    w_m1 ... w_mn
    r_1 ... r_m

A file whose first line holds a single integer K contains K such instances
back to back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .instance import Instance

_TOKEN = re.compile(r"\S+")
MAX_DIM = 10_000_000


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class _Token:
    text: str
    line: int
    column: int


class _Reader:
    def __init__(self, text: str):
        self.tokens: list[_Token] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            for match in _TOKEN.finditer(line):
                self.tokens.append(_Token(match.group(), lineno, match.start() + 1))
        self.end = (text.count("\n") + 1, len(text) - text.rfind("\n"))
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def int(self, what: str, minimum: int | None = None) -> int:
        if self.at_end():
            raise ParseError(f"unexpected end of input, expected {what}", *self.end)
        tok = self.tokens[self.pos]
        try:
            value = int(tok.text)
        except ValueError:
            raise ParseError(f"expected integer {what}, got {tok.text!r}", tok.line, tok.column) from None
        if minimum is not None and value < minimum:
            raise ParseError(f"{what} must be >= {minimum}, got {value}", tok.line, tok.column)
        self.pos += 1
        return value

    def ints(self, count: int, what: str, minimum: int | None = None) -> list[int]:
        return [self.int(f"{what} {k + 1} of {count}", minimum) for k in range(count)]


def _read_one(reader: _Reader, name: str) -> Instance:
    head = reader.peek() if not reader.at_end() else None
    n = reader.int("item count n", 1)
    m = reader.int("resource count m", 1)
    best = reader.int("best known value", 0)
    if n > MAX_DIM or m > MAX_DIM or n * m > MAX_DIM:
        raise ParseError(f"dimensions n={n}, m={m} exceed the supported size", head.line, head.column)
    profits = reader.ints(n, "profit", 1)
    weights = [reader.ints(n, f"weight of resource {i + 1}, item", 0) for i in range(m)]
    capacities = reader.ints(m, "capacity", 0)
    try:
        return Instance(profits, weights, capacities, name=name, best_known=best or None)
    except (ValueError, OverflowError) as exc:
        raise ParseError(f"invalid instance: {exc}", head.line, head.column) from None


def parse_instances(text: str, name: str = "instance") -> list[Instance]:
    """Parse a single- or multi-instance file; multi-instance names get a ``-NN`` suffix."""
    reader = _Reader(text)
    if reader.at_end():
        raise ParseError("empty input", 1, 1)
    first = reader.peek()
    on_first_line = sum(1 for t in reader.tokens[:4] if t.line == first.line)
    if on_first_line == 1:
        count = reader.int("instance count", 1)
        instances = [_read_one(reader, f"{name}-{k:02d}") for k in range(count)]
    else:
        instances = [_read_one(reader, name)]
    if not reader.at_end():
        tok = reader.peek()
        raise ParseError(f"unexpected trailing token {tok.text!r}", tok.line, tok.column)
    return instances


def parse_instance(text: str, name: str = "instance", index: int | None = None) -> Instance:
    """Parse one instance; ``index`` selects from a multi-instance file."""
    instances = parse_instances(text, name)
    if index is None:
        if len(instances) != 1:
            raise ValueError(f"{name} holds {len(instances)} instances; pass an index")
        return instances[0]
    return instances[index]


def read_instance(path: str | Path, index: int | None = None) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem, index=index)


def read_instances(path: str | Path) -> list[Instance]:
    path = Path(path)
    return parse_instances(path.read_text(), name=path.stem)


def _row(values: np.ndarray) -> str:
    return " ".join(str(int(v)) for v in values)


def format_instance(inst: Instance) -> str:
    lines = [f"{inst.n} {inst.m} {inst.best_known or 0}", _row(inst.profits)]
    lines.extend(_row(row) for row in inst.weights)
    lines.append(_row(inst.capacities))
    return "\n".join(lines) + "\n"


def format_instances(instances: list[Instance]) -> str:
    return f"{len(instances)}\n" + "".join(format_instance(i) for i in instances)


def bundled_path(name: str) -> Path:
    """Path of an instance file shipped in ``knapga/data``."""
    return Path(__file__).parent / "data" / name
