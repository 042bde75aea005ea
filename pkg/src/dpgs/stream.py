"""Edge-update streams, the graph they induce, and neighboring relations.

A stream declares its vertex count up front; vertex ids are dense integers in
[0, n). Each timestep carries exactly one update: an insertion, a deletion or a
no-op. The on-disk format is a header line ``# n=<n> T=<T>`` followed by one
line per timestep, ``t INS u v``, ``t DEL u v`` or ``t NOP``, with t running
from 1 to T.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator


class StreamError(ValueError):
    pass


class InvalidUpdate(StreamError):
    pass


class DuplicateInsert(StreamError):
    pass


class MissingDelete(StreamError):
    pass


class ParseError(StreamError):
    pass


class Kind(enum.Enum):
    INS = "INS"
    DEL = "DEL"
    NOP = "NOP"


def canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EdgeUpdate:
    kind: Kind
    edge: tuple[int, int] | None = None

    @staticmethod
    def insert(u: int, v: int) -> "EdgeUpdate":
        if u == v:
            raise InvalidUpdate(f"self-loop at {u}")
        return EdgeUpdate(Kind.INS, canon(u, v))

    @staticmethod
    def delete(u: int, v: int) -> "EdgeUpdate":
        if u == v:
            raise InvalidUpdate(f"self-loop at {u}")
        return EdgeUpdate(Kind.DEL, canon(u, v))

    @staticmethod
    def noop() -> "EdgeUpdate":
        return NOOP

    @property
    def is_noop(self) -> bool:
        return self.kind is Kind.NOP

    def touches(self, v: int) -> bool:
        return self.edge is not None and v in self.edge


NOOP = EdgeUpdate(Kind.NOP, None)


class UpdateStream:
    """An immutable sequence of updates over a fixed vertex set [0, n)."""

    def __init__(self, n: int, updates: Iterable[EdgeUpdate]):
        if n < 0:
            raise InvalidUpdate("negative vertex count")
        self.n = int(n)
        self.updates: tuple[EdgeUpdate, ...] = tuple(updates)
        for u in self.updates:
            if u.edge is not None:
                a, b = u.edge
                if not (0 <= a < self.n and 0 <= b < self.n):
                    raise InvalidUpdate(f"vertex out of range in {u.edge} for n={n}")
                if a == b:
                    raise InvalidUpdate(f"self-loop at {a}")

    def __len__(self) -> int:
        return len(self.updates)

    def __iter__(self) -> Iterator[EdgeUpdate]:
        return iter(self.updates)

    def __getitem__(self, i):
        return self.updates[i]

    def __eq__(self, other) -> bool:
        return (isinstance(other, UpdateStream) and self.n == other.n
                        and self.updates == other.updates)

    @property
    def T(self) -> int:
        return len(self.updates)

    @property
    def insertion_only(self) -> bool:
        return all(u.kind is not Kind.DEL for u in self.updates)

    def validate(self) -> None:
        """Check that every insert adds a new edge and every delete removes one."""
        g = DynamicGraph(self.n)
        for u in self.updates:
            g.apply(u)

    def edges_in_order(self) -> list[tuple[int, int]]:
        return [u.edge for u in self.updates if u.kind is Kind.INS]

    def dumps(self) -> str:
        lines = [f"# n={self.n} T={len(self.updates)}"]
        for t, u in enumerate(self.updates, 1):
            if u.kind is Kind.NOP:
                lines.append(f"{t} NOP")
            else:
                lines.append(f"{t} {u.kind.value} {u.edge[0]} {u.edge[1]}")
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())

    @staticmethod
    def loads(text: str) -> "UpdateStream":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty stream file")
        m = re.fullmatch(r"#\s*n=(\d+)\s+T=(\d+)", lines[0])
        if not m:
            raise ParseError(f"bad header: {lines[0]!r}")
        n, T = int(m.group(1)), int(m.group(2))
        body = lines[1:]
        if len(body) != T:
            raise ParseError(f"header declares T={T} but found {len(body)} updates")
        ups = []
        for i, ln in enumerate(body, 1):
            parts = ln.split()
            try:
                t = int(parts[0])
            except (ValueError, IndexError):
                raise ParseError(f"line {i + 1}: {ln!r}") from None
            if t != i:
                raise ParseError(f"line {i + 1}: expected t={i}, got {t}")
            if len(parts) == 2 and parts[1] == "NOP":
                ups.append(NOOP)
            elif len(parts) == 4 and parts[1] in ("INS", "DEL"):
                a, b = int(parts[2]), int(parts[3])
                ups.append(EdgeUpdate.insert(a, b) if parts[1] == "INS"
                   else EdgeUpdate.delete(a, b))
            else:
                raise ParseError(f"line {i + 1}: {ln!r}")
        return UpdateStream(n, ups)

    @staticmethod
    def read(path) -> "UpdateStream":
        return UpdateStream.loads(Path(path).read_text())


class DynamicGraph:
    """Simple undirected graph on [0, n) maintained under edge updates."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.m = 0

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def apply(self, up: EdgeUpdate) -> None:
        if up.kind is Kind.NOP:
            return
        u, v = up.edge
        if up.kind is Kind.INS:
            if v in self.adj[u]:
                raise DuplicateInsert(f"edge {up.edge} already present")
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.m += 1
        else:
            if v not in self.adj[u]:
                raise MissingDelete(f"edge {up.edge} not present")
            self.adj[u].discard(v)
            self.adj[v].discard(u)
            self.m -= 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]


def prefix_graph(stream: UpdateStream, t: int) -> DynamicGraph:
    g = DynamicGraph(stream.n)
    for up in stream.updates[:t]:
        g.apply(up)
    return g


def graph_sequence(stream: UpdateStream) -> Iterator[DynamicGraph]:
    """Yield G_1, ..., G_T; the same object is mutated in place."""
    g = DynamicGraph(stream.n)
    for up in stream.updates:
        g.apply(up)
        yield g


def edge_neighbor(stream: UpdateStream, t_star: int) -> UpdateStream:
    """Replace the (1-based) update at t_star, which must not be a no-op."""
    if not 1 <= t_star <= len(stream):
        raise IndexError(t_star)
    if stream[t_star - 1].is_noop:
        raise InvalidUpdate(f"position {t_star} is already a no-op")
    ups = list(stream.updates)
    ups[t_star - 1] = NOOP
    return UpdateStream(stream.n, ups)


def node_neighbor(stream: UpdateStream, v: int) -> UpdateStream:
    """Replace every update incident to v by a no-op."""
    if not 0 <= v < stream.n:
        raise InvalidUpdate(f"vertex {v} out of range")
    return UpdateStream(stream.n,
                        [NOOP if u.touches(v) else u for u in stream.updates])


def is_edge_neighbor(a: UpdateStream, b: UpdateStream) -> bool:
    if a.n != b.n or len(a) != len(b):
        return False
    diff = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
    if len(diff) != 1:
        return False
    x, y = a[diff[0]], b[diff[0]]
    return x.is_noop != y.is_noop


def require_insertion_only(stream: UpdateStream) -> None:
    if not stream.insertion_only:
        raise InvalidUpdate("this algorithm accepts insertion-only streams")
