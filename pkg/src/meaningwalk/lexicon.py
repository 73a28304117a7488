"""Bipartite word-meaning graphs: construction, generators, degrees and I/O.

Words are indexed ``0..n-1`` and meanings ``0..m-1``. A graph is immutable
once built; all numeric views (adjacency matrix, degrees) are recomputed on
demand and returned as fresh arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphError, InfeasibleParametersError

MAX_GENERATOR_ATTEMPTS = 1000


@dataclass(frozen=True)
class BipartiteGraph:
    """Undirected 0/1 bipartite graph between ``n`` words and ``m`` meanings.

    ``strict=True`` (default) rejects words of degree zero. Meanings of
    degree zero are always allowed.
    """

    n: int
    m: int
    edges: tuple[tuple[int, int], ...]
    strict: bool = field(default=True, compare=False)

    def __init__(self, n: int, m: int, edges: Iterable[tuple[int, int]], strict: bool = True):
        n, m = int(n), int(m)
        if n < 1 or m < 1:
            raise GraphError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
        pairs = [(int(i), int(j)) for i, j in edges]
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < m):
                raise GraphError(f"edge ({i}, {j}) out of range for n={n}, m={m}")
        ordered = tuple(sorted(set(pairs)))
        if len(ordered) != len(pairs):
            raise GraphError("duplicate edges are not allowed")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", ordered)
        object.__setattr__(self, "strict", bool(strict))
        if strict:
            isolated = [i for i, d in enumerate(self.word_degrees) if d == 0]
            if isolated:
                raise GraphError(f"words with zero degree in strict mode: {isolated}")

    @cached_property
    def word_degrees(self) -> np.ndarray:
        mu = np.zeros(self.n, dtype=np.int64)
        for i, _ in self.edges:
            mu[i] += 1
        mu.flags.writeable = False
        return mu

    @cached_property
    def meaning_degrees(self) -> np.ndarray:
        omega = np.zeros(self.m, dtype=np.int64)
        for _, j in self.edges:
            omega[j] += 1
        omega.flags.writeable = False
        return omega

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        """Dense ``n x m`` 0/1 matrix (float64)."""
        a = np.zeros((self.n, self.m))
        if self.edges:
            rows, cols = zip(*self.edges)
            a[list(rows), list(cols)] = 1.0
        return a

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Word and meaning index arrays aligned with ``self.edges``."""
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        e = np.asarray(self.edges, dtype=np.int64)
        return e[:, 0], e[:, 1]

    def require_no_isolated_words(self) -> None:
        """Raise unless every word has at least one meaning.

        Probability operations call this so permissive graphs are rejected
        explicitly instead of producing zero rows.
        """
        isolated = np.flatnonzero(self.word_degrees == 0)
        if isolated.size:
            raise GraphError(f"words with zero degree: {isolated.tolist()}")

    def with_edge(self, i: int, j: int) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.m, self.edges + ((i, j),), strict=self.strict)

    def without_edge(self, i: int, j: int) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.m, [e for e in self.edges if e != (i, j)], strict=self.strict)


@dataclass(frozen=True)
class DegreeProfile:
    mu: np.ndarray
    omega: np.ndarray


@dataclass(frozen=True)
class EdgeDegreeView:
    """Degrees seen from each edge, in ``graph.edges`` order."""

    mu: np.ndarray
    omega: np.ndarray

    @property
    def mu_remaining(self) -> np.ndarray:
        return self.mu - 1

    @property
    def omega_remaining(self) -> np.ndarray:
        return self.omega - 1


def degrees(g: BipartiteGraph) -> DegreeProfile:
    return DegreeProfile(mu=np.array(g.word_degrees), omega=np.array(g.meaning_degrees))


def edge_degrees(g: BipartiteGraph) -> EdgeDegreeView:
    rows, cols = g.edge_arrays()
    return EdgeDegreeView(mu=g.word_degrees[rows].copy(), omega=g.meaning_degrees[cols].copy())


def rows_pairwise_orthogonal(g: BipartiteGraph) -> bool:
    """True iff no meaning is shared by two words (all meaning degrees <= 1)."""
    return bool(np.all(g.meaning_degrees <= 1))


def is_connected(g: BipartiteGraph) -> bool:
    """Connectivity of the undirected graph on all ``n + m`` vertices.

    Unlinked meanings count as vertices, so any zero-degree vertex makes the
    graph disconnected unless it is the only vertex.
    """
    total = g.n + g.m
    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in g.edges:
        ri, rj = find(i), find(g.n + j)
        if ri != rj:
            parent[ri] = rj
    root = find(0)
    return all(find(v) == root for v in range(total))


def generate_random_bipartite(
    n: int,
    m: int,
    edge_probability: float,
    rng_seed: int | np.random.SeedSequence | None,
    *,
    max_attempts: int = MAX_GENERATOR_ATTEMPTS,
    require_connected: bool = False,
) -> BipartiteGraph:
    """Erdos-Renyi bipartite graph conditioned on having no isolated word.

    Draws are repeated (never patched) until the condition holds; after
    ``max_attempts`` failures :class:`InfeasibleParametersError` is raised.
    """
    if not 0.0 < edge_probability <= 1.0:
        raise InfeasibleParametersError(f"edge_probability must be in (0, 1], got {edge_probability}")
    if n < 1 or m < 1:
        raise InfeasibleParametersError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(rng_seed)
    for _ in range(max_attempts):
        mask = rng.random((n, m)) < edge_probability
        if not mask.any(axis=1).all():
            continue
        rows, cols = np.nonzero(mask)
        g = BipartiteGraph(n, m, zip(rows.tolist(), cols.tolist()))
        if require_connected and not is_connected(g):
            continue
        return g
    raise InfeasibleParametersError(
        f"no valid graph for n={n}, m={m}, p={edge_probability} after {max_attempts} attempts"
    )


def generate_contrast_graph(mu_spec: Sequence[int]) -> BipartiteGraph:
    """Word ``i`` gets ``mu_spec[i]`` private meanings; every meaning has degree 1."""
    mu_spec = [int(d) for d in mu_spec]
    if not mu_spec:
        raise GraphError("mu_spec must not be empty")
    if min(mu_spec) < 1:
        raise GraphError(f"all word degrees must be >= 1, got {mu_spec}")
    edges = []
    j = 0
    for i, d in enumerate(mu_spec):
        for _ in range(d):
            edges.append((i, j))
            j += 1
    return BipartiteGraph(len(mu_spec), j, edges)


def generate_mi_optimal(n: int, m: int, d: int) -> BipartiteGraph:
    """A configuration maximizing word-meaning mutual information.

    For ``n <= m`` each word is linked to ``d`` private meanings,
    ``1 <= d <= m // n``. For ``n > m`` the roles swap: each meaning is
    linked to ``d`` private words, ``1 <= d <= n // m``; words left without a
    meaning are then unavoidable when ``n > m * d``, and the graph is
    returned in permissive mode.
    """
    if n < 1 or m < 1:
        raise GraphError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if n <= m:
        if not 1 <= d <= m // n:
            raise GraphError(f"d must be in [1, {m // n}] for n={n}, m={m}; got {d}")
        edges = [(i, i * d + k) for i in range(n) for k in range(d)]
        return BipartiteGraph(n, m, edges)
    if not 1 <= d <= n // m:
        raise GraphError(f"d must be in [1, {n // m}] for n={n}, m={m}; got {d}")
    edges = [(j * d + k, j) for j in range(m) for k in range(d)]
    return BipartiteGraph(n, m, edges, strict=(n == m * d))


def serialize(g: BipartiteGraph) -> str:
    """Edge-list text: ``n m`` header then ``i j`` lines in ascending order."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def parse(text: str, *, strict: bool = True) -> BipartiteGraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: expected two integers, got {raw!r}") from None
    if not rows:
        raise GraphError("missing 'n m' header")
    (n, m), edges = rows[0], rows[1:]
    return BipartiteGraph(n, m, edges, strict=strict)


def read_edge_list(path: str | Path, *, strict: bool = True) -> BipartiteGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    return parse(text, strict=strict)


def write_edge_list(g: BipartiteGraph, path: str | Path) -> None:
    Path(path).write_text(serialize(g))
