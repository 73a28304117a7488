"""Degree-biased random walks on bipartite and unipartite graphs.

A walker at a word jumps to a neighbouring meaning with probability
proportional to ``omega_j ** phi``; at a meaning it jumps to a neighbouring
word with weight ``mu_i ** phi``. The closed-form stationary state is
compared against Monte Carlo censuses produced by :func:`simulate_walk`.

Vertices are numbered words first (``0..n-1``) then meanings
(``n..n+m-1``) wherever a single index space is needed.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np

from .errors import DisconnectedGraphError, GraphError
from .lexicon import BipartiteGraph, is_connected
from .probability import _check_phi, _fsum_axis

UNIFORM_OVER_WORDS = "words"
UNIFORM_OVER_VERTICES = "vertices"
_BLOCK = 1 << 20


@dataclass(frozen=True)
class WalkConfig:
    """Walk settings.

    ``start`` is ``"words"`` (uniform over words), ``"vertices"`` (uniform
    over all vertices) or a fixed vertex written ``"s<i>"`` / ``"r<j>"``.
    ``burn_in=None`` discards 1% of each chain's steps.
    """

    steps: int
    phi: float = 1.0
    burn_in: int | None = None
    start: str = UNIFORM_OVER_WORDS
    master_seed: int = 0
    chains: int = 1

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.chains < 1:
            raise ValueError(f"chains must be >= 1, got {self.chains}")
        _check_phi(self.phi)

    def chain_steps(self) -> list[int]:
        base, extra = divmod(self.steps, self.chains)
        return [base + (c < extra) for c in range(self.chains)]

    def chain_burn_in(self, steps: int) -> int:
        return steps // 100 if self.burn_in is None else self.burn_in


@dataclass
class WalkCensus:
    """Visit and transition counts; ``pair_transits`` follows ``graph.edges`` order."""

    graph: BipartiteGraph
    word_visits: np.ndarray
    meaning_visits: np.ndarray
    pair_transits: np.ndarray
    recorded_steps: int
    config: WalkConfig | None = field(default=None, compare=False)

    def __add__(self, other: "WalkCensus") -> "WalkCensus":
        if other.graph != self.graph:
            raise ValueError("cannot merge censuses of different graphs")
        return WalkCensus(
            graph=self.graph,
            word_visits=self.word_visits + other.word_visits,
            meaning_visits=self.meaning_visits + other.meaning_visits,
            pair_transits=self.pair_transits + other.pair_transits,
            recorded_steps=self.recorded_steps + other.recorded_steps,
            config=self.config,
        )

    def same_counts(self, other: "WalkCensus") -> bool:
        return (
            self.recorded_steps == other.recorded_steps
            and np.array_equal(self.word_visits, other.word_visits)
            and np.array_equal(self.meaning_visits, other.meaning_visits)
            and np.array_equal(self.pair_transits, other.pair_transits)
        )


@dataclass(frozen=True)
class StationaryState:
    """Closed-form stationary visit probabilities over all vertices.

    ``words`` and ``meanings`` each sum to 1/2. ``pair`` is the ``n x m``
    matrix of probabilities of traversing each edge in either direction.
    """

    words: np.ndarray
    meanings: np.ndarray
    pair: np.ndarray

    @property
    def word_probability(self) -> np.ndarray:
        """Visit probability conditioned on being at a word: ``2 * words``."""
        return 2.0 * self.words

    def edge_vector(self, g: BipartiteGraph) -> np.ndarray:
        rows, cols = g.edge_arrays()
        return self.pair[rows, cols]


@dataclass(frozen=True)
class UnipartiteGraph:
    node_count: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, node_count: int, edges):
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            if not (0 <= a < node_count and 0 <= b < node_count):
                raise GraphError(f"edge ({a}, {b}) out of range")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "node_count", int(node_count))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def adjacency(self) -> np.ndarray:
        b = np.zeros((self.node_count, self.node_count))
        for a, c in self.edges:
            b[a, c] = b[c, a] = 1.0
        return b

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1).astype(np.int64)

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(adj[v]).tolist():
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.node_count


def _require_connected(g: BipartiteGraph) -> None:
    g.require_no_isolated_words()
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")


def transition_meaning_to_word(g: BipartiteGraph, phi: float, j: int) -> np.ndarray:
    phi = _check_phi(phi)
    col = g.adjacency()[:, j] * g.word_degrees.astype(float) ** phi
    total = math.fsum(col.tolist())
    if total == 0:
        raise GraphError(f"meaning {j} has no linked words")
    return col / total


def transition_word_to_meaning(g: BipartiteGraph, phi: float, i: int) -> np.ndarray:
    phi = _check_phi(phi)
    row = g.adjacency()[i, :] * g.meaning_degrees.astype(float) ** phi
    total = math.fsum(row.tolist())
    if total == 0:
        raise GraphError(f"word {i} has no linked meanings")
    return row / total


def _normalize_rows(w: np.ndarray) -> np.ndarray:
    s = _fsum_axis(w, 1)
    out = np.zeros_like(w)
    nz = s > 0
    out[nz] = w[nz] / s[nz, None]
    return out


def transition_matrix(g: BipartiteGraph, phi: float) -> np.ndarray:
    """Full ``(n+m) x (n+m)`` one-step transition matrix of the biased walk."""
    phi = _check_phi(phi)
    a = g.adjacency()
    mu_phi = g.word_degrees.astype(float) ** phi
    omega_phi = g.meaning_degrees.astype(float) ** phi
    n = g.n
    p = np.zeros((n + g.m, n + g.m))
    p[:n, n:] = _normalize_rows(a * omega_phi[None, :])
    p[n:, :n] = _normalize_rows(a.T * mu_phi[None, :])
    return p


def analytical_stationary(g: BipartiteGraph, phi: float) -> StationaryState:
    phi = _check_phi(phi)
    _require_connected(g)
    a = g.adjacency()
    mu_phi = g.word_degrees.astype(float) ** phi
    omega_phi = g.meaning_degrees.astype(float) ** phi
    word_strength = mu_phi * _fsum_axis(a * omega_phi[None, :], 1)
    meaning_strength = omega_phi * _fsum_axis(a * mu_phi[:, None], 0)
    m_v = math.fsum(word_strength.tolist()) + math.fsum(meaning_strength.tolist())
    pv_words = word_strength / m_v
    pv_meanings = meaning_strength / m_v
    # either-direction traversal: p(s->r) + p(r->s)
    to_meaning = _normalize_rows(a * omega_phi[None, :])
    to_word = _normalize_rows(a.T * mu_phi[None, :])
    pair = to_meaning * pv_words[:, None] + (to_word * pv_meanings[:, None]).T
    return StationaryState(words=pv_words, meanings=pv_meanings, pair=pair)


def entropy_rate(g: BipartiteGraph, phi: float) -> float:
    """Entropy rate (nats per step) of the stationary biased walk."""
    st = analytical_stationary(g, phi)
    p = transition_matrix(g, phi)
    pi = np.concatenate([st.words, st.meanings])
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    h = -math.fsum((pi * plogp.sum(axis=1)).tolist())
    return max(h, 0.0)


@numba.njit(cache=True)
def _walk_kernel(offsets, targets, cum, edge_ids, v, uniforms, record, visits, transits):
    for t in range(uniforms.shape[0]):
        lo = offsets[v]
        hi = offsets[v + 1] - 1
        u = uniforms[t]
        while lo < hi:
            mid = (lo + hi) // 2
            if cum[mid] > u:
                hi = mid
            else:
                lo = mid + 1
        v = targets[lo]
        if record:
            visits[v] += 1
            transits[edge_ids[lo]] += 1
    return v


@dataclass(frozen=True)
class _CSR:
    offsets: np.ndarray
    targets: np.ndarray
    cum: np.ndarray
    edge_ids: np.ndarray


def _build_csr(vertex_count: int, arcs: list[tuple[int, int, int, float]]) -> _CSR:
    """``arcs`` are ``(source, target, edge_id, weight)``; weights normalized per source."""
    arcs = sorted(arcs)
    offsets = np.zeros(vertex_count + 1, dtype=np.int64)
    for s, *_ in arcs:
        offsets[s + 1] += 1
    offsets = np.cumsum(offsets)
    targets = np.array([a[1] for a in arcs], dtype=np.int64)
    edge_ids = np.array([a[2] for a in arcs], dtype=np.int64)
    weights = np.array([a[3] for a in arcs], dtype=np.float64)
    cum = np.empty_like(weights)
    for v in range(vertex_count):
        lo, hi = offsets[v], offsets[v + 1]
        if hi > lo:
            c = np.cumsum(weights[lo:hi])
            cum[lo:hi] = c / c[-1]
            cum[hi - 1] = 1.0
    return _CSR(offsets, targets, cum, edge_ids)


def _bipartite_csr(g: BipartiteGraph, phi: float) -> _CSR:
    mu_phi = g.word_degrees.astype(float) ** phi
    omega_phi = g.meaning_degrees.astype(float) ** phi
    arcs = []
    for e, (i, j) in enumerate(g.edges):
        arcs.append((i, g.n + j, e, omega_phi[j]))
        arcs.append((g.n + j, i, e, mu_phi[i]))
    return _build_csr(g.n + g.m, arcs)


def _start_vertex(g: BipartiteGraph, start: str, rng: np.random.Generator) -> int:
    if start == UNIFORM_OVER_WORDS:
        return int(rng.integers(g.n))
    if start == UNIFORM_OVER_VERTICES:
        while True:
            v = int(rng.integers(g.n + g.m))
            if v < g.n or g.meaning_degrees[v - g.n] > 0:
                return v
    kind, idx = start[:1], start[1:]
    if kind in ("s", "r") and idx.isdigit():
        k = int(idx)
        if kind == "s" and k < g.n:
            return k
        if kind == "r" and k < g.m and g.meaning_degrees[k] > 0:
            return g.n + k
    raise ValueError(f"invalid start vertex {start!r}")


def _run(csr: _CSR, v: int, count: int, rng, record: bool, visits, transits) -> int:
    done = 0
    while done < count:
        size = min(_BLOCK, count - done)
        v = _walk_kernel(csr.offsets, csr.targets, csr.cum, csr.edge_ids, v,
                         rng.random(size), record, visits, transits)
        done += size
    return v


def chain_seeds(master_seed: int, chains: int) -> list[np.random.SeedSequence]:
    """Per-chain seed sequences, a fixed function of ``(master_seed, chain index)``."""
    return np.random.SeedSequence(master_seed).spawn(chains)


def simulate_walk(g: BipartiteGraph, config: WalkConfig) -> WalkCensus:
    """Run ``config.chains`` independent chains and merge their censuses."""
    _require_connected(g)
    csr = _bipartite_csr(g, float(config.phi))
    total = None
    for seq, steps in zip(chain_seeds(config.master_seed, config.chains), config.chain_steps()):
        rng = np.random.default_rng(seq)
        v = _start_vertex(g, config.start, rng)
        visits = np.zeros(g.n + g.m, dtype=np.int64)
        transits = np.zeros(g.edge_count, dtype=np.int64)
        v = _run(csr, v, config.chain_burn_in(steps), rng, False, visits, transits)
        _run(csr, v, steps, rng, True, visits, transits)
        census = WalkCensus(g, visits[: g.n].copy(), visits[g.n:].copy(), transits, steps, config)
        total = census if total is None else total + census
    return total


def empirical_joint(census: WalkCensus) -> np.ndarray:
    """Edge traversal frequencies as an ``n x m`` matrix."""
    if census.recorded_steps < 1:
        raise ValueError("census has no recorded steps")
    g = census.graph
    out = np.zeros((g.n, g.m))
    rows, cols = g.edge_arrays()
    out[rows, cols] = census.pair_transits / census.recorded_steps
    return out


def empirical_word_probability(census: WalkCensus) -> np.ndarray:
    """Word visits normalized by the number of steps spent on words."""
    return census.word_visits / census.word_visits.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def unipartite_transition_matrix(u: UnipartiteGraph, phi: float) -> np.ndarray:
    phi = _check_phi(phi)
    b = u.adjacency()
    return _normalize_rows(b * u.degrees.astype(float)[None, :] ** phi)


def unipartite_stationary(u: UnipartiteGraph, phi: float) -> np.ndarray:
    """``k_i**phi * c_i / T`` with ``c_i = sum_j b_ij k_j**phi``."""
    phi = _check_phi(phi)
    if not u.is_connected():
        raise DisconnectedGraphError("unipartite graph is not connected")
    k_phi = u.degrees.astype(float) ** phi
    c = _fsum_axis(u.adjacency() * k_phi[None, :], 1)
    w = k_phi * c
    return w / math.fsum(w.tolist())


def simulate_unipartite_walk(u: UnipartiteGraph, phi: float, steps: int, seed: int) -> np.ndarray:
    """Visit counts of a biased walk on a unipartite graph, started at node 0."""
    phi = _check_phi(phi)
    if not u.is_connected():
        raise DisconnectedGraphError("unipartite graph is not connected")
    k_phi = u.degrees.astype(float) ** phi
    arcs = []
    for e, (a, b) in enumerate(u.edges):
        arcs.append((a, b, e, k_phi[b]))
        arcs.append((b, a, e, k_phi[a]))
    csr = _build_csr(u.node_count, arcs)
    rng = np.random.default_rng(seed)
    visits = np.zeros(u.node_count, dtype=np.int64)
    transits = np.zeros(len(u.edges), dtype=np.int64)
    _run(csr, 0, steps, rng, True, visits, transits)
    return visits


def census_to_csv(census: WalkCensus, path: str | Path | None = None) -> str:
    """Sectioned CSV ``section,i,j,count`` with the walk config in header comments."""
    buf = io.StringIO()
    cfg = census.config
    if cfg is not None:
        buf.write(
            f"# steps={cfg.steps} burn_in={cfg.burn_in} phi={cfg.phi!r} start={cfg.start} "
            f"master_seed={cfg.master_seed} chains={cfg.chains}\n"
        )
    buf.write(f"# n={census.graph.n} m={census.graph.m} recorded_steps={census.recorded_steps}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "i", "j", "count"])
    for i, c in enumerate(census.word_visits.tolist()):
        w.writerow(["word_visits", i, "", c])
    for j, c in enumerate(census.meaning_visits.tolist()):
        w.writerow(["meaning_visits", "", j, c])
    for (i, j), c in zip(census.graph.edges, census.pair_transits.tolist()):
        w.writerow(["pair_transits", i, j, c])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def census_from_csv(text: str, g: BipartiteGraph) -> WalkCensus:
    words = np.zeros(g.n, dtype=np.int64)
    meanings = np.zeros(g.m, dtype=np.int64)
    index = {e: k for k, e in enumerate(g.edges)}
    pairs = np.zeros(g.edge_count, dtype=np.int64)
    body = "".join(line for line in io.StringIO(text) if not line.startswith("#"))
    for rec in csv.DictReader(io.StringIO(body)):
        sec, c = rec["section"], int(rec["count"])
        if sec == "word_visits":
            words[int(rec["i"])] = c
        elif sec == "meaning_visits":
            meanings[int(rec["j"])] = c
        elif sec == "pair_transits":
            pairs[index[(int(rec["i"]), int(rec["j"]))]] = c
        else:
            raise ValueError(f"unknown census section {sec!r}")
    return WalkCensus(g, words, meanings, pairs, int(pairs.sum()))
