"""Probabilistic graph model.

An undirected graph whose edges carry independent existence probabilities
in (0, 1]. Vertices are dense internal ids 0..n-1; external labels are
opaque string tokens assigned in first-appearance order by the parser.
Adjacency is CSR with rows sorted by neighbour id, and instances are
immutable once built.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np


class GraphFormatError(ValueError):
    """Edge-list input violating the format or the graph invariants."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ProbabilisticGraph:
    __slots__ = ("vertex_tokens", "indptr", "indices", "probs", "edge_count", "_ids")

    def __init__(self, vertex_tokens, indptr, indices, probs, edge_count):
        self.vertex_tokens = list(vertex_tokens)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.probs = np.ascontiguousarray(probs, dtype=np.float64)
        self.edge_count = int(edge_count)
        n = len(self.vertex_tokens)
        if self.indptr.shape != (n + 1,) or self.indptr[0] != 0:
            raise ValueError("malformed adjacency index")
        if self.indices.shape[0] != 2 * self.edge_count or self.probs.shape[0] != 2 * self.edge_count:
            raise ValueError("adjacency size does not match edge count")
        self._ids = {t: i for i, t in enumerate(self.vertex_tokens)}
        if len(self._ids) != n:
            raise ValueError("vertex tokens are not unique")
        for a in (self.indptr, self.indices, self.probs):
            a.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.vertex_tokens)

    @property
    def m(self) -> int:
        return self.edge_count

    def id_of(self, token: str) -> int:
        try:
            return self._ids[token]
        except KeyError:
            raise KeyError(f"unknown vertex {token!r}") from None

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def incident_probs(self, v: int) -> np.ndarray:
        return self.probs[self.indptr[v] : self.indptr[v + 1]]

    def __eq__(self, other):
        if not isinstance(other, ProbabilisticGraph):
            return NotImplemented
        return (
            self.vertex_tokens == other.vertex_tokens
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.probs, other.probs)
        )

    def __repr__(self):
        return f"ProbabilisticGraph(n={self.n}, m={self.m})"

    def validate(self):
        """Check the full structural invariants; used by tests."""
        n = self.n
        if self.indices.shape[0] != 2 * self.edge_count:
            raise ValueError("degree sum != 2m")
        if n and not np.array_equal(np.sort(self.indptr), self.indptr):
            raise ValueError("indptr not monotone")
        for v in range(n):
            row = self.neighbors(v)
            if row.size:
                if np.any(np.diff(row) <= 0):
                    raise ValueError(f"row {v} not strictly sorted")
                if np.any(row == v):
                    raise ValueError(f"self-loop at {v}")
                if row.min() < 0 or row.max() >= n:
                    raise ValueError(f"row {v} has out-of-range neighbour")
        if self.probs.size and (self.probs.min() <= 0.0 or self.probs.max() > 1.0):
            raise ValueError("edge probability outside (0, 1]")
        # symmetry with matching probabilities
        for v in range(n):
            lo, hi = self.indptr[v], self.indptr[v + 1]
            for k in range(lo, hi):
                w = int(self.indices[k])
                back = np.searchsorted(self.neighbors(w), v)
                if back >= self.degree(w) or self.neighbors(w)[back] != v:
                    raise ValueError(f"edge ({v},{w}) not symmetric")
                if self.incident_probs(w)[back] != self.probs[k]:
                    raise ValueError(f"edge ({v},{w}) probability mismatch")
        return self


def from_edges(tokens, us, vs, ps) -> ProbabilisticGraph:
    """Build the canonical CSR form from one record per undirected edge."""
    tokens = list(tokens)
    n = len(tokens)
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    ps = np.asarray(ps, dtype=np.float64)
    m = us.shape[0]
    if np.any(us == vs):
        raise ValueError("self-loop")
    src = np.concatenate([us, vs])
    dst = np.concatenate([vs, us])
    pp = np.concatenate([ps, ps])
    order = np.lexsort((dst, src))
    src, dst, pp = src[order], dst[order], pp[order]
    if m:
        dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
        if np.any(dup):
            k = int(np.flatnonzero(dup)[0])
            raise ValueError(f"duplicate edge ({tokens[src[k]]}, {tokens[dst[k]]})")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return ProbabilisticGraph(tokens, indptr, dst, pp, m)


def parse_edge_list(source) -> ProbabilisticGraph:
    """Parse whitespace-separated ``u v p`` lines into a graph.

    ``#`` lines and blank lines are ignored. Any malformed line, self-loop,
    duplicate edge or out-of-range probability rejects the whole input with
    its line number.
    """
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    else:
        lines = source
    ids: dict[str, int] = {}
    tokens: list[str] = []
    us: list[int] = []
    vs: list[int] = []
    ps: list[float] = []
    seen: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"expected 'u v p', got {line!r}", line_no)
        tu, tv, tp = parts
        try:
            p = float(tp)
        except ValueError:
            raise GraphFormatError(f"unreadable probability {tp!r}", line_no) from None
        if not 0.0 < p <= 1.0:
            raise GraphFormatError(f"probability {tp} outside (0, 1]", line_no)
        if tu == tv:
            raise GraphFormatError(f"self-loop at vertex {tu!r}", line_no)
        u = ids.get(tu)
        if u is None:
            u = len(tokens)
            ids[tu] = u
            tokens.append(tu)
        v = ids.get(tv)
        if v is None:
            v = len(tokens)
            ids[tv] = v
            tokens.append(tv)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphFormatError(f"duplicate edge {tu!r} {tv!r}", line_no)
        seen.add(key)
        us.append(key[0])
        vs.append(key[1])
        ps.append(p)
    return from_edges(tokens, us, vs, ps)


def write_edge_list(g: ProbabilisticGraph, out, comments: Iterable[str] = ()):
    """Write edges as ``u v p`` lines, one per undirected edge.

    Probabilities are written with ``repr`` so a parse round-trips to the
    same float. Lines are grouped by the larger endpoint id, ascending,
    with the (v-1, v) edge leading its group: scanning the output then
    meets vertices in id order, so a graph whose ids follow first
    appearance (any parsed graph) re-parses to an identical instance.
    Isolated vertices cannot be represented.
    """
    for c in comments:
        out.write(f"# {c}\n")
    tok = g.vertex_tokens
    indptr, indices, probs = g.indptr, g.indices, g.probs
    for v in range(g.n):
        lo, hi = int(indptr[v]), int(indptr[v + 1])
        row = [k for k in range(lo, hi) if indices[k] < v]
        # a vertex without smaller neighbours is introduced by its
        # (v-1, v) edge, which must come before the rest of the group
        row.sort(key=lambda k: (indices[k] != v - 1, indices[k]))
        for k in row:
            out.write(f"{tok[indices[k]]} {tok[v]} {float(probs[k])!r}\n")


def _parse_prob_law(law: str):
    name, _, arg = law.partition(":")
    name = name.strip().lower()
    if name == "uniform":
        if arg:
            raise ValueError("uniform takes no parameters")
        return ("uniform",)
    if name == "constant":
        c = float(arg) if arg else 1.0
        if not 0.0 < c <= 1.0:
            raise ValueError(f"constant probability {c} outside (0, 1]")
        return ("constant", c)
    if name == "beta":
        try:
            a, b = (float(x) for x in arg.split(","))
        except ValueError:
            raise ValueError(f"beta law needs 'beta:alpha,beta', got {law!r}") from None
        if a <= 0 or b <= 0:
            raise ValueError("beta parameters must be positive")
        return ("beta", a, b)
    raise ValueError(f"unknown probability law {law!r}")


GENERATOR_NAME = "numpy-pcg64"


def generate_random(n: int, m: int, prob_law: str = "uniform", seed: int = 0) -> ProbabilisticGraph:
    """Seeded random simple graph: m distinct edges, probabilities i.i.d.

    Pairs are rejection-sampled in draw order (dense requests fall back to
    an exact shuffle of all pairs), then probabilities are drawn from the
    law: ``uniform`` on (0, 1], ``constant:c``, or ``beta:a,b`` clipped
    away from zero. Identical arguments give a bit-identical graph; the
    generator is PCG64 as exposed by numpy's default_rng.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"m={m} exceeds the {max_edges} possible edges")
    law = _parse_prob_law(prob_law)
    rng = np.random.default_rng(seed)

    if m == 0:
        keys = np.empty(0, dtype=np.int64)
    elif 2 * m >= max_edges:
        iu, ju = np.triu_indices(n, k=1)
        all_keys = iu.astype(np.int64) * n + ju
        keys = rng.permutation(all_keys)[:m]
    else:
        out = np.empty(m, dtype=np.int64)
        count = 0
        while count < m:
            batch = max(1024, int((m - count) * 1.1) + 16)
            a = rng.integers(0, n, size=batch, dtype=np.int64)
            b = rng.integers(0, n, size=batch, dtype=np.int64)
            lo = np.minimum(a, b)
            hi = np.maximum(a, b)
            k = (lo * n + hi)[lo != hi]
            # first occurrence within the batch, keeping draw order
            _, first = np.unique(k, return_index=True)
            k = k[np.sort(first)]
            k = k[~np.isin(k, out[:count])]
            take = min(k.shape[0], m - count)
            out[count : count + take] = k[:take]
            count += take
        keys = out
    us = keys // n
    vs = keys % n

    name = law[0]
    if name == "uniform":
        ps = 1.0 - rng.random(m)
    elif name == "constant":
        ps = np.full(m, law[1], dtype=np.float64)
    else:
        ps = rng.beta(law[1], law[2], size=m)
        ps = np.clip(ps, np.finfo(np.float64).tiny, 1.0)
    tokens = [str(i) for i in range(n)]
    return from_edges(tokens, us, vs, ps)


def vertex_mask(g: ProbabilisticGraph, ids) -> np.ndarray:
    mask = np.zeros(g.n, dtype=bool)
    mask[np.asarray(list(ids), dtype=np.int64)] = True
    return mask


def induced_subgraph(g: ProbabilisticGraph, members) -> ProbabilisticGraph:
    """Subgraph on the masked vertices with exactly the internal edges.

    Tokens are preserved; internal ids are renumbered in ascending
    original order.
    """
    mask = np.asarray(members, dtype=bool)
    if mask.shape != (g.n,):
        raise ValueError("member mask has wrong size")
    ids = np.flatnonzero(mask)
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[ids] = np.arange(ids.shape[0])
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    keep = mask[src] & mask[g.indices]
    new_src = remap[src[keep]]
    new_dst = remap[g.indices[keep]]
    new_p = g.probs[keep]
    nn = ids.shape[0]
    indptr = np.zeros(nn + 1, dtype=np.int64)
    np.cumsum(np.bincount(new_src, minlength=nn), out=indptr[1:])
    tokens = [g.vertex_tokens[i] for i in ids]
    return ProbabilisticGraph(tokens, indptr, new_dst, new_p, int(keep.sum()) // 2)


def connected_components(g: ProbabilisticGraph) -> list[np.ndarray]:
    """Boolean masks of the components, ordered by smallest member id."""
    n = g.n
    seen = np.zeros(n, dtype=bool)
    out: list[np.ndarray] = []
    indptr, indices = g.indptr, g.indices
    for seed in range(n):
        if seen[seed]:
            continue
        members = [seed]
        seen[seed] = True
        stack = [seed]
        while stack:
            v = stack.pop()
            for w in indices[indptr[v] : indptr[v + 1]]:
                w = int(w)
                if not seen[w]:
                    seen[w] = True
                    members.append(w)
                    stack.append(w)
        mask = np.zeros(n, dtype=bool)
        mask[members] = True
        out.append(mask)
    return out


def row_sums(indptr: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Per-row sums of per-entry values for a CSR layout."""
    c = np.zeros(values.shape[0] + 1, dtype=np.float64)
    np.cumsum(values, out=c[1:])
    return c[indptr[1:]] - c[indptr[:-1]]
