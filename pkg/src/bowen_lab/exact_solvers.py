"""Exact sep / span / cov numbers on threshold graphs, plus brute-force oracles.

Graphs are stored as adjacency bitsets (Python ints).  An edge joins i and j
exactly when the Bowen distance is strictly below eps, so independent sets are
the separated sets and cliques are the sets of pairwise close points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .metric_core import BowenMatrix, FiniteDynSystem, bowen


@dataclass(frozen=True)
class ThresholdGraph:
    n: int
    adj: tuple[int, ...]
    eps: Fraction
    horizon: int

    def has_edge(self, i: int, j: int) -> bool:
        return (self.adj[i] >> j) & 1 == 1

    def closed(self, i: int) -> int:
        return self.adj[i] | (1 << i)

    def edges(self):
        for i in range(self.n):
            rest = self.adj[i] >> (i + 1)
            j = i + 1
            while rest:
                if rest & 1:
                    yield i, j
                rest >>= 1
                j += 1


def threshold_graph(dist, eps, horizon: int = 1) -> ThresholdGraph:
    """dist is a square matrix of rationals (or a BowenMatrix)."""
    if isinstance(dist, BowenMatrix):
        horizon = dist.horizon
        dist = dist.dist
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = len(dist)
    adj = [0] * n
    for i in range(n):
        row = dist[i]
        for j in range(i + 1, n):
            if row[j] < eps:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return ThresholdGraph(n, tuple(adj), eps, horizon)


def graph_from_edges(n: int, edges, eps=Fraction(1), horizon: int = 1) -> ThresholdGraph:
    adj = [0] * n
    for i, j in edges:
        if i != j:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return ThresholdGraph(n, tuple(adj), Fraction(eps), horizon)


def system_graph(sys: FiniteDynSystem, horizon: int, eps) -> ThresholdGraph:
    return threshold_graph(bowen(sys, horizon), eps)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def components(g: ThresholdGraph) -> list[list[int]]:
    seen = 0
    out = []
    for v in range(g.n):
        if (seen >> v) & 1:
            continue
        comp = 1 << v
        frontier = 1 << v
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.adj[u]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(sorted(_bits(comp)))
    return out


def _restrict(g: ThresholdGraph, verts: list[int]) -> list[int]:
    """Adjacency bitsets of the induced subgraph, vertices renumbered in order."""
    pos = {v: i for i, v in enumerate(verts)}
    local = []
    for v in verts:
        m = 0
        for u in _bits(g.adj[v]):
            if u in pos:
                m |= 1 << pos[u]
        local.append(m)
    return local


def _twin_drop(adj: list[int]) -> int:
    """Mask of vertices having a lower-index vertex with the same closed neighbourhood."""
    seen = {}
    drop = 0
    for v, a in enumerate(adj):
        key = a | (1 << v)
        if key in seen:
            drop |= 1 << v
        else:
            seen[key] = v
    return drop


# ---------------------------------------------------------------- sep (MIS)

def _clique_cover_bound(adj: list[int], cand: int) -> int:
    count = 0
    rest = cand
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        q = rest & adj[v]
        while q:
            lw = q & -q
            w = lw.bit_length() - 1
            rest ^= lw
            q &= adj[w] & ~lw
            q &= rest
        count += 1
    return count


def _mis_component(adj: list[int]) -> list[int]:
    n = len(adj)
    full = (1 << n) - 1
    cand0 = full & ~_twin_drop(adj)
    best: list[list[int]] = [[]]
    best_size = [0]

    def dfs(cand: int, chosen: list[int]):
        # vertices with no neighbour among the candidates are always taken
        while cand:
            if len(chosen) + _popcount(cand) <= best_size[0]:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            if adj[v] & cand:
                break
            chosen = chosen + [v]
            cand ^= low
        if not cand:
            if len(chosen) > best_size[0]:
                best_size[0] = len(chosen)
                best[0] = chosen
            return
        if len(chosen) + _clique_cover_bound(adj, cand) <= best_size[0]:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        dfs(cand & ~adj[v] & ~low, chosen + [v])
        dfs(cand & ~low, chosen)

    dfs(cand0, [])
    return best[0]


def sep_number(g: ThresholdGraph) -> tuple[int, list[int]]:
    """Maximum separated set; the witness is the lexicographically smallest optimum."""
    witness = []
    for comp in components(g):
        if len(comp) == 1:
            witness.append(comp[0])
            continue
        local = _mis_component(_restrict(g, comp))
        witness.extend(comp[i] for i in local)
    witness.sort()
    return len(witness), witness


# ------------------------------------------------------------- span (MDS)

def _mds_component(adj: list[int]) -> list[int]:
    n = len(adj)
    full = (1 << n) - 1
    closed = [adj[v] | (1 << v) for v in range(n)]
    # who can dominate vertex u: the closed neighbourhood is symmetric
    avail0 = full & ~_twin_drop(adj)
    best: list[list[int] | None] = [None]
    best_size = [n + 1]

    def lower_bound(uncov: int, avail: int) -> int:
        # greedy packing of uncovered vertices with disjoint dominator sets
        lb = 0
        used = 0
        rest = uncov
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            dom = closed[u] & avail
            if dom & used == 0:
                used |= dom
                lb += 1
        return lb

    def dfs(avail: int, uncov: int, chosen: list[int]):
        # avail: undecided vertices still usable as centres
        while True:
            if not uncov:
                if len(chosen) < best_size[0]:
                    best_size[0] = len(chosen)
                    best[0] = sorted(chosen)
                return
            forced = 0
            rest = uncov
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                rest ^= low
                dom = closed[u] & avail
                if dom == 0:
                    return
                if dom & (dom - 1) == 0:
                    forced |= dom
            if not forced:
                break
            for w in _bits(forced):
                chosen = chosen + [w]
                uncov &= ~closed[w]
                avail &= ~(1 << w)
            if len(chosen) >= best_size[0]:
                return
        if len(chosen) + lower_bound(uncov, avail) >= best_size[0]:
            return
        # drop candidates that would cover nothing new
        useless = 0
        for w in _bits(avail):
            if closed[w] & uncov == 0:
                useless |= 1 << w
        avail &= ~useless
        if not avail:
            return
        low = avail & -avail
        v = low.bit_length() - 1
        dfs(avail & ~low, uncov & ~closed[v], chosen + [v])
        dfs(avail & ~low, uncov, chosen)

    dfs(avail0, full, [])
    assert best[0] is not None
    return best[0]


def span_number(g: ThresholdGraph) -> tuple[int, list[int]]:
    """Minimum spanning (dominating) set; lexicographically smallest optimum."""
    witness = []
    for comp in components(g):
        if len(comp) == 1:
            witness.append(comp[0])
            continue
        local = _mds_component(_restrict(g, comp))
        witness.extend(comp[i] for i in local)
    witness.sort()
    return len(witness), witness


# ------------------------------------------------------ cov (clique cover)

def _cov_component(adj: list[int], lower: int) -> list[list[int]]:
    """Exact colouring of the complement graph by DSATUR branch and bound."""
    n = len(adj)
    full = (1 << n) - 1
    comp_adj = [full & ~a & ~(1 << v) for v, a in enumerate(adj)]
    classes: list[int] = []
    best: list[list[int] | None] = [None]
    best_size = [n + 1]

    def pick(uncol: int) -> int:
        key = None
        chosen = -1
        for v in _bits(uncol):
            sat = 0
            for cls in classes:
                if cls & comp_adj[v]:
                    sat += 1
            k = (sat, _popcount(comp_adj[v] & uncol))
            if key is None or k > key:
                key, chosen = k, v
        return chosen

    def dfs(uncol: int):
        if best_size[0] <= lower:
            return
        if not uncol:
            if len(classes) < best_size[0]:
                best_size[0] = len(classes)
                best[0] = list(classes)
            return
        v = pick(uncol)
        bit = 1 << v
        for idx in range(len(classes)):
            if classes[idx] & comp_adj[v] == 0:
                classes[idx] |= bit
                dfs(uncol & ~bit)
                classes[idx] &= ~bit
                if best_size[0] <= lower:
                    return
        if len(classes) + 1 < best_size[0]:
            classes.append(bit)
            dfs(uncol & ~bit)
            classes.pop()

    dfs(full)
    assert best[0] is not None
    return [sorted(_bits(m)) for m in best[0]]


def cov_number(g: ThresholdGraph) -> tuple[int, list[list[int]]]:
    """Minimum cover by cliques of the threshold graph (cells of pairwise distance < eps).

    Cells are listed by smallest member; the cell contents are those of the
    first optimum met by the search, not a lexicographic minimum.
    """
    cells_out: list[list[int]] = []
    for comp in components(g):
        if len(comp) == 1:
            cells_out.append([comp[0]])
            continue
        local = _restrict(g, comp)
        lower, _ = sep_number(ThresholdGraph(len(comp), tuple(local), g.eps, g.horizon))
        for cell in _cov_component(local, lower):
            cells_out.append([comp[i] for i in cell])
    cells_out.sort(key=lambda c: c[0])
    return len(cells_out), cells_out


# ------------------------------------------------------------ checks

def is_separated(g: ThresholdGraph, verts: Sequence[int]) -> bool:
    m = 0
    for v in verts:
        m |= 1 << v
    return all(g.adj[v] & m == 0 for v in verts)


def is_spanning(g: ThresholdGraph, verts: Sequence[int]) -> bool:
    cov = 0
    for v in verts:
        cov |= g.closed(v)
    return cov == (1 << g.n) - 1


def is_cover(g: ThresholdGraph, cells: Sequence[Sequence[int]]) -> bool:
    seen = 0
    for cell in cells:
        for a in cell:
            seen |= 1 << a
            for b in cell:
                if a != b and not g.has_edge(a, b):
                    return False
    return seen == (1 << g.n) - 1


@dataclass(frozen=True)
class ChainReport:
    cov: int
    sep: int
    span: int
    cov_double: int

    @property
    def ok(self) -> bool:
        return self.cov >= self.sep >= self.span >= self.cov_double


def chain_check(sys: FiniteDynSystem, horizon: int, eps) -> ChainReport:
    eps = Fraction(eps)
    bm = bowen(sys, horizon)
    g = threshold_graph(bm, eps)
    g2 = threshold_graph(bm, 2 * eps)
    return ChainReport(cov_number(g)[0], sep_number(g)[0], span_number(g)[0], cov_number(g2)[0])


def cov_subadditive(sys: FiniteDynSystem, t1: int, t2: int, eps) -> tuple[bool, int, int, int]:
    """ln cov at horizon t1+t2 against the sum of logs, compared as integer products."""
    c12 = cov_number(system_graph(sys, t1 + t2, eps))[0]
    c1 = cov_number(system_graph(sys, t1, eps))[0]
    c2 = cov_number(system_graph(sys, t2, eps))[0]
    return c12 <= c1 * c2, c12, c1, c2


def solve(g: ThresholdGraph, which: str):
    if which == "sep":
        return sep_number(g)
    if which == "span":
        return span_number(g)
    if which == "cov":
        return cov_number(g)
    raise ValueError(f"unknown quantity {which!r}")


# ------------------------------------------------------------ oracles

ORACLE_LIMIT = 20


def oracle_graph(g: ThresholdGraph, which: str) -> int:
    """Exhaustive enumeration over all vertex subsets (sep, span) or clique partitions (cov)."""
    n = g.n
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle limited to {ORACLE_LIMIT} points, got {n}")
    adj = g.adj
    size = 1 << n
    if which == "sep":
        indep = bytearray(size)
        indep[0] = 1
        best = 0
        for mask in range(1, size):
            low = mask & -mask
            v = low.bit_length() - 1
            rest = mask ^ low
            if indep[rest] and adj[v] & rest == 0:
                indep[mask] = 1
                c = _popcount(mask)
                if c > best:
                    best = c
        return best
    if which == "span":
        closed = [adj[v] | (1 << v) for v in range(n)]
        full = size - 1
        covered = [0] * size
        best = n
        for mask in range(1, size):
            low = mask & -mask
            v = low.bit_length() - 1
            covered[mask] = covered[mask ^ low] | closed[v]
            if covered[mask] == full:
                c = _popcount(mask)
                if c < best:
                    best = c
        return best
    if which == "cov":
        clique = bytearray(size)
        clique[0] = 1
        for mask in range(1, size):
            low = mask & -mask
            v = low.bit_length() - 1
            rest = mask ^ low
            if clique[rest] and rest & ~adj[v] == 0:
                clique[mask] = 1
        memo = {0: 0}

        def parts(mask: int) -> int:
            # a partition of mask into cliques: the block holding the lowest vertex, then the rest
            if mask in memo:
                return memo[mask]
            low = mask & -mask
            v = low.bit_length() - 1
            others = mask & adj[v]
            best_here = n + 1
            sub = others
            while True:
                block = sub | low
                if clique[block]:
                    r = 1 + parts(mask ^ block)
                    if r < best_here:
                        best_here = r
                if sub == 0:
                    break
                sub = (sub - 1) & others
            memo[mask] = best_here
            return best_here

        return parts(size - 1)
    raise ValueError(f"unknown quantity {which!r}")


def oracle_brute(sys: FiniteDynSystem, horizon: int, eps, which: str) -> int:
    if sys.size > ORACLE_LIMIT:
        raise ValueError(f"oracle limited to {ORACLE_LIMIT} points, got {sys.size}")
    return oracle_graph(system_graph(sys, horizon, eps), which)


def log_ratio(value: int, horizon: int) -> float:
    return math.log(value) / horizon
