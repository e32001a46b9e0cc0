"""Finite metric dynamical systems with exact rational distances."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence


@dataclass(frozen=True)
class FiniteDynSystem:
    """Points 0..N-1, a self-map and a symmetric matrix of Fractions."""
    dist: tuple[tuple[Fraction, ...], ...]
    fmap: tuple[int, ...]
    labels: tuple[Hashable, ...] = field(default=())
    bijective: bool = False

    def __post_init__(self):
        n = len(self.dist)
        if n < 1:
            raise ValueError("a system needs at least one point")
        if len(self.fmap) != n or any(len(row) != n for row in self.dist):
            raise ValueError("map and distance matrix sizes disagree")
        if any(not 0 <= j < n for j in self.fmap):
            raise ValueError("map leaves the point set")
        if self.labels and len(self.labels) != n:
            raise ValueError("label count disagrees with point count")
        if self.bijective and len(set(self.fmap)) != n:
            raise ValueError("map flagged bijective is not a permutation")

    @property
    def size(self) -> int:
        return len(self.dist)

    def label(self, i: int):
        return self.labels[i] if self.labels else i


def make_system(dist, fmap, labels=(), bijective=False) -> FiniteDynSystem:
    rows = tuple(tuple(Fraction(v) for v in row) for row in dist)
    return FiniteDynSystem(rows, tuple(int(j) for j in fmap), tuple(labels), bijective)


def system_from_function(points: Sequence, step, metric, bijective=False) -> FiniteDynSystem:
    """Build a system from labelled points, a label-level map and a label-level metric."""
    index = {p: i for i, p in enumerate(points)}
    if len(index) != len(points):
        raise ValueError("duplicate point labels")
    fmap = []
    for p in points:
        q = step(p)
        if q not in index:
            raise ValueError(f"map image {q!r} is not a listed point")
        fmap.append(index[q])
    n = len(points)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(metric(points[i], points[j]))
            rows[i][j] = v
            rows[j][i] = v
    return FiniteDynSystem(tuple(map(tuple, rows)), tuple(fmap), tuple(points), bijective)


@dataclass(frozen=True)
class AxiomReport:
    reflexive: bool
    positive: bool
    symmetric: bool
    triangle: bool
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.reflexive and self.positive and self.symmetric and self.triangle


def verify_metric_axioms(sys: FiniteDynSystem) -> AxiomReport:
    d = sys.dist
    n = sys.size
    reflexive = all(d[i][i] == 0 for i in range(n))
    positive = all(d[i][j] > 0 for i in range(n) for j in range(n) if i != j)
    symmetric = all(d[i][j] == d[j][i] for i in range(n) for j in range(i + 1, n))
    bad = None
    # d(x,z) <= d(x,y) + d(y,z) over all ordered triples (x,y,z)
    for y in range(n):
        dy = d[y]
        for x in range(n):
            dxy = d[x][y]
            dx = d[x]
            for z in range(n):
                if dx[z] > dxy + dy[z]:
                    bad = (x, y, z)
                    break
            if bad:
                break
        if bad:
            break
    return AxiomReport(reflexive, positive, symmetric, bad is None, bad)


@dataclass(frozen=True)
class BowenMatrix:
    horizon: int
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.dist)


def iterate_map(fmap: Sequence[int], t: int) -> list[int]:
    out = list(range(len(fmap)))
    for _ in range(t):
        out = [fmap[i] for i in out]
    return out


def bowen(sys: FiniteDynSystem, horizon: int) -> BowenMatrix:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    n = sys.size
    d = sys.dist
    acc = [list(row) for row in d]
    pos = list(sys.fmap)
    for _ in range(1, horizon):
        for i in range(n):
            pi = pos[i]
            row = acc[i]
            dpi = d[pi]
            for j in range(i + 1, n):
                v = dpi[pos[j]]
                if v > row[j]:
                    row[j] = v
                    acc[j][i] = v
        pos = [sys.fmap[p] for p in pos]
    return BowenMatrix(horizon, tuple(map(tuple, acc)))


def bowen_table(sys: FiniteDynSystem, horizons: Sequence[int]) -> dict[int, BowenMatrix]:
    """Bowen matrices for several horizons, built incrementally."""
    wanted = sorted(set(horizons))
    if not wanted:
        return {}
    if wanted[0] < 1:
        raise ValueError("horizon must be at least 1")
    n = sys.size
    d = sys.dist
    acc = [list(row) for row in d]
    pos = list(range(n))
    out = {}
    for t in range(1, wanted[-1] + 1):
        if t > 1:
            pos = [sys.fmap[p] for p in pos]
            for i in range(n):
                row = acc[i]
                dpi = d[pos[i]]
                for j in range(i + 1, n):
                    v = dpi[pos[j]]
                    if v > row[j]:
                        row[j] = v
                        acc[j][i] = v
        if t in wanted:
            out[t] = BowenMatrix(t, tuple(tuple(r) for r in acc))
    return out


def as_system(bm: BowenMatrix) -> FiniteDynSystem:
    """View a Bowen matrix as a static metric space (identity map)."""
    return FiniteDynSystem(bm.dist, tuple(range(bm.size)))


def random_system(n: int, seed: int = 0, levels: int = 8, bijective: bool = True) -> FiniteDynSystem:
    """Random metric with values in [1/2, 1] (any such values satisfy the triangle inequality)."""
    rng = random.Random(seed)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = Fraction(rng.randint(levels // 2, levels), levels)
    if bijective:
        fmap = list(range(n))
        rng.shuffle(fmap)
    else:
        fmap = [rng.randrange(n) for _ in range(n)]
    return FiniteDynSystem(tuple(map(tuple, rows)), tuple(fmap), (), bijective)


# text format: "points N", "map i j", "dist i j p/q" (upper triangle, zeros omitted)

def dumps_system(sys: FiniteDynSystem) -> str:
    lines = [f"points {sys.size}"]
    if sys.bijective:
        lines.append("bijective 1")
    lines += [f"map {i} {j}" for i, j in enumerate(sys.fmap)]
    n = sys.size
    for i in range(n):
        for j in range(i + 1, n):
            v = sys.dist[i][j]
            lines.append(f"dist {i} {j} {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def loads_system(text: str) -> FiniteDynSystem:
    n = None
    fmap: dict[int, int] = {}
    entries: dict[tuple[int, int], Fraction] = {}
    bij = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "points":
                n = int(parts[1])
            elif parts[0] == "bijective":
                bij = parts[1] not in ("0", "false")
            elif parts[0] == "map":
                fmap[int(parts[1])] = int(parts[2])
            elif parts[0] == "dist":
                i, j = int(parts[1]), int(parts[2])
                entries[(min(i, j), max(i, j))] = Fraction(parts[3])
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'points N' header")
    if sorted(fmap) != list(range(n)):
        raise ValueError("map must be given for every point")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in entries.items():
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"dist entry {i} {j} out of range")
        rows[i][j] = v
        rows[j][i] = v
    return FiniteDynSystem(tuple(map(tuple, rows)), tuple(fmap[i] for i in range(n)), (), bij)


def load_system(path) -> FiniteDynSystem:
    with open(path) as fh:
        return loads_system(fh.read())


def save_system(sys: FiniteDynSystem, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_system(sys))
