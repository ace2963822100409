"""Collection-based pipeline: build a pool of contained convex pieces, pick
a small subset covering witness points (greedy, then simulated annealing),
and close the remaining gaps with an exact residual fix-up loop."""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .cliquecover import (
    _Walker,
    _eyes,
    build_visibility_graph,
    hull_inside,
    prune_redundant,
    repair_pieces,
)
from .geometry import (
    Location,
    Point,
    area,
    bbox,
    canonicalize,
    centroid,
    edge_lines,
    hull_add,
    point_in_convex,
)
from .model import Instance, Solution, solution_from_pieces
from .regions import PolygonWithHoles
from .rng import Rng, derive_seed
from .triangulate import SteinerPolicy, TriangulationMesh, steiner_points, triangulate
from .verify import Residual

log = logging.getLogger(__name__)

BLOAT_FAILURES = 30
RESIDUAL_SAMPLES = 16


class InfeasibleSetCover(ValueError):
    pass


@dataclass
class Collection:
    pieces: list[tuple[Point, ...]] = field(default_factory=list)
    _keys: set = field(default_factory=set, repr=False)

    def add(self, piece: Sequence[Point]) -> bool:
        piece = canonicalize(piece)
        if piece in self._keys:
            return False
        self._keys.add(piece)
        self.pieces.append(piece)
        return True

    def extend(self, pieces: Iterable[Sequence[Point]]) -> None:
        for p in pieces:
            self.add(p)

    def __len__(self) -> int:
        return len(self.pieces)


# --- collections -------------------------------------------------------------

def maximal_cliques(adj: Sequence[set[int]]) -> Iterator[list[int]]:
    """Bron-Kerbosch with Tomita pivoting; cliques come out sorted, in a
    fixed order for a fixed graph."""

    def expand(r: list[int], p: set[int], x: set[int]):
        if not p and not x:
            yield sorted(r)
            return
        pivot = max(sorted(p | x), key=lambda u: len(p & adj[u]))
        for v in sorted(p - adj[pivot]):
            yield from expand(r + [v], p & adj[v], x & adj[v])
            p.discard(v)
            x.add(v)

    yield from expand([], set(range(len(adj))), set())


def gen_collection_cliques(inst: Instance, policy: SteinerPolicy | str = SteinerPolicy.NONE,
                           cap: int | None = None, mesh: TriangulationMesh | None = None) -> Collection:
    region = inst.region
    if mesh is None:
        mesh = triangulate(region, steiner_points(region, SteinerPolicy(policy)))
    n = len(mesh.triangles)
    if cap is None:
        cap = 2 * n
    if cap < n:
        raise ValueError("cap must be at least the triangle count")
    graph = build_visibility_graph(mesh, region)
    coll = Collection()
    emitted = 0
    for clique in maximal_cliques(graph.adj):
        for piece in repair_pieces([clique], region, mesh):
            coll.add(piece)
            emitted += 1
        if emitted >= cap:
            break
    coll.extend(mesh.polygons())
    return coll


def gen_collection_bloat(inst: Instance, count: int | None = None, seed: int = 0,
                         policy: SteinerPolicy | str = SteinerPolicy.EDGE_EXTENSIONS,
                         failures: int = BLOAT_FAILURES, mesh: TriangulationMesh | None = None) -> Collection:
    """Random bloating: grow pieces from seed triangles by adding random
    candidate points while the hull stays inside the region.

    Candidates for a seed triangle are the mesh vertices of the triangles
    seen from all of its eye points, plus up to ``RESIDUAL_SAMPLES`` random vertices of
    the still-uncovered residual near them. Seed triangles are drawn among
    those whose centroid no earlier piece covers while any remain.
    """
    region = inst.region
    if mesh is None:
        mesh = triangulate(region, steiner_points(region, SteinerPolicy(policy)))
    tris = mesh.polygons()
    if count is None:
        count = max(1, len(region.vertices()) - 2)
    if count < 1:
        raise ValueError("count must be positive")
    rng = Rng(seed)
    walker = _Walker(mesh)
    residual = Residual(tris, extent=region.box)
    cents = [centroid(t) for t in tris]
    covered = [False] * len(tris)
    coll = Collection()
    for _ in range(count):
        open_ids = [t for t in range(len(tris)) if not covered[t]]
        t0 = rng.choice(open_ids) if open_ids else rng.below(len(tris))
        seen = None
        for eye in _eyes(tris[t0]):
            seen = walker.visible(t0, eye, within=seen)
        pool = sorted({mesh.points[v] for t in seen for v in mesh.triangles[t]})
        vb = bbox(pool)
        extra = sorted({p for f in residual.fragments for p in f
                        if vb[0] <= p[0] <= vb[2] and vb[1] <= p[1] <= vb[3]} - set(pool))
        rng.shuffle(extra)
        pool.extend(extra[:RESIDUAL_SAMPLES])
        piece = tris[t0]
        misses = 0
        while pool and misses < failures:
            p = pool.pop(rng.below(len(pool)))
            if point_in_convex(p, piece) is not Location.OUTSIDE:
                continue
            grown = hull_add(piece, p)
            if hull_inside(grown, region):
                piece = grown
                misses = 0
            else:
                misses += 1
        if coll.add(piece):
            residual.subtract(piece)
            pb = bbox(piece)
            for t in range(len(tris)):
                c = cents[t]
                if not covered[t] and pb[0] <= c[0] <= pb[2] and pb[1] <= c[1] <= pb[3] \
                        and point_in_convex(c, piece) is not Location.OUTSIDE:
                    covered[t] = True
    coll.extend(tris)
    return coll


# --- witnesses and set cover -------------------------------------------------

def place_witnesses(inst: Instance, residual=None) -> list[Point]:
    """Triangle centroids: of the plain triangulation initially, otherwise of
    each residual part. ``residual`` may be a list of regions or a
    :class:`Residual`, whose convex fragments are fanned into triangles."""
    if residual is None:
        return [centroid(t) for t in triangulate(inst.region).polygons()]
    if isinstance(residual, Residual):
        out = []
        for f in residual.fragments:
            for i in range(1, len(f) - 1):
                out.append(centroid((f[0], f[i], f[i + 1])))
        return out
    return [centroid(t) for comp in residual for t in triangulate(comp).polygons()]


@dataclass
class SetCoverInstance:
    witnesses: list[Point]
    covers: list[frozenset[int]]

    @classmethod
    def build(cls, pieces: Sequence[Sequence[Point]], witnesses: Sequence[Point]) -> "SetCoverInstance":
        covers = _coverage(pieces, witnesses, 0)
        return cls(list(witnesses), [frozenset(c) for c in covers])

    def add_witnesses(self, pieces: Sequence[Sequence[Point]], points: Sequence[Point]) -> None:
        base = len(self.witnesses)
        extra = _coverage(pieces, points, base)
        self.witnesses.extend(points)
        self.covers = [c | e for c, e in zip(self.covers, extra)]

    def owners(self) -> list[list[int]]:
        own: list[list[int]] = [[] for _ in self.witnesses]
        for i, c in enumerate(self.covers):
            for w in c:
                own[w].append(i)
        return own


def _coverage(pieces, points, base: int) -> list[set[int]]:
    """For each piece, indices (offset by ``base``) of the points it
    contains, boundary inclusive."""
    if not points:
        return [set() for _ in pieces]
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0, 1e-9)
    cell = span / max(1, int(math.sqrt(len(points))))
    grid: dict[tuple[int, int], list[int]] = {}
    for k, (x, y) in enumerate(zip(xs, ys)):
        grid.setdefault((int((x - x0) // cell), int((y - y0) // cell)), []).append(k)
    # clamp scans to occupied cells; a degenerate point set has a tiny cell
    gi = max(i for i, _ in grid)
    gj = max(j for _, j in grid)
    out = []
    for piece in pieces:
        b = bbox(piece)
        lines = edge_lines(piece)
        # float rounding is monotone, so this box test never drops a point
        # whose exact coordinates lie in the exact box
        fx0, fy0, fx1, fy1 = (float(v) for v in b)
        i0, j0 = max(0, int((fx0 - x0) // cell) - 1), max(0, int((fy0 - y0) // cell) - 1)
        i1, j1 = min(gi, int((fx1 - x0) // cell) + 1), min(gj, int((fy1 - y0) // cell) + 1)
        hit = set()
        for i in range(i0, i1 + 1):
            for j in range(j0, j1 + 1):
                for k in grid.get((i, j), ()):
                    if fx0 <= xs[k] <= fx1 and fy0 <= ys[k] <= fy1 and \
                            point_in_convex(points[k], piece, lines) is not Location.OUTSIDE:
                        hit.add(base + k)
        out.append(hit)
    return out


def greedy_set_cover(sc: SetCoverInstance, start: Iterable[int] = ()) -> list[int]:
    """Classic greedy: most newly covered witnesses first, ties to the lowest
    index. ``start`` pieces are kept and only the rest is completed."""
    chosen = sorted(set(start))
    left = set(range(len(sc.witnesses)))
    for i in chosen:
        left -= sc.covers[i]
    coverable = set().union(*sc.covers) if sc.covers else set()
    if not left <= coverable:
        raise InfeasibleSetCover(f"witness {min(left - coverable)} is in no piece")
    heap = [(-len(c & left), i) for i, c in enumerate(sc.covers) if c & left]
    heapq.heapify(heap)
    while left:
        neg, i = heapq.heappop(heap)
        gain = len(sc.covers[i] & left)
        if gain == 0:
            continue
        if gain != -neg:
            heapq.heappush(heap, (-gain, i))
            continue
        chosen.append(i)
        left -= sc.covers[i]
    return sorted(chosen)


@dataclass
class Schedule:
    t_start: float = 2.0
    t_end: float = 0.01
    steps: int | None = None  # default: 50 * collection size


@dataclass
class AnnealState:
    selected: list[int]  # in draw order; positions tracked in ``pos``
    pos: dict[int, int]
    count: list[int]  # per witness, how many selected pieces cover it
    temperature: float = 0.0

    @property
    def uncovered(self) -> int:
        return sum(1 for c in self.count if c == 0)


def anneal_set_cover(sc: SetCoverInstance, init: Iterable[int], schedule: Schedule | None = None,
                     seed: int = 0) -> list[int]:
    """Simulated annealing over feasible covers.

    A move drops one random selected piece, re-covers the witnesses it
    leaves bare greedily (random ties), then drops pieces made redundant by
    the additions. Metropolis acceptance on the size change, geometric
    cooling; the best cover seen is returned.
    """
    schedule = schedule or Schedule()
    steps = 50 * len(sc.covers) if schedule.steps is None else schedule.steps
    init = sorted(set(init))
    if steps <= 0 or len(init) <= 1:
        return init
    rng = Rng(seed)
    owners = sc.owners()
    covers = sc.covers
    count = [0] * len(sc.witnesses)
    for i in init:
        for w in covers[i]:
            count[w] += 1
    if any(c == 0 for c in count):
        raise InfeasibleSetCover("initial selection does not cover all witnesses")
    state = AnnealState(list(init), {i: k for k, i in enumerate(init)}, count)
    sel, pos = state.selected, state.pos
    best = list(init)
    ratio = schedule.t_end / schedule.t_start

    def add(i):
        pos[i] = len(sel)
        sel.append(i)
        for w in covers[i]:
            count[w] += 1

    def remove(i):
        k = pos.pop(i)
        last = sel.pop()
        if last != i:
            sel[k] = last
            pos[last] = k
        for w in covers[i]:
            count[w] -= 1

    for step in range(steps):
        state.temperature = schedule.t_start * ratio ** (step / steps)
        r = sel[rng.below(len(sel))]
        before = len(sel)
        remove(r)
        added = []
        bare = {w for w in covers[r] if count[w] == 0}
        while bare:
            gains: dict[int, int] = {}
            for w in bare:
                for i in owners[w]:
                    gains[i] = gains.get(i, 0) + 1
            top = max(gains.values())
            pick = sorted(i for i, g in gains.items() if g == top)
            i = pick[rng.below(len(pick))]
            add(i)
            added.append(i)
            bare -= covers[i]
        dropped = []
        if added:
            near = sorted({j for i in added for w in covers[i] for j in owners[w] if j in pos})
            for j in near:
                if j not in added and all(count[w] > 1 for w in covers[j]):
                    remove(j)
                    dropped.append(j)
        delta = len(sel) - before
        if delta <= 0 or rng.random() < math.exp(-delta / state.temperature):
            if len(sel) < len(best):
                best = sorted(sel)
        else:
            for i in reversed(added):
                remove(i)
            for j in dropped:
                add(j)
            add(r)
    return best


# --- end to end --------------------------------------------------------------

@dataclass
class SetCoverConfig:
    generator: str = "cliques"  # cliques | bloat | both
    cap: int | None = None
    schedule: Schedule = field(default_factory=Schedule)
    policy: SteinerPolicy = SteinerPolicy.NONE
    bloat_count: int | None = None
    seed: int = 0


def build_collection(inst: Instance, config: SetCoverConfig) -> Collection:
    if config.generator not in ("cliques", "bloat", "both"):
        raise ValueError(f"unknown collection generator {config.generator!r}")
    coll = Collection()
    if config.generator in ("cliques", "both"):
        coll.extend(gen_collection_cliques(inst, config.policy, config.cap).pieces)
    if config.generator in ("bloat", "both"):
        bloat_policy = config.policy if config.policy is not SteinerPolicy.NONE else SteinerPolicy.EDGE_EXTENSIONS
        coll.extend(gen_collection_bloat(inst, config.bloat_count, derive_seed(config.seed, 1),
                                         bloat_policy).pieces)
    return coll


def solve_setcover(inst: Instance, config: SetCoverConfig | None = None) -> Solution:
    config = config or SetCoverConfig()
    region: PolygonWithHoles = inst.region
    coll = build_collection(inst, config)
    pieces = coll.pieces
    sc = SetCoverInstance.build(pieces, place_witnesses(inst))
    chosen = greedy_set_cover(sc)
    chosen = anneal_set_cover(sc, chosen, config.schedule, derive_seed(config.seed, 2))
    rounds = 0
    base = triangulate(region).polygons()
    while True:
        residual = Residual(base, extent=region.box)
        for i in sorted(chosen, key=lambda i: (-area(pieces[i]), i)):
            residual.subtract(pieces[i])
            if residual.is_empty():
                break
        if residual.is_empty():
            break
        rounds += 1
        sc.add_witnesses(pieces, place_witnesses(inst, residual))
        chosen = greedy_set_cover(sc, chosen)
        short = Schedule(config.schedule.t_start, config.schedule.t_end,
                         min(_steps(config.schedule, sc), 10 * len(pieces)))
        chosen = anneal_set_cover(sc, chosen, short, derive_seed(config.seed, 2, rounds))
    if rounds:
        log.debug("%s: fix-up took %d rounds", inst.name, rounds)
    final = prune_redundant([pieces[i] for i in chosen], region, check_cover=False)
    return solution_from_pieces(inst.name, final)


def _steps(schedule: Schedule, sc: SetCoverInstance) -> int:
    return 50 * len(sc.covers) if schedule.steps is None else schedule.steps
