"""Plabic-graph combinatorics and the flow valuation on Grassmannians.

Graphs arrive as fixture files carrying an explicit rotation system
(counterclockwise neighbor lists) for a disk embedding with boundary
vertices labelled counterclockwise.  Faces are traced from the rotation
system, trips determine the face labels, and a perfect orientation with
source set [k] drives the flow enumeration.

A path from source i to sink j splits the disk in two; its weight marks the
faces in the region to its left, the one bounded by the boundary arc running
counterclockwise from j back to i.  The degree of a path counts the interior
faces of that region; valuations take the weight of the unique minimal-degree
flow and drop the never-contributing face between boundary vertices k and
k+1.  This is the reading under which the valuation matrix of the Gr(2,5)
fixture passes every structural check (boundary-row closed formula,
lineality membership, monomial-free binomial prime initial ideal).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .orders import LexOrder, WeightingMatrix

Edge = FrozenSet[str]


class PlabicError(ValueError):
    pass


class PlabicGraph:
    """Bicolored disk graph with rotation system and labelled boundary."""

    def __init__(
        self,
        colors: Dict[str, str],
        rotation: Dict[str, Sequence[str]],
        boundary: Sequence[str],
        k: int,
        orientation: Optional[Sequence[Tuple[str, str]]] = None,
    ):
        self.colors = dict(colors)
        self.rotation = {v: tuple(nbrs) for v, nbrs in rotation.items()}
        self.boundary = tuple(boundary)
        self.k = int(k)
        self.given_orientation = tuple(orientation) if orientation else None
        self._validate_structure()
        self._trace_faces()

    # -- parsing ------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "PlabicGraph":
        colors: Dict[str, str] = {}
        rotation: Dict[str, Sequence[str]] = {}
        boundary: Sequence[str] = ()
        k = None
        orientation = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            head = parts[0]
            if head == "k":
                k = int(parts[1])
            elif head == "vertex":
                if parts[2] not in ("black", "white", "boundary"):
                    raise PlabicError(f"bad color in line: {raw!r}")
                colors[parts[1]] = parts[2]
            elif head == "boundary":
                boundary = tuple(parts[1:])
            elif head == "rot":
                if not parts[1].endswith(":"):
                    raise PlabicError(f"rot line needs 'rot <id>:': {raw!r}")
                rotation[parts[1][:-1]] = tuple(parts[2:])
            elif head == "orient":
                orientation.append((parts[1], parts[2]))
            else:
                raise PlabicError(f"unknown directive {head!r}")
        if k is None or not boundary:
            raise PlabicError("fixture must set k and the boundary sequence")
        return cls(colors, rotation, boundary, k, orientation or None)

    @classmethod
    def load(cls, path) -> "PlabicGraph":
        with open(path) as fh:
            return cls.parse(fh.read())

    # -- validation ----------------------------------------------------

    def _validate_structure(self):
        n = len(self.boundary)
        if not 1 <= self.k < n:
            raise PlabicError("need 1 <= k < n")
        for b in self.boundary:
            if self.colors.get(b) != "boundary":
                raise PlabicError(f"boundary vertex {b} not declared as boundary")
        if sum(1 for c in self.colors.values() if c == "boundary") != n:
            raise PlabicError("boundary declaration mismatch")
        for v, nbrs in self.rotation.items():
            if v not in self.colors:
                raise PlabicError(f"rotation for undeclared vertex {v}")
            if len(set(nbrs)) != len(nbrs):
                raise PlabicError(f"repeated neighbor at {v} (multi-edges unsupported)")
            for u in nbrs:
                if u not in self.rotation or v not in self.rotation[u]:
                    raise PlabicError(f"edge {v}-{u} not symmetric in the rotation system")
        for v in self.colors:
            if v not in self.rotation or not self.rotation[v]:
                raise PlabicError(f"vertex {v} has no incident edges")
        for b in self.boundary:
            if len(self.rotation[b]) != 1:
                raise PlabicError(f"boundary vertex {b} must have degree 1")
        self.edges: Set[Edge] = {
            frozenset((v, u)) for v, nbrs in self.rotation.items() for u in nbrs
        }
        # connectivity
        seen = set()
        stack = [self.boundary[0]]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.rotation[v])
        if seen != set(self.colors):
            raise PlabicError("graph is not connected")

    # -- rotation helpers ----------------------------------------------

    def _next_ccw(self, v: str, u: str) -> str:
        nbrs = self.rotation[v]
        i = nbrs.index(u)
        return nbrs[(i + 1) % len(nbrs)]

    def _prev_ccw(self, v: str, u: str) -> str:
        nbrs = self.rotation[v]
        i = nbrs.index(u)
        return nbrs[(i - 1) % len(nbrs)]

    # -- faces -----------------------------------------------------------

    def _trace_faces(self):
        """Orbit decomposition of directed edges under left-face tracing.

        The successor of (u, v) is (v, w) with w the neighbor before u in the
        counterclockwise rotation at v; each orbit is the boundary walk of the
        face lying to the left of its directed edges.  The single orbit through
        the boundary pendants splits at each boundary vertex into the n
        boundary faces; the remaining orbits are the interior faces.
        """
        succ = {}
        for v, nbrs in self.rotation.items():
            for u in nbrs:
                succ[(u, v)] = (v, self._prev_ccw(v, u))
        unvisited = set(succ)
        orbits = []
        while unvisited:
            start = min(unvisited)
            orbit = []
            cur = start
            while True:
                orbit.append(cur)
                unvisited.discard(cur)
                cur = succ[cur]
                if cur == start:
                    break
                if cur not in unvisited:
                    raise PlabicError("face tracing failed to close (malformed rotation)")
            orbits.append(orbit)

        n = len(self.boundary)
        boundary_pos = {b: i + 1 for i, b in enumerate(self.boundary)}
        outer = [o for o in orbits if any(e[0] in boundary_pos for e in o)]
        if len(outer) != 1:
            raise PlabicError("expected exactly one boundary walk")
        outer = outer[0]
        interior_orbits = [o for o in orbits if not any(e[0] in boundary_pos for e in o)]

        # Euler check for the disk embedding
        if len(interior_orbits) != len(self.edges) - len(self.colors) + 1:
            raise PlabicError("rotation system is not a planar disk embedding")

        # split the boundary walk at pivots (u, b) -> (b, u)
        pivots = [t for t, (u, v) in enumerate(outer) if v in boundary_pos]
        if len(pivots) != n:
            raise PlabicError("boundary walk must meet each boundary vertex once")
        face_of_edge: Dict[Tuple[str, str], object] = {}
        L = len(outer)
        for idx, t in enumerate(pivots):
            t_next = pivots[(idx + 1) % len(pivots)]
            arrive = boundary_pos[outer[t][1]]
            segment = []
            s = (t + 1) % L
            while True:
                segment.append(outer[s])
                if s == t_next:
                    break
                s = (s + 1) % L
            depart = boundary_pos[outer[t_next][1]]
            # the segment runs from the pivot at `arrive` to the pivot at
            # `depart`; it borders the boundary face between those vertices
            r = depart
            if arrive % n != depart % n + 1 and (arrive, depart) != (1, n):
                if depart % n + 1 != arrive:
                    raise PlabicError("boundary faces out of cyclic order")
            for e in segment:
                face_of_edge[e] = ("F", r)
        interior_ids = []
        for o in sorted(interior_orbits, key=min):
            fid = ("I", len(interior_ids))
            interior_ids.append(fid)
            for e in o:
                face_of_edge[e] = fid
        self.face_of_edge = face_of_edge
        self.boundary_faces = [("F", r) for r in range(1, n + 1)]
        self.interior_faces = interior_ids
        self.faces = self.boundary_faces + self.interior_faces

    @property
    def n(self) -> int:
        return len(self.boundary)

    def face_count(self) -> int:
        return len(self.faces)

    # -- trips -----------------------------------------------------------

    def trip(self, i: int) -> List[str]:
        """The trip leaving boundary vertex i: maximal right turn at black
        vertices, maximal left turn at white, ending on the boundary."""
        b = self.boundary[i - 1]
        prev, cur = b, self.rotation[b][0]
        path = [b, cur]
        guard = 0
        while self.colors[cur] != "boundary":
            guard += 1
            if guard > 4 * len(self.edges):
                raise PlabicError("trip does not terminate (malformed input)")
            nxt = (
                self._prev_ccw(cur, prev)
                if self.colors[cur] == "black"
                else self._next_ccw(cur, prev)
            )
            prev, cur = cur, nxt
            path.append(cur)
        return path

    def trip_permutation(self) -> Tuple[Tuple[int, ...], bool]:
        """(pi, flag): flag is True when pi(i) = i + k cyclically."""
        pos = {b: j + 1 for j, b in enumerate(self.boundary)}
        perm = []
        for i in range(1, self.n + 1):
            perm.append(pos[self.trip(i)[-1]])
        expected = tuple((i - 1 + self.k) % self.n + 1 for i in range(1, self.n + 1))
        return tuple(perm), tuple(perm) == expected

    # -- region splitting ---------------------------------------------------

    def _split_by_path(self, path: Sequence[str]):
        """Partition faces into the two components cut out by a boundary-to-
        boundary path; returns (component map face->0/1, id of component
        containing the left face of the first path edge)."""
        blocked_edges = {frozenset((path[t], path[t + 1])) for t in range(len(path) - 1)}
        endpoints = {path[0], path[-1]}
        adj: Dict[object, Set[object]] = {f: set() for f in self.faces}
        for e in self.edges:
            if e in blocked_edges:
                continue
            u, v = tuple(e)
            f1 = self.face_of_edge[(u, v)]
            f2 = self.face_of_edge[(v, u)]
            if f1 != f2:
                adj[f1].add(f2)
                adj[f2].add(f1)
        n = self.n
        for r, b in enumerate(self.boundary, start=1):
            if b in endpoints:
                continue
            prev_face = ("F", (r - 2) % n + 1)
            this_face = ("F", r)
            adj[prev_face].add(this_face)
            adj[this_face].add(prev_face)
        comp: Dict[object, int] = {}
        for f in self.faces:
            if f in comp:
                continue
            cid = len(set(comp.values()))
            stack = [f]
            while stack:
                g = stack.pop()
                if g in comp:
                    continue
                comp[g] = cid
                stack.extend(adj[g])
        if len(set(comp.values())) != 2:
            raise PlabicError("path did not split the disk into two regions")
        left_face = self.face_of_edge[(path[0], path[1])]
        return comp, comp[left_face]

    # -- face labels --------------------------------------------------------

    def face_labels(self) -> Dict[object, FrozenSet[int]]:
        """Label faces by the trips passing them on the right.

        The faces to the right of the trip from i collect the trip's endpoint
        pi(i); every face ends up with a k-element subset of [n].
        """
        perm, _ = self.trip_permutation()
        labels: Dict[object, Set[int]] = {f: set() for f in self.faces}
        for i in range(1, self.n + 1):
            path = self.trip(i)
            comp, left_id = self._split_by_path(path)
            for f, cid in comp.items():
                if cid != left_id:
                    labels[f].add(perm[i - 1])
        out = {f: frozenset(s) for f, s in labels.items()}
        sizes = {len(s) for s in out.values()}
        if sizes != {self.k}:
            raise PlabicError(f"face labels are not k-subsets (sizes {sizes})")
        if len(set(out.values())) != len(out):
            raise PlabicError("face labels are not distinct")
        return out

    def empty_face(self):
        """The boundary face between vertices k and k+1; never contributes."""
        return ("F", self.k)


@dataclass(frozen=True)
class PerfectOrientation:
    directed: FrozenSet[Tuple[str, str]]

    def out_neighbors(self, v: str) -> List[str]:
        return sorted(t for (s, t) in self.directed if s == v)

    def __contains__(self, st):
        return st in self.directed


def validate_orientation(graph: PlabicGraph, directed: Sequence[Tuple[str, str]], sources: Set[int]) -> PerfectOrientation:
    dset = set(tuple(e) for e in directed)
    if len(dset) != len(graph.edges):
        raise PlabicError("orientation must direct every edge exactly once")
    for (u, v) in dset:
        if frozenset((u, v)) not in graph.edges:
            raise PlabicError(f"directed edge {u}->{v} is not a graph edge")
        if (v, u) in dset:
            raise PlabicError(f"edge {u}-{v} directed both ways")
    indeg = {v: 0 for v in graph.colors}
    outdeg = {v: 0 for v in graph.colors}
    for (u, v) in dset:
        outdeg[u] += 1
        indeg[v] += 1
    for v, color in graph.colors.items():
        if color == "white" and indeg[v] != 1:
            raise PlabicError(f"white vertex {v} needs exactly one incoming edge")
        if color == "black" and outdeg[v] != 1:
            raise PlabicError(f"black vertex {v} needs exactly one outgoing edge")
    for r, b in enumerate(graph.boundary, start=1):
        if r in sources and outdeg[b] != 1:
            raise PlabicError(f"source {b} must point into the graph")
        if r not in sources and indeg[b] != 1:
            raise PlabicError(f"sink {b} must receive its edge")
    return PerfectOrientation(frozenset(dset))


def perfect_orientation(graph: PlabicGraph, sources: Optional[Set[int]] = None) -> PerfectOrientation:
    """A perfect orientation with the given boundary source set.

    Uses the fixture's orientation when present; otherwise a deterministic
    backtracking search over edge directions.  Raises when none exists.
    """
    if sources is None:
        sources = set(range(1, graph.k + 1))
    if graph.given_orientation:
        return validate_orientation(graph, graph.given_orientation, sources)
    edges = sorted(tuple(sorted(e)) for e in graph.edges)
    n_e = len(edges)
    indeg = {v: 0 for v in graph.colors}
    outdeg = {v: 0 for v in graph.colors}
    remaining = {v: len(graph.rotation[v]) for v in graph.colors}
    pos = {b: r for r, b in enumerate(graph.boundary, start=1)}
    chosen: List[Tuple[str, str]] = []

    def feasible(v):
        color = graph.colors[v]
        if color == "white":
            if indeg[v] > 1:
                return False
            if remaining[v] == 0 and indeg[v] != 1:
                return False
            if indeg[v] + remaining[v] < 1:
                return False
        elif color == "black":
            if outdeg[v] > 1:
                return False
            if remaining[v] == 0 and outdeg[v] != 1:
                return False
            if outdeg[v] + remaining[v] < 1:
                return False
        else:
            want_out = 1 if pos[v] in sources else 0
            if outdeg[v] > want_out or indeg[v] > 1 - want_out:
                return False
        return True

    def search(idx):
        if idx == n_e:
            return True
        u, v = edges[idx]
        for (s, t) in ((u, v), (v, u)):
            chosen.append((s, t))
            outdeg[s] += 1
            indeg[t] += 1
            remaining[u] -= 1
            remaining[v] -= 1
            if feasible(u) and feasible(v) and search(idx + 1):
                return True
            chosen.pop()
            outdeg[s] -= 1
            indeg[t] -= 1
            remaining[u] += 1
            remaining[v] += 1
        return False

    if not search(0):
        raise PlabicError(f"no perfect orientation with sources {sorted(sources)}")
    return validate_orientation(graph, chosen, sources)


# ---------------------------------------------------------------------------
# flows


def _paths_between(graph, orient: PerfectOrientation, start: str, goals: Set[str], banned: Set[str]):
    """All simple directed paths from start to any goal avoiding banned vertices."""
    out = []
    path = [start]
    used = {start}

    def dfs(v):
        for w in orient.out_neighbors(v):
            if w in used or w in banned:
                continue
            path.append(w)
            if w in goals:
                out.append(tuple(path))
            elif graph.colors[w] != "boundary":
                used.add(w)
                dfs(w)
                used.remove(w)
            path.pop()

    dfs(start)
    return out


def flows(graph: PlabicGraph, orient: PerfectOrientation, J: Sequence[int]) -> List[Tuple[Tuple[str, ...], ...]]:
    """All vertex-disjoint systems of directed paths from [k]\\J to J\\[k].

    The empty system is the unique flow when J equals the source set; an
    empty list means no flow exists.
    """
    Jset = set(J)
    if len(Jset) != graph.k:
        raise PlabicError("J must have size k")
    sources = [r for r in range(1, graph.k + 1) if r not in Jset]
    sinks = {graph.boundary[j - 1] for j in Jset if j > graph.k}
    if len(sources) != len(sinks):
        raise PlabicError("J is not reachable from the source set")
    systems: List[Tuple[Tuple[str, ...], ...]] = []

    def assemble(idx, used_vertices, used_sinks, acc):
        if idx == len(sources):
            systems.append(tuple(acc))
            return
        start = graph.boundary[sources[idx] - 1]
        for p in _paths_between(graph, orient, start, sinks - used_sinks, used_vertices):
            body = set(p)
            if body & used_vertices:
                continue
            assemble(idx + 1, used_vertices | body, used_sinks | {p[-1]}, acc + [p])

    assemble(0, set(), set(), [])
    return sorted(systems)


def path_weight(graph: PlabicGraph, path: Sequence[str]) -> Dict[object, int]:
    """Indicator of the faces in the region to the left of the path."""
    weights = {f: 0 for f in graph.faces}
    comp, left_id = graph._split_by_path(path)
    for f in graph.faces:
        if comp[f] == left_id:
            weights[f] = 1
    return weights


def flow_weight_degree(graph: PlabicGraph, flow: Sequence[Sequence[str]]):
    """Summed face weights of a flow and its degree (interior faces hit)."""
    total = {f: 0 for f in graph.faces}
    degree = 0
    for path in flow:
        w = path_weight(graph, path)
        for f, x in w.items():
            total[f] += x
        degree += sum(w[f] for f in graph.interior_faces)
    return total, degree


class FlowTie(PlabicError):
    """The minimal degree is attained by two flows (bad fixture)."""


@dataclass
class PlabicModel:
    """Faces, labels, orientation and valuations of one fixture graph."""

    graph: PlabicGraph
    orientation: PerfectOrientation = None
    labels: Dict[object, FrozenSet[int]] = None

    def __post_init__(self):
        if self.orientation is None:
            self.orientation = perfect_orientation(self.graph)
        if self.labels is None:
            self.labels = self.graph.face_labels()

    def face_order(self, include_empty=True) -> List[object]:
        """Boundary faces in index order, then interior faces by label."""
        bf = list(self.graph.boundary_faces)
        if not include_empty:
            bf.remove(self.graph.empty_face())
        interior = sorted(self.graph.interior_faces, key=lambda f: sorted(self.labels[f]))
        return bf + interior

    def subsets(self) -> List[Tuple[int, ...]]:
        return [
            tuple(J)
            for J in itertools.combinations(range(1, self.graph.n + 1), self.graph.k)
        ]

    def minimal_flow(self, J):
        all_flows = flows(self.graph, self.orientation, J)
        if not all_flows:
            raise PlabicError(f"no flow for J={J}")
        weighed = [(flow_weight_degree(self.graph, f), f) for f in all_flows]
        best = min(d for (w, d), _ in weighed)
        hits = [(w, f) for (w, d), f in weighed if d == best]
        if len(hits) > 1:
            raise FlowTie(f"minimal degree {best} attained {len(hits)} times for J={J}")
        return hits[0][0], best, hits[0][1]

    def valuation(self, J) -> Tuple[int, ...]:
        """Weight of the minimal-degree flow, empty-face coordinate dropped."""
        w, _, _ = self.minimal_flow(J)
        return tuple(w[f] for f in self.face_order(include_empty=False))

    def degree(self, J) -> int:
        _, d, _ = self.minimal_flow(J)
        return d

    def weight_vector(self) -> Tuple[int, ...]:
        return tuple(self.degree(J) for J in self.subsets())

    def valuation_table(self):
        """Rows (one per k-subset, lex order) over all faces plus degree."""
        order = self.face_order(include_empty=True)
        rows = []
        for J in self.subsets():
            w, d, _ = self.minimal_flow(J)
            rows.append({"J": J, "row": tuple(w[f] for f in order), "degree": d})
        return rows

    def matrix(self) -> WeightingMatrix:
        """The valuation matrix: one row per face (empty face dropped),
        columns indexed by k-subsets in lex order."""
        cols = [self.valuation(J) for J in self.subsets()]
        rows = [tuple(c[i] for c in cols) for i in range(len(self.face_order(include_empty=False)))]
        return WeightingMatrix(rows, LexOrder())

    def hat_matrix(self) -> WeightingMatrix:
        from .toric import hat_matrix as _hat

        from .ideals import grassmannian_universe

        universe = grassmannian_universe(self.graph.k, self.graph.n)
        return _hat(universe, self.matrix().rows, LexOrder())


def boundary_column_formula(r: int, J: Sequence[int], k: int, n: int) -> int:
    """Closed form for the boundary-face rows of the valuation matrix.

    Split J as j_1 < ... < j_s <= k < j_{s+1} < ... < j_k and let
    i_1 < ... < i_{k-s} list [k] minus the lazy part; the entry counts the
    moving paths whose half-open cyclic interval [j_l, i_{k-l+1}) contains r.
    """
    if r == k or not 1 <= r <= n:
        raise ValueError("r must lie in [n] and differ from k")
    J = sorted(set(J))
    if len(J) != k:
        raise ValueError("J must be a k-subset")
    lazy = [j for j in J if j <= k]
    moving = [j for j in J if j > k]
    others = [i for i in range(1, k + 1) if i not in lazy]
    count = 0
    for idx, j in enumerate(moving):
        l = len(lazy) + idx + 1  # position of j in J, 1-based
        source = others[k - l]  # i_{k-l+1}
        # half-open cyclic interval [j, source)
        r_shift = (r - j) % n
        end_shift = (source - j) % n
        if r_shift < end_shift:
            count += 1
    return count
