#!/usr/bin/env python3
"""Search the Gr(3,6) plabic move class for the seed matching a target
weight vector, starting from the grid fixture.

Square moves flip the colors of a quadrilateral interior face whose four
corners are trivalent, internal, and alternately colored.  Merging adjacent
same-color vertices and re-splitting high-degree vertices (the other local
moves) changes the representative without changing the seed; since different
splits expose different quadrilaterals, the BFS explores every
trivalentization variant of every seed representative.
"""

import sys
from collections import deque

sys.path.insert(0, "src")

from khl.plabic import PlabicGraph, PlabicModel

TARGET = (0, 0, 1, 1, 1, 1, 1, 1, 1, 4, 1, 1, 1, 1, 1, 4, 4, 4, 5, 5)


def signature(colors, rot):
    return (
        tuple(sorted((v, c) for v, c in colors.items())),
        tuple(sorted((v, r) for v, r in rot.items())),
    )


def contract_all(colors, rot):
    colors, rot = dict(colors), dict(rot)
    while True:
        hit = None
        for u in sorted(rot):
            if colors[u] == "boundary":
                continue
            for v in rot[u]:
                if v != u and colors.get(v) == colors[u] and colors[v] != "boundary":
                    hit = (u, v) if u < v else (v, u)
                    break
            if hit:
                break
        if not hit:
            return colors, rot
        u, v = hit
        ru, rv = list(rot[u]), list(rot[v])
        iu, iv = ru.index(v), rv.index(u)
        merged = ru[:iu] + rv[iv + 1 :] + rv[:iv] + ru[iu + 1 :]
        if len(set(merged)) != len(merged):
            raise ValueError("contraction would create a multi-edge")
        del colors[v]
        del rot[v]
        rot[u] = tuple(merged)
        for w in list(rot):
            rot[w] = tuple(u if x == v else x for x in rot[w])


def trivalentizations(colors, rot, counter=0, limit=4000):
    """All ways to split high-degree internal vertices into trivalent chains."""
    out = []
    seen = set()
    stack = [(colors, rot, counter)]
    while stack:
        c, r, cnt = stack.pop()
        high = [v for v in sorted(r) if c[v] != "boundary" and len(r[v]) > 3]
        if not high:
            sig = signature(c, r)
            if sig not in seen:
                seen.add(sig)
                out.append((c, r))
            continue
        v = high[0]
        nbrs = list(r[v])
        d = len(nbrs)
        for off in range(d):
            keep = [nbrs[off % d], nbrs[(off + 1) % d]]
            move = [nbrs[(off + j) % d] for j in range(2, d)]
            new = f"s{cnt}"
            c2 = dict(c)
            c2[new] = c[v]
            r2 = dict(r)
            r2[v] = tuple(keep + [new])
            r2[new] = tuple([v] + move)
            for w in move:
                r2[w] = tuple(new if x == v else x for x in r2[w])
            stack.append((c2, r2, cnt + 1))
        if len(out) > limit:
            break
    return out


def face_cycle(g, fid):
    edges = {e for e, f in g.face_of_edge.items() if f == fid}
    e = min(edges)
    cyc = []
    cur = e
    while True:
        cyc.append(cur[0])
        cur = (cur[1], g._prev_ccw(cur[1], cur[0]))
        if cur == e:
            break
    return cyc


def square_spots(g):
    spots = []
    for fid in g.interior_faces:
        cyc = face_cycle(g, fid)
        if len(cyc) != 4 or len(set(cyc)) != 4:
            continue
        if any(g.colors[v] == "boundary" or len(g.rotation[v]) != 3 for v in cyc):
            continue
        cols = [g.colors[v] for v in cyc]
        if cols[0] != cols[2] or cols[1] != cols[3] or cols[0] == cols[1]:
            continue
        spots.append(tuple(cyc))
    return spots


def canonical_rename(colors, rot, boundary):
    """Stable internal vertex names so signatures compare across branches."""
    order = []
    seen = set()
    stack = [boundary[0]]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        stack.extend(reversed(rot[v]))
    mapping = {}
    i = 0
    for v in order:
        if colors[v] == "boundary":
            mapping[v] = v
        else:
            mapping[v] = f"n{i}"
            i += 1
    colors2 = {mapping[v]: c for v, c in colors.items()}
    rot2 = {mapping[v]: tuple(mapping[w] for w in r) for v, r in rot.items()}
    return colors2, rot2


def main():
    base = PlabicGraph.load("src/khl/fixtures/gr36_grid.plabic")
    colors0, rot0 = contract_all(base.colors, base.rotation)
    boundary, k = base.boundary, base.k

    seeds = {}
    visited_states = set()
    queue = deque()

    def enqueue(colors, rot):
        colors, rot = canonical_rename(colors, rot, boundary)
        sig = signature(colors, rot)
        if sig in visited_states:
            return
        visited_states.add(sig)
        try:
            g = PlabicGraph(colors, rot, boundary, k)
        except Exception:
            return
        perm, ok = g.trip_permutation()
        if not ok:
            return
        m = PlabicModel(g)
        key = frozenset(m.labels.values())
        if key not in seeds:
            wv = m.weight_vector()
            interior = sorted("".join(map(str, sorted(m.labels[f]))) for f in g.interior_faces)
            seeds[key] = (g, wv, interior)
            tag = "  <-- TARGET" if wv == TARGET else ""
            print(f"seed #{len(seeds)}: interior {interior} w_G={wv}{tag}")
            if wv == TARGET:
                with open("src/khl/fixtures/gr36_g1.plabic", "w") as fh:
                    fh.write(render(g))
                print("wrote src/khl/fixtures/gr36_g1.plabic")
        queue.append((colors, rot))

    for c, r in trivalentizations(colors0, rot0):
        enqueue(c, r)
    rounds = 0
    while queue:
        colors, rot = queue.popleft()
        g = PlabicGraph(colors, rot, boundary, k)
        for cyc in square_spots(g):
            c2 = dict(colors)
            for v in cyc:
                c2[v] = "white" if colors[v] == "black" else "black"
            try:
                cc, rr = contract_all(c2, rot)
            except ValueError:
                continue
            for cv, rv in trivalentizations(cc, rr):
                enqueue(cv, rv)
        rounds += 1
        if rounds % 200 == 0:
            print(f"... {rounds} states expanded, {len(seeds)} seeds, queue {len(queue)}")
    print(f"done: {len(seeds)} seeds over {len(visited_states)} states")
    hits = [v for v in seeds.values() if v[1] == TARGET]
    print("target hits:", len(hits))


def render(g: PlabicGraph) -> str:
    lines = [f"k {g.k}"]
    for v in g.boundary:
        lines.append(f"vertex {v} boundary")
    for v in sorted(g.colors):
        if g.colors[v] != "boundary":
            lines.append(f"vertex {v} {g.colors[v]}")
    lines.append("boundary " + " ".join(g.boundary))
    for v in sorted(g.rotation):
        lines.append(f"rot {v}: " + " ".join(g.rotation[v]))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    main()
