#!/usr/bin/env python3
"""Generate the ladder/grid plabic fixture for Gr(k,n) and validate it.

Vertices sit in an (n-k) x k checkerboard: black when row+column is even.
Columns carry vertical rails, rows horizontal rungs; pendants attach the
bottom row (labels 1..k west to east), the top row (k+1..2k east to west)
and, when n > 2k, the west column's middle rows (2k+1.. top to bottom).
Rotation lists are counterclockwise in the plane drawing.
"""

import sys

sys.path.insert(0, "src")


def grid_fixture(k, n):
    rows, cols = n - k, k
    def vid(r, c):
        return f"v{r}{c}"
    color = {}
    rot = {}
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            color[vid(r, c)] = "black" if (r + c) % 2 == 0 else "white"
    pend = {}       # (r,c) -> boundary label
    for c in range(1, cols + 1):
        pend[(rows, c)] = c
    for c in range(cols, 0, -1):
        pend[(1, c)] = k + (cols - c) + 1
    label = 2 * k
    for r in range(2, rows):
        if (r, 1) not in pend and label < n:
            label += 1
            pend[(r, 1)] = label
    assert len(pend) == n, (len(pend), n)
    bnames = {lab: f"b{lab}" for lab in range(1, n + 1)}
    for lab in bnames.values():
        color[lab] = "boundary"

    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            E = vid(r, c + 1) if c < cols else None
            W = vid(r, c - 1) if c > 1 else None
            N = vid(r - 1, c) if r > 1 else None
            S = vid(r + 1, c) if r < rows else None
            P = bnames[pend[(r, c)]] if (r, c) in pend else None
            # counterclockwise from east: E, (NE-pendant), N, (N/NW-pendant),
            # W, (W-pendant), S, (S/SE-pendant)
            order = []
            if r == 1 and c == cols and P:          # NE corner pendant
                order = [P, W, S]
            elif r == 1 and c == 1 and P:            # NW corner pendant
                order = [E, P, S]
            elif r == 1 and P:                        # top pendant (north)
                order = [E, P, W, S]
            elif r == rows and c == cols and P:       # SE corner pendant (east)
                order = [P, N, W]
            elif r == rows and c == 1 and P:          # SW corner pendant (south)
                order = [E, N, P]
            elif r == rows and P:                     # bottom pendant (south)
                order = [E, N, W, P]
            elif c == 1 and P:                        # west pendant
                order = [E, N, P, S]
            else:
                order = [E, N, W, S]
            rot[vid(r, c)] = tuple(x for x in order if x)
    for (r, c), lab in pend.items():
        rot[bnames[lab]] = (vid(r, c),)
    boundary = tuple(bnames[lab] for lab in range(1, n + 1))
    lines = [f"k {k}"]
    for lab in range(1, n + 1):
        lines.append(f"vertex b{lab} boundary")
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            lines.append(f"vertex {vid(r, c)} {color[vid(r, c)]}")
    lines.append("boundary " + " ".join(boundary))
    for v in sorted(rot):
        lines.append(f"rot {v}: " + " ".join(rot[v]))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    from khl.plabic import PlabicGraph, PlabicModel

    k, n = int(sys.argv[1]), int(sys.argv[2])
    text = grid_fixture(k, n)
    g = PlabicGraph.parse(text)
    perm, ok = g.trip_permutation()
    print("faces:", g.face_count(), "expected", k * (n - k) + 1)
    print("trip:", perm, "ok:", ok)
    m = PlabicModel(g)
    print("labels:", {f: "".join(map(str, sorted(s))) for f, s in sorted(m.labels.items(), key=str)})
    print("w_G:", m.weight_vector())
    out = sys.argv[3] if len(sys.argv) > 3 else None
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print("wrote", out)
