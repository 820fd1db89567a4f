#!/usr/bin/env python3
"""Generate the bundled 121-junction water-distribution surrogate.

Junctions sit on an 11 x 11 street grid. A random spanning tree of the
street graph provides the trunk mains, further street segments close loops
until the pipe budget is met, and a few longer cross-block mains bring one
junction up to the target maximum degree. Output is deterministic for a
given seed.
"""
import argparse
import random


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--side", type=int, default=11)
    ap.add_argument("--edges", type=int, default=162)
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--out", default="data/networks/water121.csv")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    k = args.side
    n = k * k
    node = lambda r, c: r * k + c
    street = []
    for r in range(k):
        for c in range(k):
            if c + 1 < k:
                street.append((node(r, c), node(r, c + 1)))
            if r + 1 < k:
                street.append((node(r, c), node(r + 1, c)))
    rng.shuffle(street)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = [0] * n
    edges = set()

    def add(i, j):
        edges.add((min(i, j), max(i, j)))
        deg[i] += 1
        deg[j] += 1

    for i, j in street:
        if find(i) != find(j):
            parent[find(i)] = find(j)
            add(i, j)
    assert len(edges) == n - 1

    # Cross-block mains (odd grid offsets) at one central junction.
    hub = node(k // 2, k // 2)
    for dr, dc in [(0, 1), (1, 0), (0, -1), (-1, 0), (0, 3), (3, 0), (0, -3), (-3, 0)]:
        if deg[hub] >= args.max_degree:
            break
        r, c = k // 2 + dr, k // 2 + dc
        j = node(r, c)
        e = (min(hub, j), max(hub, j))
        if e not in edges and deg[j] < args.max_degree - 2:
            add(hub, j)

    for i, j in street:
        if len(edges) >= args.edges:
            break
        e = (min(i, j), max(i, j))
        if e in edges or hub in e:
            continue
        add(i, j)
    assert len(edges) == args.edges, len(edges)
    assert max(deg) == args.max_degree, max(deg)

    with open(args.out, "w") as f:
        f.write("# Street-grid water-distribution surrogate: %d junctions, %d pipes, "
                "max degree %d (seed %d)\n" % (n, len(edges), max(deg), args.seed))
        f.write("# generated by tools/make_water_surrogate.py\n")
        for i, j in sorted(edges):
            f.write("%d,%d\n" % (i, j))


if __name__ == "__main__":
    main()
