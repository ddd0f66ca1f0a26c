#!/usr/bin/env python3
"""Generate the synthetic planted-community benchmark in data/synthetic."""
import argparse
import pathlib
import random


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "synthetic",
                    type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--nodes", type=int, default=500)
    ap.add_argument("--community", type=int, default=60)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    n, c = args.nodes, args.community
    labels = [f"G{i:04d}" for i in range(n)]
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            both_in = i < c and j < c
            p = 0.15 if both_in else (0.012 if i >= c and j >= c else 0.004)
            if rng.random() < p:
                edges.add((i, j))
    # spanning path keeps the background connected
    for i in range(c, n - 1):
        edges.add((i, i + 1))
    edges.add((0, c))

    community = list(range(c))
    rng.shuffle(community)
    seeds = sorted(community[:15])
    targets = sorted(community[15:40])

    # relabel so the community is not a contiguous block in file order
    perm = list(range(n))
    rng.shuffle(perm)
    labels = [labels[perm[i]] for i in range(n)]
    rows = sorted(tuple(sorted((perm[i], perm[j]))) for i, j in edges)
    by_pos = {perm[i]: i for i in range(n)}

    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "network.tsv", "w") as f:
        for a, b in rows:
            f.write(f"{labels[by_pos[a]]}\t{labels[by_pos[b]]}\n")
    with open(args.out / "scores.tsv", "w") as f:
        f.write("gene\tp\n")
        for i in range(n):
            p = 10 ** -rng.uniform(2.5, 8) if i in seeds else rng.uniform(0.02, 1.0)
            f.write(f"{labels[i]}\t{p:.6g}\n")
    with open(args.out / "targets.tsv", "w") as f:
        f.write("gene\tp\n")
        for i in range(n):
            p = 10 ** -rng.uniform(8, 20) if i in targets else rng.uniform(1e-6, 1.0)
            f.write(f"{labels[i]}\t{p:.6g}\n")


if __name__ == "__main__":
    main()
