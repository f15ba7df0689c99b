"""Drive the whole pipeline on the built-in two-generator group.

Classifies the generators, enumerates a word ball, accumulates the limit
lines, and prints the discreteness diagnostics.  Pass --out to also write
the machine-readable JSON report the CLI emits.
"""

import argparse

import numpy as np

from kleinian import (
    classify,
    diagnostics,
    enumerate_ball,
    example_group,
    kulkarni_estimate,
)
from kleinian.serialize import dumps, estimate_doc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=4, help="word-ball radius")
    ap.add_argument("--tol", type=float, default=1e-7, help="classification tolerance")
    ap.add_argument("--out", help="write the JSON limit-set report here")
    args = ap.parse_args()

    G = example_group()
    print(f"generators: {', '.join(G.labels)}")
    for label, g in zip(G.labels, G.generators):
        cls = classify(g, tol=args.tol)
        order = f", order {cls.order}" if cls.order is not None else ""
        print(f"  {label}: {cls.kind}{order}")

    ball = enumerate_ball(G, args.radius)
    print(f"word ball of radius {args.radius}: {len(ball)} distinct elements")

    est = kulkarni_estimate(G, args.radius, tol=args.tol)
    desc = est.description
    print(
        f"limit set ({est.provenance}): {desc.kind}, {len(desc.lines)} lines, "
        f"{len(desc.isolated_points)} isolated points"
    )
    for line in desc.lines:
        print(f"  line {np.round(line.vec, 9)}")
    for point in desc.isolated_points:
        print(f"  point {np.round(point.vec, 9)}")

    d = diagnostics(G, args.radius, tol=args.tol)
    print(f"discreteness verdict: {d.discreteness_verdict}")
    print(f"three accumulated lines in general position: {d.gp3}")
    print(f"four, no three concurrent: {d.gp4}")

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(estimate_doc(est)))
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
