"""Rasterize the limit set of the built-in group to a P6 pixmap.

Accumulates limit lines over a word ball, slices the plane through an
affine chart, and writes a binary pixmap whose intensity falls off with
distance to the nearest limit line.
"""

import argparse

from kleinian import RenderSpec, example_group, kulkarni_estimate, render_gray, write_p6


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=4, help="word-ball radius")
    ap.add_argument("--size", type=int, default=512, help="image width and height")
    ap.add_argument(
        "--window",
        type=float,
        nargs=4,
        default=(-2.0, 2.0, -2.0, 2.0),
        metavar=("UMIN", "UMAX", "VMIN", "VMAX"),
        help="slice coordinates of the image rectangle",
    )
    ap.add_argument("--scale", type=float, default=0.05, help="distance falloff scale")
    ap.add_argument("--out", default="limit_set.ppm", help="output pixmap path")
    args = ap.parse_args()

    G = example_group()
    est = kulkarni_estimate(G, args.radius)
    lines = est.description.lines
    print(f"accumulated {len(lines)} limit lines at radius {args.radius}")

    spec = RenderSpec(
        window=tuple(args.window),
        width=args.size,
        height=args.size,
        distance_scale=args.scale,
    )
    gray = render_gray(lines, spec)
    write_p6(args.out, gray)
    print(f"wrote {args.out} ({args.size}x{args.size})")


if __name__ == "__main__":
    main()
