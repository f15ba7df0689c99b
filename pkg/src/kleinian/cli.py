"""Command line front end.

Subcommands: classify, limit-set, render, pseudo-limit, verify-example.
Exit codes: 0 success, 1 malformed input, 2 ambiguous classification,
3 non-discreteness witness, 4 ball too large, 5 unwritable output,
6 verify-example assertion failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import serialize
from .cyclic import limit_set_cyclic
from .elements import ELLIPTIC_SUSPECT, classify
from .engine import (
    GroupPresentation,
    c_gamma,
    diagnostics,
    enumerate_ball,
    example_group,
    kulkarni_estimate,
    minimality_probe,
)
from .errors import (
    AmbiguousClassification,
    BallTooLargeError,
    KleinianError,
    NonDiscreteWitness,
    NotInvertibleError,
)
from .projective import (
    chordal_dist,
    compose,
    identity_element,
    inverse,
    make_element,
    normalize_line,
)
from .pseudo import limit_of_sequence, power_sequence
from .render import AXIS_NAMES, RenderSpec, render_gray, write_p6

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_AMBIGUOUS = 2
EXIT_WITNESS = 3
EXIT_BALL = 4
EXIT_UNWRITABLE = 5
EXIT_VERIFY = 6


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is taken, usage errors are 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise _InputError(f"cannot read {path}: {e}") from e


def _load_group(path: str) -> GroupPresentation:
    doc = _load_json(path)
    try:
        return serialize.parse_group_doc(doc)
    except (ValueError, NotInvertibleError) as e:
        raise _InputError(f"bad group file {path}: {e}") from e


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise _UnwritableError(f"cannot write {path}: {e}") from e


class _UnwritableError(Exception):
    pass


def _radius_arg(text: str) -> int:
    n = int(text)
    if not 1 <= n <= 12:
        raise argparse.ArgumentTypeError("radius must lie in [1, 12]")
    return n


def _size_arg(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError("size must look like 640x480")
    return int(m.group(1)), int(m.group(2))


def _floats_arg(text: str, n: int, what: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"{what} needs {n} comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} needs numbers")


def _slice_arg(text: str) -> tuple[tuple[float, ...], tuple[float, ...]]:
    def direction(tok: str) -> tuple[float, ...]:
        tok = tok.strip()
        if tok in AXIS_NAMES:
            return AXIS_NAMES[tok]
        return _floats_arg(tok, 4, "slice direction")

    if "|" in text:
        parts = text.split("|")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError("slice takes two directions")
        return direction(parts[0]), direction(parts[1])
    parts = text.split(",")
    if len(parts) == 2:
        return direction(parts[0]), direction(parts[1])
    raise argparse.ArgumentTypeError(
        "slice must be two axis names (re1,im2) or two 4-vectors joined by |"
    )


def cmd_classify(args) -> int:
    doc = _load_json(args.file)
    try:
        m = serialize.parse_matrix(doc)
    except ValueError as e:
        raise _InputError(str(e)) from e
    try:
        g = make_element(m)
    except NotInvertibleError:
        print("error: not invertible", file=sys.stderr)
        return EXIT_INPUT
    cls = classify(g, args.tol)
    report = serialize.element_class_doc(cls)
    if cls.kind == ELLIPTIC_SUSPECT:
        report["limit_set"] = None
    else:
        report["limit_set"] = serialize.limit_desc_doc(limit_set_cyclic(g, args.tol))
    _write_text(None, serialize.dumps(report))
    return EXIT_OK


def cmd_limit_set(args) -> int:
    G = _load_group(args.file)
    diag = diagnostics(G, args.radius)
    acc = c_gamma(G, args.radius)
    est = kulkarni_estimate(G, args.radius)
    report = {
        "radius": args.radius,
        "generators": list(G.labels),
        "ball_size": len(enumerate_ball(G, args.radius)),
        "diagnostics": serialize.diagnostics_doc(diag, G.labels),
        "accumulation": serialize.accumulation_doc(acc, G.labels),
        "estimate": serialize.estimate_doc(est),
    }
    _write_text(args.out, serialize.dumps(report))
    if args.csv is not None:
        _write_text(args.csv, serialize.accumulation_csv(acc))
    return EXIT_OK


def cmd_render(args) -> int:
    G = _load_group(args.file)
    acc = c_gamma(G, args.radius)
    d1, d2 = args.slice
    try:
        spec = RenderSpec(
            chart=args.chart,
            d1=d1,
            d2=d2,
            offset=args.offset,
            window=args.window,
            width=args.size[0],
            height=args.size[1],
            distance_scale=args.scale,
        )
    except ValueError as e:
        raise _InputError(str(e)) from e
    gray = render_gray(acc.lines, spec)
    try:
        write_p6(args.out, gray)
    except OSError as e:
        raise _UnwritableError(f"cannot write {args.out}: {e}") from e
    sidecar = {
        "render_spec": {
            "chart": spec.chart,
            "d1": list(spec.d1),
            "d2": list(spec.d2),
            "offset": list(spec.offset),
            "window": list(spec.window),
            "width": spec.width,
            "height": spec.height,
            "distance_scale": spec.distance_scale,
        },
        "radius": args.radius,
        "lines": [serialize.line_doc(l) for l in acc.lines],
    }
    _write_text(args.out + ".json", serialize.dumps(sidecar))
    return EXIT_OK


def cmd_pseudo_limit(args) -> int:
    G = _load_group(args.file)
    try:
        word = serialize.parse_word(args.word, G.labels)
    except ValueError as e:
        raise _InputError(str(e)) from e
    if not word:
        raise _InputError("word must be nonempty")
    if args.terms < 1:
        raise _InputError("terms must be positive")
    letters = {}
    for i, g in enumerate(G.generators):
        letters[i + 1] = g
        letters[-(i + 1)] = inverse(g)
    g = identity_element()
    for s in word:
        g = compose(g, letters[s])
    S = limit_of_sequence(power_sequence(g, args.terms), args.terms, args.tol)
    report = {
        "word": serialize.word_str(word, G.labels),
        "terms": args.terms,
        "tol": args.tol,
        "converged": S is not None,
        "limit": None if S is None else serialize.pseudo_map_doc(S),
    }
    _write_text(args.out, serialize.dumps(report))
    return EXIT_OK


def cmd_verify_example(args) -> int:
    if not 0 <= args.radius <= 12:
        raise _InputError("radius must lie in [0, 12]")
    G = example_group(args.perturb)
    exploratory = args.perturb != 0.0

    if exploratory:
        print(f"exploratory run: generator entry perturbed by {args.perturb:g}")
        try:
            diag = diagnostics(G, args.radius)
            acc = c_gamma(G, args.radius)
            print(f"verdict: {diag.discreteness_verdict}")
            if diag.witness_word is not None:
                print(f"witness: {serialize.word_str(diag.witness_word, G.labels)}")
            print(f"lines collected: {len(acc.lines)}")
            for l in acc.lines:
                print(f"  dual {l.dual}")
        except (NonDiscreteWitness, AmbiguousClassification, BallTooLargeError) as e:
            print(f"computation stopped: {e}")
        return EXIT_OK

    failures: list[str] = []

    def check(name: str, ok: bool, detail: str = "") -> bool:
        tag = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"{tag} {name}{suffix}")
        if not ok:
            failures.append(name)
        return ok

    diag = diagnostics(G, args.radius)
    check("no non-discreteness witness", diag.discreteness_verdict == "NoWitness")
    check("no global fixed point", diag.global_fixed_point is None)
    check("no invariant line", diag.invariant_line is None)
    acc = c_gamma(G, args.radius)
    if not check(
        "at least 3 accumulation lines",
        len(acc.lines) >= 3,
        f"fewer than 3 lines: got {len(acc.lines)}" if len(acc.lines) < 3 else "",
    ):
        print(f"FAILED: {failures[0]}")
        return EXIT_VERIFY
    check("exactly 3 accumulation lines", len(acc.lines) == 3)
    coords = [
        normalize_line(np.array(v, dtype=complex))
        for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    ]
    matched = all(
        any(chordal_dist(l, c) <= 1e-9 for l in acc.lines) for c in coords
    )
    check("lines are the coordinate duals", matched)
    check("three lines in general position", diag.gp3)
    check("no four lines in general position", not diag.gp4)
    est = kulkarni_estimate(G, args.radius)
    check("estimate is hypothesis-verified", "hypothesis verified" in est.provenance)
    try:
        cov = minimality_probe(G, coords[2], args.radius)
        check("orbit of one line covers all lines", cov == 1.0, f"coverage {cov:g}")
    except KleinianError as e:
        check("orbit of one line covers all lines", False, str(e))
    if failures:
        print(f"FAILED: {failures[0]}")
        return EXIT_VERIFY
    print("all checks passed")
    return EXIT_OK


def _build_parser() -> _Parser:
    p = _Parser(prog="kleinian", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify one matrix")
    c.add_argument("file", help="JSON file holding a 3x3 complex matrix")
    c.add_argument("--tol", type=float, default=1e-7)
    c.set_defaults(func=cmd_classify)

    ls = sub.add_parser("limit-set", help="accumulate limit lines over a word ball")
    ls.add_argument("file", help="JSON group presentation file")
    ls.add_argument("--radius", type=_radius_arg, required=True)
    ls.add_argument("--out", default=None, help="write the JSON report here")
    ls.add_argument("--csv", default=None, help="also write dual coords as CSV")
    ls.set_defaults(func=cmd_limit_set)

    r = sub.add_parser("render", help="rasterize a limit-set slice to a P6 pixmap")
    r.add_argument("file", help="JSON group presentation file")
    r.add_argument("--radius", type=_radius_arg, required=True)
    r.add_argument("--chart", type=int, choices=(1, 2, 3), default=3)
    r.add_argument(
        "--slice",
        type=_slice_arg,
        default=(AXIS_NAMES["re1"], AXIS_NAMES["re2"]),
        help="two of re1,im1,re2,im2 or two 4-vectors joined by |",
    )
    r.add_argument(
        "--offset",
        type=lambda t: _floats_arg(t, 4, "offset"),
        default=(0.0, 0.0, 0.0, 0.0),
    )
    r.add_argument(
        "--window",
        type=lambda t: _floats_arg(t, 4, "window"),
        default=(-2.0, 2.0, -2.0, 2.0),
        help="umin,umax,vmin,vmax",
    )
    r.add_argument("--size", type=_size_arg, default=(512, 512))
    r.add_argument("--scale", type=float, default=0.05)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    pl = sub.add_parser("pseudo-limit", help="pseudo-projective limit of powers")
    pl.add_argument("file", help="JSON group presentation file")
    pl.add_argument("--word", required=True, help='element word, e.g. "a b^-1"')
    pl.add_argument("--terms", type=int, required=True)
    pl.add_argument("--tol", type=float, default=1e-9)
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_pseudo_limit)

    v = sub.add_parser("verify-example", help="check the built-in group end to end")
    v.add_argument("--radius", type=int, default=4)
    v.add_argument(
        "--perturb",
        type=float,
        default=0.0,
        help="perturb a generator entry and just report what happens",
    )
    v.set_defaults(func=cmd_verify_example)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK
    try:
        return args.func(args)
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except _UnwritableError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNWRITABLE
    except AmbiguousClassification as e:
        print(f"error: ambiguous classification: {e}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except NonDiscreteWitness as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_WITNESS
    except BallTooLargeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BALL
    except (ValueError, KleinianError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
