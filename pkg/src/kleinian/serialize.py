"""Deterministic JSON and CSV serialization for reports and group files.

Every float is printed with 17 significant digits so that reports are
reproducible and diffable; complex numbers serialize as [re, im] pairs,
triples as length-3 arrays, matrices as row-major 3x3 arrays of pairs.
Group presentation files look like

    { "generators": [ { "label": "a", "matrix": [[[re,im],...],...] } ] }

where a matrix entry may be a plain number (read as real) or an [re, im]
pair.  Words over the generators are written with label tokens and caret
powers, e.g. "a^2 b^-1 a".
"""

from __future__ import annotations

import math
import re as _re

import numpy as np

from .engine import (
    DualAccumulation,
    GroupDiagnostics,
    GroupPresentation,
    LimitSetEstimate,
    presentation,
)
from .projective import ProjLine, ProjPoint

_LABEL_RE = _re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("only finite numbers are serializable")
    if x == 0.0:
        x = 0.0  # normalize -0.0 for byte-stable output
    return "%.17g" % x


def dumps(doc, indent: int = 2) -> str:
    """Render a document of dicts/lists/str/numbers to deterministic JSON."""
    out: list[str] = []
    _emit(doc, out, indent, 0)
    out.append("\n")
    return "".join(out)


def _emit(doc, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if doc is None:
        out.append("null")
    elif doc is True:
        out.append("true")
    elif doc is False:
        out.append("false")
    elif isinstance(doc, str):
        out.append(_json_string(doc))
    elif isinstance(doc, int):
        out.append(str(doc))
    elif isinstance(doc, float):
        out.append(fmt_float(doc))
    elif isinstance(doc, dict):
        if not doc:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(doc.items()):
            if not isinstance(k, str):
                raise TypeError("JSON object keys must be strings")
            out.append(pad_in)
            out.append(_json_string(k))
            out.append(": ")
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i < len(doc) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(doc, (list, tuple)):
        if not len(doc):
            out.append("[]")
            return
        flat = all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in doc)
        if flat:
            parts = [
                fmt_float(x) if isinstance(x, float) else str(x) for x in doc
            ]
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(doc):
            out.append(pad_in)
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i < len(doc) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(doc).__name__}")


_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def _json_string(s: str) -> str:
    parts = ['"']
    for ch in s:
        if ch in _ESCAPES:
            parts.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            parts.append("\\u%04x" % ord(ch))
        else:
            parts.append(ch)
    parts.append('"')
    return "".join(parts)


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def triple_doc(vec) -> list[list[float]]:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    if v.shape != (3,):
        raise ValueError("expected a length-3 vector")
    return [complex_pair(z) for z in v]


def matrix_doc(m) -> list[list[list[float]]]:
    a = np.asarray(m, dtype=complex)
    if a.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    return [[complex_pair(a[i, j]) for j in range(3)] for i in range(3)]


def point_doc(p: ProjPoint) -> list[list[float]]:
    return triple_doc(p.vec)


def line_doc(l: ProjLine) -> list[list[float]]:
    return triple_doc(l.vec)


def parse_complex_entry(x) -> complex:
    if isinstance(x, bool):
        raise ValueError("matrix entries must be numbers or [re, im] pairs")
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        re_, im_ = x
        if all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in (re_, im_)):
            return complex(float(re_), float(im_))
    raise ValueError("matrix entries must be numbers or [re, im] pairs")


def parse_matrix(doc) -> np.ndarray:
    if isinstance(doc, dict) and "matrix" in doc:
        doc = doc["matrix"]
    if not (isinstance(doc, (list, tuple)) and len(doc) == 3):
        raise ValueError("expected a 3x3 matrix (three rows)")
    rows = []
    for row in doc:
        if not (isinstance(row, (list, tuple)) and len(row) == 3):
            raise ValueError("expected a 3x3 matrix (three entries per row)")
        rows.append([parse_complex_entry(x) for x in row])
    return np.array(rows, dtype=complex)


def parse_group_doc(doc) -> GroupPresentation:
    if not isinstance(doc, dict) or "generators" not in doc:
        raise ValueError('group file must be an object with a "generators" list')
    gens_doc = doc["generators"]
    if not isinstance(gens_doc, list) or not gens_doc:
        raise ValueError("group file needs a nonempty generator list")
    matrices = []
    labels = []
    for i, g in enumerate(gens_doc):
        if not isinstance(g, dict) or "matrix" not in g:
            raise ValueError("each generator needs a matrix")
        matrices.append(parse_matrix(g["matrix"]))
        label = g.get("label", chr(ord("a") + i))
        if not isinstance(label, str) or not _LABEL_RE.match(label) or "^" in label:
            raise ValueError(f"bad generator label {label!r}")
        labels.append(label)
    return presentation(matrices, labels)


def group_doc(G: GroupPresentation) -> dict:
    return {
        "generators": [
            {"label": lab, "matrix": matrix_doc(g.matrix)}
            for g, lab in zip(G.generators, G.labels)
        ]
    }


def word_str(word, labels) -> str:
    """Caret-power spelling of a letter tuple, e.g. (1,1,-2) -> "a^2 b^-1"."""
    parts: list[str] = []
    i, n = 0, len(word)
    while i < n:
        s = word[i]
        j = i
        while j < n and word[j] == s:
            j += 1
        k = j - i
        idx = abs(s) - 1
        if not 0 <= idx < len(labels):
            raise ValueError(f"letter {s} has no label")
        exp = k if s > 0 else -k
        parts.append(labels[idx] if exp == 1 else f"{labels[idx]}^{exp}")
        i = j
    return " ".join(parts)


def parse_word(text: str, labels) -> tuple[int, ...]:
    by_label = {lab: i + 1 for i, lab in enumerate(labels)}
    word: list[int] = []
    for token in text.split():
        m = _LABEL_RE.match(token)
        if not m or m.group(1) not in by_label:
            raise ValueError(f"bad word token {token!r}")
        s = by_label[m.group(1)]
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp == 0:
            raise ValueError("zero exponent in word")
        letter = s if exp > 0 else -s
        word.extend([letter] * abs(exp))
    return tuple(word)


def element_class_doc(cls) -> dict:
    return {
        "kind": cls.kind,
        "order": cls.order,
        "eigenvalues": [complex_pair(z) for z in cls.eigenvalues],
        "fixed_points": [point_doc(p) for p in cls.fixed_points],
        "invariant_lines": [line_doc(l) for l in cls.invariant_lines],
    }


def limit_desc_doc(desc) -> dict:
    return {
        "kind": desc.kind,
        "lines": [line_doc(l) for l in desc.lines],
        "isolated_points": [point_doc(p) for p in desc.isolated_points],
    }


def accumulation_doc(acc: DualAccumulation, labels) -> dict:
    return {
        "cluster_radius": acc.cluster_radius,
        "lines": [
            {"dual": line_doc(l), "witness": word_str(acc.witnesses[l], labels)}
            for l in acc.lines
        ],
        "isolated_points": [point_doc(p) for p in acc.isolated_points],
    }


def accumulation_csv(acc: DualAccumulation) -> str:
    """One dual line per row: re1,im1,re2,im2,re3,im3."""
    rows = ["re1,im1,re2,im2,re3,im3"]
    for l in acc.lines:
        vals = []
        for z in l.vec:
            vals.append(fmt_float(float(z.real)))
            vals.append(fmt_float(float(z.imag)))
        rows.append(",".join(vals))
    return "\n".join(rows) + "\n"


def diagnostics_doc(d: GroupDiagnostics, labels) -> dict:
    return {
        "discreteness_verdict": d.discreteness_verdict,
        "witness_word": (
            None if d.witness_word is None else word_str(d.witness_word, labels)
        ),
        "witness_reason": d.witness_reason,
        "global_fixed_point": (
            None if d.global_fixed_point is None else point_doc(d.global_fixed_point)
        ),
        "invariant_line": (
            None if d.invariant_line is None else line_doc(d.invariant_line)
        ),
        "gp3": d.gp3,
        "gp4": d.gp4,
    }


def estimate_doc(est: LimitSetEstimate) -> dict:
    return {
        "radius": est.radius,
        "provenance": est.provenance,
        "limit_set": limit_desc_doc(est.description),
    }


def pseudo_map_doc(S) -> dict:
    def side(x):
        if x is None:
            return None
        tag = "line" if isinstance(x, ProjLine) else "point"
        return {"type": tag, "coords": triple_doc(x.vec)}

    return {
        "matrix": matrix_doc(S.matrix),
        "rank": S.rank,
        "kernel": side(S.kernel),
        "image": side(S.image),
    }
