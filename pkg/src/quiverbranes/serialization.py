"""JSON encoding: a complex entry is [re, im], a matrix is a list of rows."""
from __future__ import annotations

import json

import numpy as np

from .quiver import (Arrow, DimensionData, FrameElement, GaugeElement, Quiver,
                     Representation, ShapeError, validate_representation)


class InputError(ValueError):
    pass


def _clean(x):
    x = float(x)
    return 0.0 if x == 0 else x


def encode_matrix(M):
    M = np.asarray(M, dtype=complex)
    return [[[_clean(z.real), _clean(z.imag)] for z in row] for row in M]


def decode_matrix(data, shape=None):
    """Accepts rows of [re, im] pairs; plain real numbers are also tolerated."""
    if not isinstance(data, list):
        raise InputError("matrix must be a list of rows")
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise InputError("matrix rows must be lists")
        vals = []
        for z in row:
            if isinstance(z, list):
                if len(z) != 2:
                    raise InputError("complex entries must be [re, im]")
                vals.append(complex(float(z[0]), float(z[1])))
            elif isinstance(z, (int, float)):
                vals.append(complex(z))
            else:
                raise InputError(f"bad matrix entry {z!r}")
        rows.append(vals)
    if rows and len({len(r) for r in rows}) != 1:
        raise InputError("ragged matrix")
    M = np.array(rows, dtype=complex)
    if M.size == 0:
        M = M.reshape(shape if shape is not None else (len(rows), 0))
    return M


def encode_quiver(q: Quiver):
    return {"vertices": list(q.vertices),
            "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in q.arrows]}


def decode_quiver(data) -> Quiver:
    try:
        arrows = [Arrow(str(a["id"]), str(a["tail"]), str(a["head"])) for a in data["arrows"]]
        return Quiver(tuple(str(v) for v in data["vertices"]), tuple(arrows))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed quiver: {exc}") from exc


def encode_representation(X: Representation):
    return {
        "quiver": encode_quiver(X.quiver),
        "dims": {"V": dict(X.dims.V), "W": dict(X.dims.W)},
        "rep": {c: {k: encode_matrix(M) for k, M in getattr(X, c).items()} for c in "ABIJ"},
    }


def decode_representation(data) -> Representation:
    if not isinstance(data, dict) or not {"quiver", "dims", "rep"} <= set(data):
        raise InputError("expected keys 'quiver', 'dims', 'rep'")
    q = decode_quiver(data["quiver"])
    try:
        d = DimensionData(data["dims"]["V"], data["dims"]["W"])
        d.check_against(q)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed dims: {exc}") from exc
    from .quiver import expected_shapes
    shapes = expected_shapes(q, d)
    parts = {}
    for c in "ABIJ":
        blocks = data["rep"].get(c, {})
        if not isinstance(blocks, dict):
            raise InputError(f"rep.{c} must be an object")
        parts[c] = {str(k): decode_matrix(v, shapes.get((c, str(k)))) for k, v in blocks.items()}
    X = Representation(q, d, parts["A"], parts["B"], parts["I"], parts["J"])
    bad = validate_representation(q, d, X)
    if bad:
        raise InputError("; ".join(bad))
    return X


def encode_group(el):
    return {k: encode_matrix(M) for k, M in el.blocks.items()}


def decode_gauge(data, d: DimensionData | None = None):
    blocks = {str(k): decode_matrix(v, (d.V[str(k)],) * 2 if d else None) for k, v in data.items()}
    return GaugeElement(blocks)


def decode_frame(data, d: DimensionData | None = None):
    blocks = {str(k): decode_matrix(v, (d.W[str(k)],) * 2 if d else None) for k, v in data.items()}
    return FrameElement(blocks)


def encode_spec(spec):
    return spec.to_json()


def decode_spec(data, d: DimensionData | None = None):
    from .involutions import (DeltaAssignment, GammaAssignment, InvolutionSpec,
                              b, c, d as d_letter, e)
    if not isinstance(data, dict) or "word" not in data:
        raise InputError("spec needs a 'word' list")
    word = []
    try:
        for item in data["word"]:
            name = item["letter"]
            if name == "b":
                word.append(b)
            elif name == "e":
                word.append(e)
            elif name == "c":
                gm = item["gamma"]
                word.append(c(GammaAssignment(gm.get("arrows", {}), gm.get("vertices", {}))))
            elif name == "d":
                dl = item["delta"]
                loops = {k: (v["t"], complex(*v.get("z", [0.0, 0.0]))) for k, v in dl.get("loops", {}).items()}
                word.append(d_letter(DeltaAssignment(loops, dl.get("arrows", {}), dl.get("vertices", {}))))
            else:
                raise InputError(f"unknown letter {name!r}")
        g = decode_gauge(data["g"], d) if "g" in data else None
        h = decode_frame(data["h"], d) if "h" in data else None
        return InvolutionSpec(word, g, h)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed spec: {exc}") from exc


def encode_moments(mv):
    return {name: {v: encode_matrix(M) for v, M in vals.items()} for name, vals in mv.as_dict().items()}


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def dumps(obj, pretty=False):
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


__all__ = ["InputError", "ShapeError", "encode_matrix", "decode_matrix", "encode_representation",
           "decode_representation", "encode_spec", "decode_spec", "encode_group", "decode_gauge",
           "decode_frame", "encode_moments", "load_json", "dumps"]
