"""JSON encoding of descriptors, elements, tuples, preimages and paths.

Complex matrices serialize as row-major arrays of [re, im] pairs; roots of
unity in descriptors are exact fraction strings "a/b" (multiples of 2*pi).
Floats rely on json's shortest round-trip repr, so identical values produce
byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .errors import MalformedInput
from .fingerprint import Fingerprint
from .homotopy import GroupPath, make_path
from .matgroup import CentralGenerator, GroupDescriptor, GroupElement, make_element
from .variety import CommutingTuple, make_tuple
from .weyl import SigmaPreimage, TorusTuple, make_torus_tuple


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"bad fraction {text!r}") from exc


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(data) -> np.ndarray:
    try:
        return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise MalformedInput("matrices are arrays of [re, im] pairs") from exc


def descriptor_to_json(d: GroupDescriptor) -> dict:
    return {
        "torus_rank": d.torus_rank,
        "su_factors": list(d.su_factors),
        "central_generators": [
            {
                "torus": [_fraction_str(q) for q in g.torus],
                "factors": [_fraction_str(q) for q in g.factors],
            }
            for g in d.central_generators
        ],
    }


def descriptor_from_json(data) -> GroupDescriptor:
    try:
        gens = tuple(
            CentralGenerator(
                tuple(_parse_fraction(q) for q in g.get("torus", [])),
                tuple(_parse_fraction(q) for q in g.get("factors", [])),
            )
            for g in data.get("central_generators", [])
        )
        return GroupDescriptor(int(data["torus_rank"]), tuple(data["su_factors"]), gens)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad descriptor: {exc}") from exc


def element_to_json(x: GroupElement) -> dict:
    return {
        "torus": [float(t) for t in x.torus_part],
        "factors": [matrix_to_json(f) for f in x.factor_parts],
    }


def element_from_json(data, descriptor: GroupDescriptor) -> GroupElement:
    try:
        return make_element(
            descriptor,
            np.array(data.get("torus", []), dtype=float),
            [matrix_from_json(f) for f in data.get("factors", [])],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad group element: {exc}") from exc


def tuple_to_json(t: CommutingTuple) -> dict:
    return {
        "descriptor": descriptor_to_json(t.descriptor),
        "k": t.k,
        "elements": [element_to_json(x) for x in t.elements],
        "residual": float(t.residual),
    }


def tuple_from_json(data) -> CommutingTuple:
    try:
        desc = descriptor_from_json(data["descriptor"])
        elements = [element_from_json(e, desc) for e in data["elements"]]
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad tuple: {exc}") from exc
    return make_tuple(desc, elements)


def torus_tuple_to_json(tt: TorusTuple) -> dict:
    return {
        "factor_angles": [[[float(a) for a in row] for row in block] for block in tt.factor_angles],
        "torus_angles": [[float(a) for a in row] for row in tt.torus_angles],
    }


def preimage_to_json(pre: SigmaPreimage) -> dict:
    out = {"descriptor": descriptor_to_json(pre.torus.descriptor)}
    out["conjugator"] = element_to_json(pre.conjugator)
    out.update(torus_tuple_to_json(pre.torus))
    return out


def preimage_from_json(data) -> SigmaPreimage:
    try:
        desc = descriptor_from_json(data["descriptor"])
        conj = element_from_json(data["conjugator"], desc)
        rows = data["torus_angles"]
        blocks = [np.array(block, dtype=float) for block in data["factor_angles"]]
        k = len(rows) if rows else (blocks[0].shape[0] if blocks else 0)
        torus = make_torus_tuple(
            desc,
            blocks,
            np.array(rows, dtype=float).reshape(k, desc.torus_rank),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad preimage: {exc}") from exc
    return SigmaPreimage(conj, torus)


def path_to_json(path: GroupPath) -> dict:
    return {
        "descriptor": descriptor_to_json(path.descriptor),
        "closed": bool(path.closed),
        "elements": [element_to_json(v) for v in path.elements],
    }


def path_from_json(data) -> GroupPath:
    try:
        desc = descriptor_from_json(data["descriptor"])
        elements = [element_from_json(e, desc) for e in data["elements"]]
        closed = bool(data.get("closed", False))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad path: {exc}") from exc
    return make_path(desc, elements, closed)


def fingerprint_to_json(fp: Fingerprint) -> dict:
    return {
        "p": fp.p,
        "k": fp.k,
        "entries": [[i, j, mu] for i, j, mu in fp.nonzero_pairs()],
    }


def fingerprint_from_json(data) -> Fingerprint:
    try:
        return Fingerprint.from_pairs(
            int(data["p"]), int(data["k"]), [(i, j, mu) for i, j, mu in data.get("entries", [])]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad fingerprint: {exc}") from exc


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read JSON from {path}: {exc}") from exc
