"""JSON schemas for matrices, complexes, cochains, and foliation specs.

Conventions: matrices are row-major nested arrays; exact rationals are
"p/q" strings, floats plain numbers.  Cochain values are keyed by oriented
edges as "u-v".  Developing-map samples are keyed by covering coordinates
"x,y".  Torus complexes may be given as {"torus": {"d": 2, "m": 8}} instead
of explicit vertex/edge/triangle lists.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Union

from .errors import InputError
from .linalg import FMatrix, RMatrix
from .complexes import LieCochain1, ScalarCochain1, SimplicialComplex, torus_complex
from .foliation import (
    DevelopingMap,
    HolonomyRep,
    LieFoliationSpec,
    rk_dim,
)
from .groups import GAElement


def scalar_to_json(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return float(v)


def scalar_from_json(v) -> Union[float, Fraction]:
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational literal {v!r}: {e}") from e
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"bad scalar {v!r}")
    return Fraction(v) if isinstance(v, int) else float(v)


def matrix_to_json(m):
    if isinstance(m, RMatrix):
        return [[scalar_to_json(m[i, j]) for j in range(m.n)] for i in range(m.n)]
    return [[m[i, j] for j in range(m.n)] for i in range(m.n)]


def matrix_from_json(rows) -> Union[RMatrix, FMatrix]:
    if not isinstance(rows, list) or not rows:
        raise InputError("matrix must be a non-empty nested array")
    exact = any(isinstance(x, str) for row in rows for x in row)
    try:
        if exact:
            return RMatrix([[scalar_from_json(x) for x in row] for row in rows])
        return FMatrix([[float(x) for x in row] for row in rows])
    except (TypeError, ValueError) as e:
        raise InputError(f"bad matrix: {e}") from e


def load_complex(obj) -> SimplicialComplex:
    if "torus" in obj:
        t = obj["torus"]
        return torus_complex(int(t["d"]), int(t["m"]))
    try:
        return SimplicialComplex(
            int(obj["vertices"]),
            [tuple(e) for e in obj["edges"]],
            [tuple(t) for t in obj.get("triangles", [])],
            [tuple(t) for t in obj.get("tetrahedra", [])],
        )
    except KeyError as e:
        raise InputError(f"complex description missing field {e}") from e


def _edge_key_parse(key: str):
    try:
        u, v = key.split("-")
        return int(u), int(v)
    except ValueError as e:
        raise InputError(f"bad edge key {key!r}, expected 'u-v'") from e


def scalar_cochain_from_json(complex: SimplicialComplex, obj: Dict) -> ScalarCochain1:
    return ScalarCochain1(
        complex, {_edge_key_parse(k): scalar_from_json(v) for k, v in obj.items()}
    )


def scalar_cochain_to_json(w: ScalarCochain1) -> Dict:
    return {f"{u}-{v}": scalar_to_json(val) for (u, v), val in sorted(w.values.items())}


def lie_cochain_from_json(complex: SimplicialComplex, obj: Dict) -> LieCochain1:
    return LieCochain1(
        complex, {_edge_key_parse(k): matrix_from_json(v) for k, v in obj.items()}
    )


def group_element_from_json(tag: str, obj):
    if tag == "GA":
        a, b = obj
        return GAElement(float(a), float(b))
    if tag in ("SL2", "SLn"):
        m = matrix_from_json(obj)
        return m.to_float() if isinstance(m, RMatrix) else m
    return tuple(float(x) for x in obj)


def load_foliation_spec(obj) -> LieFoliationSpec:
    """Spec bundle: complex, group tag, cochain(s), holonomy, developing."""
    try:
        tag = obj["group"]
        complex = load_complex(obj)
        holonomy = HolonomyRep(
            tag, [group_element_from_json(tag, h) for h in obj["holonomy"]]
        )
        samples = {}
        for key, val in obj["developing"].items():
            coords = tuple(int(c) for c in key.split(","))
            samples[coords] = group_element_from_json(tag, val)
        developing = DevelopingMap(tag, samples)
        if tag.startswith("R"):
            cochains = [
                scalar_cochain_from_json(complex, c) for c in obj["scalar_cochains"]
            ]
            if len(cochains) != rk_dim(tag):
                raise InputError(
                    f"{tag} spec needs {rk_dim(tag)} scalar cochains, "
                    f"got {len(cochains)}"
                )
            return LieFoliationSpec(
                complex=complex,
                tag=tag,
                holonomy=holonomy,
                developing=developing,
                scalar_cochains=cochains,
            )
        cochain = lie_cochain_from_json(complex, obj["cochain"])
        return LieFoliationSpec(
            complex=complex,
            tag=tag,
            holonomy=holonomy,
            developing=developing,
            cochain=cochain,
            n=cochain.n,
        )
    except KeyError as e:
        raise InputError(f"foliation spec missing field {e}") from e


def dump_foliation_spec(spec: LieFoliationSpec) -> Dict:
    cov = spec.complex.covering
    if cov is None:
        raise InputError("only torus-backed specs are serializable")
    out = {
        "torus": {"d": cov.d, "m": cov.m},
        "group": spec.tag,
        "holonomy": [_element_to_json(spec.tag, h) for h in spec.holonomy.images],
        "developing": {
            ",".join(str(c) for c in z): _element_to_json(spec.tag, g)
            for z, g in sorted(spec.developing.samples.items())
        },
    }
    if spec.is_abelian():
        out["scalar_cochains"] = [
            scalar_cochain_to_json(w) for w in spec.scalar_cochains
        ]
    else:
        out["cochain"] = {
            f"{u}-{v}": matrix_to_json(val)
            for (u, v), val in sorted(spec.cochain.values.items())
        }
    return out


def _element_to_json(tag: str, g):
    if tag == "GA":
        return [g.a, g.b]
    if tag in ("SL2", "SLn"):
        return matrix_to_json(g)
    return list(g)
