"""Named built-in fixtures addressable from the CLI and the service."""

from __future__ import annotations

import math
import re
from fractions import Fraction

from . import homology, lattice, multilinear, symplectic
from .errors import UnknownBuiltinError

_GENUS = re.compile(r"^genus(\d+)$")
_NONOR = re.compile(r"^nonorientable(\d+)$")
_SYMPL = re.compile(r"^symplectic(\d+)$")


def complex_names() -> list[str]:
    return ["torus", "projective_plane", "klein_bottle", "sphere", "genus<g>", "nonorientable<k>"]


def get_complex(name: str) -> homology.SimplicialComplex:
    if name == "torus":
        return homology.torus_7v()
    if name == "projective_plane":
        return homology.projective_plane_6v()
    if name == "klein_bottle":
        return homology.nonorientable_surface(2)
    if name == "sphere":
        return homology.sphere_tetrahedron()
    m = _GENUS.match(name)
    if m:
        return homology.orientable_surface(int(m.group(1)))
    m = _NONOR.match(name)
    if m:
        return homology.nonorientable_surface(int(m.group(1)))
    raise UnknownBuiltinError(f"unknown builtin complex {name!r}")


def tensor_names() -> list[str]:
    return ["rp3_connected_sum"]


def get_tensor(name: str) -> multilinear.Gf2Tensor:
    if name == "rp3_connected_sum":
        # Cup form of the double projective 3-space: only the two
        # pure-diagonal coefficients are nonzero.
        return multilinear.Gf2Tensor.from_map(3, 2, [(1, 1, 1), (2, 2, 2)])
    raise UnknownBuiltinError(f"unknown builtin tensor {name!r}")


def body_names() -> list[str]:
    return ["hexagonal_torus", "hexagonal_torus_rational", "euclidean<n>", "infball<n>"]


def get_body(name: str) -> lattice.NormBody:
    if name == "hexagonal_torus":
        # Unit-area normalization of the hexagonal metric.
        c = 2.0 / math.sqrt(3.0)
        return lattice.Ellipsoid(2, ((c, c / 2.0), (c / 2.0, c)))
    if name == "hexagonal_torus_rational":
        half = Fraction(1, 2)
        return lattice.Ellipsoid(2, ((Fraction(1), half), (half, Fraction(1))))
    m = re.match(r"^euclidean(\d+)$", name)
    if m:
        n = int(m.group(1))
        return lattice.PBall(n, 2.0, (1.0,) * n)
    m = re.match(r"^infball(\d+)$", name)
    if m:
        n = int(m.group(1))
        return lattice.PBall(n, math.inf, (1.0,) * n)
    raise UnknownBuiltinError(f"unknown builtin body {name!r}")


def form_names() -> list[str]:
    return ["symplectic<2n>"]


def get_form(name: str) -> symplectic.AlternatingForm:
    m = _SYMPL.match(name)
    if m:
        dim = int(m.group(1))
        if dim % 2 != 0:
            raise UnknownBuiltinError("symplectic builtin needs an even dimension")
        return symplectic.standard_symplectic_form(dim // 2)
    raise UnknownBuiltinError(f"unknown builtin form {name!r}")


def all_builtins() -> dict[str, list[str]]:
    return {
        "complexes": complex_names(),
        "tensors": tensor_names(),
        "bodies": body_names(),
        "forms": form_names(),
    }
