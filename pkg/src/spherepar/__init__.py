"""Explicit orthonormal parallelizations of products of spheres S^m x S^n
(n odd), with exact and numeric verification of their bracket tables and
structure equations."""

from .frames import (
    chain_isomorphism,
    change_of_basis,
    coframe,
    frame_B_s1,
    frame_B_s3,
    frame_P,
    frame_product,
)
from .geometry import (
    AmbientVector,
    Frame,
    FrameKind,
    ProductPoint,
    SpherePoint,
    gram,
    meridian,
    normal,
    quaternion_fields,
    sample_point,
    torsion,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientVector",
    "Frame",
    "FrameKind",
    "ProductPoint",
    "SpherePoint",
    "chain_isomorphism",
    "change_of_basis",
    "coframe",
    "frame_B_s1",
    "frame_B_s3",
    "frame_P",
    "frame_product",
    "gram",
    "meridian",
    "normal",
    "quaternion_fields",
    "sample_point",
    "torsion",
]
