"""Repair-by-transfer regenerating codes for distributed storage."""

from .errors import RbtError, UsageError
from .gf import Field, FieldElement, count_ops, get_field
from .kernels import BACKEND
from .mds import MdsCodeSpec, mds_decode_erasures, mds_encode, mds_generator_columns
from .rbt import CodeParams, NodeChunk, RbtCode, edge_id, stripe_join, stripe_split

__all__ = [
    "BACKEND",
    "CodeParams",
    "Field",
    "FieldElement",
    "MdsCodeSpec",
    "NodeChunk",
    "RbtCode",
    "RbtError",
    "UsageError",
    "count_ops",
    "edge_id",
    "get_field",
    "mds_decode_erasures",
    "mds_encode",
    "mds_generator_columns",
    "stripe_join",
    "stripe_split",
]
