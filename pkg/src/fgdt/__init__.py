"""Finite geometry and design toolkit for flag-transitive 2-designs with PSL(2,q) socle."""

from .field import FieldCtx, build_field, field_of_order, prime_power, shifted_class_count, square_classes
from .plane import PlaneCtx, build_plane, hyperoval, internal_points, pencil_conic
from .design import IncidenceStructure, certify_design, exhaustive_block_search, table1_construct, witt_bose_shrikhande
from .verify import VerificationReport, replay, verify_all

__version__ = "0.1.0"

__all__ = [
    "FieldCtx",
    "build_field",
    "field_of_order",
    "prime_power",
    "shifted_class_count",
    "square_classes",
    "PlaneCtx",
    "build_plane",
    "hyperoval",
    "internal_points",
    "pencil_conic",
    "IncidenceStructure",
    "certify_design",
    "exhaustive_block_search",
    "table1_construct",
    "witt_bose_shrikhande",
    "VerificationReport",
    "replay",
    "verify_all",
]
