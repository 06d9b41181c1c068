"""Buildings, W-groupoids, and their quotients, covers, and Bruhat data.

Everything here is exact and finite: structures are explicit tables,
axioms (WG1..WG3, weakness, strictness, WD1..WD3, (B)/(B')/(B''))
are checked exhaustively, and failures come with witnesses.
"""

from wgroupoid.coxeter import (
    CapacityError,
    CoxeterError,
    CoxeterMatrix,
    CoxeterSystem,
    Element,
    create_system,
)

__all__ = [
    "CapacityError",
    "CoxeterError",
    "CoxeterMatrix",
    "CoxeterSystem",
    "Element",
    "create_system",
]
