"""(n,k) erasure codes with bandwidth-optimal node repair."""

from ._core import (
    AlignmentInstance,
    Cluster,
    CodeSpec,
    Error,
    Matrix,
    PrimeField,
    decode,
    det,
    encode,
    kron,
    matpow,
    plan_repair,
    rank,
    repair_from_nodes,
    repair_matrix,
    solve_problem1,
    solve_problem2,
    verify_instance,
    verify_mds,
    verify_repair_conditions,
)

__all__ = [
    "AlignmentInstance",
    "Cluster",
    "CodeSpec",
    "Error",
    "Matrix",
    "PrimeField",
    "decode",
    "det",
    "encode",
    "kron",
    "matpow",
    "plan_repair",
    "rank",
    "repair_from_nodes",
    "repair_matrix",
    "solve_problem1",
    "solve_problem2",
    "verify_instance",
    "verify_mds",
    "verify_repair_conditions",
]

__version__ = "1.0.0"
