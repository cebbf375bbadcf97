"""Equality-form ILP feasibility as unit linear equations.

Every unknown is written as ``x_i = sum_j c_{i,j} * 2**j`` over
``j = 0..P``. Substituting turns each row into one weighted equation over
the shared bits, which is then column-decomposed exactly like a
subset-sum equation with its own row-local target bits and carries.

The reduction is complete only for solutions inside the box
``0 <= x_i < 2**(P+1)``.
"""

from __future__ import annotations

import warnings
from typing import Sequence

from .core import (
    Assignment,
    IlpInstance,
    IlpRow,
    LiftRefusedError,
    Provenance,
    UnitSystem,
    VariableRegistry,
    WeightedEquation,
    check_system,
)
from .expansion import expand_to_unit
from .subset_sum import build_s2, params_for

__all__ = [
    "DEFAULT_MAX_BITS",
    "BoxBoundWarning",
    "bit_registry",
    "binarize_ilp",
    "row_params",
    "ilp_s2_system",
    "reduce_ilp",
    "lift_ilp",
    "suggest_bit_width",
]

DEFAULT_MAX_BITS = 16


class BoxBoundWarning(UserWarning):
    pass


def bit_registry(inst: IlpInstance) -> VariableRegistry:
    reg = VariableRegistry()
    for i in range(1, inst.num_vars + 1):
        for j in range(inst.bit_width + 1):
            reg.add(Provenance("IlpBit", (i, j)), f"c_{i}_{j}")
    return reg


def binarize_ilp(
    inst: IlpInstance, registry: VariableRegistry | None = None
) -> list[WeightedEquation]:
    reg = registry if registry is not None else bit_registry(inst)
    eqs = []
    for row in inst.rows:
        coeffs = {}
        for i, a in enumerate(row.coeffs, start=1):
            for j in range(inst.bit_width + 1):
                coeffs[reg.lookup(Provenance("IlpBit", (i, j)))] = a << j
        eqs.append(WeightedEquation.from_signed(coeffs, -row.rhs))
    return eqs


def row_params(inst: IlpInstance, eq: WeightedEquation):
    """Column-decomposition parameters for one binarized row."""
    k = max(eq.max_coefficient(), eq.rhs_const)
    return params_for(k, inst.num_vars * (inst.bit_width + 1) + 1)


def ilp_s2_system(inst: IlpInstance) -> tuple[list[WeightedEquation], VariableRegistry, list]:
    reg = bit_registry(inst)
    rows = binarize_ilp(inst, reg)
    eqs: list[WeightedEquation] = []
    params = []
    for r, row_eq in enumerate(rows, start=1):
        p = row_params(inst, row_eq)
        params.append(p)
        eqs.extend(build_s2(row_eq, p, reg, row=r))
    return eqs, reg, params


def reduce_ilp(inst: IlpInstance) -> UnitSystem:
    eqs, reg, params = ilp_s2_system(inst)
    meta = {
        "kind": "ilp",
        "source": {
            "num_vars": inst.num_vars,
            "bits": inst.bit_width,
            "rows": [{"coeffs": list(r.coeffs), "rhs": r.rhs} for r in inst.rows],
        },
        "bits": inst.bit_width,
        "box_upper": (1 << (inst.bit_width + 1)) - 1,
        "row_theta": [p.theta for p in params],
        "row_mu": [p.mu for p in params],
        "s2_vars": len(reg),
        "s2_eqs": len(eqs),
    }
    return expand_to_unit(eqs, reg, meta)


def lift_ilp(inst: IlpInstance, sys: UnitSystem, asg: Assignment) -> list[int]:
    if not check_system(sys, asg):
        raise LiftRefusedError("assignment does not satisfy the unit system")
    reg = sys.registry
    x = [
        sum(asg[reg.lookup(Provenance("IlpBit", (i, j)))] << j for j in range(inst.bit_width + 1))
        for i in range(1, inst.num_vars + 1)
    ]
    if not inst.satisfied_by(x):
        raise LiftRefusedError(f"lifted vector {x} violates a row")
    return x


def suggest_bit_width(
    num_vars: int, rows: Sequence[IlpRow], max_bits: int = DEFAULT_MAX_BITS
) -> int:
    """Heuristic P for instances that do not specify one.

    Nothing guarantees that a solution exists inside the resulting box, so
    a :class:`BoxBoundWarning` is always emitted.
    """
    rows = [r if isinstance(r, IlpRow) else IlpRow(*r) for r in rows]
    magnitude = max([1] + [abs(a) for r in rows for a in r.coeffs] + [abs(r.rhs) for r in rows])
    p = min((num_vars * magnitude << len(rows)).bit_length(), max_bits)
    warnings.warn(
        f"using bit width P={p}: only solutions with every x_i <= {(1 << (p + 1)) - 1} "
        "are searched",
        BoxBoundWarning,
        stacklevel=2,
    )
    return p
