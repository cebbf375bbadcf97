"""Rewrite weighted equations into unit equations.

A term ``w * v`` with ``w >= 2`` becomes ``v_1 + ... + v_w`` where every
copy is tied to its parent by ``v_m - v = 0``. A constant ``k >= 2``
becomes ``c_1 + ... + c_k`` with every ``c_m`` pinned by ``c_m - 1 = 0``.
The expansion is unary on purpose: one new variable and one new equation
per unit of magnitude.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import (
    MalformedInputError,
    Provenance,
    UnitEquation,
    UnitSystem,
    VariableRegistry,
    WeightedEquation,
)

__all__ = ["expand_to_unit", "expansion_size"]


def expansion_size(eqs: Iterable[WeightedEquation]) -> tuple[int, int]:
    """Number of (variables, equations) that :func:`expand_to_unit` adds."""
    added = 0
    for eq in eqs:
        for coeff, _ in eq.lhs_terms + eq.rhs_terms:
            if coeff >= 2:
                added += coeff
        if eq.rhs_const >= 2:
            added += eq.rhs_const
    return added, added


def expand_to_unit(
    eqs: Sequence[WeightedEquation],
    registry: VariableRegistry,
    meta: dict | None = None,
) -> UnitSystem:
    """Expand ``eqs`` into a :class:`UnitSystem`.

    ``registry`` is not modified; the result owns an extended copy. For
    each input equation the output holds, in order, the pin equations of
    its constant, the rewritten main equation and the copy ties.
    """
    reg = registry.copy()
    copies_made: dict[int, int] = {}
    pins_made = 0
    out: list[UnitEquation] = []

    for eq in eqs:
        if not isinstance(eq, WeightedEquation):
            raise MalformedInputError(f"expected WeightedEquation, got {type(eq).__name__}")
        for coeff, var in eq.lhs_terms + eq.rhs_terms:
            if coeff <= 0:
                raise MalformedInputError(f"non-positive coefficient {coeff}")
            if var not in reg:
                raise MalformedInputError(f"variable {var} is not registered")

        pins: list[int] = []
        if eq.rhs_const >= 2:
            for _ in range(eq.rhs_const):
                pins_made += 1
                pins.append(reg.add(Provenance("PinnedOne", (pins_made,)), f"c{pins_made}"))
            constant = 0
        else:
            constant = -eq.rhs_const

        ties: list[UnitEquation] = []

        def unit_terms(terms: Sequence[tuple[int, int]], sign: int) -> list[tuple[int, int]]:
            result = []
            for coeff, var in terms:
                if coeff == 1:
                    result.append((sign, var))
                    continue
                parent = reg.name(var)
                for _ in range(coeff):
                    index = copies_made.get(var, 0) + 1
                    copies_made[var] = index
                    copy = reg.add(Provenance("Copy", (var, index)), f"{parent}_{index}")
                    result.append((sign, copy))
                    ties.append(UnitEquation(((1, copy), (-1, var)), 0))
            return result

        main = unit_terms(eq.lhs_terms, 1) + unit_terms(eq.rhs_terms, -1)
        main += [(-1, c) for c in pins]

        out.extend(UnitEquation(((1, c),), -1) for c in pins)
        out.append(UnitEquation(tuple(main), constant))
        out.extend(ties)

    meta = dict(meta or {})
    meta["expansion_predicted"] = expansion_size(eqs)[0]
    meta["expansion_added"] = len(reg) - len(registry)
    return UnitSystem(reg, tuple(out), meta)
