"""3-SAT to unit linear equations.

Each clause ``l1 or l2 or l3`` becomes one equation: a positive literal
x_i contributes ``b_i``, a negated one contributes ``1 - b_i``, and the
clause sum must equal ``1 + t_low + 2 * t_high``, which ranges over 1..3
exactly like the number of true literals of a satisfied clause.
"""

from __future__ import annotations

from typing import Iterable, TextIO

from .core import (
    Assignment,
    LiftRefusedError,
    MalformedInputError,
    Provenance,
    ThreeSatInstance,
    UnitSystem,
    VariableRegistry,
    WeightedEquation,
    check_system,
)
from .expansion import expand_to_unit

__all__ = [
    "DimacsError",
    "ClauseArityError",
    "LiteralRangeError",
    "parse_dimacs",
    "write_dimacs",
    "clause_registry",
    "build_clause_equations",
    "reduce_3sat",
    "lift_3sat",
]


class DimacsError(MalformedInputError):
    """Malformed DIMACS text."""


class ClauseArityError(DimacsError):
    pass


class LiteralRangeError(DimacsError):
    pass


def parse_dimacs(text: str | TextIO | Iterable[str]) -> ThreeSatInstance:
    """Parse DIMACS CNF with exactly three literals per clause.

    Clauses may span lines; ``%`` ends the formula (SATLIB convention).
    """
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = list(text)

    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed problem line {line!r}") from None
            if header[0] < 1 or header[1] < 0:
                raise DimacsError(f"line {lineno}: bad counts in {line!r}")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before problem line")
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token in {line!r}") from None
        for lit in lits:
            if lit == 0:
                _check_clause(current, header[0])
                clauses.append(current)
                current = []
            else:
                current.append(lit)

    if header is None:
        raise DimacsError("missing problem line 'p cnf N K'")
    if current:
        raise DimacsError(f"unterminated clause {current}")
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return ThreeSatInstance.from_ints(header[0], clauses)


def _check_clause(lits: list[int], num_vars: int) -> None:
    if len(lits) != 3:
        raise ClauseArityError(f"clause {lits} has {len(lits)} literals, expected 3")
    for lit in lits:
        if abs(lit) > num_vars:
            raise LiteralRangeError(f"literal {lit} out of range 1..{num_vars}")


def write_dimacs(inst: ThreeSatInstance) -> str:
    lines = [f"p cnf {inst.num_vars} {len(inst.clauses)}"]
    lines += [" ".join(str(int(lit)) for lit in clause) + " 0" for clause in inst.clauses]
    return "\n".join(lines) + "\n"


def clause_registry(inst: ThreeSatInstance) -> VariableRegistry:
    """b_1..b_N followed by the slack pair t_{2k-1}, t_{2k} of every clause."""
    reg = VariableRegistry()
    for i in range(1, inst.num_vars + 1):
        reg.add(Provenance("BoolVar", (i,)), f"b{i}")
    for k in range(1, len(inst.clauses) + 1):
        reg.add(Provenance("ClauseSlackLow", (k,)), f"t{2 * k - 1}")
        reg.add(Provenance("ClauseSlackHigh", (k,)), f"t{2 * k}")
    return reg


def build_clause_equations(
    inst: ThreeSatInstance, registry: VariableRegistry | None = None
) -> list[WeightedEquation]:
    reg = registry if registry is not None else clause_registry(inst)
    eqs = []
    for k, clause in enumerate(inst.clauses, start=1):
        # clause_sum - (1 + t_low + 2 t_high) = 0, with 1 - b_i for negations
        coeffs: dict[int, int] = {}
        constant = -1
        for lit in clause:
            b = reg.lookup(Provenance("BoolVar", (lit.var,)))
            if lit.negated:
                constant += 1
                coeffs[b] = coeffs.get(b, 0) - 1
            else:
                coeffs[b] = coeffs.get(b, 0) + 1
        coeffs[reg.lookup(Provenance("ClauseSlackLow", (k,)))] = -1
        coeffs[reg.lookup(Provenance("ClauseSlackHigh", (k,)))] = -2
        eqs.append(WeightedEquation.from_signed(coeffs, constant))
    return eqs


def reduce_3sat(inst: ThreeSatInstance) -> UnitSystem:
    reg = clause_registry(inst)
    eqs = build_clause_equations(inst, reg)
    meta = {
        "kind": "3sat",
        "source": {
            "num_vars": inst.num_vars,
            "clauses": [[int(lit) for lit in c] for c in inst.clauses],
        },
        "num_bool_vars": inst.num_vars,
        "num_clauses": len(inst.clauses),
    }
    return expand_to_unit(eqs, reg, meta)


def lift_3sat(inst: ThreeSatInstance, sys: UnitSystem, asg: Assignment) -> list[bool]:
    """Truth values of x_1..x_N read from the b_i variables."""
    if not check_system(sys, asg):
        raise LiftRefusedError("assignment does not satisfy the unit system")
    model = [
        bool(asg[sys.registry.lookup(Provenance("BoolVar", (i,)))])
        for i in range(1, inst.num_vars + 1)
    ]
    if not inst.satisfied_by(model):
        raise LiftRefusedError("lifted model violates a clause")
    return model

