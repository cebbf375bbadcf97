"""Instance types, weighted/unit equation systems and the variable registry.

Every binary variable created by a reduction is registered together with
its provenance, so that a solution of the final unit system can be mapped
back to a witness for the source instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ReductionError",
    "UnboundVariableError",
    "MalformedInputError",
    "DegenerateInstanceError",
    "LiftRefusedError",
    "SizeGuardError",
    "Provenance",
    "VariableRegistry",
    "SubsetSumInstance",
    "Literal",
    "ThreeSatInstance",
    "IlpRow",
    "IlpInstance",
    "WeightedEquation",
    "UnitEquation",
    "UnitSystem",
    "Assignment",
    "evaluate_equation",
    "check_system",
]


class ReductionError(Exception):
    """Base class for every error raised by this package."""


class UnboundVariableError(ReductionError, KeyError):
    def __init__(self, var: int):
        super().__init__(var)
        self.var = var

    def __str__(self) -> str:
        return f"variable {self.var} has no value in the assignment"


class MalformedInputError(ReductionError, ValueError):
    pass


class DegenerateInstanceError(ReductionError):
    """Raised for instances that are answered directly instead of reduced.

    ``feasible`` carries the direct verdict.
    """

    def __init__(self, message: str, feasible: bool):
        super().__init__(message)
        self.feasible = feasible


class LiftRefusedError(ReductionError):
    pass


class SizeGuardError(ReductionError):
    pass


Assignment = Mapping[int, int]


# kind -> number of integer indices it carries
_PROVENANCE_ARITY = {
    "SelectorA": 1,
    "SelectorB": 1,
    "TargetBit": 1,
    "CarryLhs": 2,
    "CarryRhs": 2,
    "PinnedOne": 1,
    "Copy": 2,
    "ClauseSlackLow": 1,
    "ClauseSlackHigh": 1,
    "BoolVar": 1,
    "IlpBit": 2,
}

# kinds that can be made local to one ILP row
_ROW_LOCAL = {"TargetBit", "CarryLhs", "CarryRhs"}


@dataclass(frozen=True)
class Provenance:
    """Why a variable exists.

    ``indices`` holds the integers of the kind: ``CarryLhs(i, j)`` has
    ``indices == (i, j)``, ``Copy(parent, copy_index)`` has
    ``indices == (parent_var_id, copy_index)``. ``row`` is only set for
    target bits and carries that belong to one row of an ILP reduction.
    """

    kind: str
    indices: tuple[int, ...]
    row: int | None = None

    def __post_init__(self) -> None:
        arity = _PROVENANCE_ARITY.get(self.kind)
        if arity is None:
            raise MalformedInputError(f"unknown provenance kind {self.kind!r}")
        if len(self.indices) != arity:
            raise MalformedInputError(
                f"{self.kind} takes {arity} indices, got {self.indices!r}"
            )
        if any(i < 0 for i in self.indices):
            raise MalformedInputError(f"negative index in {self}")
        if self.kind in ("CarryLhs", "CarryRhs") and not self.indices[0] < self.indices[1]:
            raise MalformedInputError(f"carry must go upwards: {self}")
        if self.row is not None and self.kind not in _ROW_LOCAL:
            raise MalformedInputError(f"{self.kind} cannot be row-local")

    def __str__(self) -> str:
        inner = ", ".join(map(str, self.indices))
        suffix = f"@row{self.row}" if self.row is not None else ""
        return f"{self.kind}({inner}){suffix}"


class VariableRegistry:
    """Append-only table of binary variables.

    Ids are handed out densely from 0. Names must be unique.
    """

    def __init__(self) -> None:
        self._provenance: list[Provenance] = []
        self._names: list[str] = []
        self._by_name: dict[str, int] = {}
        self._by_provenance: dict[Provenance, int] = {}

    def add(self, provenance: Provenance, name: str) -> int:
        if name in self._by_name:
            raise MalformedInputError(f"duplicate variable name {name!r}")
        if provenance.kind == "Copy" and provenance.indices[0] >= len(self):
            raise MalformedInputError(f"copy of unregistered variable: {provenance}")
        var = len(self._names)
        self._provenance.append(provenance)
        self._names.append(name)
        self._by_name[name] = var
        self._by_provenance.setdefault(provenance, var)
        return var

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, var: object) -> bool:
        return isinstance(var, int) and 0 <= var < len(self._names)

    def name(self, var: int) -> str:
        return self._names[var]

    def provenance(self, var: int) -> Provenance:
        return self._provenance[var]

    def lookup(self, provenance: Provenance) -> int:
        """Id of the first variable registered with exactly this provenance."""
        return self._by_provenance[provenance]

    def by_name(self, name: str) -> int:
        return self._by_name[name]

    def entries(self) -> list[tuple[int, Provenance, str]]:
        return [(v, p, n) for v, (p, n) in enumerate(zip(self._provenance, self._names))]

    def of_kind(self, kind: str) -> list[int]:
        return [v for v, p in enumerate(self._provenance) if p.kind == kind]

    def copy(self) -> VariableRegistry:
        other = VariableRegistry()
        for _, prov, name in self.entries():
            other.add(prov, name)
        return other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VariableRegistry):
            return NotImplemented
        return self._provenance == other._provenance and self._names == other._names

    def __repr__(self) -> str:
        return f"VariableRegistry({len(self)} variables)"


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class SubsetSumInstance:
    values: tuple[int, ...]
    target: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v == 0 for v in self.values):
            raise MalformedInputError("subset-sum values must be non-zero")


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        if lit == 0:
            raise MalformedInputError("literal 0 is not a variable")
        return cls(abs(lit), lit < 0)

    def __int__(self) -> int:
        return -self.var if self.negated else self.var


@dataclass(frozen=True)
class ThreeSatInstance:
    num_vars: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise MalformedInputError("a 3-SAT instance needs at least one variable")
        clauses = tuple(tuple(c) for c in self.clauses)
        for clause in clauses:
            if len(clause) != 3:
                raise MalformedInputError(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if not 1 <= lit.var <= self.num_vars:
                    raise MalformedInputError(f"literal {int(lit)} out of range 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Sequence[int]]) -> ThreeSatInstance:
        return cls(num_vars, tuple(tuple(Literal.from_int(x) for x in c) for c in clauses))

    def satisfied_by(self, model: Sequence[bool]) -> bool:
        """``model[i - 1]`` is the value of x_i."""
        return all(
            any(model[lit.var - 1] != lit.negated for lit in clause) for clause in self.clauses
        )


@dataclass(frozen=True)
class IlpRow:
    coeffs: tuple[int, ...]
    rhs: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))


@dataclass(frozen=True)
class IlpInstance:
    """Equality rows over non-negative integers x_1..x_N.

    Each unknown is represented with ``bit_width + 1`` binary digits, so
    only solutions with every x_i < 2**(bit_width + 1) are visible.
    """

    num_vars: int
    rows: tuple[IlpRow, ...]
    bit_width: int

    def __post_init__(self) -> None:
        rows = tuple(r if isinstance(r, IlpRow) else IlpRow(*r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.num_vars < 1:
            raise MalformedInputError("an ILP needs at least one unknown")
        if self.bit_width < 0:
            raise MalformedInputError("bit_width must be non-negative")
        for row in rows:
            if len(row.coeffs) != self.num_vars:
                raise MalformedInputError(
                    f"row {row} has {len(row.coeffs)} coefficients, expected {self.num_vars}"
                )

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return all(sum(a * xi for a, xi in zip(r.coeffs, x)) == r.rhs for r in self.rows)


# ---------------------------------------------------------------- equations


@dataclass(frozen=True)
class WeightedEquation:
    """``sum(lhs) = sum(rhs) + rhs_const`` with strictly positive coefficients.

    Terms are ``(coeff, var)`` pairs. Signs are encoded by the side a term
    sits on; a variable may appear on at most one side.
    """

    lhs_terms: tuple[tuple[int, int], ...]
    rhs_terms: tuple[tuple[int, int], ...]
    rhs_const: int = 0

    def __post_init__(self) -> None:
        lhs = tuple((int(c), int(v)) for c, v in self.lhs_terms)
        rhs = tuple((int(c), int(v)) for c, v in self.rhs_terms)
        object.__setattr__(self, "lhs_terms", lhs)
        object.__setattr__(self, "rhs_terms", rhs)
        if any(c <= 0 for c, _ in lhs + rhs):
            raise MalformedInputError(f"non-positive coefficient in {self}")
        if self.rhs_const < 0:
            raise MalformedInputError("rhs_const must be non-negative")
        seen = [v for _, v in lhs + rhs]
        if len(set(seen)) != len(seen):
            raise MalformedInputError(f"variable repeated in {self}")

    @classmethod
    def from_signed(cls, coeffs: Mapping[int, int], constant: int = 0) -> WeightedEquation:
        """Normalize ``sum(coeffs[v] * v) + constant = 0``.

        Zero coefficients are dropped and the sides are oriented so that
        the constant ends up non-negative on the right.
        """
        pos = tuple((c, v) for v, c in coeffs.items() if c > 0)
        neg = tuple((-c, v) for v, c in coeffs.items() if c < 0)
        if constant <= 0:
            return cls(pos, neg, -constant)
        return cls(neg, pos, constant)

    def variables(self) -> list[int]:
        return [v for _, v in self.lhs_terms + self.rhs_terms]

    def max_coefficient(self) -> int:
        return max((c for c, _ in self.lhs_terms + self.rhs_terms), default=0)

    def holds(self, asg: Assignment) -> bool:
        try:
            left = sum(c * asg[v] for c, v in self.lhs_terms)
            right = sum(c * asg[v] for c, v in self.rhs_terms) + self.rhs_const
        except KeyError as exc:
            raise UnboundVariableError(exc.args[0]) from None
        return left == right


@dataclass(frozen=True)
class UnitEquation:
    """``sum(sign * var) + constant = 0`` with signs in {-1, +1}, |constant| <= 1."""

    terms: tuple[tuple[int, int], ...]
    constant: int = 0

    def __post_init__(self) -> None:
        terms = tuple((int(s), int(v)) for s, v in self.terms)
        object.__setattr__(self, "terms", terms)
        if any(s not in (-1, 1) for s, _ in terms):
            raise MalformedInputError(f"term sign outside {{-1, +1}} in {terms}")
        if self.constant not in (-1, 0, 1):
            raise MalformedInputError(f"constant {self.constant} outside {{-1, 0, 1}}")
        vs = [v for _, v in terms]
        if len(set(vs)) != len(vs):
            raise MalformedInputError(f"variable repeated in {terms}")

    def variables(self) -> list[int]:
        return [v for _, v in self.terms]


@dataclass(frozen=True)
class UnitSystem:
    registry: VariableRegistry
    equations: tuple[UnitEquation, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "equations", tuple(self.equations))
        n = len(self.registry)
        for eq in self.equations:
            for v in eq.variables():
                if not 0 <= v < n:
                    raise MalformedInputError(f"equation refers to unregistered variable {v}")

    @property
    def num_vars(self) -> int:
        return len(self.registry)

    @property
    def num_equations(self) -> int:
        return len(self.equations)


def evaluate_equation(eq: UnitEquation, asg: Assignment) -> int:
    """Residual ``sum(sign * value) + constant``; zero means satisfied."""
    total = eq.constant
    for sign, var in eq.terms:
        try:
            total += sign * asg[var]
        except KeyError:
            raise UnboundVariableError(var) from None
    return total


def check_system(sys: UnitSystem, asg: Assignment) -> bool:
    for var in range(sys.num_vars):
        if var not in asg:
            raise UnboundVariableError(var)
    return all(evaluate_equation(eq, asg) == 0 for eq in sys.equations)
