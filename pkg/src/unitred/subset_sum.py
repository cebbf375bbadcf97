"""SUBSET-SUM to unit linear equations over binary variables.

The pipeline has three stages:

1. one weighted equation ``sum(a_p * y_p) = sum(b_q * z_q) + |beta|`` after
   splitting the values by sign relative to the target;
2. a column-wise binary addition of each side with explicit carry bits,
   where both sides must produce the same target bits ``t_0..t_theta``;
3. unary expansion of the remaining power-of-two coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DegenerateInstanceError,
    Provenance,
    SubsetSumInstance,
    UnitSystem,
    VariableRegistry,
    WeightedEquation,
)
from .expansion import expand_to_unit

__all__ = [
    "SignSplit",
    "DecompositionParams",
    "split_by_sign",
    "bit",
    "build_s1",
    "params_for",
    "decomposition_params",
    "build_s2",
    "reduce_subset_sum",
    "s2_system",
]


@dataclass(frozen=True)
class SignSplit:
    """Magnitudes on the target's side (``y``) and the opposite side (``z``).

    ``y_source`` / ``z_source`` give the position in the original value
    list of every entry, so selections can be mapped back.
    """

    y: tuple[int, ...]
    z: tuple[int, ...]
    beta_abs: int
    y_source: tuple[int, ...] = ()
    z_source: tuple[int, ...] = ()


@dataclass(frozen=True)
class DecompositionParams:
    theta: int  # highest target bit index
    mu: int  # a carry from column i reaches at most column i + mu


def split_by_sign(inst: SubsetSumInstance) -> SignSplit:
    # beta == 0 behaves like a positive target
    same_positive = inst.target >= 0
    y, z, ys, zs = [], [], [], []
    for pos, v in enumerate(inst.values):
        if (v > 0) == same_positive:
            y.append(abs(v))
            ys.append(pos)
        else:
            z.append(abs(v))
            zs.append(pos)
    return SignSplit(tuple(y), tuple(z), abs(inst.target), tuple(ys), tuple(zs))


def bit(x: int, i: int) -> int:
    """The i-th binary digit of ``x`` (index 0 is least significant)."""
    return (x >> i) & 1


def build_s1(split: SignSplit, registry: VariableRegistry) -> WeightedEquation:
    lhs = []
    for p, y in enumerate(split.y, start=1):
        lhs.append((y, registry.add(Provenance("SelectorA", (p,)), f"a{p}")))
    rhs = []
    for q, z in enumerate(split.z, start=1):
        rhs.append((z, registry.add(Provenance("SelectorB", (q,)), f"b{q}")))
    return WeightedEquation(tuple(lhs), tuple(rhs), split.beta_abs)


def params_for(k: int, n: int) -> DecompositionParams:
    """Parameters for an equation whose terms and constant are bounded by ``k``.

    ``n`` is the number of selectable terms plus one. Both sides of the
    equation are at most ``k * n``, which is below ``2 ** (theta + 1)``.
    """
    k = max(k, 1)
    theta = max(1, (k * n).bit_length() - 1)
    mu = (n + theta).bit_length()  # ceil(log2(n + theta + 1))
    return DecompositionParams(theta, mu)


def decomposition_params(inst: SubsetSumInstance) -> DecompositionParams:
    if not inst.values:
        raise DegenerateInstanceError(
            "no values: the only subset is empty", feasible=inst.target == 0
        )
    k = max(max(abs(v) for v in inst.values), abs(inst.target))
    return params_for(k, len(inst.values) + 1)


def _carry_name(letter: str, i: int, j: int, row: int | None) -> str:
    return f"{letter}_{i}_{j}" + (f"_r{row}" if row is not None else "")


def build_s2(
    eq: WeightedEquation,
    params: DecompositionParams,
    registry: VariableRegistry,
    row: int | None = None,
) -> list[WeightedEquation]:
    """Bit-decompose ``eq`` into ``2 * (theta + 1)`` column equations.

    Column ``i`` of the left side reads::

        sum_{i' < i} d[i', i] + sum_p a_p * bit(y_p, i)
            = t_i + sum_{j = i+1}^{min(i+mu, theta)} 2**(j-i) * d[i, j]

    and the right side is the same with ``e`` carries, the right-hand terms
    and ``bit(rhs_const, i)`` added to the sum. Carries that would land
    beyond column ``theta`` are not created. New variables are registered
    in ``registry``; ``row`` tags them as belonging to one ILP row.
    """
    theta, mu = params.theta, params.mu
    tag = f"_r{row}" if row is not None else ""

    targets = [
        registry.add(Provenance("TargetBit", (k,), row), f"t{k}{tag}") for k in range(theta + 1)
    ]

    def carries(kind: str, letter: str) -> dict[tuple[int, int], int]:
        made = {}
        for i in range(theta):
            for j in range(i + 1, min(i + mu, theta) + 1):
                made[i, j] = registry.add(
                    Provenance(kind, (i, j), row), _carry_name(letter, i, j, row)
                )
        return made

    d = carries("CarryLhs", "d")
    e = carries("CarryRhs", "e")

    def side(terms, const: int, carry: dict[tuple[int, int], int]) -> list[WeightedEquation]:
        out = []
        for i in range(theta + 1):
            coeffs: dict[int, int] = {}
            for i2 in range(max(0, i - mu), i):
                coeffs[carry[i2, i]] = 1
            for c, v in terms:
                if bit(c, i):
                    coeffs[v] = 1
            coeffs[targets[i]] = -1
            for j in range(i + 1, min(i + mu, theta) + 1):
                coeffs[carry[i, j]] = -(1 << (j - i))
            out.append(WeightedEquation.from_signed(coeffs, bit(const, i)))
        return out

    return side(eq.lhs_terms, 0, d) + side(eq.rhs_terms, eq.rhs_const, e)


def s2_system(inst: SubsetSumInstance) -> tuple[list[WeightedEquation], VariableRegistry, DecompositionParams]:
    """The weighted column system before unit expansion."""
    params = decomposition_params(inst)
    registry = VariableRegistry()
    s1 = build_s1(split_by_sign(inst), registry)
    return build_s2(s1, params, registry), registry, params


def reduce_subset_sum(inst: SubsetSumInstance) -> UnitSystem:
    eqs, registry, params = s2_system(inst)
    meta = {
        "kind": "subset-sum",
        "source": {"set": list(inst.values), "target": inst.target},
        "N": len(inst.values) + 1,
        "K": max(max(abs(v) for v in inst.values), abs(inst.target)),
        "theta": params.theta,
        "mu": params.mu,
        "s2_vars": len(registry),
        "s2_eqs": len(eqs),
        "s2_max_coeff": max(eq.max_coefficient() for eq in eqs),
        "empty_subset_allowed": True,
    }
    return expand_to_unit(eqs, registry, meta)
