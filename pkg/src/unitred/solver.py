"""Feasibility of unit systems by backtracking with bound propagation.

Also holds the brute-force oracles for the three source problems and the
subset-sum lifting, which need nothing but the definitions.

Before searching, variables tied by ``v - w = 0`` or ``v + w - 1 = 0`` are
merged into one class (copies of a parent collapse back onto it), so the
search runs over class representatives with integer coefficients. The
merge is part of propagation and is skipped when propagation is off.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .core import (
    Assignment,
    IlpInstance,
    LiftRefusedError,
    Provenance,
    SizeGuardError,
    SubsetSumInstance,
    ThreeSatInstance,
    UnitSystem,
    check_system,
)
from .subset_sum import split_by_sign

__all__ = [
    "SolveLimits",
    "Status",
    "SolveResult",
    "solve_unit_system",
    "lift_subset_sum",
    "brute_force_subset_sum",
    "brute_force_3sat",
    "brute_force_ilp",
    "brute_force_unit_system",
]


@dataclass(frozen=True)
class SolveLimits:
    max_nodes: int = 50_000_000
    deterministic: bool = True

    def __post_init__(self) -> None:
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")


class Status(enum.Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"
    BUDGET_EXCEEDED = "BUDGET-EXCEEDED"


@dataclass
class SolveResult:
    status: Status
    assignment: dict[int, int] | None = None
    nodes: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


class _Classes:
    """Union-find with parity: value(v) = value(root) XOR parity(v)."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, v: int) -> tuple[int, int]:
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root, acc = v, 0
        for u in reversed(path):
            acc ^= self.parity[u]
            self.parity[u] = acc
            self.parent[u] = root
        return root, (self.parity[path[0]] if path else 0)

    def union(self, a: int, b: int, differ: int) -> bool:
        """Record value(a) XOR value(b) == differ; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == differ
        # keep the smaller id as root so representatives follow id order
        if rb < ra:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ differ
        return True


class _Search:
    def __init__(self, sys: UnitSystem, limits: SolveLimits, propagate: bool):
        self.sys = sys
        self.limits = limits
        self.propagate = propagate
        self.nodes = 0
        self.trivially_infeasible = False
        n = sys.num_vars
        self.classes = _Classes(n)

        if propagate:
            for eq in sys.equations:
                if len(eq.terms) != 2:
                    continue
                (s1, v1), (s2, v2) = eq.terms
                if s1 == -s2 and eq.constant == 0:
                    ok = self.classes.union(v1, v2, 0)
                elif s1 == s2 and eq.constant == -s1:
                    ok = self.classes.union(v1, v2, 1)
                else:
                    continue
                if not ok:
                    self.trivially_infeasible = True

        roots = sorted({self.classes.find(v)[0] for v in range(n)})
        self.index = {r: k for k, r in enumerate(roots)}
        self.roots = roots
        m = len(roots)

        # equations over representatives: sum(a * x) + c = 0
        eq_terms: list[list[tuple[int, int]]] = []
        eq_const: list[int] = []
        for eq in sys.equations:
            coeffs: dict[int, int] = {}
            c = eq.constant
            for s, v in eq.terms:
                r, p = self.classes.find(v)
                k = self.index[r]
                if p:
                    c += s
                    coeffs[k] = coeffs.get(k, 0) - s
                else:
                    coeffs[k] = coeffs.get(k, 0) + s
            terms = [(k, a) for k, a in coeffs.items() if a != 0]
            if not terms:
                if c != 0:
                    self.trivially_infeasible = True
                continue
            eq_terms.append(terms)
            eq_const.append(c)

        self.eq_terms = eq_terms
        self.eq_maxabs = [max(abs(a) for _, a in t) for t in eq_terms]
        self.lo = [c + sum(a for _, a in t if a < 0) for t, c in zip(eq_terms, eq_const)]
        self.hi = [c + sum(a for _, a in t if a > 0) for t, c in zip(eq_terms, eq_const)]
        self.free = [len(t) for t in eq_terms]
        self.occ: list[list[tuple[int, int]]] = [[] for _ in range(m)]
        for e, terms in enumerate(eq_terms):
            for k, a in terms:
                self.occ[k].append((e, a))
        self.val = [-1] * m
        self.trail: list[int] = []

    # -- assignment with undo

    def _set(self, k: int, v: int) -> bool:
        """Assign and update bounds; False if some equation became impossible."""
        self.val[k] = v
        self.trail.append(k)
        lo, hi, free = self.lo, self.hi, self.free
        ok = True
        for e, a in self.occ[k]:
            if a > 0:
                if v:
                    lo[e] += a
                else:
                    hi[e] -= a
            elif v:
                hi[e] += a
            else:
                lo[e] -= a
            free[e] -= 1
            if self.propagate:
                if lo[e] > 0 or hi[e] < 0:
                    ok = False
            elif free[e] == 0 and lo[e] != 0:
                ok = False
        return ok

    def _undo(self, mark: int) -> None:
        lo, hi, free, val = self.lo, self.hi, self.free, self.val
        trail = self.trail
        while len(trail) > mark:
            k = trail.pop()
            v = val[k]
            val[k] = -1
            for e, a in self.occ[k]:
                if a > 0:
                    if v:
                        lo[e] -= a
                    else:
                        hi[e] += a
                elif v:
                    hi[e] -= a
                else:
                    lo[e] += a
                free[e] += 1

    def _assign(self, k: int, v: int) -> bool:
        if not self._set(k, v):
            return False
        if not self.propagate:
            return True
        queue = [e for e, _ in self.occ[k]]
        return self._fixpoint(queue)

    def _fixpoint(self, queue: list[int]) -> bool:
        lo, hi, val = self.lo, self.hi, self.val
        while queue:
            e = queue.pop()
            if self.free[e] == 0:
                continue
            slack_up = -lo[e]  # room before the minimum exceeds 0
            slack_down = hi[e]  # room before the maximum drops below 0
            if self.eq_maxabs[e] <= min(slack_up, slack_down):
                continue
            for k, a in self.eq_terms[e]:
                if val[k] != -1:
                    continue
                m = a if a > 0 else -a
                if a > 0:
                    zero_bad, one_bad = m > slack_down, m > slack_up
                else:
                    zero_bad, one_bad = m > slack_up, m > slack_down
                if zero_bad and one_bad:
                    return False
                if zero_bad or one_bad:
                    if not self._set(k, 1 if zero_bad else 0):
                        return False
                    queue.extend(e2 for e2, _ in self.occ[k])
                    slack_up, slack_down = -lo[e], hi[e]
        return True

    # -- branching

    def _pick_ordered(self, start: int) -> int:
        val = self.val
        for k in range(start, len(val)):
            if val[k] == -1:
                return k
        return -1

    def _pick_constrained(self) -> int:
        best, best_free = -1, None
        for e, f in enumerate(self.free):
            if f and (best_free is None or f < best_free):
                best, best_free = e, f
                if f == 1:
                    break
        if best == -1:
            return self._pick_ordered(0)
        k_best, a_best = -1, 0
        for k, a in self.eq_terms[best]:
            if self.val[k] == -1 and abs(a) > a_best:
                k_best, a_best = k, abs(a)
        return k_best

    def _pick(self, last: int) -> int:
        if self.limits.deterministic:
            return self._pick_ordered(last + 1 if last >= 0 else 0)
        return self._pick_constrained()

    def run(self) -> SolveResult:
        stats = {"classes": len(self.roots), "equations": len(self.eq_terms)}
        if self.trivially_infeasible:
            return SolveResult(Status.INFEASIBLE, nodes=0, stats=stats)
        if self.propagate and (
            any(lo > 0 or hi < 0 for lo, hi in zip(self.lo, self.hi))
            or not self._fixpoint(list(range(len(self.eq_terms))))
        ):
            return SolveResult(Status.INFEASIBLE, nodes=0, stats=stats)

        # frames: [var, next value, trail mark]
        stack: list[list[int]] = []
        k = self._pick(-1)
        if k == -1:
            return self._finish(stats)
        stack.append([k, 0, len(self.trail)])
        while stack:
            frame = stack[-1]
            k, v, mark = frame
            if v > 1:
                stack.pop()
                continue
            frame[1] = v + 1
            self._undo(mark)
            self.nodes += 1
            if self.nodes > self.limits.max_nodes:
                self._undo(0)
                return SolveResult(Status.BUDGET_EXCEEDED, nodes=self.nodes - 1, stats=stats)
            if self._assign(k, v):
                nk = self._pick(k)
                if nk == -1:
                    return self._finish(stats)
                stack.append([nk, 0, len(self.trail)])
        return SolveResult(Status.INFEASIBLE, nodes=self.nodes, stats=stats)

    def _finish(self, stats: dict) -> SolveResult:
        # unconstrained representatives take 0
        rep_val = [0 if v == -1 else v for v in self.val]
        asg = {}
        for var in range(self.sys.num_vars):
            r, p = self.classes.find(var)
            asg[var] = rep_val[self.index[r]] ^ p
        if not check_system(self.sys, asg):
            raise AssertionError("solver produced an assignment that violates the system")
        return SolveResult(Status.FEASIBLE, asg, nodes=self.nodes, stats=stats)


def solve_unit_system(
    sys: UnitSystem, limits: SolveLimits | None = None, propagate: bool = True
) -> SolveResult:
    """Complete search for a 0/1 assignment satisfying every equation.

    With ``limits.deterministic`` the branching follows ascending variable
    ids trying 0 before 1, so the first solution found is the
    lexicographically smallest one. Otherwise the solver branches inside
    the equation with the fewest unassigned variables.
    """
    return _Search(sys, limits or SolveLimits(), propagate).run()


# ------------------------------------------------------------------ lifting


def lift_subset_sum(inst: SubsetSumInstance, sys: UnitSystem, asg: Assignment) -> list[int]:
    """Selected source values, in source order."""
    if not check_system(sys, asg):
        raise LiftRefusedError("assignment does not satisfy the unit system")
    split = split_by_sign(inst)
    reg = sys.registry
    chosen = []
    for p, pos in enumerate(split.y_source, start=1):
        if asg[reg.lookup(Provenance("SelectorA", (p,)))]:
            chosen.append(pos)
    for q, pos in enumerate(split.z_source, start=1):
        if asg[reg.lookup(Provenance("SelectorB", (q,)))]:
            chosen.append(pos)
    subset = [inst.values[pos] for pos in sorted(chosen)]
    if sum(subset) != inst.target:
        raise LiftRefusedError(f"lifted subset {subset} does not sum to {inst.target}")
    return subset


# ------------------------------------------------------------------ oracles


def brute_force_subset_sum(inst: SubsetSumInstance) -> bool:
    """Does some subset (the empty one included) sum to the target?"""
    if len(inst.values) > 25:
        raise SizeGuardError("subset-sum oracle limited to 25 values")
    sums = {0}
    for v in inst.values:
        sums |= {s + v for s in sums}
    return inst.target in sums


def brute_force_3sat(inst: ThreeSatInstance) -> bool:
    if inst.num_vars > 25:
        raise SizeGuardError("3-SAT oracle limited to 25 variables")
    return any(
        inst.satisfied_by(model)
        for model in itertools.product((False, True), repeat=inst.num_vars)
    )


def brute_force_ilp(inst: IlpInstance) -> bool:
    """Feasibility over the box 0 <= x_i <= 2**(P+1) - 1."""
    side = 1 << (inst.bit_width + 1)
    if side**inst.num_vars > 10**7:
        raise SizeGuardError(f"ILP oracle box has {side}**{inst.num_vars} points")
    return any(inst.satisfied_by(x) for x in itertools.product(range(side), repeat=inst.num_vars))


def brute_force_unit_system(sys: UnitSystem, max_vars: int = 24) -> dict[int, int] | None:
    """Lexicographically smallest satisfying assignment by full enumeration."""
    import numpy as np

    n = sys.num_vars
    if n > max_vars:
        raise SizeGuardError(f"{n} variables exceed the enumeration limit {max_vars}")
    if not sys.equations:
        return {v: 0 for v in range(n)}
    a = np.zeros((len(sys.equations), n), dtype=np.int64)
    c = np.array([eq.constant for eq in sys.equations], dtype=np.int64)
    for r, eq in enumerate(sys.equations):
        for s, v in eq.terms:
            a[r, v] = s
    # variable 0 is the most significant bit so numeric order is lexicographic
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        bits = ((codes[:, None] & weights[None, :]) != 0).astype(np.int64)
        ok = np.all(bits @ a.T + c == 0, axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            row = bits[hits[0]]
            return {v: int(row[v]) for v in range(n)}
    return None
