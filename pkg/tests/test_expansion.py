import itertools
import random

import pytest

from unitred.core import MalformedInputError, Provenance, VariableRegistry, WeightedEquation
from unitred.expansion import expand_to_unit, expansion_size
from unitred.subset_sum import SubsetSumInstance, s2_system

from .oracles import solutions_weighted, unit_as_weighted, unit_residual, weighted_holds


def registry_of(*names):
    reg = VariableRegistry()
    for i, name in enumerate(names, start=1):
        reg.add(Provenance("BoolVar", (i,)), name)
    return reg


@pytest.fixture
def fgh():
    # 3f + 2g + h = 5
    reg = registry_of("f", "g", "h")
    return reg, WeightedEquation(((3, 0), (2, 1), (1, 2)), (), 5)


def test_worked_example_counts(fgh):
    reg, eq = fgh
    sys = expand_to_unit([eq], reg)
    assert sys.num_equations == 11
    new = [sys.registry.name(v) for v in range(len(reg), sys.num_vars)]
    assert new == ["c1", "c2", "c3", "c4", "c5", "f_1", "f_2", "f_3", "g_1", "g_2"]


def test_worked_example_shape(fgh):
    from unitred.serialize import render_system

    reg, eq = fgh
    text = render_system(expand_to_unit([eq], reg)).splitlines()
    assert text[:5] == [f"c{m} = 1" for m in range(1, 6)]
    assert text[5] == "f_1 + f_2 + f_3 + g_1 + g_2 + h = c1 + c2 + c3 + c4 + c5"
    assert text[6:] == ["f_1 = f", "f_2 = f", "f_3 = f", "g_1 = g", "g_2 = g"]


def test_worked_example_agrees_with_source(fgh):
    reg, eq = fgh
    sys = expand_to_unit([eq], reg)
    assert sys.num_vars == 13
    source = [a for a in itertools.product((0, 1), repeat=3) if weighted_holds(eq, a)]
    expanded = [
        a for a in itertools.product((0, 1), repeat=13)
        if all(unit_residual(e, a) == 0 for e in sys.equations)
    ]
    # 3 + 2 = 5: f = g = 1, h = 0 is the only source solution
    assert source == [(1, 1, 0)]
    assert [a[:3] for a in expanded] == source


def test_unit_equation_untouched():
    reg = registry_of("f", "g")
    sys = expand_to_unit([WeightedEquation(((1, 0), (1, 1)), (), 1)], reg)
    assert sys.num_vars == 2
    assert [(eq.terms, eq.constant) for eq in sys.equations] == [(((1, 0), (1, 1)), -1)]


def test_two_g_equals_two_forces_g():
    reg = registry_of("g")
    sys = expand_to_unit([WeightedEquation(((2, 0),), (), 2)], reg)
    assert sys.num_vars == 5 and sys.num_equations == 5
    sols = [
        a for a in itertools.product((0, 1), repeat=5)
        if all(unit_residual(e, a) == 0 for e in sys.equations)
    ]
    assert sols == [(1, 1, 1, 1, 1)]


def test_rejects_bad_coefficient():
    reg = registry_of("f")
    eq = WeightedEquation(((1, 0),), ())
    object.__setattr__(eq, "lhs_terms", ((0, 0),))
    with pytest.raises(MalformedInputError):
        expand_to_unit([eq], reg)


def test_registry_not_mutated(fgh):
    reg, eq = fgh
    expand_to_unit([eq], reg)
    assert len(reg) == 3


def test_copies_numbered_across_equations():
    reg = registry_of("f", "g")
    eqs = [WeightedEquation(((2, 0),), ((1, 1),)), WeightedEquation(((1, 1),), ((2, 0),))]
    sys = expand_to_unit(eqs, reg)
    names = [sys.registry.name(v) for v in range(2, sys.num_vars)]
    assert names == ["f_1", "f_2", "f_3", "f_4"]


class TestExpansionSize:
    def test_worked_example(self, fgh):
        assert expansion_size([fgh[1]]) == (10, 10)

    def test_unit_input(self):
        assert expansion_size([WeightedEquation(((1, 0), (1, 1)), (), 1)]) == (0, 0)

    def test_matches_expansion_of_column_system(self):
        eqs, reg, _ = s2_system(SubsetSumInstance((3, -1), 2))
        sys = expand_to_unit(eqs, reg)
        assert expansion_size(eqs) == (
            sys.num_vars - len(reg),
            sys.num_equations - len(eqs),
        )


def _random_weighted(rng, n_vars, n_eqs):
    eqs = []
    for _ in range(n_eqs):
        vs = rng.sample(range(n_vars), rng.randint(1, n_vars))
        coeffs = {v: rng.choice([-3, -2, -1, 1, 2, 3]) for v in vs}
        eqs.append(WeightedEquation.from_signed(coeffs, rng.randint(-3, 3)))
    return eqs


def test_feasibility_and_projection_randomized():
    rng = random.Random(11)
    checked = 0
    while checked < 150:
        n = rng.randint(1, 3)
        eqs = _random_weighted(rng, n, rng.randint(1, 2))
        reg = registry_of(*[f"v{i}" for i in range(n)])
        added, _ = expansion_size(eqs)
        if n + added > 12:
            continue
        checked += 1
        sys = expand_to_unit(eqs, reg)
        src = [list(a) for a in itertools.product((0, 1), repeat=n) if all(weighted_holds(e, a) for e in eqs)]
        out = list(solutions_weighted(unit_as_weighted(sys), sys.num_vars))
        assert bool(src) == bool(out)
        # projection is onto the source solutions, and the extension is unique
        projected = sorted(a[:n] for a in out)
        assert projected == sorted(src)
        for a in out:
            for v in range(n, sys.num_vars):
                prov = sys.registry.provenance(v)
                expected = 1 if prov.kind == "PinnedOne" else a[prov.indices[0]]
                assert a[v] == expected
