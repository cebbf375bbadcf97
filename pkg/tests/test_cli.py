import json

import pytest

from unitred.cli import main
from unitred.core import IlpInstance, MalformedInputError, SubsetSumInstance
from unitred.ilp import reduce_ilp
from unitred.serialize import (
    FORMAT,
    dumps_system,
    ilp_to_json,
    load_subset_sum,
    loads_system,
    render_system,
    subset_sum_to_json,
    system_stats,
)
from unitred.subset_sum import reduce_subset_sum
from unitred.threesat import parse_dimacs, reduce_3sat

from .conftest import EXAMPLE_CNF


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


class TestSerialization:
    @pytest.mark.parametrize(
        "sys_factory",
        [
            lambda: reduce_subset_sum(SubsetSumInstance((1, 2, -3, -4), -2)),
            lambda: reduce_3sat(parse_dimacs(EXAMPLE_CNF)),
            lambda: reduce_ilp(IlpInstance(2, [((1, -1), 1)], 1)),
        ],
    )
    def test_round_trip(self, sys_factory):
        sys = sys_factory()
        text = dumps_system(sys)
        back = loads_system(text)
        assert back == sys
        assert dumps_system(back) == text
        assert json.loads(text)["format"] == FORMAT

    def test_rejects_unknown_format(self):
        obj = json.loads(dumps_system(reduce_3sat(parse_dimacs(EXAMPLE_CNF))))
        obj["format"] = "other/9"
        with pytest.raises(MalformedInputError):
            loads_system(json.dumps(obj))

    def test_rejects_non_unit_equation(self):
        obj = json.loads(dumps_system(reduce_3sat(parse_dimacs(EXAMPLE_CNF))))
        obj["equations"][0]["constant"] = 3
        with pytest.raises(MalformedInputError):
            loads_system(json.dumps(obj))

    def test_instance_json(self):
        inst = SubsetSumInstance((1, 2, -3, -4), -2)
        assert load_subset_sum(subset_sum_to_json(inst)) == inst
        assert ilp_to_json(IlpInstance(1, [((2,), 4)], 2)) == {
            "num_vars": 1, "bits": 2, "rows": [{"coeffs": [2], "rhs": 4}]
        }

    @pytest.mark.parametrize("text", ['{"set": [1, 0], "target": 1}', '{"set": [1.5], "target": 1}', "{}"])
    def test_bad_subset_sum(self, text):
        with pytest.raises(MalformedInputError):
            load_subset_sum(text)

    def test_render(self):
        text = render_system(reduce_3sat(parse_dimacs(EXAMPLE_CNF))).splitlines()
        assert text[0] == "b1 + b2 = b3 + t1 + t2_1 + t2_2"
        assert text[1] == "t2_1 = t2"
        assert "b3 + b4 + t7 + t8_1 + t8_2 = b2 + 1" in text

    def test_stats_checks(self):
        stats = system_stats(reduce_3sat(parse_dimacs(EXAMPLE_CNF)))
        assert stats["vars"] == 21 and stats["eqs"] == 12
        assert all(stats["checks"].values())


class TestReduceCommand:
    def test_subset_sum_to_files(self, files, tmp_path, capsys):
        src = files("ss.json", '{"set": [1, 2, -3, -4], "target": -2}')
        out, eqs = tmp_path / "out.json", tmp_path / "out.eqs"
        code = main(["reduce", "--kind", "subset-sum", "--input", src, "--output", str(out), "--text", str(eqs)])
        assert code == 0
        sys = loads_system(out.read_text())
        assert sys.meta["theta"] == 4
        assert eqs.read_text() == render_system(sys)
        assert "theta=4" in capsys.readouterr().out

    def test_stdout(self, files, capsys):
        code = main(["reduce", "--kind", "3sat", "--input", files("f.cnf", EXAMPLE_CNF)])
        captured = capsys.readouterr()
        assert code == 0
        assert loads_system(captured.out).num_vars == 21
        assert "vars=21" in captured.err

    def test_degenerate(self, files, capsys):
        code = main(["reduce", "--kind", "subset-sum", "--input", files("e.json", '{"set": [], "target": 0}')])
        assert code == 0
        assert "FEASIBLE" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "kind, text",
        [("subset-sum", "not json"), ("subset-sum", '{"set": [0], "target": 0}'), ("3sat", "p cnf 2 1\n1 2 0\n")],
    )
    def test_bad_input(self, files, capsys, kind, text):
        assert main(["reduce", "--kind", kind, "--input", files("bad", text)]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_file(self, tmp_path, capsys):
        assert main(["reduce", "--kind", "3sat", "--input", str(tmp_path / "nope")]) == 2

    def test_ilp_bits(self, files, capsys):
        src = files("i.json", '{"num_vars": 2, "rows": [{"coeffs": [1, 1], "rhs": 3}]}')
        assert main(["reduce", "--kind", "ilp", "--input", src, "--bits", "1"]) == 0
        captured = capsys.readouterr()
        assert "bits P=1 (box 0..3)" in captured.out
        assert "warning" not in captured.err
        assert main(["reduce", "--kind", "ilp", "--input", src]) == 0
        assert "warning:" in capsys.readouterr().err


class TestSolveCommand:
    def _system(self, files, sys):
        return files("sys.json", dumps_system(sys))

    def test_feasible_lifts(self, files, capsys):
        path = self._system(files, reduce_subset_sum(SubsetSumInstance((1, 2, -3, -4), -2)))
        assert main(["solve", "--input", path]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "FEASIBLE"
        assert lines[1].startswith("a1=")
        subset = json.loads(lines[2].removeprefix("subset: "))
        assert sum(subset) == -2

    def test_3sat_model(self, files, capsys):
        path = self._system(files, reduce_3sat(parse_dimacs(EXAMPLE_CNF)))
        assert main(["solve", "--input", path, "--no-deterministic"]) == 0
        model = capsys.readouterr().out.splitlines()[2]
        lits = [int(x) for x in model.removeprefix("model: ").split()]
        inst = parse_dimacs(EXAMPLE_CNF)
        assert inst.satisfied_by([lit > 0 for lit in lits])

    def test_infeasible(self, files, capsys):
        path = self._system(files, reduce_subset_sum(SubsetSumInstance((1, 2), -3)))
        assert main(["solve", "--input", path]) == 1
        assert capsys.readouterr().out.strip() == "INFEASIBLE"

    def test_budget(self, files, capsys):
        path = self._system(files, reduce_subset_sum(SubsetSumInstance((3, 5, -7, 11), 2)))
        code = main(["solve", "--input", path, "--max-nodes", "1"])
        assert code == 3
        assert capsys.readouterr().out.splitlines() == ["BUDGET-EXCEEDED", "nodes=1"]

    def test_malformed(self, files, capsys):
        assert main(["solve", "--input", files("x.json", '{"format": "unit-system/1"}')]) == 2


class TestVerifyCommand:
    def test_agree(self, files, capsys):
        assert main(["verify", "--kind", "3sat", "--input", files("f.cnf", EXAMPLE_CNF)]) == 0
        out = capsys.readouterr().out
        assert out.rstrip().endswith("AGREE")
        assert "reduction: FEASIBLE  oracle: FEASIBLE" in out

    def test_agree_infeasible(self, files, capsys):
        src = files("s.json", '{"set": [1, 2], "target": -3}')
        assert main(["verify", "--kind", "subset-sum", "--input", src]) == 0
        assert "reduction: INFEASIBLE  oracle: INFEASIBLE" in capsys.readouterr().out

    def test_ilp(self, files, capsys):
        src = files("i.json", '{"num_vars": 2, "bits": 1, "rows": [{"coeffs": [1, -1], "rhs": 1}]}')
        assert main(["verify", "--kind", "ilp", "--input", src]) == 0
        line = next(ln for ln in capsys.readouterr().out.splitlines() if ln.startswith("x: "))
        x1, x2 = json.loads(line.removeprefix("x: "))
        assert x1 - x2 == 1 and 0 <= min(x1, x2) and max(x1, x2) <= 3

    def test_size_guard(self, files, capsys):
        src = files("big.json", json.dumps({"set": list(range(1, 30)), "target": 5}))
        assert main(["verify", "--kind", "subset-sum", "--input", src]) == 2
