"""JSON instance/system formats and the human-readable ``.eqs`` rendering."""

from __future__ import annotations

import functools
import json
from typing import Any

from .core import (
    IlpInstance,
    MalformedInputError,
    Provenance,
    SubsetSumInstance,
    ThreeSatInstance,
    UnitEquation,
    UnitSystem,
    VariableRegistry,
)

__all__ = [
    "FORMAT",
    "load_subset_sum",
    "load_ilp",
    "subset_sum_to_json",
    "ilp_to_json",
    "threesat_to_json",
    "system_to_dict",
    "system_from_dict",
    "dumps_system",
    "loads_system",
    "render_equation",
    "render_system",
    "bound_checks",
]

FORMAT = "unit-system/1"


# ------------------------------------------------------------------ instances


def load_subset_sum(data: str | dict) -> SubsetSumInstance:
    """``{"set": [1, 2, -3, -4], "target": -2}``"""
    obj = json.loads(data) if isinstance(data, str) else data
    try:
        values, target = obj["set"], obj["target"]
    except (KeyError, TypeError):
        raise MalformedInputError('subset-sum input needs "set" and "target"') from None
    if not isinstance(values, list) or not all(_is_int(v) for v in values) or not _is_int(target):
        raise MalformedInputError("subset-sum set and target must be integers")
    return SubsetSumInstance(tuple(values), target)


def load_ilp(data: str | dict, bits: int | None = None) -> IlpInstance:
    """``{"num_vars": 2, "bits": 1, "rows": [{"coeffs": [1, 1], "rhs": 3}]}``

    ``bits`` overrides the file; when neither is given a width is
    suggested (with a warning).
    """
    from .ilp import suggest_bit_width

    obj = json.loads(data) if isinstance(data, str) else data
    try:
        n = obj["num_vars"]
        rows = [(tuple(r["coeffs"]), r["rhs"]) for r in obj["rows"]]
    except (KeyError, TypeError):
        raise MalformedInputError('ILP input needs "num_vars" and "rows"') from None
    if not _is_int(n) or not all(_is_int(a) for c, b in rows for a in (*c, b)):
        raise MalformedInputError("ILP coefficients must be integers")
    if bits is None:
        bits = obj.get("bits")
    if bits is None:
        bits = suggest_bit_width(n, rows)
    if not _is_int(bits):
        raise MalformedInputError('"bits" must be an integer')
    return IlpInstance(n, tuple(rows), bits)


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def subset_sum_to_json(inst: SubsetSumInstance) -> dict:
    return {"set": list(inst.values), "target": inst.target}


def ilp_to_json(inst: IlpInstance) -> dict:
    return {
        "num_vars": inst.num_vars,
        "bits": inst.bit_width,
        "rows": [{"coeffs": list(r.coeffs), "rhs": r.rhs} for r in inst.rows],
    }


def threesat_to_json(inst: ThreeSatInstance) -> dict:
    return {
        "num_vars": inst.num_vars,
        "clauses": [[int(lit) for lit in c] for c in inst.clauses],
    }


# ------------------------------------------------------------------ systems


def system_to_dict(sys: UnitSystem) -> dict:
    variables = []
    for var, prov, name in sys.registry.entries():
        entry = {"id": var, "name": name, "kind": prov.kind, "indices": list(prov.indices)}
        if prov.row is not None:
            entry["row"] = prov.row
        variables.append(entry)
    equations = [
        {"terms": [[s, v] for s, v in eq.terms], "constant": eq.constant}
        for eq in sys.equations
    ]
    out = {"format": FORMAT, "variables": variables, "equations": equations}
    if "source" in sys.meta:
        out["source"] = sys.meta["source"]
    out["stats"] = system_stats(sys)
    return out


def system_from_dict(obj: dict) -> UnitSystem:
    try:
        if obj.get("format", FORMAT) != FORMAT:
            raise MalformedInputError(f"unsupported format {obj.get('format')!r}")
        reg = VariableRegistry()
        for expected, entry in enumerate(obj["variables"]):
            if entry["id"] != expected:
                raise MalformedInputError(f"variable ids must be dense, got {entry['id']}")
            prov = Provenance(entry["kind"], tuple(entry["indices"]), entry.get("row"))
            reg.add(prov, entry["name"])
        eqs = tuple(
            UnitEquation(tuple((s, v) for s, v in e["terms"]), e["constant"])
            for e in obj["equations"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedInputError):
            raise
        raise MalformedInputError(f"malformed unit system: {exc!r}") from None
    meta = dict(obj.get("stats", {}))
    if "source" in obj:
        meta["source"] = obj["source"]
    return UnitSystem(reg, eqs, meta)


def dumps_system(sys: UnitSystem) -> str:
    """JSON with one variable or equation per line.

    ``json.dumps(indent=...)`` falls back to the pure-Python encoder, which
    is far too slow for large systems, so lines are assembled by hand.
    """
    compact = functools.partial(json.dumps, separators=(",", ":"))
    fields = []
    for key, value in system_to_dict(sys).items():
        if key in ("variables", "equations") and value:
            body = ",\n  ".join(compact(item) for item in value)
            fields.append(f' "{key}": [\n  {body}\n ]')
        else:
            fields.append(f" {json.dumps(key)}: {compact(value)}")
    return "{\n" + ",\n".join(fields) + "\n}\n"


def loads_system(text: str) -> UnitSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"not JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MalformedInputError("unit system must be a JSON object")
    return system_from_dict(obj)


# ------------------------------------------------------------------ text


def render_equation(eq: UnitEquation, registry: VariableRegistry) -> str:
    """``f_1 + f_2 + h = c1 + c2`` style; constants are placed as ``1``."""
    left = [registry.name(v) for s, v in eq.terms if s > 0]
    right = [registry.name(v) for s, v in eq.terms if s < 0]
    if eq.constant > 0:
        left.append("1")
    elif eq.constant < 0:
        right.append("1")
    return f"{' + '.join(left) or '0'} = {' + '.join(right) or '0'}"


def render_system(sys: UnitSystem) -> str:
    return "".join(render_equation(eq, sys.registry) + "\n" for eq in sys.equations)


# ------------------------------------------------------------------ stats


def bound_checks(meta: dict) -> dict[str, bool]:
    """Size formulas of the column decomposition, evaluated for one system."""
    checks: dict[str, bool] = {}
    kind = meta.get("kind")
    if kind == "subset-sum":
        theta, mu, n = meta["theta"], meta["mu"], meta["N"]
        checks["s2_eqs == 2*(theta+1)"] = meta["s2_eqs"] == 2 * (theta + 1)
        checks["s2_vars <= 2*theta^2 + N + 2"] = meta["s2_vars"] <= 2 * theta * theta + n + 2
        checks["mu == ceil(log2(N+theta+1))"] = mu == (n + theta).bit_length()
        checks["s2_max_coeff <= 2^mu"] = meta["s2_max_coeff"] <= 1 << mu
        checks["s2_max_coeff == 2^mu"] = meta["s2_max_coeff"] == 1 << mu
        checks["2^theta <= K*N"] = (1 << theta) <= max(meta["K"] * n, 2)
    elif kind == "3sat":
        n, k = meta["num_bool_vars"], meta["num_clauses"]
        checks["vars == N + 4K"] = meta["vars"] == n + 4 * k
        checks["eqs == 3K"] = meta["eqs"] == 3 * k
    elif kind == "ilp":
        checks["s2_eqs == sum 2*(theta_r+1)"] = meta["s2_eqs"] == sum(
            2 * (t + 1) for t in meta["row_theta"]
        )
    if "expansion_predicted" in meta:
        checks["expansion size predicted"] = meta["expansion_predicted"] == meta["expansion_added"]
    return checks


def system_stats(sys: UnitSystem) -> dict:
    meta = {k: v for k, v in sys.meta.items() if k != "source"}
    meta["vars"] = sys.num_vars
    meta["eqs"] = sys.num_equations
    meta.pop("checks", None)
    try:
        meta["checks"] = bound_checks(meta)
    except KeyError:
        meta["checks"] = {}
    return meta

