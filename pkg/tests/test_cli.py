import json

import pytest

from ellq import serialize as se
from ellq.cli import main
from ellq.ellfun import EllFun
from ellq.lattice import make_exact_curve
from ellq.sring import SElem, apply_phi


def run(tmp_path, subcommand, doc, *extra):
    inp = tmp_path / "in.json"
    out = tmp_path / "out.json"
    inp.write_text(json.dumps(doc), encoding="utf-8")
    code = main([subcommand, "--input", str(inp), "--output", str(out),
                 *extra])
    payload = json.loads(out.read_text()) if out.exists() else None
    return code, payload


def test_rank1_trivial(tmp_path):
    code, payload = run(tmp_path, "rank1",
                        {"div_a": {"entries": []}, "q": 2})
    assert code == 0
    assert payload["result"]["kind"] == "Algebraic"
    assert payload["result"]["witness"]["entries"] == []


def test_fzeta_with_shadow(tmp_path):
    code, payload = run(tmp_path, "fzeta", {"n": 2},
                        "--lattice", "lemniscatic", "--precision", "30")
    assert code == 0
    names = {c["name"] for c in payload["checks"]}
    assert {"derivative-identity", "shadow"} <= names
    # the reported element is the exact defect (6X^2-2)/(2Y)
    curve = make_exact_curve(4, 0, 2)
    got = se.ellfun_from_json(payload["result"], curve)
    x, y = EllFun.X(curve), EllFun.Y(curve)
    assert got == (6 * (x * x) - 2) / (2 * y)


def test_primitive_roundtrip(tmp_path):
    curve = make_exact_curve(4, 0, 2)
    x = EllFun.X(curve)
    code, payload = run(tmp_path, "primitive",
                        {"h": se.ellfun_to_json(x * x)})
    assert code == 0
    assert payload["result"]["kind"] == "Primitive"
    assert payload["result"]["r"] == "0/1"
    assert payload["result"]["s"] == "1/3"


def test_divsolve_nosolution(tmp_path):
    doc = {"e": {"entries": [{"p": {"r1": "0/1", "r2": "0/1"},
                              "v": "1/1"}]}, "q": 2}
    code, payload = run(tmp_path, "divsolve", doc)
    assert code == 0
    assert payload["result"]["kind"] == "NoSolution"


def test_consistency_subcommand(tmp_path):
    curve = make_exact_curve(4, 0, 2)
    # constant invertible A with B = 0 is consistent
    one = se.selem_to_json(SElem.one(curve))
    zero = se.selem_to_json(SElem.zero(curve))
    two = se.selem_to_json(SElem.const(2, curve))
    mk = lambda n: {"num": n, "den": one}
    a = [[mk(two), mk(zero)], [mk(zero), mk(one)]]
    b = [[mk(zero), mk(zero)], [mk(zero), mk(zero)]]
    code, payload = run(tmp_path, "consistency", {"a": a, "b": b})
    assert code == 0 and payload["result"]["residual_zero"]
    # diag(z, 1) with B = 0 is not consistent
    zmon = se.selem_to_json(SElem.z(curve))
    a2 = [[mk(zmon), mk(zero)], [mk(zero), mk(one)]]
    code, payload = run(tmp_path, "consistency", {"a": a2, "b": b})
    assert code == 1
    assert payload["result"]["residual_zero"] is False


def test_transfer_solve_subcommand(tmp_path):
    curve = make_exact_curve(4, 0, 2)
    u0 = SElem.z(curve, 1, s0=True)
    a = 4
    g = apply_phi(u0) - u0.scale(EllFun.const(a, curve))
    from ellq.sring import apply_delta
    f = apply_delta(u0)
    doc = {"g": se.selem_to_json(g), "f": se.selem_to_json(f),
           "a": "4/1", "c": "0/1", "p": {}}
    code, payload = run(tmp_path, "transfer-solve", doc)
    assert code == 0
    assert payload["checks"][0]["passed"]


def test_monodromy_verify_corrupted(tmp_path):
    doc = {"m1": [["1/1", "1/1"], ["0/1", "1/1"]],
           "m2": [["1/1", "0/1"], ["0/1", "1/1"]],
           "check_m1": [["1/1", "2/1"], ["0/1", "1/1"]]}
    code, payload = run(tmp_path, "monodromy-verify", doc,
                        "--lattice", "lemniscatic", "--precision", "30")
    assert code == 1
    assert float(payload["result"]["residual"]) > 1e-3


def test_monodromy_realize(tmp_path):
    doc = {"m1": [["1/1", "1/1"], ["0/1", "1/1"]],
           "m2": [["1/1", "0/1"], ["0/1", "1/1"]]}
    code, payload = run(tmp_path, "monodromy-realize", doc,
                        "--lattice", "lemniscatic", "--precision", "30")
    assert code == 0


def test_schema_error_exit_code(tmp_path):
    code, _ = run(tmp_path, "rank1", {"div_a": "nonsense", "q": 2})
    assert code == 2
    code, _ = run(tmp_path, "divsolve", {"e": {"entries": []}, "q": "two"})
    assert code == 2


def test_domain_error_exit_code(tmp_path):
    doc = {"d": {"entries": [{"p": {"r1": "1/2", "r2": "0/1"},
                              "v": "1/2"}]}}
    code, _ = run(tmp_path, "principal", doc)
    assert code == 3


def test_s_member_subcommand(tmp_path):
    curve = make_exact_curve(4, 0, 2)
    doc = {"num": se.selem_to_json(SElem.zeta(curve)), "bound": 3}
    code, payload = run(tmp_path, "s-member", doc)
    assert code == 0
    assert payload["result"]["kind"] == "InS"
    assert payload["result"]["order"] <= 2


def test_shadow_subcommand(tmp_path):
    curve = make_exact_curve(4, 0, 2)
    f = SElem.zeta(curve) + SElem.z(curve)
    doc = {"lhs": se.selem_to_json(apply_phi(f)),
           "rhs": se.selem_to_json(apply_phi(f)), "trials": 2}
    code, payload = run(tmp_path, "shadow", doc,
                        "--lattice", "lemniscatic", "--precision", "30")
    assert code == 0
