import io
import json

import pytest

from netcode.cli import main
from netcode.code import transfer_matrices
from netcode.errors import HorizonTooShortError
from netcode.field import make_field
from netcode.netgen import butterfly, example3_net, fig2_cascade
from netcode.reference import example2_code, example3_ud_code, fig4_code
from netcode.sim import apply_filter, decode_check, random_inputs, simulate

F2, F3 = make_field(2), make_field(3)


def test_filter_power_series():
    impulse = [1] + [0] * 9
    assert apply_filter(F2, (1,), (1, 1), impulse, 10) == [1] * 10  # 1/(1+z)
    assert apply_filter(F3, (0, 1), (1,), [1, 2, 0, 1], 4) == [0, 1, 2, 0]  # pure delay
    # 1/(1 - z) over F_3 accumulates
    assert apply_filter(F3, (1,), (1, 2), [1, 1, 1, 1], 4) == [1, 2, 0, 1]


@pytest.mark.parametrize("which", ["example2", "example3"])
def test_reference_codes_decode(which):
    n, c = (fig2_cascade(), example2_code()) if which == "example2" else (example3_net(), example3_ud_code())
    report = transfer_matrices(n, c)
    H = 24
    tr = simulate(n, c, random_inputs(F2, n.h, H, 5), H)
    assert all(decode_check(tr, report, n).values())


def test_decode_check_catches_corruption_and_short_horizon():
    n, c = fig2_cascade(), example2_code()
    report = transfer_matrices(n, c)
    tr = simulate(n, c, random_inputs(F2, n.h, 24, 1), 24)
    tr.edges["t1#1"][20] ^= 1
    assert decode_check(tr, report, n)["t1"] is False
    short = simulate(n, c, random_inputs(F2, n.h, 4, 1), 4)
    with pytest.raises(HorizonTooShortError):
        decode_check(short, report, n)


def test_trace_csv():
    n, c = fig2_cascade(), example2_code()
    text = simulate(n, c, random_inputs(F2, 2, 3, 0), 3).to_csv(n.full_order())
    lines = text.splitlines()
    assert lines[0] == "time,edge,symbol"
    assert len(lines) == 1 + 3 * len(n.full_order())


def test_fig4_code_requires_four_elements():
    with pytest.raises(ValueError):
        fig4_code(3)
    assert len(fig4_code(4).mixing_vectors) == 3


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def run(argv, capsys, monkeypatch, stdin=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_pipeline(capsys, monkeypatch):
    _, net, _ = run(["gen", "butterfly"], capsys, monkeypatch)
    rc, bundle, _ = run(["construct", "--algo", "lif", "--field", "2", "--mode", "ud"], capsys, monkeypatch, net)
    assert rc == 0 and set(json.loads(bundle)) == {"network", "code"}
    rc, out, _ = run(["verify"], capsys, monkeypatch, bundle)
    assert rc == 0 and json.loads(out)["verdict"] == "feasible"


def test_cli_verify_failure(tmp_path, capsys, monkeypatch):
    net = tmp_path / "net.json"
    net.write_text(butterfly().to_json())
    code = tmp_path / "code.json"
    code.write_text(json.dumps({"field": "2^1", "mode": "ud", "kernels": []}))
    rc, out, _ = run(["verify", str(net), str(code), "--pretty"], capsys, monkeypatch)
    assert rc == 1 and "t1" in out and "invertibility" in out


def test_cli_usage_errors(capsys, monkeypatch):
    assert run(["nonsense"], capsys, monkeypatch)[0] == 2
    assert run(["verify", "/no/such/file.json"], capsys, monkeypatch)[0] == 2
    assert run(["gen", "unknown-net"], capsys, monkeypatch)[0] == 2
    assert run(["reproduce", "--claim", "nope"], capsys, monkeypatch)[0] == 2


def test_cli_deterministic(capsys, monkeypatch):
    outs = []
    for _ in range(2):
        _, net, _ = run(["gen", "random:9,20,2,3", "--seed", "4"], capsys, monkeypatch)
        _, bundle, _ = run(["construct", "--algo", "dnc"], capsys, monkeypatch, net)
        _, trace, _ = run(["simulate", "--horizon", "16", "--seed", "2", "--check"], capsys, monkeypatch, bundle)
        outs.append((net, bundle, trace))
    assert outs[0] == outs[1]
    assert outs[0][2].startswith("time,edge,symbol")


def test_cli_convert_and_minfield(capsys, monkeypatch):
    _, net, _ = run(["gen", "fig2"], capsys, monkeypatch)
    rc, out, _ = run(["minfield", "--mode", "inst", "--fields", "2,3"], capsys, monkeypatch, net)
    assert rc == 0 and json.loads(out)["min"] == 3
    _, bundle, _ = run(["construct", "--algo", "lif", "--field", "2", "--mode", "ud"], capsys, monkeypatch, net)
    rc, out, _ = run(["convert"], capsys, monkeypatch, bundle)
    rep = json.loads(out)["report"]
    assert rc == 0 and rep["Q"] > rep["deg_g_n"] + rep["deg_g_d"]
    rc, out, _ = run(["verify"], capsys, monkeypatch, out)
    assert rc == 0


def test_cli_materialize_and_audit(capsys, monkeypatch):
    _, net, _ = run(["gen", "combination:4,2"], capsys, monkeypatch)
    rc, out, _ = run(["materialize"], capsys, monkeypatch, net)
    assert rc == 0
    assert run(["verify"], capsys, monkeypatch, out)[0] == 0
    rc, out, _ = run(["audit", "--fields", "2,3"], capsys, monkeypatch, net)
    assert rc == 0 and json.loads(out)["consistent"]


def test_cli_reproduce_example2(capsys, monkeypatch):
    rc, out, _ = run(["reproduce", "--claim", "example2", "--pretty"], capsys, monkeypatch)
    assert rc == 0
    assert "PASS example2_fields" in out and "inst: 3" in out and "ud: 2" in out
