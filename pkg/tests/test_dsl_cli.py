import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pretopos_lab.cli import main
from pretopos_lab.commands import UnknownBinding, UnknownCommand, run_command
from pretopos_lab.core import FinMap, FinSet
from pretopos_lab.dsl import DuplicateName, ParseError, ValidationError, parse, render
from pretopos_lab.exactness import Relation, Setoid
from pretopos_lab.limits import Square

WORKSPACE = """\
# a small workspace
set A = 3;
set B = 2;
set One = 1;
map f : A -> B = [0, 0, 1];
map g : B -> One = [0, 0];
map idB : B -> B = [0, 1];
map h : A -> A = [0,0,1];
rel R on A = {(0,0), (1,1), (2,2), (0,1), (1,0)};
setoid S = (A, R);
square sq = (idB, g, g, idB);
"""


def test_parse_example():
    ws = parse("set A = 3; map f : A -> A = [0,0,1];")
    assert ws["A"] == FinSet(3)
    assert ws["f"] == FinMap(FinSet(3), FinSet(3), (0, 0, 1))


def test_out_of_range_entry_located():
    with pytest.raises(ValidationError) as err:
        parse("set A = 1;\nset B = 2;\nmap f : A -> B = [5];")
    assert (err.value.line, err.value.col) == (3, 19)


def test_relation_binding():
    ws = parse("set A = 2;\nrel R on A = {(0,1)};")
    assert isinstance(ws["R"], Relation) and ws["R"].pairs() == [(0, 1)]


def test_all_binding_kinds():
    ws = parse(WORKSPACE)
    assert isinstance(ws["S"], Setoid)
    assert isinstance(ws["sq"], Square)
    assert list(ws.sources) == ["A", "B", "One", "f", "g", "idB", "h", "R", "S", "sq"]


@pytest.mark.parametrize(
    "source,error,where",
    [
        ("set A = 3; set A = 2;", DuplicateName, (1, 16)),
        ("set A = ;", ParseError, (1, 9)),
        ("set A = 3 map", ParseError, (1, 11)),
        ("thing A = 3;", ParseError, (1, 1)),
        ("set A = 2;\nmap f : A -> C = [0, 0];", ValidationError, (2, 14)),
        ("set A = 2;\nmap f : A -> A = [0];", ValidationError, (2, 20)),
        ("set A = 2;\nrel R on A = {(0,1)};\nsetoid S = (A, R);", ValidationError, (3, 16)),
        ("set A = 2; set B = 3;\nmap f : A -> B = [0, 1];\nmap u : A -> A = [0, 1];\nsquare s = (f, u, f, u);", ValidationError, (4, 8)),
        ("set A = 2;\nmap s : A -> A = [1, 0];\nmap i : A -> A = [0, 1];\nsquare q = (s, i, i, i);", ValidationError, (4, 8)),
        ("set A = 2 $", ParseError, (1, 11)),
    ],
)
def test_diagnostics(source, error, where):
    with pytest.raises(error) as err:
        parse(source)
    assert (err.value.line, err.value.col) == where


def test_render_roundtrip_fixed():
    ws = parse(WORKSPACE)
    text = render(ws)
    again = parse(text)
    assert render(again) == text
    assert again.values == ws.values


@st.composite
def workspaces(draw):
    lines = []
    sizes = draw(st.lists(st.integers(0, 4), min_size=1, max_size=4))
    for i, n in enumerate(sizes):
        lines.append(f"set S{i} = {n};")
    for j in range(draw(st.integers(0, 4))):
        a = draw(st.integers(0, len(sizes) - 1))
        b = draw(st.integers(0, len(sizes) - 1))
        if sizes[b] == 0 and sizes[a] > 0:
            continue
        table = [draw(st.integers(0, max(sizes[b] - 1, 0))) for _ in range(sizes[a])]
        lines.append(f"map m{j} : S{a} -> S{b} = [{','.join(map(str, table))}];")
    for k in range(draw(st.integers(0, 2))):
        a = draw(st.integers(0, len(sizes) - 1))
        n = sizes[a]
        pairs = draw(st.lists(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))), max_size=4)) if n else []
        lines.append(f"rel r{k} on S{a} = {{{', '.join(f'({i},{j})' for i, j in pairs)}}};")
    return "\n".join(lines)


@given(workspaces())
def test_render_roundtrip_property(source):
    ws = parse(source)
    text = render(ws)
    assert render(parse(text)) == text
    assert parse(text).values == ws.values


def test_run_command_examples():
    ws = parse(WORKSPACE)
    cert = run_command(ws, "verify effectiveness S")
    assert cert.kind == "effectiveness" and cert.passed
    cert = run_command(ws, "construct wtype g --size-cap 100")
    assert cert.kind == "construct/wtype" and cert.witnesses["status"] == "Finite"
    cert = run_command(ws, "verify piw-pretopos --max-size 1 --seed 7")
    assert cert.kind == "piw-pretopos" and cert.passed and cert.seed == 7


@pytest.mark.parametrize(
    "cmd",
    [
        "construct pullback f f",
        "construct coeq h h",
        "construct image f",
        "construct quotient S",
        "construct pi g f",
        "construct classify f --bound 3",
        "construct sum A B",
        "construct closure R",
        "construct two-mod-p --p 0",
        "verify mono h",
        "verify epi f",
        "verify kernel-effective f",
        "verify q-adjunction S B",
        "verify subobject-classifier A",
        "verify amc f",
        "verify stable --k 1 --max-size 2",
    ],
)
def test_dispatch(cmd):
    cert = run_command(parse(WORKSPACE), cmd)
    assert cert.to_dict()["schema"] == "pretopos-lab/certificate/v1"


def test_command_errors():
    ws = parse(WORKSPACE)
    with pytest.raises(UnknownCommand):
        run_command(ws, "frobnicate f")
    with pytest.raises(UnknownCommand):
        run_command(ws, "verify nothing f")
    with pytest.raises(UnknownBinding):
        run_command(ws, "verify mono zz")
    with pytest.raises(UnknownBinding):
        run_command(ws, "verify mono A")
    with pytest.raises(UnknownCommand):
        run_command(ws, "construct wtype g --colour 3")
    with pytest.raises(UnknownCommand):
        run_command(ws, "construct image f f")


@pytest.fixture
def wfile(tmp_path):
    p = tmp_path / "w.pl"
    p.write_text(WORKSPACE)
    return str(p)


def test_cli_check(wfile, capsys):
    assert main(["check", wfile]) == 0
    assert "ok: 10 bindings" in capsys.readouterr().out


def test_cli_check_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.pl"
    p.write_text("set A = 1;\nset B = 2;\nmap f : A -> B = [5];\n")
    assert main(["check", str(p)]) == 2
    assert "3:19" in capsys.readouterr().err


def test_cli_run_pass_and_fail(wfile, capsys):
    assert main(["run", wfile, "--cmd", "verify effectiveness S"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["kind"] == "effectiveness"
    assert main(["run", wfile, "--cmd", "verify mono f"]) == 1
    d = json.loads(capsys.readouterr().out)
    assert d["passed"] is False and d["witnesses"]["counterexample"] == {"x": 0, "y": 1, "value": 0}
    assert main(["run", wfile, "--cmd", "verify mono h", "--cmd", "verify mono idB"]) == 1
    assert len(json.loads(capsys.readouterr().out)) == 2


def test_cli_usage_errors(wfile):
    assert main(["run", wfile, "--cmd", "verify bogus f"]) == 2
    with pytest.raises(SystemExit) as err:
        main(["verify", "nope"])
    assert err.value.code == 2


def test_cli_cap_exceeded(wfile, monkeypatch):
    monkeypatch.setenv("PRETOPOS_CAP", "10")
    assert main(["run", wfile, "--cmd", "verify subobject-classifier A"]) == 0
    assert main(["run", wfile, "--cmd", "verify currying A A A"]) == 3


def test_cli_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("set A = 2;\n"))
    assert main(["check", "-"]) == 0


def test_cli_verify_json_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "piw", "--max-size", "2", "--seed", "4", "--json", str(a)]) == 0
    assert main(["verify", "piw", "--max-size", "2", "--seed", "4", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    assert d["seed"] == 4 and d["passed"]


def test_console_script_installed(wfile):
    out = subprocess.run(["pretopos-lab", "check", wfile], capture_output=True, text=True)
    assert out.returncode == 0
