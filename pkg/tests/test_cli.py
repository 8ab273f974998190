import csv
import io
import subprocess
import sys

import pytest

from rbtcode.cli import main
from rbtcode.storage_sim import chunk_path, load_chunk


@pytest.fixture
def nine_bytes(tmp_path):
    f = tmp_path / "in.bin"
    f.write_bytes(b"repairBT!")
    return f


@pytest.fixture
def encoded(tmp_path, nine_bytes):
    out = tmp_path / "chunks"
    assert main(["encode", str(nine_bytes), "--n", "5", "--k", "3", "--out", str(out)]) == 0
    return out


def test_encode_worked_example(encoded):
    for node in range(5):
        ch = load_chunk(chunk_path(encoded, node))
        assert ch.symbol_count == 4
    assert (encoded / "manifest.txt").read_text().splitlines()[:4] == ["n=5", "k=3", "d=4", "m=8"]


def test_encode_missing_input(tmp_path):
    assert main(["encode", str(tmp_path / "nope"), "--n", "5", "--k", "3", "--out", str(tmp_path / "o")]) == 1


def test_encode_k1_rejected(tmp_path, nine_bytes, capsys):
    assert main(["encode", str(nine_bytes), "--n", "5", "--k", "1", "--out", str(tmp_path / "o")]) == 2
    assert "1 < k <= d" in capsys.readouterr().err


def test_reconstruct_subset_and_all(tmp_path, encoded, nine_bytes):
    out = tmp_path / "r.bin"
    assert main(["reconstruct", str(encoded), "--nodes", "1,2,3", "--out", str(out)]) == 0
    assert out.read_bytes() == nine_bytes.read_bytes()
    assert main(["reconstruct", str(encoded), "--out", str(out)]) == 0
    assert out.read_bytes() == nine_bytes.read_bytes()


def test_reconstruct_too_few(tmp_path, encoded, capsys):
    for node in (0, 1, 2):
        chunk_path(encoded, node).unlink()
    assert main(["reconstruct", str(encoded), "--out", str(tmp_path / "r")]) == 1
    assert "short by 1" in capsys.readouterr().err


def test_repair_restores_deleted_chunk(encoded, capsys):
    path = chunk_path(encoded, 2)
    before = path.read_bytes()
    path.unlink()
    assert main(["repair", str(encoded), "--node", "2"]) == 0
    assert path.read_bytes() == before
    assert "0 arithmetic ops, 4x1 = 4 symbols moved" in capsys.readouterr().out


def test_repair_missing_survivor(encoded):
    chunk_path(encoded, 2).unlink()
    chunk_path(encoded, 4).unlink()
    assert main(["repair", str(encoded), "--node", "2"]) == 1


def test_repair_every_node_in_turn(tmp_path, encoded):
    initial = {x: chunk_path(encoded, x).read_bytes() for x in range(5)}
    for node in range(5):
        chunk_path(encoded, node).unlink()
        assert main(["repair", str(encoded), "--node", str(node)]) == 0
    assert {x: chunk_path(encoded, x).read_bytes() for x in range(5)} == initial


def _tradeoff(tmp_path, *extra):
    out = tmp_path / "t.csv"
    args = ["tradeoff", "--k", "10", "--d", "18", "--B", "27000", "--samples", "10", "--out", str(out), *extra]
    assert main(args) == 0
    return list(csv.DictReader(io.StringIO(out.read_text())))


def test_tradeoff_rows(tmp_path):
    rows = _tradeoff(tmp_path, "--point", "3300:204")
    assert list(rows[0]) == ["alpha", "beta", "dbeta_cutset", "dbeta_spaceshare", "p", "theta", "verdict"]
    by_alpha = {r["alpha"]: r for r in rows[:10]}
    assert by_alpha["2700"]["dbeta_cutset"] == "5400"
    assert by_alpha["2700"]["verdict"] == "ACHIEVABLE_MSR_KNOWN"
    assert by_alpha["3600"]["dbeta_cutset"] == "3600"
    assert by_alpha["3600"]["verdict"] == "ACHIEVABLE_MBR"
    last = rows[-1]
    assert (last["alpha"], last["beta"], last["p"], last["theta"], last["verdict"]) == (
        "3300", "204", "1", "168", "INFEASIBLE_THM7",
    )


def test_tradeoff_invalid(tmp_path):
    assert main(["tradeoff", "--k", "10", "--d", "9", "--B", "27000"]) == 2
    assert main(["tradeoff", "--k", "10", "--d", "18", "--B", "27000", "--point", "5000:200"]) == 2
    assert main(["tradeoff", "--k", "10", "--d", "18", "--B", "27000", "--point", "junk"]) == 2


@pytest.mark.parametrize("n,k", [(5, 3), (8, 6)])
def test_verify_passes(n, k, capsys):
    assert main(["verify", "--n", str(n), "--k", str(k)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "PASS node-entropy" in out


def test_verify_fault_injection(capsys):
    assert main(["verify", "--n", "5", "--k", "3", "--inject-fault"]) == 1
    assert "FAIL node-entropy" in capsys.readouterr().out


def test_simulate(tmp_path, capsys):
    out = tmp_path / "ledger.csv"
    assert main(["simulate", "--n", "5", "--k", "3", "--seed", "4", "--failures", "10", "--out", str(out)]) == 0
    summary = capsys.readouterr().out
    assert "repair moved 40 symbols vs baseline 90 (savings 55.56%" in summary
    rows = [r for r in csv.DictReader(l for l in out.read_text().splitlines() if not l.startswith("#"))]
    repairs = [r for r in rows if r["type"] == "repair"]
    assert len(repairs) == 10
    assert all((r["symbols_moved"], r["baseline_symbols"]) == ("4", "9") for r in repairs)


def test_simulate_zero_failures(tmp_path):
    out = tmp_path / "ledger.csv"
    assert main(["simulate", "--n", "5", "--k", "3", "--failures", "0", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1:] == ["event,type,node,helpers,symbols_moved,baseline_symbols"]


def test_simulate_repeated_seed(tmp_path, nine_bytes):
    outs = []
    for i in range(2):
        out = tmp_path / f"l{i}.csv"
        assert main(["simulate", "--n", "6", "--k", "3", "--seed", "11", "--failures", "25",
                     "--file", str(nine_bytes), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rbtcode", "tradeoff", "--k", "2", "--d", "3", "--B", "5",
                          "--samples", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0].startswith("alpha,beta")


def test_usage_error_exit_code():
    res = subprocess.run([sys.executable, "-m", "rbtcode", "encode"], capture_output=True, text=True)
    assert res.returncode == 2
