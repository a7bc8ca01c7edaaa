import io
import json

import pytest

from wcgame.certificate import StrategyCertificate
from wcgame.cli import OK, REFUTED, UNKNOWN, USAGE, main
from wcgame.formats import load_instance, save_instance
from wcgame.game import Transcript


@pytest.fixture()
def g2_file(tmp_path):
    path = tmp_path / "g2.json"
    assert main(["construct", "--family", "gq", "--q", "2", "--out", str(path)]) == OK
    return path


@pytest.fixture()
def small_file(tmp_path):
    from wcgame.enumeration import enumerate_decomposable
    path = tmp_path / "n5.json"
    save_instance(enumerate_decomposable(5, 1)[0], path)
    return path


def test_construct_then_check(g2_file, tmp_path, capsys):
    assert main(["check", str(g2_file)]) == OK
    assert "ok: n=9 q=2 edges=24 trees=3" in capsys.readouterr().out
    dot = tmp_path / "g.dot"
    assert main(["construct", "--n", "13", "--q", "3", "--out", str(tmp_path / "g.json"),
                 "--dot", str(dot)]) == OK
    assert dot.read_text().startswith("graph")
    assert main(["check", str(tmp_path / "g.json")]) == OK


def test_check_reports_invalid_instance(g2_file, capsys):
    data = json.loads(g2_file.read_text())
    data["trees"][0], data["trees"][1] = data["trees"][1][:-1], data["trees"][1] + data["trees"][0][-1:]
    g2_file.write_text(json.dumps(data))
    assert main(["check", str(g2_file)]) == REFUTED
    assert "invalid" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["construct", "--q", "2", "--family", "gnq"],
    ["construct", "--n", "10", "--q", "1"],
    ["construct", "--n", "12", "--q", "2", "--family", "gq"],
    ["check", "/nonexistent/inst.json"],
    ["enumerate", "--n", "10"],
])
def test_usage_errors(argv, capsys):
    # argparse failures exit; precondition failures return
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == USAGE
    assert "error" in capsys.readouterr().err


def test_verify_strategy_exit_codes(g2_file, tmp_path, capsys):
    assert main(["verify-strategy", str(g2_file), "--strategy", "lemma2"]) == OK
    out = tmp_path / "ce.txt"
    assert main(["verify-strategy", str(g2_file), "--strategy", "lowest", "--out", str(out)]) == REFUTED
    transcript = Transcript.from_text(out.read_text())
    assert len(transcript.rounds) == 8
    assert main(["replay", str(g2_file), str(out)]) == OK
    assert "winner: Waiter" in capsys.readouterr().out


def test_solve_budget_is_unknown(g2_file, capsys):
    assert main(["solve", str(g2_file), "--budget", "0.001"]) == UNKNOWN
    assert json.loads(capsys.readouterr().out)["unknown"] is True


def test_solve_outputs_are_byte_identical(small_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["solve", str(small_file), "--out", str(out)]) == OK
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["winner"] == "Waiter"
    assert "elapsed_ms" in json.loads((tmp_path / "a.json.log").read_text())


def test_certificate_written_and_replayed(small_file, tmp_path, capsys):
    cert = tmp_path / "cert.jsonl"
    assert main(["solve", str(small_file), "--cert", str(cert)]) == OK
    assert StrategyCertificate.load(cert).side.value == "Waiter"
    assert main(["replay", str(small_file), str(cert)]) == OK
    assert "certificate holds" in capsys.readouterr().out
    # the certificate is bound to its instance
    other = tmp_path / "g2.json"
    main(["construct", "--q", "2", "--out", str(other)])
    assert main(["replay", str(other), str(cert)]) == REFUTED


def test_enumerate_writes_loadable_instances(tmp_path, capsys):
    assert main(["enumerate", "--n", "6", "--q", "1", "--out", str(tmp_path / "boards")]) == OK
    report = json.loads(capsys.readouterr().out)
    files = sorted((tmp_path / "boards").glob("*.json"))
    assert report["count"] == len(files) > 0
    for f in files:
        assert load_instance(f).n == 6


def test_verify_remark_outputs(tmp_path, capsys):
    out, certs = tmp_path / "remark.json", tmp_path / "certs"
    assert main(["verify-remark", "--n", "7", "--out", str(out), "--certs", str(certs)]) == OK
    report = json.loads(out.read_text())
    assert report["conclusion"].startswith("verified")
    first = out.read_bytes()
    assert main(["verify-remark", "--n", "7", "--out", str(out)]) == OK
    assert out.read_bytes() == first
    assert len(list(certs.glob("*.jsonl"))) == 5
    assert main(["verify-remark", "--n", "7", "--budget", "0.001"]) == UNKNOWN


def test_play_as_waiter_against_lemma2(g2_file, monkeypatch, capsys):
    offers = [f"offer {3 * i} {3 * i + 1} {3 * i + 2}" for i in range(8)]
    script = "\n".join(["show", "offer 0 1", "bogus"] + offers) + "\n"
    monkeypatch.setattr("sys.stdin", io.StringIO(script))
    assert main(["play", str(g2_file), "--as", "waiter", "--opponent", "lemma2"]) == OK
    out = capsys.readouterr().out
    assert "free edges:" in out and "illegal" in out and "unknown command" in out
    assert "game over: Client wins" in out


def test_play_as_client_quits(small_file, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("show\nchoose 99\nquit\n"))
    assert main(["play", str(small_file), "--as", "client", "--opponent", "heuristic"]) == OK
    out = capsys.readouterr().out
    assert "Waiter offers" in out and "illegal" in out


def test_play_rejects_mismatched_opponent(small_file, capsys):
    assert main(["play", str(small_file), "--as", "client", "--opponent", "lemma2"]) == USAGE
