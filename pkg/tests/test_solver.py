import random

import pytest

from wcgame.certificate import CertificateError, StrategyCertificate, replay_certificate
from wcgame.enumeration import enumerate_decomposable
from wcgame.formats import instance_hash
from wcgame.game import GameError, Pruning, Side, apply_round, new_game
from wcgame.solver import SolveConfig, Solver, extract_certificate, solve
from wcgame.strategy import Lemma2Strategy

from oracles import game_value


def test_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(capacity=0)
    with pytest.raises(ValueError):
        SolveConfig(budget=-1)
    with pytest.raises(ValueError):
        SolveConfig(workers=0)
    with pytest.raises(ValueError):
        SolveConfig(table_key="nope")
    assert SolveConfig(pruning="obs1").pruning is Pruning.OBS1


@pytest.mark.parametrize("n", [4, 5])
def test_two_tree_boards_match_raw_oracle(n):
    for inst in enumerate_decomposable(n, 1):
        expected = Side.WAITER if game_value(inst.n, inst.graph.edges, inst.q) else Side.CLIENT
        for pruning in Pruning:
            assert solve(new_game(inst), SolveConfig(pruning=pruning)).winner is expected


def test_random_six_vertex_boards_agree_across_configurations():
    rng = random.Random(8)
    boards = enumerate_decomposable(6, 1)
    for inst in rng.sample(boards, 6):
        verdicts = set()
        for pruning in Pruning:
            for key in ("position", "quotient", "iso"):
                verdicts.add(solve(new_game(inst), SolveConfig(pruning=pruning, table_key=key)).winner)
        verdicts.add(solve(new_game(inst), SolveConfig(pruning=Pruning.NONE, cuts=False,
                                                       table_key="position")).winner)
        assert len(verdicts) == 1


def test_workers_agree(boundary7):
    inst = boundary7[0]
    one = solve(new_game(inst), SolveConfig(pruning=Pruning.OBS1))
    two = solve(new_game(inst), SolveConfig(pruning=Pruning.OBS1, workers=2))
    assert one.winner is two.winner is Side.WAITER


def test_budget_gives_unknown(gq2):
    res = solve(new_game(gq2), SolveConfig(pruning=Pruning.OBS1, budget=0.001))
    assert res.unknown and res.winner is None
    assert res.report()["unknown"] is True


def test_small_capacity_still_correct(boundary7):
    inst = boundary7[1]
    assert solve(new_game(inst), SolveConfig(pruning=Pruning.BUNDLE, capacity=50)).winner is Side.WAITER


def test_report_keys(boundary7):
    rep = solve(new_game(boundary7[0])).report()
    assert set(rep) == {"winner", "nodes", "table_hits", "elapsed_ms", "pruning", "unknown"}


def test_waiter_certificate_roundtrip(boundary7, tmp_path):
    inst = boundary7[2]
    res = solve(new_game(inst), SolveConfig(pruning=Pruning.OBS1, retain_certificate=True))
    cert = extract_certificate(res, Side.WAITER)
    assert replay_certificate(inst, cert, instance_hash(inst)) > 0
    path = tmp_path / "cert.jsonl"
    cert.save(path)
    back = StrategyCertificate.load(path)
    assert back.moves == cert.moves and back.side is Side.WAITER
    assert replay_certificate(inst, back) > 0


def test_tampered_certificate_reports_missing_key(boundary7):
    inst = boundary7[0]
    res = solve(new_game(inst), SolveConfig(retain_certificate=True))
    cert = extract_certificate(res, "Waiter")
    deep = max(cert.moves, key=lambda key: -key[0].bit_count())
    del cert.moves[deep]
    with pytest.raises(CertificateError, match="missing key"):
        replay_certificate(inst, cert)


def test_wrong_certificate_rejected(boundary7):
    inst = boundary7[0]
    res = solve(new_game(inst), SolveConfig(retain_certificate=True))
    with pytest.raises(CertificateError, match="bound to instance"):
        replay_certificate(inst, res.certificate, expected_hash="0" * 16)


def test_loser_certificate_is_an_error(boundary7):
    res = solve(new_game(boundary7[0]), SolveConfig(retain_certificate=True))
    with pytest.raises(GameError, match="lost"):
        extract_certificate(res, Side.CLIENT)
    bare = solve(new_game(boundary7[0]))
    with pytest.raises(GameError, match="not retained"):
        extract_certificate(bare, Side.WAITER)


def test_client_certificate_from_midgame(gq2):
    # two rounds of Lemma 2 play against random offers leave Client winning
    strat = Lemma2Strategy(gq2)
    rng = random.Random(0)
    s = new_game(gq2)
    for _ in range(2):
        offer = tuple(sorted(rng.sample(s.free_edges, 3)))
        s = apply_round(s, offer, strat.choose(s, offer))
    solver = Solver(gq2, SolveConfig(pruning=Pruning.OBS1))
    assert not solver.waiter_wins(s.free, s.lab)
    cert = solver.extract(s, Side.CLIENT)
    assert len(cert) > 0
    assert replay_certificate(gq2, cert) > 0
