"""Exact laboratory for the Waiter-Client connectivity game on unions of q+1 spanning trees."""
from .construct import build_gnq, build_gq
from .enumeration import enumerate_decomposable, verify_remark
from .game import GameState, Pruning, Side, Transcript, apply_round, client_cut, new_game, offer_classes, replay
from .graph import Decomposition, Graph, Instance, verify_instance
from .packing import decompose_complete, tree_packing
from .solver import SolveConfig, SolveResult, extract_certificate, solve, verify_client_strategy
from .strategy import AnchorReduction, Lemma2Strategy, heuristic_waiter, lemma2_strategy, optimal_strategy

__all__ = [
    "build_gnq", "build_gq", "enumerate_decomposable", "verify_remark",
    "GameState", "Pruning", "Side", "Transcript", "apply_round", "client_cut", "new_game",
    "offer_classes", "replay", "Decomposition", "Graph", "Instance", "verify_instance",
    "decompose_complete", "tree_packing", "SolveConfig", "SolveResult", "extract_certificate",
    "solve", "verify_client_strategy", "AnchorReduction", "Lemma2Strategy", "heuristic_waiter",
    "lemma2_strategy", "optimal_strategy",
]

__version__ = "0.1.0"
