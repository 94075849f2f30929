# Discrepancy package initialization
from src.discrepancy.bounds import cassels_check, chord_constant, lattice_count, tail_bound
from src.discrepancy.budget import body_for_sigma, budget_partition, classify
from src.discrepancy.counting import count_in, count_many, wrap
from src.discrepancy.models import DiscrepancyEstimate, LambdaRange, TruncationPolicy, body_reach
from src.discrepancy.montecarlo import mc_discrepancy
from src.discrepancy.parseval import DilationAverager, half_plane_annulus, parseval_discrepancy

__all__ = [
    "LambdaRange", "TruncationPolicy", "DiscrepancyEstimate", "body_reach",
    "count_in", "count_many", "wrap",
    "mc_discrepancy", "parseval_discrepancy", "DilationAverager", "half_plane_annulus",
    "tail_bound", "chord_constant", "cassels_check", "lattice_count",
    "budget_partition", "body_for_sigma", "classify",
]
