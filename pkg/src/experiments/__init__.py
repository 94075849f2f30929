# Experiments package initialization
from src.experiments.fitting import fit_loglog
from src.experiments.lemmas import chord_asymptotics, chord_formula, lemma_g_roots, lemma_g_scan
from src.experiments.models import ExperimentConfig, ScalingReport, exponent_for
from src.experiments.runner import ExperimentRunner, run_experiment
from src.experiments.scaling import (budget_experiment, lower_envelope_check, points_for, scaling_experiment,
                                     summarize_envelope, summarize_scaling)

__all__ = [
    "ExperimentConfig", "ScalingReport", "ExperimentRunner",
    "fit_loglog", "exponent_for", "points_for",
    "scaling_experiment", "lower_envelope_check", "budget_experiment", "run_experiment",
    "summarize_scaling", "summarize_envelope",
    "lemma_g_roots", "lemma_g_scan", "chord_asymptotics", "chord_formula",
]
