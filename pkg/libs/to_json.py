"""
libs.to_json

Conversion des résultats (grille de k, trace avant, évaluation) en documents JSON
et en tables CSV pour les courbes MI / seuil par itération.

"""
import math

import pandas as pd

from libs.dataset import Dataset, summary
from libs.forward import ForwardIteration, ForwardTrace, max_mi_subset
from libs.knn_regressor import EvalReport
from libs.resampling import MIDistribution
from libs.tuner import KSelection
from settings.constants import VERSION


def _number(value: float) -> float | str:
    """JSON strict : les infinis sont écrits en texte."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(value)


def distribution_to_document(dist: MIDistribution) -> dict:
    return {"samples": list(dist.samples), "mean": dist.mean, "variance": dist.variance}


def kselection_to_document(selection: KSelection, data: Dataset, config: dict) -> dict:
    return {
        "version": VERSION,
        "config": config,
        "dataset": summary(data),
        "k_star": selection.k_star,
        "argmax_feature": selection.argmax_feature,
        "argmax_feature_name": data.names[selection.argmax_feature],
        "t_max": _number(selection.t_max),
        "k_values": list(selection.k_values),
        "t_grid": [[_number(t) for t in row] for row in selection.t_grid],
        "means": selection.means.tolist(),
        "variances": selection.variances.tolist(),
        "null_means": selection.null_means.tolist(),
        "null_variances": selection.null_variances.tolist(),
        "standardized": config.get("standardize", True),
    }


def kselection_to_frame(selection: KSelection, data: Dataset) -> pd.DataFrame:
    rows = []
    for i, name in enumerate(data.names):
        for j, k in enumerate(selection.k_values):
            rows.append({
                "feature": name,
                "k": k,
                "t": selection.t_grid[i, j],
                "mean": selection.means[i, j],
                "variance": selection.variances[i, j],
                "null_mean": selection.null_means[i, j],
                "null_variance": selection.null_variances[i, j],
            })
    return pd.DataFrame(rows)


def iteration_to_document(iteration: ForwardIteration, names) -> dict:
    return {
        "chosen": iteration.chosen,
        "chosen_name": names[iteration.chosen],
        "chosen_mi": iteration.chosen_mi,
        "threshold": iteration.threshold,
        "p_value": {
            "p": iteration.p_value.p,
            "ci_low": iteration.p_value.ci_low,
            "ci_high": iteration.p_value.ci_high,
            "n_permutations": iteration.p_value.n_permutations,
        },
        "accepted": iteration.accepted,
        "candidate_scores": {names[j]: score for j, score in iteration.candidate_scores.items()},
        "null_distribution": distribution_to_document(iteration.null_distribution),
    }


def trace_to_document(trace: ForwardTrace, data: Dataset, config: dict) -> dict:
    names = data.names
    return {
        "version": VERSION,
        "config": config,
        "dataset": summary(data),
        "k": trace.k,
        "alpha": trace.alpha,
        "permutations": trace.permutations,
        "selected": trace.selected,
        "selected_names": [names[j] for j in trace.selected],
        "peak_subset": [names[j] for j in max_mi_subset(trace)] if trace.path else [],
        # pic calculé sur un chemin coupé à l'arrêt (sans --extend-path)
        "peak_truncated": not trace.path_complete,
        "stop_reason": trace.stop_reason.value if trace.stop_reason else None,
        "mi_evaluations": trace.mi_evaluations,
        "iterations": [iteration_to_document(it, names) for it in trace.iterations],
        "extension": [iteration_to_document(it, names) for it in trace.extension],
    }


def trace_to_frame(trace: ForwardTrace, data: Dataset) -> pd.DataFrame:
    """Une ligne par itération (chemin prolongé compris)."""
    rows = []
    for t, iteration in enumerate(trace.path, start=1):
        rows.append({
            "iteration": t,
            "feature": data.names[iteration.chosen],
            "mi": iteration.chosen_mi,
            "threshold": iteration.threshold,
            "p_value": iteration.p_value.p,
            "accepted": iteration.accepted,
            "decision": t <= len(trace.iterations),
        })
    return pd.DataFrame(rows, columns=["iteration", "feature", "mi", "threshold", "p_value", "accepted", "decision"])


def report_to_document(report: EvalReport, data: Dataset, config: dict) -> dict:
    return {
        "version": VERSION,
        "config": config,
        "feature_subset": list(report.feature_subset),
        "feature_names": [data.names[j] for j in report.feature_subset],
        "rmse": report.rmse,
        "k_reg": report.k_reg,
        "n_train": report.n_train,
        "n_test": report.n_test,
    }
