"""
services.simulation_service

Études sur données synthétiques (problème de Friedman modifié) :
- répétition complète choix de k + sélection avant, comparaison arrêt par
  permutation / pic de MI (tailles, variables informatives ou non)
- profil de l'estimateur en fonction de k (moyenne, percentiles 1 % et 99 %)

"""
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from libs.dataset import friedman_generate
from libs.estimator import MIQuery, estimate_mi
from libs.forward import forward_select, trace_summary
from libs.tuner import select_k
from libs.utils import make_rng, parallel_map
from settings.constants import FRIEDMAN_INFORMATIVE
from settings.run_config import RunConfig


@dataclass
class StudyReport:
    replicates: int
    n: int
    k_stars: list[int] = field(default_factory=list)
    runs: list[dict] = field(default_factory=list)

    def histogram(self, strategy: str, key: str) -> dict[int, int]:
        counts = Counter(run[strategy][key] for run in self.runs)
        return {value: counts[value] for value in sorted(counts)}

    def share(self, predicate) -> float:
        return sum(1 for run in self.runs if predicate(run)) / len(self.runs) if self.runs else 0.0

    def to_document(self, config: dict) -> dict:
        return {
            "config": config,
            "replicates": self.replicates,
            "n": self.n,
            "k_star_histogram": {k: v for k, v in sorted(Counter(self.k_stars).items())},
            "stopping": {key: self.histogram("stopping", key) for key in ("size", "informative", "uninformative")},
            "peak": {key: self.histogram("peak", key) for key in ("size", "informative", "uninformative")},
            "stopping_larger_than_peak": self.share(lambda r: r["stopping"]["size"] > r["peak"]["size"]),
            "stopping_all_informative": self.share(lambda r: r["stopping"]["informative"] == len(FRIEDMAN_INFORMATIVE)),
            "peak_all_informative": self.share(lambda r: r["peak"]["informative"] == len(FRIEDMAN_INFORMATIVE)),
            "runs": self.runs,
        }


def _one_replicate(stream: np.random.Generator, n: int, config: RunConfig) -> dict:
    data_rng, tune_rng, select_rng = stream.spawn(3)
    data = friedman_generate(n, data_rng)
    selection = select_k(data, (config.k_min, config.k_max), config.folds, tune_rng,
                         standardize=config.standardize)
    trace = forward_select(data, selection.k_star, config.alpha, config.permutations, None, select_rng,
                           standardize=config.standardize, extend_path=True)
    summary = trace_summary(trace, FRIEDMAN_INFORMATIVE)
    summary["k_star"] = selection.k_star
    summary["selected"] = list(trace.selected)
    summary["mi_evaluations"] = trace.mi_evaluations
    return summary


def run_friedman_study(replicates: int, n: int, config: RunConfig) -> StudyReport:
    """Une réplique par sous-flux de la graine ; les répliques tournent en parallèle."""
    streams = make_rng(config.seed).spawn(replicates)
    print(f">> [INFO] {replicates} répliques de Friedman (n={n}), k dans [{config.k_min}, {config.k_max}]")
    runs = parallel_map(lambda s: _one_replicate(s, n, config), streams, config.threads)
    report = StudyReport(replicates, n)
    for run in runs:
        report.k_stars.append(run.pop("k_star"))
        report.runs.append(run)
    return report


def print_study_report(report: StudyReport) -> None:
    for key, title in (("size", "Nombre de variables"),
                       ("informative", "Variables informatives"),
                       ("uninformative", "Variables non informatives")):
        print(f"\n  {title}")
        for strategy, label in (("peak", "Pic de MI"), ("stopping", "Arrêt par permutation")):
            histogram = report.histogram(strategy, key)
            cells = "  ".join(f"{value}: {count}" for value, count in histogram.items())
            print(f"    {label: <22} {cells}")
    larger = report.share(lambda r: r["stopping"]["size"] > r["peak"]["size"])
    print(f"\n  Arrêt plus grand que le pic : {larger:.0%} des répliques\n")


def estimator_k_profile(
    replicates: int,
    n: int,
    features: list[int],
    k_values: list[int],
    seed: int,
    n_jobs: int = 1,
    standardize: bool = True,
) -> pd.DataFrame:
    """MI(X_i ; Y) sur des jeux répétés : moyenne et percentiles 1 % / 99 % par (variable, k)."""
    streams = make_rng(seed).spawn(replicates)

    def one_dataset(stream):
        data = friedman_generate(n, stream)
        return [[estimate_mi(data, None, MIQuery((i,), k), standardize).value for k in k_values] for i in features]

    values = np.asarray(parallel_map(one_dataset, streams, n_jobs))  # (R, features, k)
    rows = []
    for a, i in enumerate(features):
        for b, k in enumerate(k_values):
            sample = values[:, a, b]
            rows.append({
                "feature": f"X{i + 1}",
                "k": k,
                "mean": float(sample.mean()),
                "q01": float(np.quantile(sample, 0.01)),
                "q99": float(np.quantile(sample, 0.99)),
            })
    return pd.DataFrame(rows)
