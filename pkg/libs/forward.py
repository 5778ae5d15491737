"""
libs.forward

Sélection avant gloutonne guidée par MI(S u {X_j} ; Y), arrêtée par un test de
permutation : la meilleure candidate X* n'est acceptée que si son MI dépasse le
percentile (1 - alpha) de la distribution de MI(S u {X*^pi} ; Y).

Coût : l'itération t coûte d - t + 1 estimations (candidates) + P (permutations).
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from libs.dataset import Dataset
from libs.errors import UsageError
from libs.estimator import MIQuery, estimate_mi
from libs.resampling import MIDistribution, PValueResult, p_value, percentile, permutation_null
from libs.utils import parallel_map, spawn_rngs
from settings.constants import ALPHA, MIN_PERMUTATIONS, PERMUTATIONS


class StopReason(str, Enum):
    THRESHOLD_FAILED = "threshold_failed"
    MAX_FEATURES_REACHED = "max_features_reached"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class ForwardIteration:
    candidate_scores: dict[int, float]
    chosen: int
    chosen_mi: float
    threshold: float
    p_value: PValueResult
    accepted: bool
    null_distribution: MIDistribution


@dataclass
class ForwardTrace:
    d: int
    k: int
    alpha: float
    permutations: int
    max_features: int | None
    iterations: list[ForwardIteration] = field(default_factory=list)
    selected: list[int] = field(default_factory=list)
    stop_reason: StopReason | None = None
    mi_evaluations: int = 0
    # chemin glouton prolongé après la décision d'arrêt (extend_path)
    extension: list[ForwardIteration] = field(default_factory=list)

    @property
    def path(self) -> list[ForwardIteration]:
        return self.iterations + self.extension

    @property
    def path_complete(self) -> bool:
        """Chemin glouton mené jusqu'à max_features (ou d) ; faux s'il a été coupé à l'arrêt."""
        limit = self.d if self.max_features is None else self.max_features
        return len(self.path) >= limit

    def expected_evaluations(self) -> int:
        """Somme sur les itérations effectuées de (d - t + 1 + P)."""
        return sum(self.d - t + 1 + self.permutations for t in range(1, len(self.path) + 1))


def _best_candidate(scores: dict[int, float]) -> int:
    """Plus grand MI ; à égalité le plus petit indice."""
    return min(scores, key=lambda j: (-scores[j], j))


def forward_select(
    data: Dataset,
    k: int,
    alpha: float = ALPHA,
    P: int = PERMUTATIONS,
    max_features: int | None = None,
    rng: np.random.Generator | None = None,
    n_jobs: int = 1,
    standardize: bool = True,
    extend_path: bool = False,
) -> ForwardTrace:
    if rng is None:
        raise UsageError("Un générateur aléatoire est requis")
    if not 0.0 < alpha < 1.0:
        raise UsageError(f"alpha={alpha} hors de (0, 1)")
    if P < MIN_PERMUTATIONS:
        raise UsageError(f"P={P} : au moins {MIN_PERMUTATIONS} permutations requises")
    if k < 1 or k >= data.n:
        raise UsageError(f"k={k} : 1 <= k < n={data.n} requis")
    if max_features is not None and not 1 <= max_features <= data.d:
        raise UsageError(f"max_features={max_features} hors de [1, {data.d}]")

    limit = data.d if max_features is None else max_features
    trace = ForwardTrace(data.d, k, alpha, P, max_features)
    path: list[int] = []
    stopped = False

    while True:
        remaining = [j for j in range(data.d) if j not in path]
        if not remaining:
            if not stopped:
                trace.stop_reason = StopReason.EXHAUSTED
            break
        if len(path) >= limit:
            if not stopped:
                trace.stop_reason = (
                    StopReason.EXHAUSTED if max_features is None else StopReason.MAX_FEATURES_REACHED
                )
            break

        iteration_rng = spawn_rngs(rng, 1)[0]

        def score(j: int) -> float:
            return estimate_mi(data, None, MIQuery(tuple(path + [j]), k), standardize).value

        scores = dict(zip(remaining, parallel_map(score, remaining, n_jobs)))
        chosen = _best_candidate(scores)
        null = permutation_null(data, path, chosen, k, P, iteration_rng, n_jobs, standardize)
        trace.mi_evaluations += len(remaining) + P

        threshold = percentile(null, 1.0 - alpha)
        iteration = ForwardIteration(
            candidate_scores=scores,
            chosen=chosen,
            chosen_mi=scores[chosen],
            threshold=threshold,
            p_value=p_value(scores[chosen], null),
            accepted=scores[chosen] > threshold,
            null_distribution=null,
        )

        if stopped:
            trace.extension.append(iteration)
        else:
            trace.iterations.append(iteration)
            if iteration.accepted:
                trace.selected.append(chosen)
            else:
                trace.stop_reason = StopReason.THRESHOLD_FAILED
                stopped = True
                if not extend_path:
                    break
        path.append(chosen)

    return trace


def max_mi_subset(trace: ForwardTrace) -> list[int]:
    """Stratégie du pic : préfixe du chemin glouton où le MI est maximal (le plus court à égalité)."""
    path = trace.path
    if not path:
        raise UsageError("Trace vide")
    values = [it.chosen_mi for it in path]
    best = int(np.argmax(values))
    return [it.chosen for it in path[: best + 1]]


def trace_summary(trace: ForwardTrace, informative) -> dict[str, dict[str, int]]:
    """Nombre de variables, informatives et non informatives, pour l'arrêt et pour le pic."""
    informative = set(informative)
    summary = {}
    for name, subset in (("stopping", trace.selected), ("peak", max_mi_subset(trace))):
        relevant = sum(1 for j in subset if j in informative)
        summary[name] = {
            "size": len(subset),
            "informative": relevant,
            "uninformative": len(subset) - relevant,
        }
    return summary
