"""
libs.tuner

Choix du nombre de voisins k* : pour chaque variable i et chaque k, on compare la
distribution K-fold de MI(X_i ; Y) à celle de MI(X_i^pi ; Y) (X_i permutée à chaque
groupe) par t = (mu - mu_pi) / sqrt(s2 + s2_pi). k* est la colonne du maximum de la
grille ; les variables inutiles ne gagnent donc jamais le choix.
"""
import math
from dataclasses import dataclass

import numpy as np

from libs.dataset import Dataset
from libs.errors import UsageError
from libs.estimator import MIQuery, estimate_mi, mi_from_arrays
from libs.resampling import MIDistribution, kfold_partition, permute_column
from libs.utils import parallel_map, spawn_rngs
from settings.constants import FOLDS


@dataclass(frozen=True)
class KSelection:
    k_values: tuple[int, ...]
    t_grid: np.ndarray        # (d, len(k_values))
    means: np.ndarray         # mu
    variances: np.ndarray     # s2
    null_means: np.ndarray    # mu_pi
    null_variances: np.ndarray
    k_star: int
    argmax_feature: int
    folds: int

    @property
    def t_max(self) -> float:
        return float(self.t_grid[self.argmax_feature, self.k_values.index(self.k_star)])


def separation_statistic(dist: MIDistribution, null_dist: MIDistribution) -> float:
    return _separation(dist.mean, dist.variance, null_dist.mean, null_dist.variance)


def _separation(mean: float, variance: float, null_mean: float, null_variance: float) -> float:
    """Deux distributions constantes : +/-inf si les moyennes diffèrent, 0 sinon."""
    spread = variance + null_variance
    diff = mean - null_mean
    if spread == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return diff / math.sqrt(spread)


def _grid_argmax(t_grid: np.ndarray, k_values: tuple[int, ...]) -> tuple[int, int]:
    """Maximum de la grille ; à égalité le plus petit k, puis la plus petite variable."""
    best = (0, 0)
    for j in range(len(k_values)):
        for i in range(t_grid.shape[0]):
            if t_grid[i, j] > t_grid[best]:
                best = (i, j)
    return best


def select_k(
    data: Dataset,
    k_range: tuple[int, int],
    K: int = FOLDS,
    rng: np.random.Generator | None = None,
    n_jobs: int = 1,
    standardize: bool = True,
) -> KSelection:
    """
    Grille t_{i,k} sur toutes les variables et k dans [k_min, k_max].
    Une même partition K-fold par variable pour tous les k ; une permutation
    fraîche de X_i par groupe et par k.
    """
    if rng is None:
        raise UsageError("Un générateur aléatoire est requis")
    k_min, k_max = (int(v) for v in k_range)
    if k_min < 1 or k_min > k_max:
        raise UsageError(f"Plage de k invalide [{k_min}, {k_max}]")
    if K < 2 or K > data.n:
        raise UsageError(f"K={K} : 2 <= K <= n={data.n} requis")
    smallest = data.n - math.ceil(data.n / K)
    if k_max > smallest - 1:
        raise UsageError(f"k_max={k_max} : au plus {smallest - 1} avec K={K} et n={data.n}")

    k_values = tuple(range(k_min, k_max + 1))
    d = data.d
    # ordre de dérivation fixe : une partition par variable, puis une cellule par (i, k)
    feature_streams = spawn_rngs(rng, d)
    partitions = [kfold_partition(data.n, K, stream) for stream in feature_streams]
    cells = [(i, j) for i in range(d) for j in range(len(k_values))]
    cell_streams = spawn_rngs(rng, len(cells))

    def one_cell(task) -> tuple[MIDistribution, MIDistribution]:
        (i, j), stream = task
        k = k_values[j]
        partition = partitions[i]
        query = MIQuery((i,), k)
        actual, permuted = [], []
        for f in range(K):
            rows = partition.complement(f)
            actual.append(estimate_mi(data, rows, query, standardize).value)
            shuffled = permute_column(data.features[rows, i], stream)
            permuted.append(mi_from_arrays(shuffled, data.target[rows], k, standardize))
        return MIDistribution.from_samples(actual), MIDistribution.from_samples(permuted)

    results = parallel_map(one_cell, list(zip(cells, cell_streams)), n_jobs)

    shape = (d, len(k_values))
    means, variances = np.zeros(shape), np.zeros(shape)
    null_means, null_variances = np.zeros(shape), np.zeros(shape)
    t_grid = np.zeros(shape)
    for (i, j), (dist, null_dist) in zip(cells, results):
        means[i, j], variances[i, j] = dist.mean, dist.variance
        null_means[i, j], null_variances[i, j] = null_dist.mean, null_dist.variance
        t_grid[i, j] = _separation(dist.mean, dist.variance, null_dist.mean, null_dist.variance)

    best_i, best_j = _grid_argmax(t_grid, k_values)
    return KSelection(
        k_values=k_values,
        t_grid=t_grid,
        means=means,
        variances=variances,
        null_means=null_means,
        null_variances=null_variances,
        k_star=k_values[best_j],
        argmax_feature=best_i,
        folds=K,
    )
