"""
libs.resampling

Distributions de rééchantillonnage de l'information mutuelle :
- K-fold : K estimations, chacune sans l'un des K groupes de lignes
- permutation : estimations après mélange de la seule variable candidate
- P-valeur (proportion brute) avec intervalle de Clopper-Pearson, percentile empirique

Chaque opération aléatoire reçoit un générateur explicite. Les sous-flux sont dérivés
séquentiellement avant tout calcul parallèle : le résultat est identique quel que
soit le nombre de threads.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import beta

from libs.dataset import Dataset
from libs.errors import UsageError
from libs.estimator import MIQuery, estimate_mi, mi_from_arrays
from libs.utils import parallel_map, spawn_rngs
from settings.constants import CONFIDENCE_LEVEL, MIN_FOLDS, MIN_PERMUTATIONS


@dataclass(frozen=True)
class FoldPartition:
    folds: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return sum(len(f) for f in self.folds)

    def complement(self, i: int) -> np.ndarray:
        """Toutes les lignes sauf celles du groupe i (triées)."""
        return np.sort(np.concatenate([f for j, f in enumerate(self.folds) if j != i]))


@dataclass(frozen=True)
class MIDistribution:
    samples: tuple[float, ...]
    mean: float
    variance: float

    @classmethod
    def from_samples(cls, samples) -> "MIDistribution":
        values = np.asarray(samples, dtype=float)
        if values.size < 2:
            raise UsageError("Au moins 2 échantillons requis")
        return cls(tuple(float(v) for v in values), float(values.mean()), float(values.var(ddof=1)))

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class PValueResult:
    p: float
    ci_low: float
    ci_high: float
    n_permutations: int


# --------
# K-fold
# --------

def kfold_partition(n: int, K: int, rng: np.random.Generator) -> FoldPartition:
    """Partition aléatoire de {0..n-1} en K groupes dont les tailles diffèrent d'au plus 1."""
    if K < MIN_FOLDS or K > n:
        raise UsageError(f"K={K} : {MIN_FOLDS} <= K <= n={n} requis")
    order = rng.permutation(n)
    return FoldPartition(tuple(np.sort(fold) for fold in np.array_split(order, K)))


def kfold_mi_distribution(
    data: Dataset,
    query: MIQuery,
    K: int,
    rng: np.random.Generator,
    n_jobs: int = 1,
    standardize: bool = True,
) -> MIDistribution:
    """K estimations de MI, la i-ème sur toutes les lignes sauf le groupe i."""
    partition = kfold_partition(data.n, K, rng)
    smallest = data.n - max(len(f) for f in partition.folds)
    if query.k >= smallest:
        raise UsageError(f"k={query.k} : chaque sous-échantillon K-fold ne garde que {smallest} lignes")

    def one_fold(i: int) -> float:
        return estimate_mi(data, partition.complement(i), query, standardize).value

    return MIDistribution.from_samples(parallel_map(one_fold, range(K), n_jobs))


# --------------
# Permutations
# --------------

def permute_column(values, rng: np.random.Generator) -> np.ndarray:
    """Permutation uniforme ; l'entrée n'est pas modifiée."""
    return rng.permutation(np.asarray(values))


def permutation_null(
    data: Dataset,
    base_features,
    candidate: int,
    query_k: int,
    P: int,
    rng: np.random.Generator,
    n_jobs: int = 1,
    standardize: bool = True,
    rows=None,
) -> MIDistribution:
    """
    P estimations de MI(S u {X_candidat permutée} ; Y), une permutation fraîche
    par estimation. Les colonnes de S et la cible ne sont pas touchées.
    """
    if P < MIN_PERMUTATIONS:
        raise UsageError(f"P={P} : au moins {MIN_PERMUTATIONS} permutations requises")
    base = [int(i) for i in base_features]
    if candidate in base:
        raise UsageError(f"La variable {candidate} est déjà dans l'ensemble de base")
    rows = np.arange(data.n) if rows is None else np.asarray(rows, dtype=int)
    MIQuery(tuple(base + [candidate]), query_k).validate(data.d, len(rows))

    base_block = data.features[np.ix_(rows, base)] if base else np.empty((len(rows), 0))
    column = data.features[rows, candidate]
    target = data.target[rows]
    streams = spawn_rngs(rng, P)

    def one_permutation(stream: np.random.Generator) -> float:
        x = np.column_stack([base_block, permute_column(column, stream)])
        return mi_from_arrays(x, target, query_k, standardize)

    return MIDistribution.from_samples(parallel_map(one_permutation, streams, n_jobs))


# -----------------------
# P-valeur et percentile
# -----------------------

def clopper_pearson(successes: int, trials: int, level: float = CONFIDENCE_LEVEL) -> tuple[float, float]:
    """Intervalle binomial exact (Clopper-Pearson)."""
    a = 1.0 - level
    low = 0.0 if successes == 0 else float(beta.ppf(a / 2, successes, trials - successes + 1))
    high = 1.0 if successes == trials else float(beta.ppf(1 - a / 2, successes + 1, trials - successes))
    return low, high


def p_value(observed: float, null: MIDistribution) -> PValueResult:
    """p = #{échantillons >= observé} / P (égalités comptées), sans lissage +1."""
    P = len(null)
    if P < MIN_PERMUTATIONS:
        raise UsageError(f"Distribution nulle trop petite ({P} < {MIN_PERMUTATIONS})")
    exceed = int(np.count_nonzero(np.asarray(null.samples) >= observed))
    p = exceed / P
    low, high = clopper_pearson(exceed, P)
    return PValueResult(p, min(low, p), max(high, p), P)


def percentile(dist: MIDistribution, q: float) -> float:
    """Quantile au rang le plus proche : le ceil(q P)-ième plus petit échantillon."""
    if not 0.0 < q < 1.0:
        raise UsageError(f"q={q} hors de (0, 1)")
    P = len(dist)
    if P < MIN_PERMUTATIONS:
        raise UsageError(f"Au moins {MIN_PERMUTATIONS} échantillons requis ({P})")
    # arrondi : 0.95 * 20 doit donner le rang 19
    rank = max(1, math.ceil(round(q * P, 9)))
    return float(np.sort(np.asarray(dist.samples))[rank - 1])
