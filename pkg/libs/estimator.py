"""
libs.estimator

Estimation de l'information mutuelle MI(X_S ; Y) par plus proches voisins
(estimateur de Kraskov, première forme) :

    MI = psi(k) + psi(n) - < psi(n_x + 1) + psi(n_y + 1) >

- distance jointe : max(norme max sur le bloc X_S, |dy|)
- n_x, n_y : nombre d'autres points strictement à l'intérieur du rayon joint
  du k-ième voisin (si ce rayon est nul : points à distance 0)
- résultat en nats, jamais ramené à 0 (peut être négatif)

Les égalités de distance n'influencent ni le rayon du k-ième voisin ni les
comptages ; quand un ordre est nécessaire, l'indice de ligne le plus petit est
considéré comme le plus proche.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from libs.checks import check_finite
from libs.dataset import Dataset
from libs.errors import UsageError
from libs.utils import scale_columns

METHODS = ("kdtree", "brute")


@dataclass(frozen=True)
class MIQuery:
    feature_indices: tuple[int, ...]
    k: int

    def __post_init__(self):
        indices = tuple(int(i) for i in self.feature_indices)
        if not indices:
            raise UsageError("Ensemble de variables vide")
        if len(set(indices)) != len(indices):
            raise UsageError(f"Variables en double : {indices}")
        if int(self.k) < 1:
            raise UsageError(f"k={self.k} : k >= 1 requis")
        object.__setattr__(self, "feature_indices", indices)
        object.__setattr__(self, "k", int(self.k))

    def validate(self, d: int, n_rows: int) -> None:
        for i in self.feature_indices:
            if not 0 <= i < d:
                raise UsageError(f"Indice de variable {i} hors de [0, {d})")
        if self.k >= n_rows:
            raise UsageError(f"k={self.k} : au moins k+1={self.k + 1} lignes requises ({n_rows} disponibles)")


@dataclass(frozen=True)
class MIEstimate:
    value: float
    n_used: int


# ------------------
# Fonctions de base
# ------------------

def digamma(x):
    """Fonction digamma (scipy.special), x > 0."""
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise UsageError(f"digamma : x > 0 requis ({x!r})")
    result = special.digamma(values)
    return float(result) if np.ndim(result) == 0 else result


def _as_points(points) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    return points


def _distances_from(points: np.ndarray, row: int) -> np.ndarray:
    """Distances (norme max) de la ligne `row` à toutes les autres, elle-même exclue."""
    n = points.shape[0]
    if not 0 <= row < n:
        raise UsageError(f"Ligne {row} hors de [0, {n})")
    dist = np.max(np.abs(points - points[row]), axis=1)
    return np.delete(dist, row)


def kth_neighbor_distance(points, row: int, k: int) -> float:
    """Distance (norme max) au k-ième plus proche voisin de `row`, `row` exclu."""
    points = _as_points(points)
    n = points.shape[0]
    if k < 1:
        raise UsageError("k >= 1 requis")
    if k >= n:
        raise UsageError(f"k={k} >= n={n}")
    dist = _distances_from(points, row)
    return float(np.partition(dist, k - 1)[k - 1])


def count_within(points, row: int, radius: float, strict: bool = True) -> int:
    """Nombre d'autres lignes à distance < radius (strict) ou <= radius."""
    if not radius > 0:
        raise UsageError(f"radius={radius} : rayon > 0 requis")
    dist = _distances_from(_as_points(points), row)
    if strict:
        return int(np.count_nonzero(dist < radius))
    return int(np.count_nonzero(dist <= radius))


# ---------------------------
# Comptages (kd-tree / brute)
# ---------------------------

def _inner_radius(eps: np.ndarray) -> np.ndarray:
    """Plus grand flottant < eps (comptage strict) ; 0 si eps = 0."""
    return np.where(eps > 0, np.nextafter(eps, 0.0), 0.0)


def _neighbor_counts_kdtree(x: np.ndarray, y: np.ndarray, k: int):
    joint = np.column_stack([x, y])
    eps = cKDTree(joint).query(joint, k=k + 1, p=np.inf)[0][:, k]
    radius = _inner_radius(eps)
    # query_ball_point inclut le point lui-même
    n_x = cKDTree(x).query_ball_point(x, radius, p=np.inf, return_length=True) - 1
    n_y = cKDTree(y).query_ball_point(y, radius, p=np.inf, return_length=True) - 1
    return eps, np.asarray(n_x), np.asarray(n_y)


def _neighbor_counts_brute(x: np.ndarray, y: np.ndarray, k: int):
    dx = cdist(x, x, metric="chebyshev")
    dy = cdist(y, y, metric="chebyshev")
    joint = np.maximum(dx, dy)
    eps = np.sort(joint, axis=1, kind="stable")[:, k]
    radius = _inner_radius(eps)[:, None]
    n_x = np.count_nonzero(dx <= radius, axis=1) - 1
    n_y = np.count_nonzero(dy <= radius, axis=1) - 1
    return eps, n_x, n_y


def mi_from_arrays(x, y, k: int, standardize: bool = True, method: str = "kdtree") -> float:
    """Estimateur sur des tableaux : x (n, p), y (n,) ou (n, 1)."""
    x = _as_points(x)
    y = _as_points(y)
    n = x.shape[0]
    if y.shape[0] != n:
        raise UsageError("x et y n'ont pas le même nombre de lignes")
    if k < 1 or k >= n:
        raise UsageError(f"k={k} : 1 <= k < n={n} requis")
    if method not in METHODS:
        raise UsageError(f"Méthode inconnue {method!r} ({', '.join(METHODS)})")
    check_finite(x, "les variables")
    check_finite(y, "la cible")
    if standardize:
        x = scale_columns(x)[0]
        y = scale_columns(y)[0]

    counts = _neighbor_counts_kdtree if method == "kdtree" else _neighbor_counts_brute
    _, n_x, n_y = counts(x, y, k)
    value = (
        special.digamma(k)
        + special.digamma(n)
        - np.mean(special.digamma(n_x + 1) + special.digamma(n_y + 1))
    )
    return float(value)


def estimate_mi(
    data: Dataset,
    rows,
    query: MIQuery,
    standardize: bool = True,
    method: str = "kdtree",
) -> MIEstimate:
    """
    MI(X_S ; Y) calculée uniquement sur `rows` (None : toutes les lignes).
    La standardisation est faite sur les lignes utilisées.
    """
    rows = np.arange(data.n) if rows is None else np.asarray(rows, dtype=int)
    query.validate(data.d, len(rows))
    x = data.features[np.ix_(rows, query.feature_indices)]
    y = data.target[rows]
    return MIEstimate(mi_from_arrays(x, y, query.k, standardize, method), len(rows))
