"""
libs.knn_regressor

Régresseur des k plus proches voisins (norme max sur les variables choisies,
standardisées avec les statistiques d'apprentissage) et RMSE de test.
Sert de contrôle de la qualité relative des sous-ensembles de variables.
"""
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from libs.dataset import Dataset
from libs.errors import UsageError
from libs.utils import scale_columns
from settings.constants import K_REG


@dataclass(frozen=True)
class EvalReport:
    feature_subset: tuple[int, ...]
    rmse: float
    k_reg: int
    n_train: int
    n_test: int


def knn_predict(train_x: np.ndarray, train_y: np.ndarray, test_x: np.ndarray, k_reg: int) -> np.ndarray:
    """Moyenne des cibles des k_reg voisins ; à distance égale, la plus petite ligne d'abord."""
    distances = cdist(test_x, train_x, metric="chebyshev")
    neighbors = np.argsort(distances, axis=1, kind="stable")[:, :k_reg]
    return train_y[neighbors].mean(axis=1)


def knn_rmse(
    train: Dataset,
    test: Dataset,
    features,
    k_reg: int = K_REG,
    standardize: bool = True,
) -> EvalReport:
    features = tuple(int(j) for j in features)
    if not features:
        raise UsageError("Liste de variables vide")
    if train.names != test.names:
        raise UsageError("Apprentissage et test n'ont pas les mêmes colonnes")
    for j in features:
        if not 0 <= j < train.d:
            raise UsageError(f"Indice de variable {j} hors de [0, {train.d})")
    if not 1 <= k_reg <= train.n:
        raise UsageError(f"k_reg={k_reg} : 1 <= k_reg <= {train.n} requis")

    train_x = train.features[:, features]
    test_x = test.features[:, features]
    if standardize:
        _, means, scales = scale_columns(train_x)
        train_x = (train_x - means) / scales
        test_x = (test_x - means) / scales

    predictions = knn_predict(train_x, train.target, test_x, k_reg)
    rmse = float(np.sqrt(np.mean((predictions - test.target) ** 2)))
    return EvalReport(features, rmse, k_reg, train.n, test.n)
