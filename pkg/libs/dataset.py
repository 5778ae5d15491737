"""
libs.dataset

Jeu de données de régression (X, Y) : générateur synthétique de Friedman modifié,
chargement CSV, standardisation, découpage apprentissage / test.

Les Dataset sont immuables : les tableaux numpy sont en lecture seule.
"""
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from libs.checks import (
    check_finite,
    check_standardized,
    constant_columns,
    resolve_target_column,
    to_numeric_frame,
)
from libs.errors import DataError, UsageError
from libs.utils import read_csv_table, scale_columns, write_json, write_table
from settings.constants import FRIEDMAN_FEATURES, FRIEDMAN_MIN_N, TARGET_NAME_DEFAULT


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    target: np.ndarray
    names: tuple[str, ...]
    target_name: str = TARGET_NAME_DEFAULT
    standardized: bool = False
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        features = np.array(self.features, dtype=float, copy=True)
        target = np.array(self.target, dtype=float, copy=True).reshape(-1)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        if features.ndim != 2:
            raise UsageError("features doit être une matrice n x d")
        n, d = features.shape
        if target.shape[0] != n:
            raise UsageError(f"target : {target.shape[0]} valeurs pour {n} lignes")
        if n < 2 or d < 1:
            raise DataError(f"Dataset trop petit : n={n}, d={d} (n >= 2 et d >= 1 requis)")
        names = tuple(str(name) for name in self.names)
        if len(names) != d:
            raise UsageError(f"{len(names)} noms pour {d} colonnes")
        if len(set(names)) != d:
            raise DataError("Noms de colonnes en double")
        check_finite(features, "les variables")
        check_finite(target, "la cible")
        if self.standardized and not check_standardized(features, target):
            raise UsageError("Dataset marqué standardisé mais moyennes/variances hors tolérance")
        features.setflags(write=False)
        target.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, rows, part: str | None = None) -> "Dataset":
        """Sous-ensemble de lignes, dans l'ordre donné."""
        rows = np.asarray(rows, dtype=int)
        meta = dict(self.meta)
        if part is not None:
            meta["split"] = {"part": part, "rows": [int(r) for r in rows], "parent_n": self.n}
        return Dataset(self.features[rows], self.target[rows], self.names, self.target_name, False, meta)

    def equals(self, other: "Dataset") -> bool:
        return (
            self.names == other.names
            and self.target_name == other.target_name
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.target, other.target)
        )


# -------------------------------
# Générateur de Friedman modifié
# -------------------------------

def friedman_target(features: np.ndarray, noise: np.ndarray | float = 0.0, pi_variant: bool = False) -> np.ndarray:
    """
    Y = 10 sin(X1 X2) + 20 (X3 - 0.5)^2 + 10 X4 + 5 X5 + eps.
    pi_variant : forme classique 10 sin(pi X1 X2).
    """
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.shape[1] < 5:
        raise UsageError("Le problème de Friedman utilise au moins 5 variables")
    product = x[:, 0] * x[:, 1]
    if pi_variant:
        product = math.pi * product
    return (
        10.0 * np.sin(product)
        + 20.0 * (x[:, 2] - 0.5) ** 2
        + 10.0 * x[:, 3]
        + 5.0 * x[:, 4]
        + noise
    )


def friedman_generate(
    n: int,
    rng: np.random.Generator,
    d: int = FRIEDMAN_FEATURES,
    noise_std: float = 1.0,
    pi_variant: bool = False,
    seed: int | None = None,
) -> Dataset:
    """
    n lignes, d variables uniformes sur [0, 1] (X6..Xd : bruit pur),
    bruit gaussien centré de variance noise_std^2.
    """
    if n < FRIEDMAN_MIN_N:
        raise UsageError(f"n={n} : au moins {FRIEDMAN_MIN_N} lignes pour le générateur")
    if d < 5:
        raise UsageError("d >= 5 requis")
    features = rng.uniform(0.0, 1.0, size=(n, d))
    noise = noise_std * rng.standard_normal(n)
    target = friedman_target(features, noise, pi_variant)
    meta = {
        "source": "friedman",
        "seed": seed,
        "rng": "numpy PCG64 / SeedSequence",
        "generator": {"n": n, "d": d, "noise_std": noise_std, "pi_variant": pi_variant},
    }
    names = tuple(f"X{i + 1}" for i in range(d))
    return Dataset(features, target, names, TARGET_NAME_DEFAULT, False, meta)


# -------------
# Fichiers CSV
# -------------

def load_csv(path: str | Path, target_column: str | int = -1, header: bool = True) -> Dataset:
    """
    Charge une table numérique. La cible est extraite, les autres colonnes
    restent dans l'ordre du fichier.
    """
    df = read_csv_table(path, header=header)
    target_name = resolve_target_column(df, target_column)
    numeric = to_numeric_frame(df, header=header)
    if len(numeric) < 2:
        raise DataError(f"{path} : au moins 2 lignes de données requises ({len(numeric)} trouvée(s))")
    feature_names = [c for c in numeric.columns if c != target_name]
    if not feature_names:
        raise DataError(f"{path} : aucune variable en dehors de la cible")
    check_finite(numeric.to_numpy(), f"le fichier {path}")
    meta = {"source": "csv", "path": str(path), "target_column": target_name, "header": header}
    return Dataset(
        numeric[feature_names].to_numpy(),
        numeric[target_name].to_numpy(),
        tuple(feature_names),
        target_name,
        False,
        meta,
    )


def to_frame(data: Dataset) -> pd.DataFrame:
    df = pd.DataFrame(np.asarray(data.features), columns=list(data.names))
    df[data.target_name] = np.asarray(data.target)
    return df


def save_csv(data: Dataset, path: str | Path) -> Path:
    """Écrit le CSV (cible en dernière colonne) et le fichier meta JSON associé."""
    path = Path(path)
    write_table(to_frame(data), path)
    meta = dict(data.meta)
    meta.update({"n": data.n, "d": data.d, "names": list(data.names),
                 "target": data.target_name, "standardized": data.standardized})
    write_json(meta, path.with_suffix(".json"))
    return path


# ------------------
# Standardisation
# ------------------

def standardize(data: Dataset) -> Dataset:
    """Centre-réduit chaque colonne (variance de population). Colonnes constantes : échelle 1."""
    block = np.column_stack([data.features, data.target])
    scaled, means, scales = scale_columns(block)
    meta = dict(data.meta)
    meta["standardization"] = {"means": means.tolist(), "scales": scales.tolist()}
    meta["constant_columns"] = constant_columns(data.features)
    return replace(data, features=scaled[:, :-1], target=scaled[:, -1], standardized=True, meta=meta)


def destandardize(data: Dataset) -> Dataset:
    if not data.standardized:
        return data
    params = data.meta["standardization"]
    means = np.asarray(params["means"])
    scales = np.asarray(params["scales"])
    block = np.column_stack([data.features, data.target]) * scales + means
    meta = {k: v for k, v in data.meta.items() if k not in ("standardization", "constant_columns")}
    return replace(data, features=block[:, :-1], target=block[:, -1], standardized=False, meta=meta)


# ---------------------------
# Apprentissage / test
# ---------------------------

def split(
    data: Dataset,
    rng: np.random.Generator,
    train_fraction: float | None = None,
    sizes: tuple[int, int] | None = None,
) -> tuple[Dataset, Dataset]:
    """
    Partition aléatoire disjointe et exhaustive des lignes.
    sizes=(n_train, n_test) doit sommer à n ; sinon train_fraction dans (0, 1).
    """
    n = data.n
    if sizes is not None:
        n_train, n_test = (int(s) for s in sizes)
        if n_train + n_test != n:
            raise UsageError(f"Tailles {n_train} + {n_test} != {n} lignes")
    elif train_fraction is not None:
        if not 0.0 < train_fraction < 1.0:
            raise UsageError(f"train_fraction={train_fraction} hors de (0, 1)")
        n_train = int(round(train_fraction * n))
        n_test = n - n_train
    else:
        raise UsageError("Préciser train_fraction ou sizes")
    if n_train < 1 or n_test < 1:
        raise UsageError(f"Partie vide : apprentissage {n_train}, test {n_test}")

    order = rng.permutation(n)
    train_rows = np.sort(order[:n_train])
    test_rows = np.sort(order[n_train:])
    return data.subset(train_rows, part="train"), data.subset(test_rows, part="test")


def feature_index(data: Dataset, feature: str | int) -> int:
    """Nom de variable ou indice base 0 -> indice."""
    if isinstance(feature, (int, np.integer)):
        if not 0 <= feature < data.d:
            raise UsageError(f"Indice de variable {feature} hors de [0, {data.d})")
        return int(feature)
    if feature in data.names:
        return data.names.index(feature)
    if str(feature).isdigit():
        return feature_index(data, int(feature))
    raise UsageError(f"Variable inconnue : {feature}")


def summary(data: Dataset) -> dict[str, Any]:
    return {
        "n": data.n,
        "d": data.d,
        "names": list(data.names),
        "target": data.target_name,
        "constant_columns": constant_columns(data.features),
    }
