"""
libs.checks

Vérifications d'une table avant construction d'un Dataset.

"""
import numpy as np
import pandas as pd

from libs.errors import NonFiniteCellError, NonFiniteDataError, NonNumericCellError, UnknownColumnError


def resolve_target_column(df: pd.DataFrame, target_column: str | int) -> str:
    """
    Retrouve la colonne cible par nom, ou par indice (entier ou chaîne de chiffres,
    base 0, négatif autorisé) si aucun nom ne correspond.
    """
    columns = [str(c) for c in df.columns]
    if isinstance(target_column, str):
        if target_column in columns:
            return target_column
        if target_column.lstrip("-").isdigit():
            target_column = int(target_column)
        else:
            raise UnknownColumnError(target_column, columns)
    try:
        return columns[target_column]
    except (IndexError, TypeError):
        raise UnknownColumnError(target_column, columns) from None


def to_numeric_frame(df: pd.DataFrame, header: bool = True) -> pd.DataFrame:
    """
    Convertit chaque colonne en float. La première cellule non numérique ou non
    finie (dans l'ordre du fichier) lève une erreur avec sa ligne et sa colonne.
    Les numéros de ligne viennent de df.attrs["lines"] s'il est renseigné.
    """
    first_line = 2 if header else 1
    lines = df.attrs.get("lines") or [row + first_line for row in range(len(df))]
    numeric = df.apply(lambda serie: pd.to_numeric(serie.str.strip(), errors="coerce"))
    values = numeric.to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        column = str(df.columns[col])
        cell = df.iat[row, col]
        if np.isnan(values[row, col]) and cell.strip().lower() not in ("nan", "+nan", "-nan"):
            raise NonNumericCellError(int(lines[row]), column, cell)
        raise NonFiniteCellError(int(lines[row]), column, cell)
    return numeric.astype(float)


def check_finite(values: np.ndarray, what: str = "données") -> None:
    """Refuse NaN / Inf."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        count = int(np.size(values) - np.count_nonzero(np.isfinite(values)))
        raise NonFiniteDataError(f"{count} valeur(s) non finie(s) dans {what}")


def constant_columns(features: np.ndarray) -> list[int]:
    """Indices des colonnes de variance nulle."""
    features = np.asarray(features, dtype=float)
    return [int(j) for j in np.flatnonzero(np.ptp(features, axis=0) == 0)]


def check_standardized(features: np.ndarray, target: np.ndarray) -> bool:
    """Moyenne ~0 et variance ~1 pour chaque colonne non constante."""
    block = np.column_stack([features, target])
    means = block.mean(axis=0)
    variances = block.var(axis=0)
    varying = np.ptp(block, axis=0) > 0
    ok_mean = np.all(np.abs(means) <= 1e-9)
    ok_var = np.all(np.abs(variances[varying] - 1.0) <= 1e-6)
    return bool(ok_mean and ok_var)
