"""
libs.utils

Utilitaires : environnement, générateurs aléatoires, parallélisme, fichiers.

"""
import importlib
import io
import json
import os
from pathlib import Path
from typing import Any, Callable, Iterable

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from joblib import Parallel, delayed

from libs.errors import DataError, MissingFileError, RaggedRowError
from settings import constants
from settings.constants import DOTENV_FILE


def init_env(dotenv_file: str = DOTENV_FILE) -> bool:
    """
    Charge le fichier .env s'il existe puis relit settings.constants.
    À appeler avant d'importer les autres modules du projet.
    Les valeurs par défaut s'appliquent sinon.
    """
    if not os.path.exists(dotenv_file):
        return False
    load_dotenv(dotenv_file)
    importlib.reload(constants)
    return True


def make_rng(seed: int) -> np.random.Generator:
    """Générateur PCG64 initialisé par SeedSequence(seed) : reproductible d'une machine à l'autre."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    """
    Dérive n sous-flux indépendants.
    Toujours appelé séquentiellement, avant la répartition sur les threads :
    le résultat ne dépend donc pas de l'ordonnancement.
    """
    return rng.spawn(n)


def parallel_map(func: Callable, items: Iterable, n_jobs: int = 1) -> list:
    """Applique func sur chaque élément ; résultats dans l'ordre de soumission."""
    items = list(items)
    if n_jobs == 1 or len(items) <= 1:
        return [func(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)


def check_row_widths(csv_path: str | Path) -> tuple[list[int], list[str]]:
    """
    Même nombre de champs sur chaque ligne non vide (pas de guillemets dans ce dialecte).
    Renvoie les lignes non vides et leur numéro dans le fichier.
    """
    expected = None
    numbers, lines = [], []
    with open(csv_path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            line = line.rstrip("\r\n")
            width = line.count(",") + 1
            if expected is None:
                expected = width
            elif width != expected:
                raise RaggedRowError(line_number, expected, width)
            numbers.append(line_number)
            lines.append(line)
    return numbers, lines


def read_csv_table(csv_path: str | Path, header: bool = True) -> pd.DataFrame:
    """
    Lit un CSV en texte brut (aucune conversion) pour pouvoir localiser
    les cellules invalides. Lève MissingFileError / RaggedRowError.
    df.attrs["lines"] : numéro de ligne du fichier de chaque ligne de données.
    """
    if not os.path.exists(csv_path):
        raise MissingFileError(f"CSV introuvable : {csv_path}")
    numbers, lines = check_row_widths(csv_path)
    if not lines:
        raise DataError(f"CSV vide : {csv_path}")
    df = pd.read_csv(
        io.StringIO("\n".join(lines) + "\n"),
        sep=",",
        header=0 if header else None,
        dtype=str,
        keep_default_na=False,
    )

    if header:
        df.columns = [str(c).strip() for c in df.columns]
    else:
        df.columns = [f"X{i + 1}" for i in range(len(df.columns))]
    df.attrs["lines"] = numbers[1:] if header else numbers
    return df


def scale_columns(block) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Centre-réduit chaque colonne (variance de population).
    Centrage en deux passes : la moyenne résiduelle du premier passage est retirée.
    Colonne constante : centrée, échelle 1.
    Renvoie (colonnes réduites, moyennes, échelles).
    """
    block = np.asarray(block, dtype=float)
    first = block.mean(axis=0)
    centered = block - first
    residual = centered.mean(axis=0)
    centered = centered - residual
    scales = np.sqrt(np.mean(centered**2, axis=0))
    scales = np.where(np.ptp(block, axis=0) > 0, scales, 1.0)
    return centered / scales, first + residual, scales


def ensure_dir(path: str | Path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json(document: dict[str, Any], path: str | Path) -> Path:
    """JSON UTF-8 indenté, terminé par un saut de ligne."""
    path = Path(path)
    ensure_dir(path.parent)
    path.write_text(json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def read_json(path: str | Path) -> dict[str, Any]:
    if not os.path.exists(path):
        raise MissingFileError(f"Fichier JSON introuvable : {path}")
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_table(df: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    ensure_dir(path.parent)
    df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8")
    return path
