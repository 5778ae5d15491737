"""
services.dataset_service

Chargement (CSV ou générateur) et analyse d'un jeu de données avant sélection.

"""
from pathlib import Path

from libs.checks import constant_columns
from libs.dataset import Dataset, friedman_generate, load_csv, save_csv
from libs.errors import UsageError
from libs.utils import make_rng
from settings.constants import FRIEDMAN_N
from settings.run_config import RunConfig


def load_dataset(config: RunConfig, path: str | None = None) -> Dataset:
    """CSV si un chemin est donné, sinon générateur de Friedman (graine de config)."""
    path = path or config.input_path
    if path:
        data = load_csv(path, config.target_column, config.header)
        print(f"\n>> Fichier '{path}' chargé avec succès \n -> {data.n} lignes, {data.d} variables + cible '{data.target_name}'.")
    elif config.generator == "friedman":
        data = friedman_generate(FRIEDMAN_N, make_rng(config.seed), seed=config.seed)
        print(f"\n>> [INFO] Données de Friedman générées (n={data.n}, graine {config.seed})")
    else:
        raise UsageError("Aucune donnée : préciser --input ou --friedman")
    analyse_dataset(data)
    return data


def analyse_dataset(data: Dataset) -> list[int]:
    """Affiche un résumé et signale les colonnes constantes."""
    flat = constant_columns(data.features)
    if flat:
        names = ", ".join(data.names[j] for j in flat)
        print(f">>  [ATTENTION] {len(flat)} variable(s) constante(s) : {names} (MI proche de 0)")
    else:
        print(f">>  [OK] Aucune variable constante. {data.n} Lignes, {data.d} Variables")
    return flat


def generate_friedman(n: int, seed: int, output: str | Path, pi_variant: bool = False) -> Path:
    data = friedman_generate(n, make_rng(seed), pi_variant=pi_variant, seed=seed)
    path = save_csv(data, output)
    print(f">> [OK] {data.n} lignes x {data.d + 1} colonnes écrites dans '{path}' (+ {path.with_suffix('.json').name})")
    return path
