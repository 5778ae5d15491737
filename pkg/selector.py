"""
 Sélection de variables par information mutuelle (kNN) avec arrêt par test de permutation

Exemples d'utilisation :
# Générer un jeu de Friedman (100 lignes, 10 variables + cible)
    python selector.py generate --friedman -n 100 --seed 7

# Choisir le nombre de voisins k
    python selector.py tune --input results/friedman.csv --k-min 1 --k-max 20

# Sélection avant (k choisi automatiquement si --k absent)
    python selector.py select --input results/friedman.csv --alpha 0.05 --permutations 50 --report

# Évaluer la sélection avec un régresseur kNN
    python selector.py eval --train train.csv --test test.csv --trace results/trace.json

# Étude de simulation (100 répliques) et profil de l'estimateur selon k
    python selector.py simulate --replicates 100
    python selector.py kprofile --replicates 100

# Tests unitaires
    python selector.py tests

Codes de sortie : 0 succès, 1 erreur d'usage, 2 erreur de données, 3 erreur interne.
"""

import argparse
import contextlib
import io
import sys
from pathlib import Path

import pytest

from libs.utils import init_env, read_json, write_json, write_table

init_env()  # Avant de charger les constantes

from libs.dataset import feature_index
from libs.errors import DataError, UsageError
from services.dataset_service import generate_friedman, load_dataset
from services.selection_service import run_eval, run_select, run_tune
from services.simulation_service import estimator_k_profile, print_study_report, run_friedman_study
from settings.constants import (
    ALPHA,
    FOLDS,
    FRIEDMAN_N,
    K_MAX,
    K_MIN,
    K_REG,
    OUTPUT_DIR,
    PERMUTATIONS,
    REPLICATES,
    SEED,
    THREADS,
    VERSION,
)
from settings.run_config import RunConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class SelectorArgumentParser(argparse.ArgumentParser):
    """argparse sort en code 2 par défaut ; ici une erreur d'usage vaut 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f">> [ERREUR] {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=SEED, help="Graine (entier 64 bits)")
    parser.add_argument("--threads", type=int, default=THREADS, help="Threads (n'influence pas les résultats)")
    parser.add_argument("--output-dir", default=OUTPUT_DIR, help="Dossier de sortie (ou MIFS_OUTPUT_DIR)")
    parser.add_argument("--no-standardize", dest="standardize", action="store_false",
                        help="Désactive la standardisation des colonnes")
    parser.add_argument("--quiet", action="store_true", help="Pas d'affichage de progression")


def add_input_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", dest="input_path", help="Fichier CSV")
    parser.add_argument("--friedman", action="store_true", help="Données de Friedman générées avec --seed")
    parser.add_argument("--target", dest="target_column", default="-1",
                        help="Colonne cible : nom ou indice (défaut : dernière)")
    parser.add_argument("--no-header", dest="header", action="store_false", help="CSV sans ligne d'en-tête")


def add_k_range_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k-min", type=int, default=K_MIN)
    parser.add_argument("--k-max", type=int, default=K_MAX)
    parser.add_argument("--folds", "-K", type=int, default=FOLDS, help="Nombre de groupes K-fold")


def build_parser() -> argparse.ArgumentParser:
    parser = SelectorArgumentParser(description="Sélection de variables par information mutuelle")
    parser.add_argument("--version", action="version", version=VERSION)
    commands = parser.add_subparsers(dest="mode", required=True, parser_class=SelectorArgumentParser)

    generate = commands.add_parser("generate", help="Génère un jeu de Friedman (CSV + meta JSON)")
    generate.add_argument("--friedman", action="store_true", required=True)
    generate.add_argument("-n", type=int, default=FRIEDMAN_N)
    generate.add_argument("--pi-variant", action="store_true", help="Forme classique sin(pi X1 X2)")
    generate.add_argument("--output", help="Fichier CSV (défaut : <output-dir>/friedman_n<n>_seed<seed>.csv)")
    add_common_arguments(generate)

    tune = commands.add_parser("tune", help="Choix de k par séparation t_{i,k}")
    add_input_arguments(tune)
    add_k_range_arguments(tune)
    add_common_arguments(tune)

    select = commands.add_parser("select", help="Sélection avant avec arrêt par permutation")
    add_input_arguments(select)
    add_k_range_arguments(select)
    select.add_argument("--k", type=int, help="Nombre de voisins (choisi par tune si absent)")
    select.add_argument("--alpha", type=float, default=ALPHA)
    select.add_argument("--permutations", "-P", type=int, default=PERMUTATIONS)
    select.add_argument("--max-features", type=int)
    select.add_argument("--extend-path", action="store_true",
                        help="Prolonge le chemin glouton après l'arrêt (courbes MI / seuil)")
    select.add_argument("--report", action="store_true", help="Affiche le tableau récapitulatif")
    add_common_arguments(select)

    evaluate = commands.add_parser("eval", help="RMSE d'un régresseur kNN sur un sous-ensemble")
    evaluate.add_argument("--train", required=True)
    evaluate.add_argument("--test", required=True)
    evaluate.add_argument("--target", dest="target_column", default="-1")
    evaluate.add_argument("--no-header", dest="header", action="store_false")
    subset = evaluate.add_mutually_exclusive_group(required=True)
    subset.add_argument("--trace", help="trace.json produit par select")
    subset.add_argument("--features", help="Variables séparées par des virgules (noms ou indices base 0)")
    subset.add_argument("--all-features", action="store_true")
    evaluate.add_argument("--k-reg", type=int, default=K_REG)
    add_common_arguments(evaluate)

    simulate = commands.add_parser("simulate", help="Étude répétée sur le problème de Friedman")
    simulate.add_argument("--replicates", type=int, default=REPLICATES)
    simulate.add_argument("-n", type=int, default=FRIEDMAN_N)
    simulate.add_argument("--alpha", type=float, default=ALPHA)
    simulate.add_argument("--permutations", "-P", type=int, default=PERMUTATIONS)
    add_k_range_arguments(simulate)
    add_common_arguments(simulate)

    kprofile = commands.add_parser("kprofile", help="MI(X_i;Y) en fonction de k sur des jeux répétés")
    kprofile.add_argument("--replicates", type=int, default=REPLICATES)
    kprofile.add_argument("-n", type=int, default=FRIEDMAN_N)
    kprofile.add_argument("--features", default="4,10", help="Variables (base 1), défaut : X4 et X10")
    add_k_range_arguments(kprofile)
    add_common_arguments(kprofile)

    commands.add_parser("tests", help="Lance la suite pytest")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    config = RunConfig(
        seed=args.seed,
        threads=args.threads,
        output_dir=args.output_dir,
        standardize=args.standardize,
    )
    for name in ("folds", "permutations", "alpha", "k_min", "k_max", "k", "max_features", "k_reg",
                 "extend_path", "input_path", "target_column", "header"):
        if values.get(name) is not None:
            setattr(config, name, values[name])
    if values.get("friedman"):
        config.generator = "friedman"
    return config.validate()


def run_generate(args, config: RunConfig) -> None:
    if args.n < 10:
        raise UsageError(f"n={args.n} : au moins 10 lignes pour le générateur")
    output = args.output or Path(config.output_dir) / f"friedman_n{args.n}_seed{config.seed}.csv"
    generate_friedman(args.n, config.seed, output, args.pi_variant)


def run_eval_command(args, config: RunConfig) -> None:
    train = load_dataset(config, args.train)
    test = load_dataset(config, args.test)
    if args.all_features:
        features = list(range(train.d))
    elif args.trace:
        features = [feature_index(train, name) for name in read_json(args.trace)["selected_names"]]
    else:
        features = [feature_index(train, name.strip()) for name in args.features.split(",") if name.strip()]
    run_eval(train, test, features, config)


def run_simulate(args, config: RunConfig) -> None:
    report = run_friedman_study(args.replicates, args.n, config)
    print_study_report(report)
    path = write_json(report.to_document(config.to_dict()), Path(config.output_dir) / "simulation.json")
    print(f">> [OK] Étude écrite dans '{path}'")


def run_kprofile(args, config: RunConfig) -> None:
    features = [int(f) - 1 for f in args.features.split(",")]
    profile = estimator_k_profile(args.replicates, args.n, features,
                                  list(range(config.k_min, config.k_max + 1)), config.seed,
                                  config.threads, config.standardize)
    path = write_table(profile, Path(config.output_dir) / "kprofile.csv")
    print(f">> [OK] Profil écrit dans '{path}'")


def run_automated_test() -> int:
    print(" >> Exécution des tests automatiques (pytest)")
    result = pytest.main(["-q", "tests"])
    if result != 0:
        print("\n>> [ERREUR] Des tests pytest ont échoué.")
        return EXIT_INTERNAL
    print("\n>> [OK] Tous les tests pytest ont réussi.\n")
    return EXIT_OK


def dispatch(args, config: RunConfig) -> None:
    if args.mode == "generate":
        run_generate(args, config)
    elif args.mode == "tune":
        run_tune(load_dataset(config), config)
    elif args.mode == "select":
        run_select(load_dataset(config), config, report=args.report)
    elif args.mode == "eval":
        run_eval_command(args, config)
    elif args.mode == "simulate":
        run_simulate(args, config)
    elif args.mode == "kprofile":
        run_kprofile(args, config)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.mode == "tests":
        return run_automated_test()

    try:
        config = config_from_args(args)
        # --quiet : la progression part dans un tampon, les fichiers sont écrits quand même
        sink = io.StringIO() if args.quiet else sys.stdout
        with contextlib.redirect_stdout(sink):
            print(f"\n* Selector version {VERSION} *")
            print("========================\n")
            dispatch(args, config)
    except UsageError as e:
        print(f">> [ERREUR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f">> [ERREUR] {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:
        print(f">> [ERREUR] EXCEPTION {type(e).__name__} : {e}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
