"""
services.selection_service

Enchaînement des étapes : choix de k, sélection avant, évaluation kNN.
Chaque étape écrit ses résultats (JSON + CSV) dans le dossier de sortie.

"""
from pathlib import Path

from libs.dataset import Dataset
from libs.errors import UsageError
from libs.forward import ForwardTrace, forward_select, max_mi_subset
from libs.knn_regressor import EvalReport, knn_rmse
from libs.to_json import (
    kselection_to_document,
    kselection_to_frame,
    report_to_document,
    trace_to_document,
    trace_to_frame,
)
from libs.tuner import KSelection, select_k
from libs.utils import make_rng, write_json, write_table
from settings.run_config import RunConfig


def tune_k(data: Dataset, config: RunConfig) -> KSelection:
    print(f">> [INFO] Recherche de k dans [{config.k_min}, {config.k_max}], K={config.folds} groupes, {data.d} variables")
    selection = select_k(
        data,
        (config.k_min, config.k_max),
        config.folds,
        make_rng(config.seed),
        n_jobs=config.threads,
        standardize=config.standardize,
    )
    name = data.names[selection.argmax_feature]
    print(f">> [OK] k* = {selection.k_star} (t max = {selection.t_max:.3f}, variable {name})")
    return selection


def run_tune(data: Dataset, config: RunConfig) -> tuple[KSelection, Path]:
    selection = tune_k(data, config)
    output = Path(config.output_dir)
    json_path = write_json(kselection_to_document(selection, data, config.to_dict()), output / "tune.json")
    write_table(kselection_to_frame(selection, data), output / "tune_grid.csv")
    print(f">> [OK] Grille écrite dans '{json_path}'")
    return selection, json_path


def run_select(data: Dataset, config: RunConfig, report: bool = False) -> tuple[ForwardTrace, Path]:
    """Sélection avant ; k est choisi automatiquement s'il n'est pas fourni."""
    mx_step = 3 if config.k is None else 2
    step = 1
    if config.k is None:
        config.k = tune_k(data, config).k_star
        print(f">> {step}/{mx_step} [OK] k fixé à {config.k}")
        step += 1
    if config.max_features is not None and config.max_features > data.d:
        raise UsageError(f"max_features={config.max_features} > d={data.d}")

    # flux distinct de celui du choix de k
    rng = make_rng(config.seed).spawn(2)[1]
    trace = forward_select(
        data,
        config.k,
        config.alpha,
        config.permutations,
        config.max_features,
        rng,
        n_jobs=config.threads,
        standardize=config.standardize,
        extend_path=config.extend_path,
    )
    print(f">> {step}/{mx_step} [OK] Sélection terminée ({trace.stop_reason.value}) : "
          f"{[data.names[j] for j in trace.selected]} ; {trace.mi_evaluations} estimations de MI")
    step += 1

    output = Path(config.output_dir)
    json_path = write_json(trace_to_document(trace, data, config.to_dict()), output / "trace.json")
    write_table(trace_to_frame(trace, data), output / "trace.csv")
    print(f">> {step}/{mx_step} [OK] Trace écrite dans '{json_path}'")
    if report:
        print_trace_report(trace, data)
    return trace, json_path


def print_trace_report(trace: ForwardTrace, data: Dataset) -> None:
    print("\n  it  variable             MI        seuil     p       IC 95%            décision")
    for t, it in enumerate(trace.path, start=1):
        decision = "acceptée" if it.accepted else "refusée"
        if t > len(trace.iterations):
            decision = "(chemin)"
        ci = f"[{it.p_value.ci_low:.3f}, {it.p_value.ci_high:.3f}]"
        print(f"  {t:>2}  {data.names[it.chosen][:20]: <20} {it.chosen_mi:>8.4f}  {it.threshold:>8.4f}  "
              f"{it.p_value.p:>5.3f}  {ci: <17} {decision}")
    peak = [data.names[j] for j in max_mi_subset(trace)]
    note = "" if trace.path_complete else "  (chemin coupé à l'arrêt, --extend-path pour le chemin complet)"
    print(f"\n  Sélection (arrêt par permutation) : {[data.names[j] for j in trace.selected]}")
    print(f"  Pic de MI                         : {peak}{note}\n")


def run_eval(train: Dataset, test: Dataset, features: list[int], config: RunConfig) -> tuple[EvalReport, Path]:
    if not features:
        raise UsageError("Aucune variable à évaluer (sélection vide)")
    report = knn_rmse(train, test, features, config.k_reg, config.standardize)
    names = [train.names[j] for j in report.feature_subset]
    print(f">> [OK] RMSE test = {report.rmse:.4f} avec {names} (k_reg={report.k_reg}, "
          f"{report.n_train} apprentissage / {report.n_test} test)")
    json_path = write_json(report_to_document(report, train, config.to_dict()), Path(config.output_dir) / "eval.json")
    return report, json_path
