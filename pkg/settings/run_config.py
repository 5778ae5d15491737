"""
settings.run_config

Paramètres d'une exécution, recopiés dans chaque sortie JSON pour pouvoir la rejouer.
"""
from dataclasses import asdict, dataclass

from libs.errors import UsageError
from settings.constants import (
    ALPHA,
    FOLDS,
    K_MAX,
    K_MIN,
    K_REG,
    MIN_FOLDS,
    MIN_PERMUTATIONS,
    OUTPUT_DIR,
    PERMUTATIONS,
    SEED,
    THREADS,
)


@dataclass
class RunConfig:
    seed: int = SEED
    folds: int = FOLDS
    permutations: int = PERMUTATIONS
    alpha: float = ALPHA
    k_min: int = K_MIN
    k_max: int = K_MAX
    k: int | None = None
    max_features: int | None = None
    k_reg: int = K_REG
    standardize: bool = True
    extend_path: bool = False
    input_path: str | None = None
    generator: str | None = None
    target_column: str = "-1"
    header: bool = True
    output_dir: str = OUTPUT_DIR
    threads: int = THREADS

    def validate(self) -> "RunConfig":
        if not 0 <= self.seed < 2**64:
            raise UsageError(f"seed={self.seed} : entier 64 bits non signé requis")
        if self.folds < MIN_FOLDS:
            raise UsageError(f"K={self.folds} : au moins {MIN_FOLDS} groupes")
        if self.permutations < MIN_PERMUTATIONS:
            raise UsageError(f"P={self.permutations} : au moins {MIN_PERMUTATIONS} permutations")
        if not 0.0 < self.alpha < 1.0:
            raise UsageError(f"alpha={self.alpha} hors de (0, 1)")
        if self.k_min < 1 or self.k_min > self.k_max:
            raise UsageError(f"Plage de k invalide : k_min={self.k_min}, k_max={self.k_max}")
        if self.k is not None and self.k < 1:
            raise UsageError(f"k={self.k} : k >= 1 requis")
        if self.max_features is not None and self.max_features < 1:
            raise UsageError(f"max_features={self.max_features} : au moins 1")
        if self.k_reg < 1:
            raise UsageError(f"k_reg={self.k_reg} : au moins 1")
        if self.threads < 1 and self.threads != -1:
            raise UsageError(f"threads={self.threads} : au moins 1 (ou -1 pour tous les coeurs)")
        return self

    def to_dict(self) -> dict:
        """threads n'influence pas les résultats : il n'est pas recopié."""
        document = asdict(self)
        document.pop("threads")
        document.pop("output_dir")
        return document
