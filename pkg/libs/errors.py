"""
libs.errors

Exceptions de l'outil de sélection. Le CLI associe chaque famille à un code de sortie :
UsageError -> 1, DataError -> 2, autre -> 3.

"""


class SelectorError(Exception):
    """Base de toutes les erreurs connues de l'outil."""


class UsageError(SelectorError, ValueError):
    """Paramètre invalide (k, K, P, alpha, tailles...)."""


class DataError(SelectorError):
    """Problème dans les données fournies."""


class MissingFileError(DataError, FileNotFoundError):
    pass


class RaggedRowError(DataError):
    """Ligne CSV qui n'a pas le nombre de colonnes attendu."""

    def __init__(self, line: int, expected: int, found: int | None = None):
        self.line = line
        detail = f"{found} champs" if found is not None else "champs manquants"
        super().__init__(f"Ligne {line} : {expected} champs attendus, {detail}")


class NonNumericCellError(DataError):
    def __init__(self, line: int, column: str, value: str):
        self.line = line
        self.column = column
        super().__init__(f"Ligne {line}, colonne '{column}' : valeur non numérique {value!r}")


class UnknownColumnError(DataError, KeyError):
    def __init__(self, column, available):
        self.column = column
        super().__init__(f"Colonne cible inconnue {column!r} (colonnes : {', '.join(available)})")

    def __str__(self) -> str:
        return self.args[0]


class NonFiniteDataError(DataError, ValueError):
    """NaN ou Inf dans les colonnes utilisées."""


class NonFiniteCellError(NonFiniteDataError):
    def __init__(self, line: int, column: str, value: str):
        self.line = line
        self.column = column
        super().__init__(f"Ligne {line}, colonne '{column}' : valeur non finie {value!r}")
