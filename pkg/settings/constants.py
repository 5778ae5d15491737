"""
settings.constants

Valeurs par défaut de l'outil. Chaque valeur peut être surchargée par une variable
d'environnement (ou par le fichier .env, chargé avant l'import de ce module).
"""
import os


# Fichier de configuration
DOTENV_FILE = ".env"

VERSION = "1.0.0"

# Sorties (JSON / CSV)
OUTPUT_DIR_DEFAULT = "./results"
OUTPUT_DIR = os.getenv("MIFS_OUTPUT_DIR", OUTPUT_DIR_DEFAULT)

# Graine et parallélisme
SEED = int(os.getenv("MIFS_SEED", 7))
THREADS = int(os.getenv("MIFS_THREADS", 1))

# Rééchantillonnage : K autour de 20 ou 30, P = 50 (Housing), alpha = 0.05
FOLDS = int(os.getenv("MIFS_FOLDS", 20))
PERMUTATIONS = int(os.getenv("MIFS_PERMUTATIONS", 50))
ALPHA = float(os.getenv("MIFS_ALPHA", 0.05))

MIN_PERMUTATIONS = 10
MIN_FOLDS = 2
CONFIDENCE_LEVEL = 0.95

# Plage de recherche du nombre de voisins
K_MIN = 1
K_MAX = 20

# Régresseur kNN de contrôle
K_REG = 5

# Problème synthétique (Friedman modifié)
FRIEDMAN_N = 100
FRIEDMAN_FEATURES = 10
FRIEDMAN_MIN_N = 10
# Indices (base 0) des variables X1..X5
FRIEDMAN_INFORMATIVE = (0, 1, 2, 3, 4)

# Étude de simulation
REPLICATES = 100

# Nom de la cible quand le fichier n'en fournit pas
TARGET_NAME_DEFAULT = "y"
