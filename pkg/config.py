# config.py

import os
from dotenv import load_dotenv

load_dotenv()

# Plafond du N doublé lors des reprises de fdtc_exact
FDTC_MAX_N = int(os.getenv("FDTC_MAX_N", "4096"))
FDTC_MAX_RETRIES = int(os.getenv("FDTC_MAX_RETRIES", "4"))

# Élargissements autorisés de la plage de recherche de M
BRACKET_WIDENINGS = int(os.getenv("FDTC_BRACKET_WIDENINGS", "3"))

# Recherche de l'arc sonde (poids total des coordonnées normales)
PROBE_WEIGHT = int(os.getenv("FDTC_PROBE_WEIGHT", "4"))
MAX_PROBE_WEIGHT = int(os.getenv("FDTC_MAX_PROBE_WEIGHT", "40"))
ACTS_PROBE_BOUND = int(os.getenv("FDTC_ACTS_PROBE_BOUND", "8"))

SHORTEN_SEARCH_DEPTH = int(os.getenv("FDTC_SHORTEN_DEPTH", "4"))
HALF_TWIST_SEARCH_DEPTH = int(os.getenv("FDTC_HALF_TWIST_DEPTH", "6"))

LOG_LEVEL = os.getenv("FDTC_LOG_LEVEL", "INFO")
REPORT_FORMAT = os.getenv("FDTC_REPORT_FORMAT", "json")
