"""Constants and environment overrides for latcheck."""

import os
from pathlib import Path

PACKAGE_DIR = Path(__file__).parent
PROJECT_ROOT = PACKAGE_DIR.parent
CATALOG_DIR = Path(
    os.environ.get("LATCHECK_CATALOG_DIR", PROJECT_ROOT / "data" / "catalog")
)
TEMPLATES_DIR = PACKAGE_DIR / "templates"

CATALOG_FILES = (
    "constants.json",
    "classes.json",
    "glue.json",
    "involutions.json",
    "pushforwards.json",
    "tables.json",
    "partial_grams.json",
)

# Search nodes for isometry / glue / witness searches.
DEFAULT_BUDGET = int(os.environ.get("LATCHECK_BUDGET", "200000"))
# Largest finite group enumerated element by element.
MAX_GROUP_ORDER = int(os.environ.get("LATCHECK_MAX_GROUP_ORDER", str(2**16)))
DEFAULT_WORKERS = int(os.environ.get("LATCHECK_WORKERS", "0")) or None
LOG_LEVEL = os.environ.get("LATCHECK_LOG_LEVEL", "WARNING")

DEFAULT_PARAM_MAX = 5
DEFAULT_D_MAX = 24
MIXED_K_MAX = 3
# Parameter values per orbifold row; each one runs a glue search in the orbifold lattice.
ORBIFOLD_PARAM_MAX = int(os.environ.get("LATCHECK_ORBIFOLD_PARAM_MAX", "3"))

# Witness search box for classes without printed coordinates.
WITNESS_COEFFICIENTS = (0, 1, -1, 2)
WITNESS_LEADING = (1, 2, 4)
WITNESS_LIMIT = 4096
WITNESS_PER_KEY = 2

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
