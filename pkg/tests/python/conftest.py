import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from latcheck.catalog.loader import Catalog, load_catalog  # noqa: E402
from latcheck.lattice.core import Lattice  # noqa: E402
from latcheck.linalg.exact import int_matrix  # noqa: E402


@pytest.fixture(scope="session")
def catalog_dir() -> Path:
    """Path to the shipped catalog."""
    return ROOT / "data" / "catalog"


@pytest.fixture(scope="session")
def catalog(catalog_dir: Path) -> Catalog:
    """The shipped catalog, loaded and validated once per session."""
    return load_catalog(catalog_dir)


def gram(rows) -> Lattice:
    return Lattice(int_matrix(rows))


@pytest.fixture
def hyperbolic() -> Lattice:
    """The hyperbolic plane U."""
    return gram([[0, 1], [1, 0]])
