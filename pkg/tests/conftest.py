import json
from pathlib import Path

import pytest

from powerparts.bigcount import PartitionKind, count_partitions

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def thresholds():
    with open(FIXTURE_DIR / "thresholds.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def tables_2000():
    """DP tables for both kinds, k = 1..3, n_max = 2000 (shared, immutable)."""
    return {(kind, k): count_partitions(kind, k, 2000)
            for kind in PartitionKind for k in (1, 2, 3)}
