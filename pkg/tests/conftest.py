import pytest

from cantorcount.enumerator import enumerate_denominator


@pytest.fixture(scope="session")
def records_3_9():
    """Full enumeration for every denominator up to 3^9 (a few seconds)."""
    return {q: enumerate_denominator(q) for q in range(2, 3**9 + 1)}


@pytest.fixture(scope="session")
def counts_3_9(records_3_9):
    return {q: r.n_q for q, r in records_3_9.items()}
