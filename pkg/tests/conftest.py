import pytest

from zonal.quadric import build_cone_basis


class BasisCache:
    """Memoized Monte Carlo bases; several test files reuse the same (n, k)."""

    def __init__(self):
        self._store = {}

    def get(self, n, k, samples=200_000, seed=20250819):
        key = (n, k, samples, seed)
        if key not in self._store:
            self._store[key] = build_cone_basis(n, k, samples, seed)
        return self._store[key]


@pytest.fixture(scope="session")
def basis_cache():
    return BasisCache()
