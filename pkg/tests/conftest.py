import numpy as np
import pytest

from geoclassify.dataset import Dataset
from geoclassify.synthetic import generate_synthetic_csv

GDELT_HEADER = "Actor1Type1Code,Year,ActionGeo_CountryCode,Actor1Geo_Lat,Actor1Geo_Long,EventCode"


def make_gdelt_csv(rows: list[str]) -> bytes:
    return ("\n".join([GDELT_HEADER] + rows) + "\n").encode("utf-8")


@pytest.fixture(scope="session")
def synthetic_csv_2k(tmp_path_factory):
    """Small deterministic fixture shared by tests that need realistic data."""
    path = tmp_path_factory.mktemp("fixture") / "synth2k.csv"
    generate_synthetic_csv(path, n=2000, seed=42)
    return path


@pytest.fixture(scope="session")
def synthetic_csv_40k(tmp_path_factory):
    """Full-size fixture for the acceptance grid."""
    path = tmp_path_factory.mktemp("fixture40k") / "synth40k.csv"
    generate_synthetic_csv(path, n=40_000, seed=42)
    return path


def random_dataset(n: int, seed: int, labels=(0, 1), weights=None, id: str = "random") -> Dataset:
    """Uniform points in the study box with random labels; plain test helper."""
    rng = np.random.default_rng(seed)
    lats = rng.uniform(29.2, 37.2, size=n)
    lons = rng.uniform(39.3, 48.4, size=n)
    labels_arr = rng.choice(np.asarray(labels), size=n, p=weights)
    return Dataset.from_columns(id=id, lats=lats, lons=lons, labels=labels_arr)
