import pytest

from hh1lab.cli import resolve_group

CORPUS_NAMES = ["C2", "C3", "C4", "V4", "S3", "D8", "Q8", "A4", "S4",
                "C2xS3", "S3xS3"]


@pytest.fixture(scope="session")
def corpus():
    """The default desk-scale corpus, loaded once."""
    return {name: resolve_group(name)[0] for name in CORPUS_NAMES}


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    """Keep CLI cache files out of the working tree."""
    monkeypatch.setenv("HH1LAB_CACHE", str(tmp_path / "cache"))
