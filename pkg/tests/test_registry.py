import pandas as pd
import pytest

from dunkl_analyzer.database.connection import BASELINES_TABLE, SEED_COLUMNS, SEED_PATH, BaselineRegistry
from dunkl_analyzer.errors import RegistryError
from dunkl_analyzer.reports import param_key


def test_record_and_lookup(tmp_path):
    """Recorded bands come back for the same check id and parameter key"""
    db_path = str(tmp_path / "registry" / "baselines.db")
    with BaselineRegistry(db_path, create=True) as registry:
        assert registry.has_baselines()
        assert BASELINES_TABLE in registry.get_table_names()
        registry.record_band("young.inequality", '{"lambda": 0.5}', 0.2, 0.8, 0.1)
        assert registry.get_band("young.inequality", '{"lambda": 0.5}') == (0.2, 0.8, 0.1)
        assert registry.get_band("young.inequality", '{"lambda": 1.0}') is None
        assert registry.get_band("riesz.hls", '{"lambda": 0.5}') is None


def test_record_replaces(tmp_path):
    db_path = str(tmp_path / "baselines.db")
    with BaselineRegistry(db_path, create=True) as registry:
        registry.record_band("c", "{}", 1.0, 2.0, 0.1)
        registry.record_band("c", "{}", 1.5, 2.5, 0.05)
        assert registry.get_band("c", "{}") == (1.5, 2.5, 0.05)
        frame = registry.export_frame()
        assert len(frame) == 1
        assert list(frame.columns) == ["check_id", "param_key", "band_lo", "band_hi", "tolerance", "recorded_at"]


def test_bands_survive_reopening(tmp_path):
    db_path = str(tmp_path / "baselines.db")
    with BaselineRegistry(db_path, create=True) as registry:
        registry.record_band("a", "{}", 0.1, 0.2, 0.1)
        registry.record_band("b", "{}", 0.3, 0.4, 0.1)
    with BaselineRegistry(db_path) as registry:
        frame = registry.export_frame()
        assert frame["check_id"].tolist() == ["a", "b"]


def test_empty_band_rejected(tmp_path):
    with BaselineRegistry(str(tmp_path / "baselines.db"), create=True) as registry:
        with pytest.raises(ValueError):
            registry.record_band("c", "{}", 2.0, 1.0, 0.1)


def test_missing_registry():
    """Opening a registry that does not exist without create fails"""
    with pytest.raises(FileNotFoundError):
        BaselineRegistry("nonexistent.db")


def test_file_without_table(tmp_path):
    db_path = tmp_path / "empty.db"
    db_path.touch()
    with BaselineRegistry(str(db_path)) as registry:
        assert not registry.has_baselines()
        assert registry.get_band("c", "{}") is None
        assert registry.export_frame().empty


def test_bad_query(tmp_path):
    with BaselineRegistry(str(tmp_path / "baselines.db"), create=True) as registry:
        with pytest.raises(RegistryError):
            registry.execute_query("SELECT * FROM missing_table")


def test_closed_registry(tmp_path):
    registry = BaselineRegistry(str(tmp_path / "baselines.db"), create=True)
    registry.close()
    with pytest.raises(ConnectionError):
        registry.record_band("c", "{}", 0.0, 1.0, 0.1)


def test_seed_is_packaged(tmp_path):
    """The packaged dump fills a fresh registry with the ω_γ bands"""
    db_path = tmp_path / "seeded.db"
    with BaselineRegistry.from_seed(str(db_path)) as registry:
        frame = registry.export_frame()
        assert len(frame) == 6
        assert set(frame["check_id"]) == {"specfun.omega"}
        band = registry.get_band("specfun.omega", param_key({"gamma": 0.8, "region": "near"}))
    assert band == pytest.approx((1.0792480239, 1.4895791177, 0.1))
    assert list(pd.read_csv(SEED_PATH).columns) == SEED_COLUMNS


def test_load_frame_round_trip(tmp_path):
    with BaselineRegistry(str(tmp_path / "a.db"), create=True) as source:
        source.record_band("c", '{"p": 2.0}', 0.5, 1.5, 0.1)
        source.record_band("d", "{}", 1.0, 1.0, 0.05)
        exported = source.export_frame()
    with BaselineRegistry(str(tmp_path / "b.db"), create=True) as target:
        assert target.load_frame(exported) == 2
        assert target.get_band("c", '{"p": 2.0}') == (0.5, 1.5, 0.1)
        assert target.get_band("d", "{}") == (1.0, 1.0, 0.05)


def test_seed_without_band_columns(tmp_path):
    """A malformed dump is refused and leaves no half-filled registry behind"""
    seed = tmp_path / "seed.csv"
    pd.DataFrame({"check_id": ["c"], "param_key": ["{}"], "band_lo": [1.0]}).to_csv(seed, index=False)
    db_path = tmp_path / "seeded.db"
    with pytest.raises(RegistryError, match="band_hi"):
        BaselineRegistry.from_seed(str(db_path), seed)
    assert not db_path.exists()


if __name__ == "__main__":
    pytest.main([__file__])
