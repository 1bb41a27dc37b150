import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from sqlalchemy import create_engine, inspect, text
from sqlalchemy.engine import Engine
from sqlalchemy.exc import SQLAlchemyError

from ..errors import RegistryError

logger = logging.getLogger(__name__)

BASELINES_TABLE = "baselines"
SEED_PATH = Path(__file__).with_name("baselines.csv")
SEED_COLUMNS = ["check_id", "param_key", "band_lo", "band_hi", "tolerance"]

_CREATE_BASELINES = f"""
CREATE TABLE IF NOT EXISTS {BASELINES_TABLE} (
    check_id TEXT NOT NULL,
    param_key TEXT NOT NULL,
    band_lo REAL NOT NULL,
    band_hi REAL NOT NULL,
    tolerance REAL NOT NULL,
    recorded_at TEXT NOT NULL,
    PRIMARY KEY (check_id, param_key)
)
"""

_UPSERT_BAND = f"""
INSERT INTO {BASELINES_TABLE} (check_id, param_key, band_lo, band_hi, tolerance, recorded_at)
VALUES (:check_id, :param_key, :band_lo, :band_hi, :tolerance, :recorded_at)
ON CONFLICT (check_id, param_key) DO UPDATE SET
    band_lo = excluded.band_lo,
    band_hi = excluded.band_hi,
    tolerance = excluded.tolerance,
    recorded_at = excluded.recorded_at
"""


class BaselineRegistry:
    """
    Frozen-constant registry: one [band_lo, band_hi] per (check id, parameter key) in SQLite
    """
    def __init__(self, db_path: str, create: bool = False):
        """
        Initialize the registry connection

        Args:
            db_path: Path to the SQLite registry file
            create: Create the file and its table when missing (recording runs)

        Raises:
            FileNotFoundError: The file is missing and create is False
        """
        self.db_path = Path(db_path)
        if not create and not self.db_path.exists():
            raise FileNotFoundError(f"Baseline registry not found: {db_path}")
        if create:
            self.db_path.parent.mkdir(parents=True, exist_ok=True)

        self.engine: Optional[Engine] = None
        self._connect()
        if create:
            self._create_table()

    def _connect(self) -> None:
        """
        Create a connection to the SQLite registry
        """
        try:
            self.engine = create_engine(f'sqlite:///{self.db_path}')
        except Exception as e:
            raise ConnectionError(f"Failed to connect to registry: {str(e)}")

    def _create_table(self) -> None:
        with self.engine.begin() as connection:
            connection.execute(text(_CREATE_BASELINES))

    def execute_query(self, query: str, params: Optional[Dict[str, Any]] = None) -> pd.DataFrame:
        """
        Execute a SQL query and return results as DataFrame

        Args:
            query: SQL query string
            params: Optional dictionary of parameters for the query

        Returns:
            pandas DataFrame containing query results
        """
        if not self.engine:
            raise ConnectionError("Registry connection not established")

        try:
            with self.engine.connect() as connection:
                result = connection.execute(text(query), params if params else {})
                return pd.DataFrame(result.fetchall(), columns=list(result.keys()))
        except SQLAlchemyError as e:
            raise RegistryError(f"Error executing query: {str(e)}")

    def get_table_names(self) -> List[str]:
        """
        Get list of all table names in the registry

        Returns:
            List of table names
        """
        return inspect(self.engine).get_table_names()

    def has_baselines(self) -> bool:
        return BASELINES_TABLE in self.get_table_names()

    def record_band(self, check_id: str, param_key: str, band_lo: float, band_hi: float,
                    tolerance: float) -> None:
        """
        Insert or replace the band of one check instance

        Args:
            check_id: Check id
            param_key: Sorted-key JSON of the check parameters
            band_lo: Lower end of the band
            band_hi: Upper end of the band
            tolerance: Relative widening applied when the band is judged
        """
        if not self.engine:
            raise ConnectionError("Registry connection not established")
        if band_lo > band_hi:
            raise ValueError(f"Empty band [{band_lo}, {band_hi}] for {check_id}")
        row = {
            "check_id": check_id,
            "param_key": param_key,
            "band_lo": float(band_lo),
            "band_hi": float(band_hi),
            "tolerance": float(tolerance),
            "recorded_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        try:
            with self.engine.begin() as connection:
                connection.execute(text(_CREATE_BASELINES))
                connection.execute(text(_UPSERT_BAND), row)
        except SQLAlchemyError as e:
            raise RegistryError(f"Error recording band for {check_id}: {str(e)}")
        logger.info(f"Recorded band [{band_lo:.6g}, {band_hi:.6g}] for {check_id}")

    def get_band(self, check_id: str, param_key: str) -> Optional[Tuple[float, float, float]]:
        """
        Look up a recorded band

        Args:
            check_id: Check id
            param_key: Sorted-key JSON of the check parameters

        Returns:
            (band_lo, band_hi, tolerance), or None when nothing is recorded
        """
        if not self.has_baselines():
            return None
        frame = self.execute_query(
            f"SELECT band_lo, band_hi, tolerance FROM {BASELINES_TABLE} "
            "WHERE check_id = :check_id AND param_key = :param_key",
            {"check_id": check_id, "param_key": param_key},
        )
        if frame.empty:
            return None
        row = frame.iloc[0]
        return float(row["band_lo"]), float(row["band_hi"]), float(row["tolerance"])

    def load_frame(self, frame: pd.DataFrame) -> int:
        """
        Record every band of a frame shaped like export_frame

        Args:
            frame: DataFrame with at least the seed columns

        Returns:
            Number of bands recorded

        Raises:
            RegistryError: A seed column is missing
        """
        missing = [column for column in SEED_COLUMNS if column not in frame.columns]
        if missing:
            raise RegistryError(f"Baseline frame lacks column(s): {', '.join(missing)}")
        for row in frame.itertuples(index=False):
            self.record_band(row.check_id, row.param_key, row.band_lo, row.band_hi, row.tolerance)
        return len(frame)

    @classmethod
    def from_seed(cls, db_path: str, seed_path: Path = SEED_PATH) -> "BaselineRegistry":
        """
        Create a registry file and fill it from a CSV dump of recorded bands

        Args:
            db_path: Path of the SQLite file to create
            seed_path: CSV with the seed columns, the packaged dump by default

        Returns:
            Open BaselineRegistry
        """
        registry = cls(db_path, create=True)
        try:
            count = registry.load_frame(pd.read_csv(seed_path))
        except Exception:
            registry.close()
            registry.db_path.unlink(missing_ok=True)
            raise
        logger.info(f"Seeded {count} band(s) into {db_path} from {seed_path}")
        return registry

    def export_frame(self) -> pd.DataFrame:
        """
        All recorded bands, ordered by check id and parameter key

        Returns:
            DataFrame with the columns of the baselines table
        """
        columns = ["check_id", "param_key", "band_lo", "band_hi", "tolerance", "recorded_at"]
        if not self.has_baselines():
            return pd.DataFrame(columns=columns)
        return self.execute_query(f"SELECT {', '.join(columns)} FROM {BASELINES_TABLE} ORDER BY check_id, param_key")

    def close(self) -> None:
        """
        Close the registry connection
        """
        if self.engine:
            self.engine.dispose()
            self.engine = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
