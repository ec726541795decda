"""
Reference Tables Manager
Loads the qualitative motion table and the scenarios it is evaluated at
from reference_tables.json. Data-driven: expected cells are never hardcoded.
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

from errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_TABLE_FILE = Path(__file__).with_name('reference_tables.json')
SCENARIO_KEYS = ('x', 'E', 'gamma', 'hbar')


class ReferenceTableManager:
    """
    Manages the motion table and the scenario definitions.
    Provides expected-cell lookup and consistency checks of computed rows.
    """

    def __init__(self, json_file=DEFAULT_TABLE_FILE):
        """
        Initialize the reference table manager.

        Args:
            json_file: Path to the JSON reference file
        """
        self.json_file = Path(json_file)
        self.table1: List[dict] = []
        self.columns: List[str] = []
        self.scenarios: Dict[str, dict] = {}
        self._loaded = False

    def load_tables(self) -> None:
        """Load the reference tables once"""
        if self._loaded:
            return

        if not self.json_file.exists():
            logger.warning("reference table file not found: %s", self.json_file)
            self._loaded = True
            return

        logger.debug("loading reference tables from %s", self.json_file)
        try:
            with open(self.json_file, 'r') as f:
                data = json.load(f)
            table = data.get('table1', {})
            self.table1 = list(table.get('rows', []))
            self.columns = list(table.get('columns', []))
            self.scenarios = dict(data.get('scenarios', {}))
        except json.JSONDecodeError as e:
            logger.error("error parsing reference tables: %s", e)

        self._loaded = True

    def get_table1_rows(self) -> List[dict]:
        self.load_tables()
        return [dict(row) for row in self.table1]

    def get_scenario(self, name: str) -> Dict[str, float]:
        """
        SearchConfig keyword set of a named scenario.

        Raises:
            DomainError: unknown scenario name
        """
        self.load_tables()
        if name not in self.scenarios:
            raise DomainError(f"unknown scenario {name!r}")
        scenario = self.scenarios[name]
        return {key: float(scenario[key]) for key in SCENARIO_KEYS if key in scenario}

    def expected_cell(self, scheme: str, column: str) -> Optional[str]:
        """Expected table entry, or None if the scheme or column is not defined"""
        self.load_tables()
        for row in self.table1:
            if row.get('scheme') == scheme:
                return row.get(column)
        return None

    def check_table1(self, computed_rows: List[dict]) -> List[str]:
        """
        Compare computed rows with the expected cells.

        Returns:
            One message per contradicting cell (empty when consistent)
        """
        self.load_tables()
        problems = []
        for row in computed_rows:
            for column in self.columns:
                expected = self.expected_cell(row['scheme'], column)
                if expected is not None and row.get(column) != expected:
                    problems.append(
                        f"{row['scheme']}: {column} computed {row.get(column)!r}, expected {expected!r}"
                    )
        return problems


# Global instance for easy access
_manager: Optional[ReferenceTableManager] = None


def get_reference_table_manager(json_file=DEFAULT_TABLE_FILE) -> ReferenceTableManager:
    """Get or create the global reference table manager"""
    global _manager
    if _manager is None:
        _manager = ReferenceTableManager(json_file)
    return _manager


def get_table1_rows() -> List[dict]:
    return get_reference_table_manager().get_table1_rows()


def get_scenario(name: str) -> Dict[str, float]:
    return get_reference_table_manager().get_scenario(name)


def expected_cell(scheme: str, column: str) -> Optional[str]:
    return get_reference_table_manager().expected_cell(scheme, column)


def check_table1(computed_rows: List[dict]) -> List[str]:
    """Convenience function for the consistency check"""
    return get_reference_table_manager().check_table1(computed_rows)
