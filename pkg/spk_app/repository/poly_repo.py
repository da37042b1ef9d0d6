"""
Polynomial Repository Layer

This module implements the Repository pattern for the on-disk polynomial
cache. Each entry is one `<family>_<n>.poly` file holding the canonical text
of the polynomial, so the service layer never touches paths or file handles.

Entries are re-validated on read: the text is parsed, serialized again and
both SHA-256 digests must agree. Anything unreadable is treated as a miss.
"""

import hashlib
import os
import tempfile
from pathlib import Path
from typing import List, Optional, Tuple

from spk_app.errors import PolynomialParseError
from spk_app.logger.logger import logger
from spk_app.model.codec import parse, serialize
from spk_app.model.polynomial import Polynomial


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class PolynomialRepository:
    """
    Handles all persistence operations for cached family polynomials.
    """

    SUFFIX = ".poly"

    def __init__(self, cache_dir: Path) -> None:
        """
        Initialize the repository on a cache directory, creating it if needed.

        Args:
            cache_dir (Path): Directory holding the cache files.
        """
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, family: str, n: int) -> Path:
        return self.cache_dir / f"{family}_{n}{self.SUFFIX}"

    def get(self, family: str, n: int) -> Optional[Polynomial]:
        """
        Retrieves a cached polynomial.

        Args:
            family (str): Family name.
            n (int): Index.

        Returns:
            Optional[Polynomial]: The polynomial if a valid entry exists, otherwise None.
        """
        path = self.path_for(family, n)
        if not path.exists():
            return None
        try:
            text = path.read_text(encoding="utf-8").strip()
            polynomial = parse(text)
        except (OSError, UnicodeDecodeError, PolynomialParseError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path.name}: {e}")
            return None
        if _digest(serialize(polynomial)) != _digest(text):
            logger.warning(f"Ignoring cache entry {path.name}: text is not in canonical form")
            return None
        return polynomial

    def save(self, family: str, n: int, polynomial: Polynomial) -> Polynomial:
        """
        Persists a polynomial, replacing any previous entry atomically.

        Args:
            family (str): Family name.
            n (int): Index.
            polynomial (Polynomial): Value to store.

        Returns:
            Polynomial: The stored polynomial.
        """
        path = self.path_for(family, n)
        tmp_name: Optional[str] = None
        try:
            fd, tmp_name = tempfile.mkstemp(dir=self.cache_dir, prefix=f".{path.stem}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(serialize(polynomial) + "\n")
            os.replace(tmp_name, path)
            logger.info(f"Cached {path.name}")
        except OSError as e:
            logger.error(f"Failed to write cache entry {path.name}: {e}")
            if tmp_name is not None and os.path.exists(tmp_name):
                os.unlink(tmp_name)
        return polynomial

    def delete(self, family: str, n: int) -> None:
        """
        Removes one cache entry if present.

        Args:
            family (str): Family name.
            n (int): Index.
        """
        try:
            self.path_for(family, n).unlink()
        except FileNotFoundError:
            pass

    def list_entries(self) -> List[Tuple[str, int]]:
        """Returns the (family, n) pairs currently cached, sorted."""
        out: List[Tuple[str, int]] = []
        for path in self.cache_dir.glob(f"*{self.SUFFIX}"):
            family, _, index = path.stem.rpartition("_")
            if family and index.isdigit():
                out.append((family, int(index)))
        return sorted(out)

    def clear(self) -> None:
        for family, n in self.list_entries():
            self.delete(family, n)
