"""
Ingestion service for scheme, certificate and witness files.
Handles file validation, decoding, and conversion into validated records.
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from ..core.config import settings
from ..core.errors import InputError, SignBoundError
from ..models.schemas import Certificate, ProofScheme, Witness
from .scheme import parse_scheme

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class IngestionService:
    """Service for loading the data files a verification run consumes."""

    def load_scheme(self, path: Optional[PathLike] = None) -> ProofScheme:
        """
        Load a proof scheme from JSON or the parenthesized row format.

        Args:
            path: Scheme file; the shipped main scheme when None

        Returns:
            The parsed and structurally validated ProofScheme
        """
        path = self._resolve(path, settings.main_scheme_file)
        text = self._read_text(path)
        return parse_scheme(path, text)

    def load_certificates(self, paths: Optional[Sequence[PathLike]] = None) -> List[Tuple[str, Certificate]]:
        """
        Load certificate records from one or more JSON files.

        Args:
            paths: Certificate files; the shipped tables when None

        Returns:
            (certificate id, Certificate) pairs, ids of the form "<file>#<position>"
        """
        if not paths:
            paths = [settings.data_path(name) for name in settings.certificate_files]
        loaded: List[Tuple[str, Certificate]] = []
        for path in paths:
            path = Path(path)
            for position, record in enumerate(self._read_records(path)):
                loaded.append((f"{path.name}#{position}", self._build(Certificate, record, path, position)))
        logger.info("loaded %d certificates from %d files", len(loaded), len(paths))
        return loaded

    def load_witnesses(self, path: Optional[PathLike] = None) -> List[Tuple[str, Witness]]:
        """Load leg witnesses; the shipped file when path is None."""
        path = self._resolve(path, settings.witness_file)
        return [
            (f"{path.name}#{position}", self._build(Witness, record, path, position))
            for position, record in enumerate(self._read_records(path))
        ]

    def _resolve(self, path: Optional[PathLike], default_name: str) -> Path:
        return Path(path) if path is not None else settings.data_path(default_name)

    def _validate_file(self, path: Path) -> None:
        """Validate file existence, size and type."""
        if not path.is_file():
            raise InputError(f"File not found: {path}")
        if path.stat().st_size > settings.max_file_size:
            raise InputError(f"File too large: {path.name}. Maximum size is {settings.max_file_size} bytes")
        if path.suffix.lower() not in settings.allowed_file_types:
            raise InputError(
                f"File type not supported: {path.name}. Allowed types: {settings.allowed_file_types}"
            )

    def _read_text(self, path: Path) -> str:
        self._validate_file(path)
        try:
            return path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise InputError(f"{path.name} is not UTF-8 text: {e}")

    def _read_records(self, path: Path) -> List[Any]:
        text = self._read_text(path)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"{path.name}: invalid JSON ({e.msg} at line {e.lineno})")
        if not isinstance(data, list):
            raise InputError(f"{path.name}: expected a JSON list of records")
        return data

    def _build(self, model, record: Any, path: Path, position: int):
        try:
            return model.model_validate(record)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"])
            raise InputError(f"{path.name} record {position}: {where}: {first['msg']}")
        except SignBoundError as e:
            raise InputError(f"{path.name} record {position}: {e.detail}")


# Global service instance
ingestion_service = IngestionService()
