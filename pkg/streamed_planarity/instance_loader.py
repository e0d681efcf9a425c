"""Loading and saving instances, certificates and SEFE instances as JSON files."""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any

from .config import CORPUS_DIR, JSON_INDENT
from .errors import InstanceFormatError
from .models import DrawingCertificate, Piece, SefeInstance, StreamedInstance

# Pattern for valid corpus instance IDs (alphanumeric, underscore, hyphen only)
VALID_INSTANCE_ID_PATTERN = re.compile(r"^[a-zA-Z0-9_-]+$")


def read_json(path: Path | str) -> Any:
    """Read a JSON document.

    Raises:
        FileNotFoundError: If the specified file does not exist.
        json.JSONDecodeError: If the file contents are not valid JSON.
    """
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_json(data: Any, path: Path | str) -> None:
    """Write a JSON document atomically: temp file in the target directory, then rename."""
    path_obj = Path(path)
    path_obj.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=path_obj.parent, prefix=f".{path_obj.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=JSON_INDENT, ensure_ascii=False)
            f.write("\n")
        os.replace(temp_name, path_obj)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def write_text(text: str, path: Path | str) -> None:
    """Write a text file atomically."""
    path_obj = Path(path)
    path_obj.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=path_obj.parent, prefix=f".{path_obj.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(temp_name, path_obj)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def load_instance(path: Path | str) -> StreamedInstance:
    """Load a streamed instance from a JSON file.

    Args:
        path: Filesystem path (string or Path) to the JSON instance file.

    Returns:
        The StreamedInstance described by the file.

    Raises:
        InstanceFormatError: If the document does not match the instance schema.
    """
    return StreamedInstance.from_dict(read_json(path))


def save_instance(instance: StreamedInstance, path: Path | str) -> None:
    write_json(instance.to_dict(), path)


def load_certificate(path: Path | str) -> DrawingCertificate:
    return DrawingCertificate.from_dict(read_json(path))


def save_certificate(certificate: DrawingCertificate, path: Path | str) -> None:
    write_json(certificate.to_dict(), path)


def composite_to_dict(pieces: tuple[Piece, ...] | list[Piece]) -> dict[str, Any]:
    return {
        "pieces": [
            {"instance": piece.instance.to_dict(), "certificate": piece.certificate.to_dict()}
            for piece in pieces
            if piece.certificate is not None
        ]
    }


def composite_from_dict(data: dict[str, Any]) -> list[Piece]:
    if not isinstance(data.get("pieces"), list):
        raise InstanceFormatError("Invalid composite witness: 'pieces' must be a list.")
    pieces = []
    for item in data["pieces"]:
        if not isinstance(item, dict) or "instance" not in item or "certificate" not in item:
            raise InstanceFormatError("Invalid composite witness: each piece needs 'instance' and 'certificate'.")
        pieces.append(
            Piece(StreamedInstance.from_dict(item["instance"]), DrawingCertificate.from_dict(item["certificate"]))
        )
    return pieces


def load_witness(path: Path | str) -> DrawingCertificate | list[Piece]:
    """Load either a single certificate or a composite witness."""
    data = read_json(path)
    if isinstance(data, dict) and "pieces" in data:
        return composite_from_dict(data)
    return DrawingCertificate.from_dict(data)


def save_composite(pieces: tuple[Piece, ...] | list[Piece], path: Path | str) -> None:
    write_json(composite_to_dict(pieces), path)


def load_sefe(path: Path | str) -> SefeInstance:
    return SefeInstance.from_dict(read_json(path))


def save_sefe(instance: SefeInstance, path: Path | str) -> None:
    write_json(instance.to_dict(), path)


def list_instances(corpus_dir: Path | str = CORPUS_DIR) -> list[str]:
    """List all instance files in the corpus directory.

    Returns:
        A sorted list of instance IDs (filenames without .json extension). Returns an empty
        list if the corpus directory does not exist.
    """
    corpus_path = Path(corpus_dir)
    if not corpus_path.exists():
        return []
    return sorted(f.stem for f in corpus_path.glob("*.json") if f.is_file())


def get_instance_path(instance_id: str, corpus_dir: Path | str = CORPUS_DIR) -> Path:
    """Get the file path for a corpus instance ID.

    Raises:
        ValueError: If instance_id contains invalid characters or path traversal attempts
    """
    if not VALID_INSTANCE_ID_PATTERN.match(instance_id):
        raise ValueError(
            f"Invalid instance_id '{instance_id}'. "
            f"Only alphanumeric characters, underscores, and hyphens are allowed."
        )

    corpus_path = Path(corpus_dir).resolve()
    candidate_path = (corpus_path / f"{instance_id}.json").resolve()

    # Ensure the resolved path is within the corpus directory
    try:
        candidate_path.relative_to(corpus_path)
    except ValueError:
        raise ValueError(f"Invalid instance_id '{instance_id}'. Path traversal detected.")

    return candidate_path
