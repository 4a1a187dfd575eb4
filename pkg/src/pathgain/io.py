"""Small file helpers shared by the serializers and the CLI."""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_text(path: str | Path, text: str) -> None:
    """Write-then-rename so readers never observe a partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def write_json(path: str | Path, data) -> None:
    write_text(path, dumps(data))


def read_json(path: str | Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
