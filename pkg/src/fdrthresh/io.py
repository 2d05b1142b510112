"""Plain-text vector interchange: one number per line."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DataError


def read_vector(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        field = line.split(",")[0].strip()
        if not field or field.startswith("#"):
            continue
        try:
            values.append(float(field))
        except ValueError:
            raise DataError(f"{path}:{lineno}: not a number: {field!r}") from None
    if not values:
        raise DataError(f"{path}: no values")
    v = np.array(values)
    if not np.all(np.isfinite(v)):
        raise DataError(f"{path}: non-finite values")
    return v


def write_vector(path, values) -> None:
    Path(path).write_text("".join(f"{x:.17g}\n" for x in np.asarray(values, dtype=float)))
