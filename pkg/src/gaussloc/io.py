"""JSON state files.

Format::

    {"modes": N, "ordering": "xp-interleaved", "convention": "vacuum-identity",
     "cm": [[...], ...]}

Extra top-level keys are preserved as metadata (``gen symmetric`` adds a
``"symmetric"`` entry with the ``n, b, eps1, eps2`` parameters).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import GaussLocError
from .gaussian_core import GaussianState

ORDERING = "xp-interleaved"
CONVENTION = "vacuum-identity"


class StateFileError(GaussLocError, ValueError):
    """State file is malformed or fails validation."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_state(state: GaussianState, extra: dict | None = None) -> str:
    """Serialise with 17 significant digits; one matrix row per line."""
    head = {"modes": state.n_modes, "ordering": ORDERING, "convention": CONVENTION}
    if extra:
        head.update(extra)
    parts = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items()]
    rows = ",\n".join("    [" + ", ".join(_fmt(x) for x in row) + "]" for row in state.cm)
    parts.append('  "cm": [\n' + rows + "\n  ]")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def loads_state(text: str, source: str = "<string>", check_physical: bool = True):
    """Parse a state file; returns ``(state, metadata)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise StateFileError(
            f"{source}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})\n    {line.strip()}"
        ) from None
    if not isinstance(doc, dict) or "cm" not in doc:
        raise StateFileError(f"{source}: expected an object with a 'cm' entry")
    for key, want in (("ordering", ORDERING), ("convention", CONVENTION)):
        if doc.get(key, want) != want:
            raise StateFileError(f"{source}: unsupported {key} {doc[key]!r}, expected {want!r}")
    try:
        cm = np.array(doc["cm"], dtype=float)
        state = GaussianState(cm)
    except (ValueError, TypeError) as exc:
        raise StateFileError(f"{source}: {exc}") from None
    if "modes" in doc and int(doc["modes"]) != state.n_modes:
        raise StateFileError(
            f"{source}: 'modes' is {doc['modes']} but cm describes {state.n_modes} modes"
        )
    if check_physical and not state.is_physical():
        nu = state.symplectic_eigenvalues()
        raise StateFileError(
            f"{source}: unphysical covariance matrix (smallest symplectic eigenvalue {nu[-1]:.6g})"
        )
    meta = {k: v for k, v in doc.items() if k not in ("cm", "modes", "ordering", "convention")}
    return state, meta


def load_state(path, check_physical: bool = True):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StateFileError(f"{path}: {exc.strerror}") from None
    return loads_state(text, str(path), check_physical)


def save_state(path, state: GaussianState, extra: dict | None = None) -> None:
    Path(path).write_text(dumps_state(state, extra))
