"""Shipped seed files for the order-3, 4, 5 spectral sequence runs."""

from __future__ import annotations

import json
import os
from importlib import resources


def seed_dir() -> str | None:
    """Optional override directory for seed files (UFLAG_SEED_DIR)."""
    return os.environ.get("UFLAG_SEED_DIR")


def builtin_seeds(n: int) -> dict:
    """Seed data for order n, honoring the UFLAG_SEED_DIR override."""
    name = f"n{n}.json"
    override = seed_dir()
    if override:
        path = os.path.join(override, name)
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                return json.load(fh)
    ref = resources.files(__package__).joinpath(name)
    if not ref.is_file():
        raise KeyError(f"no builtin seed file for n={n}")
    return json.loads(ref.read_text(encoding="utf-8"))
