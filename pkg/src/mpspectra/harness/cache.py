"""Content-addressed on-disk cache of spectral samples in the ESD1 format."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from ..ensembles import EnsembleSpec
from ..errors import CacheFormatError
from ..seeding import Seed
from ..spectral_stats import SpectralSample, read_spectral_sample, write_spectral_sample


def cache_key(spec: EnsembleSpec, seed: Seed) -> str:
    payload = json.dumps({"spec": spec.to_json(), "master": seed.master, "trial": seed.trial}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:40]


class EigenCache:
    """Directory of ``<sha256(spec, seed)>.esd1`` files.

    Writes go through a temporary file and an atomic rename so concurrent
    trials never observe a partial file.
    """

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, spec: EnsembleSpec, seed: Seed) -> Path:
        return self.root / f"{cache_key(spec, seed)}.esd1"

    def get(self, spec: EnsembleSpec, seed: Seed) -> SpectralSample | None:
        path = self.path(spec, seed)
        if not path.exists():
            return None
        try:
            s = read_spectral_sample(path, spec)
        except CacheFormatError:
            return None
        return s if s.seed == seed else None

    def put(self, s: SpectralSample) -> None:
        path = self.path(s.spec, s.seed)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        os.close(fd)
        try:
            write_spectral_sample(tmp, s)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
