"""On-disk result cache shared by CLI invocations.

Entries are pickles named by a SHA-256 of the computation's identity
(canonical generators, order, field, kind and parameters).  Writes go to a
temporary file in the same directory followed by ``os.replace``, so readers
never observe a partial entry.  Unreadable entries and entries written under
another version tag are dropped and recomputed.
"""

from __future__ import annotations

import hashlib
import os
import pickle
import tempfile
import warnings

CACHE_VERSION = "thickenings-cache-1"
ENV_VAR = "THICKENINGS_CACHE_DIR"


def ideal_identity(ideal):
    """Deterministic text naming an ideal: ring, field, order and sorted generators."""
    ring = ideal.ring
    gens = sorted(g.monic().to_str() for g in ideal.generators)
    return "|".join([",".join(ring.names), ring.field.name, repr(ring.order), ";".join(gens)])


def cache_key(kind, ideal=None, **params):
    parts = [CACHE_VERSION, kind]
    if ideal is not None:
        parts.append(ideal_identity(ideal))
    parts += [f"{k}={params[k]!r}" for k in sorted(params)]
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()


class Cache:
    def __init__(self, directory=None, version=CACHE_VERSION, enabled=True):
        directory = (directory or os.environ.get(ENV_VAR)) if enabled else None
        self.directory = directory
        self.version = version
        if directory:
            os.makedirs(directory, exist_ok=True)

    @property
    def enabled(self):
        return bool(self.directory)

    def path(self, key):
        return os.path.join(self.directory, key + ".pkl")

    def load(self, key):
        """The stored payload, or ``None`` on a miss."""
        if not self.enabled:
            return None
        path = self.path(key)
        try:
            with open(path, "rb") as fh:
                tag, payload = pickle.load(fh)
        except FileNotFoundError:
            return None
        except Exception as e:  # noqa: BLE001 - any unreadable entry is discarded
            warnings.warn(f"discarding corrupt cache entry {os.path.basename(path)}: {e}", stacklevel=2)
            self._remove(path)
            return None
        if tag != self.version:
            self._remove(path)
            return None
        return payload

    def store(self, key, payload):
        if not self.enabled:
            return
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".pkl")
        try:
            with os.fdopen(fd, "wb") as fh:
                pickle.dump((self.version, payload), fh, protocol=pickle.HIGHEST_PROTOCOL)
            os.replace(tmp, self.path(key))
        except BaseException:
            self._remove(tmp)
            raise

    def get_or_compute(self, key, compute):
        hit = self.load(key)
        if hit is not None:
            return hit
        value = compute()
        self.store(key, value)
        return value

    @staticmethod
    def _remove(path):
        try:
            os.remove(path)
        except OSError:
            pass
