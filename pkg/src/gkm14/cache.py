"""JSON disk cache for enumeration and series results.

Entries are single files written atomically (temp file + rename), so any
number of readers can share a directory with one writer.  An entry whose
``format_version`` does not match is ignored and recomputed.
"""

import hashlib
import json
import os
import tempfile

FORMAT_VERSION = 1
ENV_VAR = "GKM14_CACHE_DIR"

_active = None


class DiskCache:
    def __init__(self, directory):
        self.directory = os.path.abspath(directory)
        os.makedirs(self.directory, exist_ok=True)

    def _path(self, key):
        digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
        return os.path.join(self.directory, f"{key[0]}-{digest[:24]}.json")

    def get(self, key):
        path = self._path(key)
        try:
            with open(path) as fh:
                entry = json.load(fh)
        except (OSError, ValueError):
            return None
        if not isinstance(entry, dict) or entry.get("format_version") != FORMAT_VERSION:
            return None
        if entry.get("key") != json.loads(json.dumps(key)):
            return None
        return entry.get("value")

    def put(self, key, value):
        entry = {"format_version": FORMAT_VERSION, "key": key, "value": value}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(entry, fh)
        os.replace(tmp, self._path(key))

    def entries(self):
        return sorted(f for f in os.listdir(self.directory) if f.endswith(".json"))

    def clear(self):
        n = 0
        for f in self.entries():
            os.remove(os.path.join(self.directory, f))
            n += 1
        return n


def set_cache_dir(directory):
    """Activate a cache directory (None disables caching)."""
    global _active
    _active = None if directory is None else DiskCache(directory)
    return _active


def get_cache():
    global _active
    if _active is None and os.environ.get(ENV_VAR):
        _active = DiskCache(os.environ[ENV_VAR])
    return _active
