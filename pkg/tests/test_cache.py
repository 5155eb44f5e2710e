import json
import logging
import os

from bisetkit.cache import CacheEntry, ResultCache, cache_get, cache_key, cache_put
from bisetkit.utils import SCHEMA_VERSION


def test_round_trip(tmp_path):
    cache = ResultCache(str(tmp_path / "c"))
    assert cache_get(cache, "nv", {"group": "C2"}) is None
    path = cache_put(cache, "nv", {"group": "C2"}, {"nv": True})
    assert path and os.path.exists(path)
    assert cache_get(cache, "nv", {"group": "C2"}) == {"nv": True}
    assert cache_get(cache, "nv", {"group": "C3"}) is None


def test_no_temporary_files_left(tmp_path):
    cache = ResultCache(str(tmp_path))
    for i in range(3):
        cache.put("table", {"group": f"C{i + 2}"}, {"i": i})
    assert sorted(os.listdir(tmp_path)) == sorted(
        os.path.basename(cache.path_for(cache_key("table", {"group": f"C{i + 2}"}))) for i in range(3)
    )


def test_corrupt_entry_is_ignored(tmp_path, caplog):
    cache = ResultCache(str(tmp_path))
    path = cache.put("qh", {"group": "C2"}, {"verdict": "pass"})
    with open(path, "w") as f:
        f.write("{not json")
    with caplog.at_level(logging.WARNING, logger="bisetkit.cache"):
        assert cache.get("qh", {"group": "C2"}) is None
    assert "corrupted cache entry" in caplog.text
    cache.put("qh", {"group": "C2"}, {"verdict": "pass"})
    assert cache.get("qh", {"group": "C2"}) == {"verdict": "pass"}


def test_stale_entry_is_ignored(tmp_path):
    cache = ResultCache(str(tmp_path))
    key = cache_key("decomp", {"group": "C3"})
    stale = CacheEntry(key={**key, "schema_version": SCHEMA_VERSION + 1}, payload={"old": True})
    with open(cache.path_for(key), "w") as f:
        f.write(stale.model_dump_json())
    assert cache.get("decomp", {"group": "C3"}) is None


def test_disabled_cache(tmp_path):
    cache = ResultCache(str(tmp_path / "off"), enabled=False)
    assert cache.put("nv", {"group": "C2"}, {"nv": True}) is None
    assert cache.get("nv", {"group": "C2"}) is None
    assert not os.path.exists(tmp_path / "off")


def test_entry_payload_on_disk(tmp_path):
    cache = ResultCache(str(tmp_path))
    path = cache.put("nv", {"group": "C2"}, {"nv": True})
    with open(path) as f:
        data = json.load(f)
    assert data["key"]["command"] == "nv"
    assert "created_at" in data
