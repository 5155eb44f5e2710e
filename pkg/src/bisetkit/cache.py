"""
结果缓存
- 每个条目一个文件，文件名为键的 sha256 摘要
- 写入先落临时文件再 os.replace，并发调用安全
- 损坏或 schema 过期的条目只告警并忽略，缓存故障不中断计算
"""

import datetime
import json
import logging
import os
import tempfile
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, ValidationError

from .errors import CacheError
from .utils import SCHEMA_VERSION, stable_digest

logger = logging.getLogger(__name__)


class CacheEntry(BaseModel):
    key: Dict[str, Any]
    payload: Dict[str, Any]
    created_at: datetime.datetime = Field(default_factory=lambda: datetime.datetime.now(datetime.timezone.utc))


def cache_key(command: str, args: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "command": command, "args": args}


class ResultCache:
    def __init__(self, root: str, enabled: bool = True):
        self.root = root
        self.enabled = enabled
        self.ready = False
        if not enabled:
            return
        try:
            os.makedirs(root, exist_ok=True)
            self.ready = True
        except OSError as e:
            # 目录不可用只是关闭缓存
            logger.warning("%s", CacheError(f"cache disabled: {e.strerror}", root))

    def __repr__(self):
        return f"ResultCache({self.root!r}, ready={self.ready})"

    def path_for(self, key: Dict[str, Any]) -> str:
        return os.path.join(self.root, f"{stable_digest(key)}.json")

    def has(self, command: str, args: Dict[str, Any]) -> bool:
        return self.ready and os.path.exists(self.path_for(cache_key(command, args)))

    def get(self, command: str, args: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        if not self.ready:
            return None
        key = cache_key(command, args)
        path = self.path_for(key)
        if not os.path.exists(path):
            logger.debug("cache miss %s %s", command, args)
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = CacheEntry.model_validate(json.load(f))
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            logger.warning("%s", CacheError(f"corrupted cache entry ignored, recomputing: {type(e).__name__}", path))
            return None
        if entry.key != key:
            # schema_version 不同（或摘要碰撞）
            logger.info("stale cache entry ignored: %s", path)
            return None
        logger.info("cache hit %s %s", command, args)
        return entry.payload

    def put(self, command: str, args: Dict[str, Any], payload: Dict[str, Any]) -> Optional[str]:
        if not self.ready:
            return None
        key = cache_key(command, args)
        path = self.path_for(key)
        entry = CacheEntry(key=key, payload=payload)
        tmp = None
        try:
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(entry.model_dump_json())
            os.replace(tmp, path)
        except OSError as e:
            logger.warning("%s", CacheError(f"cache write failed: {e.strerror}", path))
            if tmp and os.path.exists(tmp):
                os.unlink(tmp)
            return None
        logger.debug("cache write %s", path)
        return path


def cache_get(cache: ResultCache, command: str, args: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    return cache.get(command, args)


def cache_put(cache: ResultCache, command: str, args: Dict[str, Any], payload: Dict[str, Any]) -> Optional[str]:
    return cache.put(command, args, payload)
