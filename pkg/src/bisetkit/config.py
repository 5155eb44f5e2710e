import os
import json
import logging
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

CONFIG_FILE = os.path.expanduser("~/.bisetkit_config.json")
CACHE_ENV = "BISETKIT_CACHE"

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    cache_dir: str = Field(default_factory=lambda: os.path.expanduser("~/.cache/bisetkit"))
    bound: int = Field(default=400, ge=1)
    jobs: int = Field(default=1, ge=1)
    use_cache: bool = True


def load_config(path: Optional[str] = None) -> Settings:
    """读取配置：默认值 < 配置文件 < 环境变量"""
    path = path or CONFIG_FILE
    data = {}
    if os.path.exists(path):
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("ignoring unreadable config %s: %s", path, e)
    try:
        settings = Settings(**data)
    except ValidationError as e:
        logger.warning("ignoring invalid config %s: %s", path, e)
        settings = Settings()
    env_cache = os.environ.get(CACHE_ENV)
    if env_cache:
        settings = settings.model_copy(update={"cache_dir": env_cache})
    return settings


def save_config(conf: Settings, path: Optional[str] = None):
    with open(path or CONFIG_FILE, "w") as f:
        json.dump(conf.model_dump(), f, indent=2)
