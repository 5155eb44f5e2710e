import pytest

from bisetkit import config
from bisetkit.grammar import load_group


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """配置文件与缓存目录指向临时路径"""
    monkeypatch.setattr(config, "CONFIG_FILE", str(tmp_path / "config.json"))
    monkeypatch.setenv(config.CACHE_ENV, str(tmp_path / "cache"))
    return tmp_path


@pytest.fixture(scope="session")
def c1():
    return load_group("1")


@pytest.fixture(scope="session")
def c2():
    return load_group("C2")


@pytest.fixture(scope="session")
def c3():
    return load_group("C3")


@pytest.fixture(scope="session")
def v4():
    return load_group("V4")


@pytest.fixture(scope="session")
def s3():
    return load_group("S3")


@pytest.fixture(scope="session")
def a4():
    return load_group("A4")


@pytest.fixture(scope="session")
def a5():
    return load_group("A5")
