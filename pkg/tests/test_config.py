from bisetkit import config
from bisetkit.config import Settings, load_config, save_config


def test_defaults_with_env_cache(isolated_settings):
    conf = load_config()
    assert conf.bound == 400
    assert conf.jobs == 1
    assert conf.use_cache
    assert conf.cache_dir == str(isolated_settings / "cache")


def test_save_and_load(isolated_settings, monkeypatch):
    monkeypatch.delenv(config.CACHE_ENV)
    save_config(Settings(cache_dir="/tmp/x", bound=1000, jobs=2, use_cache=False))
    conf = load_config()
    assert conf == Settings(cache_dir="/tmp/x", bound=1000, jobs=2, use_cache=False)


def test_env_overrides_file(isolated_settings):
    save_config(Settings(cache_dir="/tmp/x"))
    assert load_config().cache_dir == str(isolated_settings / "cache")


def test_invalid_config_falls_back(isolated_settings, monkeypatch):
    monkeypatch.delenv(config.CACHE_ENV)
    (isolated_settings / "config.json").write_text('{"bound": 0}')
    assert load_config().bound == 400
    (isolated_settings / "config.json").write_text("{broken")
    assert load_config().jobs == 1
