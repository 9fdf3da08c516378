import logging

from evencycle.config import configure_logging, load_config


def test_defaults_when_file_is_missing(tmp_path):
    cfg = load_config(tmp_path / "absent.yaml")
    assert cfg["word_tag_bits"] == 8
    assert cfg["lab"]["report_format"] == "csv"


def test_yaml_overrides_merge_the_lab_section(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("path_length_cap: 4\nlab:\n  workers: 3\n")
    cfg = load_config(path)
    assert cfg["path_length_cap"] == 4
    assert cfg["lab"]["workers"] == 3
    assert cfg["lab"]["oracle_max_n"] == 200


def test_json_config_and_malformed_fallback(tmp_path):
    good = tmp_path / "cfg.json"
    good.write_text('{"trace": true}')
    assert load_config(good)["trace"] is True
    bad = tmp_path / "bad.yaml"
    bad.write_text("lab: [unclosed\n")
    assert load_config(bad)["max_rounds"] == 1_000_000_000


def test_environment_selects_the_file(tmp_path, monkeypatch):
    path = tmp_path / "env.yaml"
    path.write_text("bruteforce_max_n: 50\n")
    monkeypatch.setenv("EVENCYCLE_CONFIG", str(path))
    assert load_config()["bruteforce_max_n"] == 50


def test_configure_logging():
    configure_logging("DEBUG")
    logger = logging.getLogger("evencycle")
    assert logger.level == logging.DEBUG
    assert len(logger.handlers) == 1
    configure_logging("WARNING")
    assert logger.level == logging.WARNING
