"""Tests for the config module."""

import copy
import json
from pathlib import Path
from unittest.mock import patch

import pytest

from raagscl.config import (
    DEFAULT_CONFIG,
    RunConfig,
    get_config_dir,
    get_config_path,
    load_config,
    save_config,
    seed_from_environment,
    validate_config,
)


def defaults():
    return copy.deepcopy(DEFAULT_CONFIG)


class TestGetConfigDir:
    """Tests for get_config_dir function."""

    def test_home_override(self):
        """RAAGSCL_HOME wins over the platform default."""
        with patch.dict("os.environ", {"RAAGSCL_HOME": "/tmp/raagscl-home"}):
            assert get_config_dir() == Path("/tmp/raagscl-home")

    def test_get_config_dir_windows(self):
        """On Windows, config dir should be %APPDATA%/raagscl."""
        with (
            patch("raagscl.config.sys.platform", "win32"),
            patch.dict(
                "os.environ",
                {"APPDATA": "C:\\Users\\Test\\AppData\\Roaming", "RAAGSCL_HOME": ""},
            ),
        ):
            config_dir = get_config_dir()
            assert config_dir == Path("C:\\Users\\Test\\AppData\\Roaming") / "raagscl"

    def test_get_config_dir_linux(self):
        """On Linux, config dir should be ~/.raagscl."""
        with (
            patch("raagscl.config.sys.platform", "linux"),
            patch.dict("os.environ", {"RAAGSCL_HOME": ""}),
            patch("raagscl.config.Path.home", return_value=Path("/home/testuser")),
        ):
            assert get_config_dir() == Path("/home/testuser") / ".raagscl"


class TestGetConfigPath:
    """Tests for get_config_path function."""

    def test_get_config_path(self):
        """Config path should be config.json inside config dir."""
        with patch("raagscl.config.get_config_dir", return_value=Path("/test/config")):
            assert get_config_path() == Path("/test/config") / "config.json"


class TestLoadConfig:
    """Tests for load_config function."""

    def test_load_config_defaults(self, tmp_path):
        """Returns defaults when no config file exists."""
        with patch("raagscl.config.get_config_path", return_value=tmp_path / "nonexistent.json"):
            assert load_config() == DEFAULT_CONFIG

    def test_load_config_with_existing_file(self, tmp_path):
        """Loads settings from existing config file, defaults fill the rest."""
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"max_power": 8, "last_graph": "/graphs/c5.json"}))

        with patch("raagscl.config.get_config_path", return_value=config_path):
            config = load_config()
            assert config["max_power"] == 8
            assert config["last_graph"] == "/graphs/c5.json"
            assert config["samples"] == DEFAULT_CONFIG["samples"]

    def test_load_config_with_invalid_json(self, tmp_path):
        """Returns defaults when config file contains invalid JSON."""
        config_path = tmp_path / "config.json"
        config_path.write_text("not valid json {{{")

        with patch("raagscl.config.get_config_path", return_value=config_path):
            assert load_config() == DEFAULT_CONFIG

    def test_load_config_warns_on_bad_value(self, tmp_path, capsys):
        """Invalid stored values are reset and reported."""
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({"max_power": 0}))

        with patch("raagscl.config.get_config_path", return_value=config_path):
            config = load_config()

        assert config["max_power"] == DEFAULT_CONFIG["max_power"]
        assert "max_power" in capsys.readouterr().out


class TestSaveConfig:
    """Tests for save_config function."""

    def test_save_config_creates_file(self, tmp_path):
        """Saves config to JSON file, creating the directory."""
        config_dir = tmp_path / "nested" / "raagscl"
        config_path = config_dir / "config.json"

        with (
            patch("raagscl.config.get_config_dir", return_value=config_dir),
            patch("raagscl.config.get_config_path", return_value=config_path),
        ):
            save_config({"max_power": 5, "last_graph": "g.json"})

        loaded = json.loads(config_path.read_text())
        assert loaded == {"max_power": 5, "last_graph": "g.json"}

    def test_save_config_swallows_os_error(self, tmp_path, capsys):
        """Unwritable config path must not raise, just warn."""
        config_dir = tmp_path / "raagscl"
        with (
            patch("raagscl.config.get_config_dir", return_value=config_dir),
            patch("raagscl.config.get_config_path", return_value=config_dir / "config.json"),
            patch("builtins.open", side_effect=OSError("disk full")),
        ):
            save_config({"samples": 10})

        assert "Failed to save config" in capsys.readouterr().out

    def test_save_config_swallows_serialization_error(self, tmp_path, capsys):
        """Non-JSON-serializable settings are reported, not raised."""
        config_dir = tmp_path / "raagscl"
        with (
            patch("raagscl.config.get_config_dir", return_value=config_dir),
            patch("raagscl.config.get_config_path", return_value=config_dir / "config.json"),
        ):
            save_config({"bad": object()})

        assert "Failed to save config" in capsys.readouterr().out

    def test_save_and_load_roundtrip(self, tmp_path):
        """Saved settings come back from load_config."""
        config_dir = tmp_path / "raagscl"
        with (
            patch("raagscl.config.get_config_dir", return_value=config_dir),
            patch("raagscl.config.get_config_path", return_value=config_dir / "config.json"),
        ):
            settings = defaults()
            settings.update(oracle_radius=3, seed=42, output_dir="/out")
            save_config(settings)
            assert load_config() == settings


class TestDefaultConfig:
    """Snapshot test for DEFAULT_CONFIG keys and values."""

    def test_default_config_snapshot(self):
        """All expected defaults present with correct values."""
        assert DEFAULT_CONFIG == {
            "max_power": 6,
            "witness_radius": None,
            "samples": 200,
            "oracle_radius": 4,
            "ball_cap": 6,
            "seed": 0,
            "last_graph": "",
            "output_dir": "",
        }


class TestValidateConfig:
    """Tests for validate_config function."""

    def test_valid_config_passes_unchanged(self):
        """A fully valid config passes through without warnings."""
        config = defaults()
        validated, warnings = validate_config(config)
        assert warnings == []
        assert validated == DEFAULT_CONFIG

    def test_max_power_out_of_range(self):
        """max_power must lie in 1..12."""
        config = defaults()
        config["max_power"] = 13
        validated, warnings = validate_config(config)
        assert validated["max_power"] == 6
        assert any("max_power" in w for w in warnings)

    def test_bool_is_not_an_int(self):
        """True is rejected where an integer is expected."""
        config = defaults()
        config["samples"] = True
        validated, warnings = validate_config(config)
        assert validated["samples"] == 200
        assert len(warnings) == 1

    def test_witness_radius_accepts_null_and_ints(self):
        """witness_radius may be null or a non-negative int."""
        config = defaults()
        config["witness_radius"] = 5
        assert validate_config(config)[1] == []
        config["witness_radius"] = -1
        validated, warnings = validate_config(config)
        assert validated["witness_radius"] is None
        assert any("witness_radius" in w for w in warnings)

    def test_oracle_radius_above_cap(self):
        """oracle_radius may not exceed ball_cap."""
        config = defaults()
        config["ball_cap"] = 3
        config["oracle_radius"] = 5
        validated, warnings = validate_config(config)
        assert validated["oracle_radius"] == 3
        assert any("oracle_radius" in w for w in warnings)

    def test_invalid_ball_cap(self):
        """ball_cap above 8 resets to the default."""
        config = defaults()
        config["ball_cap"] = 9
        validated, warnings = validate_config(config)
        assert validated["ball_cap"] == 6
        assert any("ball_cap" in w for w in warnings)

    def test_invalid_strings(self):
        """Non-string paths reset to empty."""
        config = defaults()
        config["last_graph"] = 3
        config["output_dir"] = None
        validated, warnings = validate_config(config)
        assert validated["last_graph"] == ""
        assert validated["output_dir"] == ""
        assert len(warnings) == 2

    def test_multiple_invalid_values_produce_multiple_warnings(self):
        """Each invalid key adds one warning."""
        config = defaults()
        config["max_power"] = "six"
        config["seed"] = -4
        config["samples"] = 1.5
        _, warnings = validate_config(config)
        assert len(warnings) == 3


class TestSeedFromEnvironment:
    """Tests for seed_from_environment."""

    def test_unset_uses_default(self):
        """No variable means the default."""
        with patch.dict("os.environ", {"RAAGSCL_SEED": ""}):
            assert seed_from_environment(7) == 7

    def test_integer_value(self):
        """An integer value wins."""
        with patch.dict("os.environ", {"RAAGSCL_SEED": "123"}):
            assert seed_from_environment(7) == 123

    def test_garbage_value(self, capsys):
        """Non-integers are ignored with a warning."""
        with patch.dict("os.environ", {"RAAGSCL_SEED": "abc"}):
            assert seed_from_environment(7) == 7
        assert "RAAGSCL_SEED" in capsys.readouterr().out

    def test_negative_value(self):
        """Negative seeds fall back to the default."""
        with patch.dict("os.environ", {"RAAGSCL_SEED": "-3"}):
            assert seed_from_environment(7) == 7


class TestRunConfig:
    """Tests for RunConfig."""

    def test_from_settings_defaults(self):
        """Settings fill every field when nothing is overridden."""
        with patch.dict("os.environ", {"RAAGSCL_SEED": ""}):
            config = RunConfig.from_settings(defaults())
        assert config.graph_path is None
        assert config.word == ""
        assert config.max_power == 6
        assert config.oracle_radius == 4
        assert config.seed == 0

    def test_overrides_win_unless_none(self):
        """Non-None overrides replace settings, None leaves them alone."""
        settings = defaults()
        settings["last_graph"] = "/graphs/old.json"
        with patch.dict("os.environ", {"RAAGSCL_SEED": ""}):
            config = RunConfig.from_settings(
                settings, word="a b", max_power=3, graph_path=None, samples=None
            )
        assert config.word == "a b"
        assert config.max_power == 3
        assert config.graph_path == Path("/graphs/old.json")
        assert config.samples == 200

    def test_environment_seed(self):
        """RAAGSCL_SEED replaces the stored seed."""
        with patch.dict("os.environ", {"RAAGSCL_SEED": "99"}):
            assert RunConfig.from_settings(defaults()).seed == 99

    @pytest.mark.parametrize(
        "field, value",
        [("max_power", 0), ("samples", -1), ("witness_radius", -2), ("oracle_radius", -1)],
    )
    def test_rejects_out_of_range(self, field, value):
        """Out-of-range fields raise ValueError."""
        with pytest.raises(ValueError, match=field):
            RunConfig(graph_path=None, word="", **{field: value})
