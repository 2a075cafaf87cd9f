import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lzsm2ph.config import default_config, load_config
from lzsm2ph.errors import ConfigError
from lzsm2ph.io import SCHEMA_VERSION, read_table, write_json, write_table
from lzsm2ph.lzsm import Convention
from lzsm2ph.model import DriveSpec, SystemSpec, mhz
from lzsm2ph.propagate import Engine, collapse_operators


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestDefaults:
    def test_match_reference_parameters(self):
        cfg = default_config()
        assert cfg.system == SystemSpec()
        assert cfg.drive == DriveSpec()
        assert cfg.system.omega_ge == pytest.approx(mhz(7240.0))
        assert cfg.system.gamma_eg == pytest.approx(0.033)
        assert cfg.system.temperature == pytest.approx(0.073)
        assert cfg.engine is Engine.SCHRODINGER
        assert cfg.convention is Convention.EQ8_COUPLING
        assert (cfg.tol, cfg.n_samples, cfg.fmt) == (1e-10, 401, "csv")

    def test_empty_file_is_defaults(self, tmp_path):
        cfg = load_config(_write(tmp_path, ""))
        assert cfg.system == SystemSpec() and cfg.drive == DriveSpec()

    def test_sweep_axes(self):
        amps, offs = default_config().sweep_axes()
        assert len(amps) == 71 and len(offs) == 61
        assert amps[-1] == pytest.approx(mhz(70.0))
        assert offs[0] == pytest.approx(mhz(-3.0)) and offs[-1] == pytest.approx(mhz(3.0))


class TestUnits:
    def test_conversions(self, tmp_path):
        cfg = load_config(_write(tmp_path, """
[system]
omega_ge = 7240 MHz
gamma_eg = 0.033 MHz
temperature = 0.073 K
[drive]
duration = 0.4 us
amplitude = 55600 kHz
mod_depth = -0.0125 GHz
"""))
        assert cfg.system == SystemSpec()
        assert cfg.drive.omega_max == pytest.approx(DriveSpec().omega_max)
        assert cfg.drive.mod_depth == pytest.approx(DriveSpec().mod_depth)
        assert cfg.drive.duration == pytest.approx(0.4)

    def test_micro_sign_units(self, tmp_path):
        cfg = load_config(_write(tmp_path, "[drive]\nduration = 0.4 μs\n"))
        assert cfg.drive.duration == pytest.approx(0.4)

    def test_zero_temperature_flows_downstream(self, tmp_path):
        cfg = load_config(_write(tmp_path, "[system]\ntemperature = 0 K\n"))
        assert not collapse_operators(cfg.system).raising()

    def test_missing_unit_names_field(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(_write(tmp_path, "[system]\nomega_ge = 7.24\n"))
        assert info.value.field == "system.omega_ge"
        assert info.value.line == 2
        assert "system.omega_ge" in str(info.value)

    def test_unknown_unit(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(_write(tmp_path, "[drive]\nduration = 400 fortnights\n"))
        assert info.value.field == "drive.duration"


class TestValidation:
    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(_write(tmp_path, "[drive]\namplitude = 50 MHz\nphase = 3\n"))
        assert info.value.field == "drive.phase" and info.value.line == 3

    def test_unknown_section(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(_write(tmp_path, "[drive]\n[laser]\npower = 1\n"))
        assert info.value.line == 2

    def test_duplicate_key(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(_write(tmp_path, "[drive]\namplitude = 50 MHz\namplitude = 51 MHz\n"))
        assert info.value.field == "drive.amplitude" and info.value.line == 3

    def test_duplicate_section(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, "[drive]\n[drive]\n"))

    def test_key_outside_section(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(_write(tmp_path, "amplitude = 50 MHz\n"))
        assert info.value.line == 1

    def test_range_violation(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, "[system]\nomega_ef = 8 GHz\n"))
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, "[run]\ntol = -1\n"))
        with pytest.raises(ConfigError):
            load_config(_write(tmp_path, "[run]\nengine = quantum\n"))

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.ini")


def test_overrides_take_precedence(tmp_path):
    cfg = load_config(_write(tmp_path, "[run]\nengine = lindblad\nthreads = 3\n"))
    cfg = cfg.with_overrides(engine="effective", tol=1e-7, threads=None)
    assert cfg.engine is Engine.EFFECTIVE and cfg.tol == 1e-7 and cfg.threads == 3
    with pytest.raises(ConfigError):
        cfg.with_overrides(colour="red")


def test_manifest_reload(tmp_path):
    cfg = load_config(_write(tmp_path, "[drive]\namplitude = 47 MHz\n[run]\nformat = json\n"))
    path = write_json(tmp_path / "m.json", {"config": cfg.values})
    again = load_config(path)
    assert again.drive == cfg.drive and again.fmt == "json"


class TestTables:
    finite = st.floats(allow_nan=False, allow_infinity=False, width=64)

    @given(st.lists(st.lists(finite, min_size=3, max_size=3), min_size=1, max_size=20))
    def test_csv_round_trip_is_exact(self, tmp_path_factory, rows):
        p = write_table(tmp_path_factory.mktemp("t") / "x.csv", ["a", "b", "c"], rows, {"k": [1, 2]})
        t = read_table(p)
        assert np.array_equal(t.data, np.array(rows))
        assert t.metadata == {"schema_version": SCHEMA_VERSION, "k": [1, 2]}

    @given(st.lists(st.lists(finite, min_size=2, max_size=2), min_size=1, max_size=20))
    def test_json_round_trip_is_exact(self, tmp_path_factory, rows):
        p = write_table(tmp_path_factory.mktemp("t") / "x", ["a", "b"], rows, fmt="json")
        assert p.suffix == ".json"
        t = read_table(p)
        assert np.array_equal(t.data, np.array(rows))

    def test_nan_survives_json(self, tmp_path):
        p = write_table(tmp_path / "n.json", ["a"], [[np.nan], [1.5]])
        assert json.loads(p.read_text())["rows"][0] == [None]
        assert np.isnan(read_table(p).data[0, 0])

    def test_dotted_stem_keeps_its_name(self, tmp_path):
        p = write_table(tmp_path / "fig4_D-12.5MHz", ["a"], [[1.0]])
        assert p.name == "fig4_D-12.5MHz.csv"

    def test_header_layout(self, tmp_path):
        p = write_table(tmp_path / "h.csv", ["t_us", "p_g"], [[0.1, 1.0]], {"engine": "x"})
        lines = p.read_text().splitlines()
        assert lines[0] == "# schema_version: 1"
        assert lines[1] == '# engine: "x"'
        assert lines[2] == "t_us,p_g"
        assert lines[3] == "0.10000000000000001,1"
        assert read_table(p).column("p_g")[0] == 1.0

    def test_width_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            write_table(tmp_path / "w.csv", ["a", "b"], [[1.0]])
