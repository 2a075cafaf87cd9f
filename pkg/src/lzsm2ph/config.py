"""Run configuration: INI-style files with explicit physical units.

Example::

    [system]
    omega_ge = 7.24 GHz
    gamma_eg = 33 kHz
    temperature = 73 mK

    [drive]
    duration = 400 ns
    mod_depth = -12.5 MHz
    amplitude = 55.6 MHz

Frequencies are ordinary frequencies (the loader applies the 2*pi);
``gamma_eg`` is a plain rate.  Every key is optional; missing keys take
the reference-experiment defaults.
"""

from __future__ import annotations

import configparser
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError
from .lzsm import Convention
from .model import TWO_PI, DriveSpec, SystemSpec
from .propagate import Engine

PRESETS = ("fig1-eigen", "fig2-trajectory", "fig2-majorana", "fig3-batch", "fig3-map", "fig4-scaling")
# names a manifest may record; ``simulate`` is the plain single-trajectory run
RUNS = PRESETS + ("simulate",)

_FREQ = {"hz": 1e-6, "khz": 1e-3, "mhz": 1.0, "ghz": 1e3}
_RATE = _FREQ
_TIME = {"ps": 1e-6, "ns": 1e-3, "us": 1.0, "μs": 1.0, "ms": 1e3, "s": 1e6}
_TEMP = {"uk": 1e-6, "μk": 1e-6, "mk": 1e-3, "k": 1.0}

# section -> key -> (kind, default string)
SCHEMA = {
    "system": {
        "omega_ge": ("freq", "7.24 GHz"),
        "omega_ef": ("freq", "6.90 GHz"),
        "dipole_ratio_ef": ("float", repr(float(np.sqrt(2.0)))),
        "dipole_ratio_fh": ("float", repr(float(np.sqrt(3.0)))),
        "n_levels": ("int", "4"),
        "gamma_eg": ("rate", "33 kHz"),
        "temperature": ("temp", "73 mK"),
    },
    "drive": {
        "duration": ("time", "400 ns"),
        "mod_depth": ("freq", "-12.5 MHz"),
        "offset": ("freq", "0 MHz"),
        "amplitude": ("freq", "55.6 MHz"),
        "envelope_order": ("int", "4"),
        "envelope_cutoff": ("float", repr(float(np.log(0.01)))),
    },
    "run": {
        "engine": ("engine", "schrodinger"),
        "tol": ("float", "1e-10"),
        "sweep_tol": ("float", "1e-8"),
        "n_samples": ("int", "401"),
        "threads": ("int", "1"),
        "convention": ("convention", "eq8"),
        "format": ("format", "csv"),
        "out_dir": ("str", "out"),
        "preset": ("str", ""),
    },
    "sweep": {
        "amplitude_min": ("freq", "0 MHz"),
        "amplitude_max": ("freq", "70 MHz"),
        "amplitude_step": ("freq", "1 MHz"),
        "offset_min": ("freq", "-3 MHz"),
        "offset_max": ("freq", "3 MHz"),
        "offset_step": ("freq", "0.1 MHz"),
        "contour_levels": ("floats", "0.5, 0.9"),
    },
    "scaling": {
        "mod_depths": ("freqs", "-12.5 MHz, -20 MHz, -25 MHz"),
        "n_points": ("int", "8"),
        "p_min": ("float", "0.02"),
        "p_max": ("float", "0.8"),
    },
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zμ]+)\s*$")


def _with_unit(text, table, field_name):
    m = _QUANTITY.match(text)
    if not m:
        raise ConfigError(f"expected '<number> <unit>' with unit in {sorted(table)}, got {text!r}",
                          field=field_name)
    unit = m.group(2).lower()
    if unit not in table:
        raise ConfigError(f"unknown unit {m.group(2)!r}; expected one of {sorted(table)}", field=field_name)
    return float(m.group(1)) * table[unit]


def _convert(kind, text, name):
    text = text.strip()
    if text == "" and kind not in ("str",):
        raise ConfigError("empty value", field=name)
    try:
        if kind == "freq":
            return TWO_PI * _with_unit(text, _FREQ, name)
        if kind == "freqs":
            return tuple(TWO_PI * _with_unit(p, _FREQ, name) for p in text.split(","))
        if kind == "rate":
            return _with_unit(text, _RATE, name)
        if kind == "time":
            return _with_unit(text, _TIME, name)
        if kind == "temp":
            return _with_unit(text, _TEMP, name)
        if kind == "float":
            return float(text)
        if kind == "floats":
            return tuple(float(p) for p in text.split(","))
        if kind == "int":
            return int(text)
        if kind == "engine":
            return Engine(text.lower())
        if kind == "convention":
            return Convention(text.lower())
        if kind == "format":
            if text.lower() not in ("csv", "json"):
                raise ValueError(text)
            return text.lower()
    except ConfigError:
        raise
    except ValueError:
        raise ConfigError(f"cannot parse {text!r} as {kind}", field=name) from None
    return text


@dataclass(frozen=True)
class RunConfig:
    system: SystemSpec
    drive: DriveSpec
    engine: Engine
    tol: float
    sweep_tol: float
    n_samples: int
    threads: int
    convention: Convention
    fmt: str
    out_dir: Path
    preset: str
    sweep: dict
    scaling: dict
    values: dict = field(default_factory=dict)  # section -> key -> unit string, as loaded

    def sweep_axes(self):
        s = self.sweep
        amps = _axis(s["amplitude_min"], s["amplitude_max"], s["amplitude_step"])
        offs = _axis(s["offset_min"], s["offset_max"], s["offset_step"])
        return amps, offs

    def with_overrides(self, **flags) -> "RunConfig":
        """Apply command-line overrides (keys from the ``[run]`` section)."""
        sections = {sec: dict(vals) for sec, vals in self.values.items()}
        for key, value in flags.items():
            if value is None:
                continue
            if key not in SCHEMA["run"]:
                raise ConfigError("unknown override", field=f"run.{key}")
            sections["run"][key] = str(value.value if hasattr(value, "value") else value)
        return _build(sections, {})


def _axis(lo, hi, step):
    if step <= 0 or hi < lo:
        raise ConfigError("sweep axis needs min <= max and a positive step")
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


def _line_numbers(text):
    lines, section = {}, None
    for k, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
            lines.setdefault((section, None), k)
        elif "=" in s and section and not s.startswith(("#", ";")):
            lines[(section, s.split("=", 1)[0].strip())] = k
    return lines


def _build(sections: dict, lines: dict) -> RunConfig:
    values = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}
    for sec, keys in sections.items():
        if sec not in SCHEMA:
            raise ConfigError(f"unknown section [{sec}]", line=lines.get((sec, None)))
        for key, text in keys.items():
            if key not in SCHEMA[sec]:
                raise ConfigError("unknown key", field=f"{sec}.{key}", line=lines.get((sec, key)))
            values[sec][key] = str(text).strip()

    parsed = {}
    for sec, keys in SCHEMA.items():
        parsed[sec] = {}
        for key, (kind, _) in keys.items():
            try:
                parsed[sec][key] = _convert(kind, values[sec][key], f"{sec}.{key}")
            except ConfigError as exc:
                raise ConfigError(exc.message, field=f"{sec}.{key}",
                                  line=lines.get((sec, key))) from None

    sysv, drv, run = parsed["system"], parsed["drive"], parsed["run"]
    try:
        system = SystemSpec(omega_ge=sysv["omega_ge"], omega_ef=sysv["omega_ef"],
                            dipole_ratio_ef=sysv["dipole_ratio_ef"], dipole_ratio_fh=sysv["dipole_ratio_fh"],
                            n_levels=sysv["n_levels"], gamma_eg=sysv["gamma_eg"],
                            temperature=sysv["temperature"])
        drive = DriveSpec(duration=drv["duration"], mod_depth=drv["mod_depth"], offset=drv["offset"],
                          omega_max=drv["amplitude"], envelope_order=drv["envelope_order"],
                          envelope_cutoff=drv["envelope_cutoff"])
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if not run["tol"] > 0 or not run["sweep_tol"] > 0:
        raise ConfigError("tolerances must be positive", field="run.tol")
    if run["n_samples"] < 2:
        raise ConfigError("need at least 2 samples", field="run.n_samples")
    if run["threads"] < 1:
        raise ConfigError("threads must be >= 1", field="run.threads")
    if run["preset"] and run["preset"] not in RUNS:
        raise ConfigError(f"unknown preset {run['preset']!r}", field="run.preset")
    cfg = RunConfig(system=system, drive=drive, engine=run["engine"], tol=run["tol"],
                    sweep_tol=run["sweep_tol"], n_samples=run["n_samples"], threads=run["threads"],
                    convention=run["convention"], fmt=run["format"], out_dir=Path(run["out_dir"]),
                    preset=run["preset"], sweep=parsed["sweep"], scaling=parsed["scaling"],
                    values=values)
    cfg.sweep_axes()
    return cfg


def default_config() -> RunConfig:
    return _build({}, {})


def load_config(path=None) -> RunConfig:
    """Read and validate a run configuration.

    ``path=None`` gives the defaults.  A ``.json`` path is read as a run
    manifest written by a previous preset and reproduces that run.
    """
    if path is None:
        return default_config()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if path.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad manifest: {exc.msg}", line=exc.lineno) from None
        return _build(doc.get("config", {}), {})
    parser = configparser.ConfigParser(strict=True, interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.DuplicateOptionError as exc:
        raise ConfigError("duplicate key", field=f"{exc.section}.{exc.option}", line=exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", line=exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside any [section]", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError("unparseable line", line=line) from None
    lines = _line_numbers(text)
    sections = {sec: dict(parser.items(sec)) for sec in parser.sections()}
    return _build(sections, lines)
