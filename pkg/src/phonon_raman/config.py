"""Scenario configuration: a small line-based ``[section]`` / ``key = value`` format.

Every frequency is an ordinary frequency in Hz and is converted to an
internal angular frequency on ingestion. Times are seconds, lengths metres
and wavenumbers 1/m when the condensate is given by its SI pair
(c_s, xi); with an internal (m, g, rho) condensate the same keys are read
with a unit time and unit length. Comments start with ``#`` or ``;``.

Sections and keys (defaults in brackets)::

    [condensate]  m, g, rho            or   c_s [m/s], xi [m]
    [drive]       Omega1 [Hz], Omega2 [= Omega1], Delta [Hz], delta_Hz,
                  kappa [auto = -k], k [auto: solves omega(k) = delta],
                  mode [phonon | free]
    [pulse]       shape [rectangular], T [auto-pi] (seconds), area [pi/2]
    [scan]        parameter, min, max, points [1], spacing [linear | log],
                  workers [1]
    [output]      directory [out], formats [both]
    [fock]        n_max [8], n [1], reverse [false]
    [lambda]      omega_over_delta [0.01], periods [1], points [401]
    [ramp]        g_ratio [4], tau_omega [200], shape [smooth-tanh],
                  k_xi [1], kxi_min [0.1], kxi_max [3], kxi_points [9], points [201]
    [flow]        c_s [1e-3 m/s], v_max [2e-3 m/s], width [1e-6 m],
                  r_min, r_max [-/+ 5e-6 m], points [401],
                  wavelength [1e-5 m], cdot [1e-3 m/s^2]
    [checks]      adiabaticity_max [0.1], kxi_max [0.3], leakage_db_max [-40],
                  rate_min_Hz [10], rate_max_Hz [100], T_target [0.1],
                  T_decades [1]
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Callable

from .bogoliubov import RAMP_SHAPES
from .errors import DomainError
from .pulse_shaping import SHAPES
from .units_params import CondensateParams, SiConversion, derive_condensate

SCAN_PARAMETERS = ("delta_offset_g", "delta_Hz", "Omega1", "Omega2", "Delta", "T", "k_xi")
FORMATS = ("csv", "json", "both")


class ConfigError(ValueError):
    """All schema violations found in one config text."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))


def _positive(x: float) -> bool:
    return x > 0


def _nonneg(x: float) -> bool:
    return x >= 0


@dataclass(frozen=True)
class _Key:
    kind: str  # float | int | bool | str | float-or-auto
    default: Any = None
    check: Callable[[Any], bool] | None = None
    choices: tuple[str, ...] | None = None
    what: str = ""


_SCHEMA: dict[str, dict[str, _Key]] = {
    "condensate": {
        "m": _Key("float", None, _positive, what="must be > 0"),
        "g": _Key("float", None, _nonneg, what="must be >= 0"),
        "rho": _Key("float", None, _positive, what="must be > 0"),
        "c_s": _Key("float", None, _positive, what="must be > 0"),
        "xi": _Key("float", None, _positive, what="must be > 0"),
    },
    "drive": {
        "Omega1": _Key("float", None, _nonneg, what="must be >= 0"),
        "Omega2": _Key("float", None, _nonneg, what="must be >= 0"),
        "Delta": _Key("float", None, _positive, what="must be > 0"),
        "delta_Hz": _Key("float", None),
        "kappa": _Key("float-or-auto", "auto"),
        "k": _Key("float-or-auto", "auto"),
        "mode": _Key("str", "phonon", choices=("phonon", "free")),
    },
    "pulse": {
        "shape": _Key("str", "rectangular", choices=SHAPES),
        "T": _Key("float-or-auto", "auto-pi", _positive, what="must be > 0"),
        "area": _Key("float", 0.5 * math.pi, _positive, what="must be > 0"),
    },
    "scan": {
        "parameter": _Key("str", None, choices=SCAN_PARAMETERS),
        "min": _Key("float", None),
        "max": _Key("float", None),
        "points": _Key("int", 1, lambda n: 1 <= n <= 10_000, what="must be in [1, 10000]"),
        "spacing": _Key("str", "linear", choices=("linear", "log")),
        "workers": _Key("int", 1, lambda n: 1 <= n <= 256, what="must be in [1, 256]"),
    },
    "output": {
        "directory": _Key("str", "out"),
        "formats": _Key("str", "both", choices=FORMATS),
    },
    "fock": {
        "n_max": _Key("int", 8, lambda n: 1 <= n <= 64, what="must be in [1, 64]"),
        "n": _Key("int", 1, _nonneg, what="must be >= 0"),
        "reverse": _Key("bool", False),
    },
    "lambda": {
        "omega_over_delta": _Key("float", 0.01, lambda x: 0 < x < 1, what="must be in (0, 1)"),
        "periods": _Key("float", 1.0, _positive, what="must be > 0"),
        "points": _Key("int", 401, lambda n: n >= 2, what="must be >= 2"),
    },
    "ramp": {
        "g_ratio": _Key("float", 4.0, _nonneg, what="must be >= 0"),
        "tau_omega": _Key("float", 200.0, _positive, what="must be > 0"),
        "shape": _Key("str", "smooth-tanh", choices=RAMP_SHAPES),
        "k_xi": _Key("float", 1.0, _positive, what="must be > 0"),
        "kxi_min": _Key("float", 0.1, _positive, what="must be > 0"),
        "kxi_max": _Key("float", 3.0, _positive, what="must be > 0"),
        "kxi_points": _Key("int", 9, lambda n: n >= 1, what="must be >= 1"),
        "points": _Key("int", 201, lambda n: n >= 2, what="must be >= 2"),
    },
    "flow": {
        "c_s": _Key("float", 1e-3, _positive, what="must be > 0"),
        "v_max": _Key("float", 2e-3),
        "width": _Key("float", 1e-6, _positive, what="must be > 0"),
        "r_min": _Key("float", -5e-6),
        "r_max": _Key("float", 5e-6),
        "points": _Key("int", 401, lambda n: n >= 2, what="must be >= 2"),
        "wavelength": _Key("float", 1e-5, _positive, what="must be > 0"),
        "cdot": _Key("float", 1e-3),
    },
    "checks": {
        "adiabaticity_max": _Key("float", 0.1, _positive, what="must be > 0"),
        "kxi_max": _Key("float", 0.3, _positive, what="must be > 0"),
        "leakage_db_max": _Key("float", -40.0),
        "rate_min_Hz": _Key("float", 10.0, _nonneg, what="must be >= 0"),
        "rate_max_Hz": _Key("float", 100.0, _positive, what="must be > 0"),
        "T_target": _Key("float", 0.1, _positive, what="must be > 0"),
        "T_decades": _Key("float", 1.0, _positive, what="must be > 0"),
    },
}

_REQUIRED_SECTIONS = ("condensate", "drive")
_HEADER = re.compile(r"^\[\s*([A-Za-z_][\w-]*)\s*\]$")
_ASSIGN = re.compile(r"^([A-Za-z_][\w-]*)\s*=\s*(.*)$")


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated configuration. ``values`` holds raw user units; ``provenance`` says where each came from."""

    values: dict[str, dict[str, Any]]
    provenance: dict[str, str]
    condensate: CondensateParams
    units: SiConversion
    si_condensate: bool
    drive_internal: dict[str, float] = field(default_factory=dict)

    def get(self, section: str, key: str) -> Any:
        return self.values[section][key]

    def section(self, name: str) -> dict[str, Any]:
        return dict(self.values[name])

    @property
    def scan_requested(self) -> bool:
        return self.values["scan"]["parameter"] is not None

    def with_value(self, section: str, key: str, value: Any) -> "ScenarioConfig":
        """Copy with one raw value replaced and downstream quantities re-derived."""
        values = {s: dict(v) for s, v in self.values.items()}
        values[section][key] = value
        prov = dict(self.provenance)
        prov[f"{section}.{key}"] = "override"
        return _finish(values, prov)


def _convert(raw: str, spec: _Key) -> Any:
    if spec.kind == "float":
        x = float(raw)
        if not math.isfinite(x):
            raise ValueError("must be finite")
        return x
    if spec.kind == "int":
        if not re.fullmatch(r"[+-]?\d+", raw):
            raise ValueError("must be an integer")
        return int(raw)
    if spec.kind == "bool":
        low = raw.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValueError("must be true or false")
    if spec.kind == "float-or-auto":
        if raw.lower() in ("auto", "auto-pi"):
            return raw.lower()
        x = float(raw)
        if not math.isfinite(x):
            raise ValueError("must be finite")
        return x
    return raw


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate ``text``; raises :class:`ConfigError` listing every problem."""
    problems: list[str] = []
    seen: dict[tuple[str, str], int] = {}
    raw: dict[str, dict[str, tuple[str, int]]] = {}
    section: str | None = None

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        if stripped.startswith("["):
            m = _HEADER.match(stripped)
            if not m:
                problems.append(f"line {lineno}: malformed section header {stripped!r}")
                section = None
                continue
            section = m.group(1)
            if section not in _SCHEMA:
                problems.append(f"line {lineno}: unknown section [{section}]")
            raw.setdefault(section, {})
            continue
        m = _ASSIGN.match(stripped)
        if not m:
            problems.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        if section is None:
            problems.append(f"line {lineno}: key {m.group(1)!r} appears before any [section]")
            continue
        key, value = m.group(1), m.group(2).split("#")[0].strip()
        if (section, key) in seen:
            problems.append(
                f"line {lineno}: duplicate key {key!r} in [{section}] (first defined on line {seen[section, key]})"
            )
            continue
        seen[section, key] = lineno
        if section in _SCHEMA and key not in _SCHEMA[section]:
            problems.append(f"line {lineno}: unknown key {key!r} in [{section}]")
            continue
        if value == "":
            problems.append(f"line {lineno}: empty value for {key!r}")
            continue
        raw[section][key] = (value, lineno)

    for name in _REQUIRED_SECTIONS:
        if name not in raw:
            problems.append(f"missing required section [{name}]")

    values: dict[str, dict[str, Any]] = {}
    prov: dict[str, str] = {}
    for name, keys in _SCHEMA.items():
        values[name] = {}
        given = raw.get(name, {})
        for key, spec in keys.items():
            if key not in given:
                values[name][key] = spec.default
                prov[f"{name}.{key}"] = "default"
                continue
            text_value, lineno = given[key]
            try:
                v = _convert(text_value, spec)
            except ValueError as exc:
                problems.append(f"line {lineno}: {name}.{key} = {text_value!r}: {exc}")
                continue
            if spec.choices is not None and v not in spec.choices:
                problems.append(f"line {lineno}: {name}.{key} must be one of {', '.join(spec.choices)}")
                continue
            if spec.check is not None and isinstance(v, (int, float)) and not spec.check(v):
                problems.append(f"line {lineno}: {name}.{key} {spec.what}")
                continue
            values[name][key] = v
            prov[f"{name}.{key}"] = f"line {lineno}"

    problems.extend(_cross_checks(values, raw, problems))
    if problems:
        raise ConfigError(problems)
    return _finish(values, prov)


def _cross_checks(values, raw, earlier) -> list[str]:
    out = []
    cond = raw.get("condensate", {})
    internal = [k for k in ("m", "g", "rho") if k in cond]
    si = [k for k in ("c_s", "xi") if k in cond]
    if "condensate" in raw:
        if internal and si:
            out.append("[condensate]: give either m, g, rho or the SI pair c_s, xi, not both")
        elif si and len(si) != 2:
            out.append("[condensate]: the SI pair needs both c_s and xi")
        elif not si and len(internal) != 3:
            missing = [k for k in ("m", "g", "rho") if k not in cond]
            out.append(f"[condensate]: missing required key(s) {', '.join(missing)}")
    drv = raw.get("drive", {})
    if "drive" in raw:
        for key in ("Omega1", "Delta", "delta_Hz"):
            if key not in drv:
                out.append(f"[drive]: missing required key {key}")
    d = values["drive"]
    if d["mode"] == "phonon" and d["delta_Hz"] is not None and d["delta_Hz"] <= 0:
        out.append(
            f"line {drv['delta_Hz'][1]}: drive.delta_Hz must be > 0 in phonon mode "
            "(only then is the condensate itself left untouched by the drive)"
        )
    s = values["scan"]
    scan = raw.get("scan", {})
    if scan:
        if s["parameter"] is None:
            out.append("[scan]: missing required key parameter")
        for key in ("min", "max"):
            if s["parameter"] is not None and key not in scan:
                out.append(f"[scan]: missing required key {key}")
        if s["min"] is not None and s["max"] is not None and s["max"] < s["min"]:
            out.append("[scan]: max must be >= min")
        if s["spacing"] == "log" and s["min"] is not None and s["min"] <= 0:
            out.append("[scan]: log spacing needs min > 0")
    r = values["ramp"]
    if r["kxi_max"] < r["kxi_min"]:
        out.append("[ramp]: kxi_max must be >= kxi_min")
    f = values["flow"]
    if f["r_max"] <= f["r_min"]:
        out.append("[flow]: r_max must be > r_min")
    c = values["checks"]
    if c["rate_max_Hz"] < c["rate_min_Hz"]:
        out.append("[checks]: rate_max_Hz must be >= rate_min_Hz")
    fk = values["fock"]
    if isinstance(fk["n"], int) and isinstance(fk["n_max"], int) and fk["n"] > fk["n_max"]:
        out.append("[fock]: n must not exceed n_max")
    return out


def _finish(values: dict[str, dict[str, Any]], prov: dict[str, str]) -> ScenarioConfig:
    cond = values["condensate"]
    if cond["c_s"] is not None:
        units = SiConversion.from_sound_speed(cond["c_s"], cond["xi"])
        params = derive_condensate(1.0, 1.0, 1.0)
        si = True
    else:
        try:
            params = derive_condensate(cond["m"], cond["g"], cond["rho"])
        except DomainError as exc:
            raise ConfigError([f"[condensate]: {exc}"]) from None
        units = SiConversion(1.0, 1.0)
        si = False
    d = values["drive"]
    omega1 = units.hz_to_internal(d["Omega1"])
    omega2 = omega1 if d["Omega2"] is None else units.hz_to_internal(d["Omega2"])
    drive = {
        "Omega1": omega1,
        "Omega2": omega2,
        "Delta": units.hz_to_internal(d["Delta"]),
        "delta": units.hz_to_internal(d["delta_Hz"]),
    }
    if d["k"] != "auto":
        drive["k"] = units.wavenumber_from_si(d["k"])
    if d["kappa"] != "auto":
        drive["kappa"] = units.wavenumber_from_si(d["kappa"])
    return ScenarioConfig(values=values, provenance=prov, condensate=params, units=units, si_condensate=si, drive_internal=drive)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
