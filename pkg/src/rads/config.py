"""Device configuration files.

Configs are INI files with three sections::

    [device]
    omega_r_ghz = 5.69          ; resonator frequency
    n_qubits = 11               ; ancilla Q0 plus the register
    g_mhz = 13.5                ; one value for all qubits, or a comma list
    omega_idle_ghz = 5.39       ; idle (parking) frequencies, scalar or list
    crosstalk_mhz = 0           ; scalar for every pair, or rows split by ';'
    n_max = auto                ; photon cutoff, 'auto' = reachable excitation + 1
    idle_decoupled = true       ; parked qubits are ignored (no coupling)

    [disorder]
    g_pct = 0                   ; couplings scaled by 1 + U(-g_pct, g_pct)/100
    crosstalk_mhz = 0           ; extra pair crosstalk U(-x, x)
    seed = 0

    [engine]
    name = reference            ; or 'integrator'

Every key is optional; missing ones take the ``paper-default`` values below.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .model import DeviceConfig

ENGINES = ("reference", "integrator")

PAPER_DEFAULT_TEXT = """\
[device]
omega_r_ghz = 5.69
n_qubits = 11
g_mhz = 13.5
omega_idle_ghz = 5.39
crosstalk_mhz = 0
n_max = auto
idle_decoupled = true

[disorder]
g_pct = 0
crosstalk_mhz = 0
seed = 0

[engine]
name = reference
"""


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """A loaded config: nominal device, disorder recipe and engine choice."""

    base: DeviceConfig
    disorder_g_pct: float = 0.0
    disorder_crosstalk_mhz: float = 0.0
    seed: int = 0
    engine: str = "reference"
    digest: str = ""

    @property
    def device(self) -> DeviceConfig:
        """Nominal device with the seeded disorder applied."""
        if self.disorder_g_pct == 0 and self.disorder_crosstalk_mhz == 0:
            return self.base
        return self.base.with_disorder(
            self.disorder_g_pct, self.disorder_crosstalk_mhz, self.seed
        )

    def override(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "engine" in kw and kw["engine"] not in ENGINES:
            raise ConfigError(f"unknown engine {kw['engine']!r}")
        return replace(self, **kw)


def paper_default() -> DeviceConfig:
    """Resonator at 5.69 GHz, 11 qubits (Q0 + 10) at g = 13.5 MHz, parked 300 MHz below."""
    return DeviceConfig.homogeneous(11, g_mhz=13.5, omega_r_ghz=5.69, idle_detuning_mhz=-300.0)


def _floats(text: str, key: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{key}: expected numbers, got {text!r}") from None


def _per_qubit(text: str, key: str, n: int) -> tuple[float, ...]:
    vals = _floats(text, key)
    if len(vals) == 1:
        vals = vals * n
    if len(vals) != n:
        raise ConfigError(f"{key}: {len(vals)} values for {n} qubits")
    return tuple(vals)


def _crosstalk(text: str, n: int) -> np.ndarray:
    rows = [r for r in text.split(";") if r.strip()]
    if len(rows) == 1 and len(_floats(rows[0], "crosstalk_mhz")) == 1:
        chi = np.full((n, n), _floats(rows[0], "crosstalk_mhz")[0])
        np.fill_diagonal(chi, 0.0)
        return chi
    chi = np.array([_floats(r, "crosstalk_mhz") for r in rows], dtype=float)
    if chi.shape != (n, n):
        raise ConfigError(f"crosstalk_mhz: need an {n}x{n} matrix, got {chi.shape}")
    return chi


def _canonical(parser: configparser.ConfigParser) -> dict:
    return {
        s: {k: " ".join(parser[s][k].split()) for k in sorted(parser[s])}
        for s in sorted(parser.sections())
    }


def config_digest(parser: configparser.ConfigParser) -> str:
    """SHA-256 of the parsed key/values; independent of key and section order."""
    blob = json.dumps(_canonical(parser), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def loads(text: str) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.read_string(PAPER_DEFAULT_TEXT)
    defaults = _canonical(parser)
    user = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        user.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    for section in user.sections():
        if section not in defaults:
            raise ConfigError(f"unknown section [{section}]")
        for key, value in user[section].items():
            if key not in defaults[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            parser[section][key] = value

    dev = parser["device"]
    try:
        n = dev.getint("n_qubits")
        idle_decoupled = dev.getboolean("idle_decoupled")
        omega_r = dev.getfloat("omega_r_ghz")
        g_pct = parser["disorder"].getfloat("g_pct")
        x_mhz = parser["disorder"].getfloat("crosstalk_mhz")
        seed = parser["disorder"].getint("seed")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if n < 2:
        raise ConfigError(f"n_qubits must be >= 2 (ancilla + register), got {n}")
    n_max_text = dev["n_max"].strip()
    try:
        n_max = None if n_max_text == "auto" else int(n_max_text)
    except ValueError:
        raise ConfigError(f"n_max: expected an integer or 'auto', got {n_max_text!r}") from None
    engine = parser["engine"]["name"].strip()
    if engine not in ENGINES:
        raise ConfigError(f"unknown engine {engine!r} (choose from {', '.join(ENGINES)})")
    try:
        base = DeviceConfig(
            omega_r_ghz=omega_r,
            omega_idle_ghz=_per_qubit(dev["omega_idle_ghz"], "omega_idle_ghz", n),
            g_mhz=_per_qubit(dev["g_mhz"], "g_mhz", n),
            chi_mhz=_crosstalk(dev["crosstalk_mhz"], n),
            n_max=n_max,
            idle_decoupled=idle_decoupled,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if g_pct < 0 or x_mhz < 0:
        raise ConfigError("disorder magnitudes must be >= 0")
    return RunConfig(base, g_pct, x_mhz, seed, engine, config_digest(parser))


def load(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return loads(text)


def load_default() -> RunConfig:
    return loads(PAPER_DEFAULT_TEXT)
