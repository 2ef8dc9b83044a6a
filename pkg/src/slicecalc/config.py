"""Run configuration read from an INI file (stdlib configparser).

Every key is optional; see ``DEFAULT_INI`` for the full list with defaults.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import SchemaError
from .spectrum import ScanConfig

DEFAULT_INI = """\
[tolerances]
# relative residual thresholds (times the scale of each check)
residual = 1e-10
series = 1e-9
taylor_exp = 1e-8
fd = 1e-6
commutator = 1e-10
cond_cap = 1e12
spectrum = 1e-4

[grid]
nu = 201
nv = 101

[contour]
nodes = 256
# contour radius as a multiple of the scan radius plus the clearance
radius_factor = 1.5

[truncation]
series_K = 60
main_K = 5, 10, 20, 40
taylor_K = 50
exp_K = 20
sigma_K = 200

[fuzz]
seed = 42
cases = 10
lemma_cases = 50
resolvent_cases = 30
series_cases = 20

[output]
dir = slicecalc-out
"""


@dataclass
class RunConfig:
    residual_tol: float = 1e-10
    series_tol: float = 1e-9
    taylor_exp_tol: float = 1e-8
    fd_tol: float = 1e-6
    commutator_tol: float = 1e-10
    cond_cap: float = 1e12
    spectrum_tol: float = 1e-4
    nu: int = 201
    nv: int = 101
    nodes: int = 256
    radius_factor: float = 1.5
    series_K: int = 60
    main_K: tuple[int, ...] = (5, 10, 20, 40)
    taylor_K: int = 50
    exp_K: int = 20
    sigma_K: int = 200
    seed: int = 42
    cases: int = 10
    lemma_cases: int = 50
    resolvent_cases: int = 30
    series_cases: int = 20
    out_dir: str = "slicecalc-out"
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        for f in fields(self):
            if f.name.endswith("_tol") or f.name == "cond_cap":
                if not getattr(self, f.name) > 0:
                    raise SchemaError(f"{f.name} must be positive, got {getattr(self, f.name)!r}")
        for name in ("nu", "nv", "nodes", "cases", "lemma_cases", "resolvent_cases", "series_cases"):
            if getattr(self, name) < 1:
                raise SchemaError(f"{name} must be at least 1")
        if self.nodes < 4:
            raise SchemaError("nodes must be at least 4")
        if not self.radius_factor > 1.0:
            raise SchemaError("radius_factor must exceed 1")
        if not 0 <= self.seed < 2 ** 64:
            raise SchemaError("seed must be an unsigned 64-bit integer")

    def scan_config(self) -> ScanConfig:
        return ScanConfig(nu=self.nu, nv=self.nv)

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "source"}


_KEYS = {
    ("tolerances", "residual"): ("residual_tol", float),
    ("tolerances", "series"): ("series_tol", float),
    ("tolerances", "taylor_exp"): ("taylor_exp_tol", float),
    ("tolerances", "fd"): ("fd_tol", float),
    ("tolerances", "commutator"): ("commutator_tol", float),
    ("tolerances", "cond_cap"): ("cond_cap", float),
    ("tolerances", "spectrum"): ("spectrum_tol", float),
    ("grid", "nu"): ("nu", int),
    ("grid", "nv"): ("nv", int),
    ("contour", "nodes"): ("nodes", int),
    ("contour", "radius_factor"): ("radius_factor", float),
    ("truncation", "series_k"): ("series_K", int),
    ("truncation", "main_k"): ("main_K", lambda s: tuple(int(x) for x in s.replace(",", " ").split())),
    ("truncation", "taylor_k"): ("taylor_K", int),
    ("truncation", "exp_k"): ("exp_K", int),
    ("truncation", "sigma_k"): ("sigma_K", int),
    ("fuzz", "seed"): ("seed", int),
    ("fuzz", "cases"): ("cases", int),
    ("fuzz", "lemma_cases"): ("lemma_cases", int),
    ("fuzz", "resolvent_cases"): ("resolvent_cases", int),
    ("fuzz", "series_cases"): ("series_cases", int),
    ("output", "dir"): ("out_dir", str),
}


def parse_config(text: str, source: str | None = None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise SchemaError(f"config parse error: {exc}") from exc
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if (section, key) not in _KEYS:
                raise SchemaError(f"unknown config key [{section}] {key}")
            name, conv = _KEYS[(section, key)]
            try:
                values[name] = conv(raw)
            except ValueError as exc:
                raise SchemaError(f"bad value for [{section}] {key}: {raw!r}") from exc
    return RunConfig(**values, source=source)


def load_config(path: str | Path | None = None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))
