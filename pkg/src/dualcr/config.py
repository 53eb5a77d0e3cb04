"""Run configuration: every numerical threshold used by the package lives here."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import ConfigError


@dataclass
class Settings:
    """All tunable tolerances and sizes, with library-wide defaults.

    jet_order is the truncation order used for gauge evaluations; the frame
    fields then carry order jet_order - 2, which leaves room for words of
    length three plus one ambient derivative.
    """

    jet_order: int = 5
    eps_div: float = 1e-12
    eps_solve: float = 1e-9
    cond_limit: float = 1e8
    delta_sing: float = 0.1
    extension_eps: float = 0.1
    seed: int = 20230817

    # membership / decomposition tolerances
    tol_membership: float = 1e-8
    tol_decompose: float = 1e-6
    tol_dual_residual: float = 1e-7

    # quadrature sizes
    grid_n_s: int = 24
    grid_n_theta: int = 24
    path_nodes: int = 16

    def replace(self, **kw) -> "Settings":
        return dataclasses.replace(self, **kw)


DEFAULTS = Settings()

_FIELDS = {f.name: f.type for f in dataclasses.fields(Settings)}


def load_config(path) -> Settings:
    """Read a JSON config file; missing fields fall back to defaults.

    An empty file (or empty object) yields the default settings.
    """
    with open(path) as fh:
        text = fh.read().strip()
    if not text:
        return Settings()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), "<json>", str(exc)) from exc
    if not isinstance(data, dict):
        raise ConfigError(str(path), "<root>", "expected a JSON object")
    return settings_from_dict(data, source=str(path))


def settings_from_dict(data: dict, source: str = "<dict>") -> Settings:
    kwargs = {}
    for key, value in data.items():
        if key not in _FIELDS:
            raise ConfigError(source, key, "unknown field")
        if key in ("jet_order", "grid_n_s", "grid_n_theta", "path_nodes", "seed"):
            if not isinstance(value, int):
                raise ConfigError(source, key, "expected an integer")
        elif not isinstance(value, (int, float)):
            raise ConfigError(source, key, "expected a number")
        kwargs[key] = value
    return Settings(**kwargs)
