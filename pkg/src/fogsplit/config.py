"""Scenario configuration files.

Plain INI with five sections::

    [scenario]   id, output
    [topology]   site_count, iot_per_site, core_hops
    [demands]    active_iot_count, intensity, sources, demand.N = SOURCE, MBPS
    [solver]     name, engine, node_limit, time_limit, candidate_policy, min_allocation
    [sweep]      traffic_mbps, k
    [profiles]   KIND.SUBSYSTEM.FIELD = value   (e.g. iot.network.idle_power = 0.34)

Ranges accept ``1..6``, ``1, 2, 5`` or a mix (``1..3, 8``).
"""

from __future__ import annotations

import configparser
import hashlib
from pathlib import Path

from .scenarios import ScenarioConfig
from .topology import CandidatePolicy, NodeKind


class ConfigError(ValueError):
    pass


_KNOWN = {
    "scenario": {"id", "output"},
    "topology": {"site_count", "iot_per_site", "core_hops"},
    "demands": {"active_iot_count", "intensity", "sources"},
    "solver": {"name", "engine", "node_limit", "time_limit", "candidate_policy", "min_allocation"},
    "sweep": {"traffic_mbps", "k"},
    "profiles": set(),
}


def parse_range(text: str, kind=float) -> tuple:
    """``"1..3, 8"`` -> (1, 2, 3, 8); ranges step by 1."""
    values: list[float] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = (s.strip() for s in part.split("..", 1))
            lo_v, hi_v = float(lo), float(hi)
            if hi_v < lo_v:
                raise ConfigError(f"empty range {part!r}")
            n = int(round(hi_v - lo_v))
            if abs(lo_v + n - hi_v) > 1e-9:
                raise ConfigError(f"range {part!r} must span a whole number of unit steps")
            values.extend(lo_v + i for i in range(n + 1))
        else:
            values.append(float(part))
    if not values:
        raise ConfigError(f"empty value list {text!r}")
    if kind is int:
        if any(v != int(v) for v in values):
            raise ConfigError(f"expected integers in {text!r}")
        return tuple(int(v) for v in values)
    return tuple(kind(v) for v in values)


def _kind(name: str) -> NodeKind:
    try:
        return NodeKind(name)
    except ValueError:
        raise ConfigError(f"unknown device kind {name!r}; expected one of "
                          f"{', '.join(k.value for k in NodeKind)}") from None


def _optional(value: str | None, conv):
    if value is None or value.strip().lower() in ("", "none"):
        return None
    return conv(value)


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, default_id=path.stem)


def parse_config(text: str, default_id: str = "scenario") -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None

    explicit: dict[int, tuple[int, float]] = {}
    for section in cp.sections():
        if section not in _KNOWN:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp[section]:
            if section == "profiles":
                continue
            if section == "demands" and key.startswith("demand."):
                continue
            if key not in _KNOWN[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")

    def get(section, key, conv=str, default=None):
        if not cp.has_option(section, key):
            return default
        raw = cp.get(section, key)
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None

    kw: dict = {}
    kw["scenario_id"] = get("scenario", "id", default=default_id)
    kw["output"] = get("scenario", "output")
    for key, name in (("site_count", "site_count"), ("iot_per_site", "iot_per_site"), ("core_hops", "core_hops")):
        v = get("topology", key, int)
        if v is not None:
            kw[name] = v
    v = get("demands", "active_iot_count", int)
    if v is not None:
        kw["active_iot_count"] = v
    v = get("demands", "intensity", float)
    if v is not None:
        kw["intensity"] = v
    v = get("demands", "sources", lambda s: parse_range(s, int))
    if v is not None:
        kw["sources"] = v
        kw.setdefault("active_iot_count", len(v))
    if cp.has_section("demands"):
        for key, raw in cp["demands"].items():
            if not key.startswith("demand."):
                continue
            try:
                idx = int(key.split(".", 1)[1])
                src, mbps = (s.strip() for s in raw.split(","))
                explicit[idx] = (int(src), float(mbps))
            except ValueError:
                raise ConfigError(f"[demands] {key} = {raw!r}: expected 'SOURCE, TRAFFIC_MBPS'") from None
    if explicit:
        kw["explicit_demands"] = tuple(explicit[i] for i in sorted(explicit))
        kw["active_iot_count"] = len(explicit)

    v = get("sweep", "traffic_mbps", parse_range)
    if v is not None:
        kw["traffic_mbps"] = v
    v = get("sweep", "k", lambda s: parse_range(s, int))
    if v is not None:
        kw["k_values"] = v

    v = get("solver", "name")
    if v is not None:
        kw["solver"] = v
    v = get("solver", "engine")
    if v is not None:
        kw["engine"] = v
    if cp.has_option("solver", "node_limit"):
        kw["node_limit"] = get("solver", "node_limit", lambda s: _optional(s, int))
    if cp.has_option("solver", "time_limit"):
        kw["time_limit"] = get("solver", "time_limit", lambda s: _optional(s, float))
    v = get("solver", "candidate_policy", CandidatePolicy)
    if v is not None:
        kw["candidate_policy"] = v
    v = get("solver", "min_allocation", float)
    if v is not None:
        kw["min_allocation"] = v

    overrides = {}
    if cp.has_section("profiles"):
        for key, raw in cp["profiles"].items():
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"[profiles] key {key!r} must be KIND.SUBSYSTEM.FIELD")
            kind = _kind(parts[0])
            overrides[(kind, parts[1], parts[2])] = raw.strip()
    kw["profile_overrides"] = overrides

    try:
        config = ScenarioConfig(**kw)
        config.profiles()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if kw.get("engine", "highs") not in ("highs", "bnb"):
        raise ConfigError(f"unknown engine {kw['engine']!r}")
    return config


def config_checksum(text: str, extra: str = "") -> str:
    return hashlib.sha256((text + "\0" + extra).encode()).hexdigest()

