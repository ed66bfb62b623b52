"""INI-style scenario files: ``key = value`` lines grouped in sections."""

from __future__ import annotations

import configparser
import dataclasses

from .differentiators import HanTdParams, IntdParams, TdState
from .nlpid import FalTerm, NlpidParams
from .plant import NmsdParams, PlantState
from .scenario import ScenarioConfig
from .signals import NoiseSpec, ReferenceSpec
from .simcore import IntegratorConfig

__all__ = ["ConfigError", "dumps", "loads", "load"]


class ConfigError(ValueError):
    pass


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def dumps(cfg: ScenarioConfig) -> str:
    lines = []

    def section(name, items):
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {_fmt(v)}" for k, v in items)
        lines.append("")

    section("scenario", [("td_kind", cfg.td_kind), ("mode", cfg.mode), ("horizon", cfg.horizon),
                         ("controller_dt", cfg.controller_dt)])
    section("reference", dataclasses.asdict(cfg.reference).items())
    section("noise", dataclasses.asdict(cfg.noise).items())
    if cfg.intd_params is not None:
        section("intd", dataclasses.asdict(cfg.intd_params).items())
    if cfg.han_td_params is not None:
        section("han", dataclasses.asdict(cfg.han_td_params).items())
    if cfg.mode == "closed_loop":
        nl = []
        for prefix, term in (("p", cfg.nlpid_params.p_term), ("d", cfg.nlpid_params.d_term),
                             ("i", cfg.nlpid_params.i_term)):
            nl += [(f"{prefix}_{k}", v) for k, v in dataclasses.asdict(term).items()]
        section("nlpid", nl)
        section("plant", dataclasses.asdict(cfg.plant_params).items())
    section("integrator", dataclasses.asdict(cfg.integrator).items())
    init = [("td1_z1", cfg.initial_td1.z1), ("td1_z2", cfg.initial_td1.z2)]
    if cfg.mode == "closed_loop":
        init = [("plant_x1", cfg.initial_plant.x1), ("plant_x2", cfg.initial_plant.x2)] + init
        init += [("td2_z1", cfg.initial_td2.z1), ("td2_z2", cfg.initial_td2.z2)]
    section("initial", init)
    return "\n".join(lines)


_SECTIONS = ("scenario", "reference", "noise", "intd", "han", "nlpid", "plant", "integrator", "initial")
_STRINGS = {"td_kind", "mode", "kind", "distribution", "method"}
_INTS = {"seed"}


def _values(cp, name, allowed) -> dict:
    if not cp.has_section(name):
        return {}
    out = {}
    for key, raw in cp.items(name):
        if key not in allowed:
            raise ConfigError(f"[{name}] {key}: unknown field (expected one of {', '.join(allowed)})")
        try:
            if key in _STRINGS:
                out[key] = raw.strip()
            elif key in _INTS:
                out[key] = int(raw)
            else:
                out[key] = float(raw)
        except ValueError:
            raise ConfigError(f"[{name}] {key}: cannot parse {raw!r}") from None
    return out


def _fields(cls) -> tuple:
    return tuple(f.name for f in dataclasses.fields(cls))


def _build(name, cls, values):
    try:
        return cls(**values)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"[{name}] {err}") from None


def loads(text: str) -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep R and M case-sensitive
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ConfigError(f"unparseable config: {err}") from None
    for name in cp.sections():
        if name not in _SECTIONS:
            raise ConfigError(f"[{name}]: unknown section")

    scen = _values(cp, "scenario", ("td_kind", "mode", "horizon", "controller_dt"))
    kw = dict(scen)
    kw["reference"] = _build("reference", ReferenceSpec, _values(cp, "reference", _fields(ReferenceSpec)))
    kw["noise"] = _build("noise", NoiseSpec, _values(cp, "noise", _fields(NoiseSpec)))
    if cp.has_section("intd"):
        kw["intd_params"] = _build("intd", IntdParams, _values(cp, "intd", _fields(IntdParams)))
    if cp.has_section("han"):
        kw["han_td_params"] = _build("han", HanTdParams, _values(cp, "han", _fields(HanTdParams)))
    if cp.has_section("nlpid"):
        keys = tuple(f"{p}_{k}" for p in "pdi" for k in _fields(FalTerm))
        nl = _values(cp, "nlpid", keys)
        missing = [k for k in keys if k not in nl]
        if missing:
            raise ConfigError(f"[nlpid] {missing[0]}: missing")
        terms = {p: _build("nlpid", FalTerm, {k: nl[f"{p}_{k}"] for k in _fields(FalTerm)}) for p in "pdi"}
        kw["nlpid_params"] = NlpidParams(terms["p"], terms["d"], terms["i"])
    if cp.has_section("plant"):
        kw["plant_params"] = _build("plant", NmsdParams, _values(cp, "plant", _fields(NmsdParams)))
    if cp.has_section("integrator"):
        kw["integrator"] = _build("integrator", IntegratorConfig,
                                  _values(cp, "integrator", _fields(IntegratorConfig)))
    init = _values(cp, "initial", ("plant_x1", "plant_x2", "td1_z1", "td1_z2", "td2_z1", "td2_z2"))
    kw["initial_plant"] = PlantState(init.get("plant_x1", 0.0), init.get("plant_x2", 0.0))
    kw["initial_td1"] = TdState(init.get("td1_z1", 0.0), init.get("td1_z2", 0.0))
    kw["initial_td2"] = TdState(init.get("td2_z1", 0.0), init.get("td2_z2", 0.0))
    return _build("scenario", ScenarioConfig, kw)


def load(path) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err.strerror}") from None
    return loads(text)
