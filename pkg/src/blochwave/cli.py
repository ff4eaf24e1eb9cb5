"""Command-line front end.

Every subcommand reads one JSON run configuration (``--config``) and/or
inline flags, validates it against a strict schema before computing
anything, writes its CSV/JSON artifacts atomically at the end and prints a
one-line summary.  Exit codes: 0 success, 2 configuration error, 3
numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import geometry, interband, intraband, ladders, regimes, resonant
from .core import (
    HBAR,
    HBAR2_OVER_M0,
    HC_EV_NM,
    MATERIALS,
    ConfigError,
    EffectiveMass,
    KaneTwoBand,
    KGrid,
    MaterialRecord,
    NumericalError,
    PulseSpec,
    TightBinding,
    material_lookup,
)
from .io import config_hash, to_jsonable, write_csv, write_json

__all__ = ["main", "run", "SUBCOMMANDS", "CONFIG_SCHEMA", "load_config"]

SUBCOMMANDS = (
    "materials", "regimes", "keldysh-scan", "intraband", "hhg", "tdse", "dephasing",
    "ladders", "fke", "rabi", "area", "berry", "charge", "energy",
)

UNITS_NOTE = (
    "Units are fixed: energies in eV, times in fs, lengths in Å, fields in V/Å, "
    "crystal momenta in 1/Å, vector potentials in V·fs/Å, masses in m0, "
    "wavelengths in nm, charges in e."
)

DEFAULT_CYCLES = 10  # monochromatic pulses given without window or n_cycles

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_PAIRS = {"type": "array", "items": {"type": "array", "prefixItems": [{"type": "integer", "minimum": 0}, _NUM],
                                     "items": False, "minItems": 2}, "minItems": 1}

_PULSE = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "F0": _NONNEG,
        "photon_energy": _POS,
        "wavelength_nm": _POS,
        "envelope": {"enum": ["monochromatic", "sine-square", "rectangular"]},
        "fwhm": _POS,
        "cep": _NUM,
        "beta": {"type": "number", "minimum": -1, "maximum": 1},
        "window": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
        "t0": _NUM,
        "ramp_cycles": _NONNEG,
        "n_cycles": _POS,
    },
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["subcommand"],
    "properties": {
        "subcommand": {"enum": list(SUBCOMMANDS)},
        "description": {"type": "string"},
        "material": {
            "oneOf": [
                {"type": "string"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["name", "structure", "Eg", "a", "xi_max"],
                    "properties": {
                        "name": {"type": "string"}, "structure": {"type": "string"},
                        "Eg": _POS, "a": _POS, "c": {"type": ["number", "null"]}, "xi_max": _NONNEG,
                        "m_reduced": {"type": ["number", "null"], "exclusiveMinimum": 0},
                        "hoppings": {"type": ["object", "null"]},
                        "wannier_extent": {"type": ["number", "null"]},
                        "bandwidth": {"type": ["number", "null"]},
                    },
                },
            ]
        },
        "pulse": _PULSE,
        "band": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["kane", "effective-mass", "tight-binding", "flat"]},
                "Eg": _POS, "mass": _POS, "a": _POS, "xi": _NONNEG, "Ecv": _POS,
                "eps": {"type": "array", "items": _NUM, "minItems": 1},
                "conduction": _PAIRS, "valence": _PAIRS,
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["parameter", "start", "stop", "points"],
            "properties": {
                "parameter": {"enum": ["F0", "gamma_NP", "photon_energy", "delay"]},
                "start": _NUM, "stop": _NUM,
                "points": {"type": "integer", "minimum": 1},
                "scale": {"enum": ["linear", "log"]},
            },
        },
        "kgrid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"points": {"type": "integer", "minimum": 1}, "extent": _POS},
        },
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rtol": _POS, "atol": _POS, "samples_per_period": {"type": "integer", "minimum": 4},
                "n_output": {"type": "integer", "minimum": 2}, "method": {"enum": ["DOP853", "RK45", "Radau"]},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string"}, "prefix": {"type": "string"}},
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "name": {"type": "string"},
                "k0": _NUM,
                "samples": {"type": "integer", "minimum": 2},
                "samples_per_cycle": {"type": "integer", "minimum": 8},
                "compare_ema": {"type": "boolean"},
                "method": {"enum": ["first-order", "tdse"]},
                "T2": {"oneOf": [_POS, {"const": "inf"}]},
                "mode": {"enum": ["localization", "fan", "kane"]},
                "bandwidth": _NONNEG,
                "wannier_extent": _NONNEG,
                "E_bar_c": _NUM, "E_bar_v": _NUM,
                "Xi": {"type": "object", "additionalProperties": _NUM},
                "rung_min": {"type": "integer"}, "rung_max": {"type": "integer"},
                "E1": _NUM, "E2": _NUM, "d12": _NONNEG,
                "model": {"enum": ["chern", "ssh"]},
                "u": _NUM, "t1": _NUM, "t2": _NUM,
                "n": {"type": "integer", "minimum": 4},
                "band_index": {"type": "integer", "minimum": 0, "maximum": 1},
                "drive": _PULSE,
                "masses": {"type": "array", "items": _NUM, "minItems": 1},
                "area": _POS,
            },
        },
    },
}


# configuration -------------------------------------------------------------


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None


def validate(config: dict) -> None:
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None


def _material(cfg: dict) -> MaterialRecord | None:
    m = cfg.get("material")
    if m is None:
        return None
    if isinstance(m, str):
        return material_lookup(m)
    return MaterialRecord(**m)


def _pulse(p: dict | None, required: bool = True) -> PulseSpec | None:
    if not p:
        if required:
            raise ConfigError("a pulse block is required for this subcommand")
        return None
    p = dict(p)
    if "wavelength_nm" in p:
        if "photon_energy" in p:
            raise ConfigError("give photon_energy or wavelength_nm, not both")
        p["photon_energy"] = HC_EV_NM / p.pop("wavelength_nm")
    if "photon_energy" not in p or "F0" not in p:
        raise ConfigError("pulse needs F0 and photon_energy (or wavelength_nm)")
    if "window" in p:
        p["window"] = tuple(p["window"])
    n_cycles = p.pop("n_cycles", None)
    if n_cycles is None and p.get("envelope", "monochromatic") == "monochromatic" and "window" not in p:
        n_cycles = DEFAULT_CYCLES
    if n_cycles is not None:
        if p.get("envelope", "monochromatic") != "monochromatic" or "window" in p:
            raise ConfigError("n_cycles builds a monochromatic pulse; drop envelope/window")
        ramp = p.pop("ramp_cycles", 0.0)
        F0, hw = p.pop("F0"), p.pop("photon_energy")
        p.pop("envelope", None)
        return PulseSpec.cycles(F0, hw, n_cycles, ramp_cycles=ramp, **p)
    return PulseSpec(**p)


def _band(cfg: dict, material: MaterialRecord | None):
    b = cfg.get("band")
    if b is None:
        raise ConfigError("a band block is required for this subcommand")
    a = b.get("a", material.a if material else None)
    Eg = b.get("Eg", material.Eg if material else None)
    kind = b["kind"]
    if kind == "kane":
        if Eg is None or "mass" not in b:
            raise ConfigError("kane band needs Eg and mass")
        return KaneTwoBand(Eg, b["mass"])
    if kind == "effective-mass":
        if "mass" not in b:
            raise ConfigError("effective-mass band needs mass")
        return EffectiveMass(b["mass"])
    if kind == "tight-binding":
        if a is None:
            raise ConfigError("tight-binding band needs the lattice constant a")
        if "eps" in b:
            return TightBinding(a, tuple(b["eps"]))
        if "conduction" in b and "valence" in b:
            return (TightBinding.from_pairs(a, b["conduction"]), TightBinding.from_pairs(a, b["valence"]))
        raise ConfigError("tight-binding band needs eps or conduction/valence pairs")
    raise ConfigError(f"band kind {kind!r} is not a single-band dispersion")


def _two_band(cfg: dict, material: MaterialRecord | None) -> interband.TwoBandModel:
    b = cfg.get("band")
    if b is None:
        raise ConfigError("a band block is required for this subcommand")
    a = b.get("a", material.a if material else 1.0)
    xi = b.get("xi", material.xi_max if material else None)
    kind = b["kind"]
    if kind == "kane":
        Eg = b.get("Eg", material.Eg if material else None)
        if Eg is None or "mass" not in b:
            raise ConfigError("kane band needs Eg and mass")
        return interband.TwoBandModel.kane(Eg, b["mass"], a, xi)
    if kind == "flat":
        Ecv = b.get("Ecv", b.get("Eg", material.Eg if material else None))
        if Ecv is None or xi is None:
            raise ConfigError("flat band needs Ecv and xi")
        return interband.TwoBandModel.flat(Ecv, xi, a)
    if kind == "tight-binding":
        if xi is None:
            raise ConfigError("tight-binding pair needs xi")
        pair = _band(cfg, material)
        if not isinstance(pair, tuple):
            raise ConfigError("two-band tight-binding model needs conduction and valence pairs")
        return interband.TwoBandModel.tight_binding(pair[0], pair[1], xi)
    raise ConfigError(f"band kind {kind!r} cannot form a two-band model")


def _sweep(cfg: dict, parameter: str | tuple[str, ...]) -> np.ndarray | None:
    s = cfg.get("sweep")
    if s is None:
        return None
    allowed = (parameter,) if isinstance(parameter, str) else parameter
    if s["parameter"] not in allowed:
        raise ConfigError(f"sweep parameter must be one of {allowed}, got {s['parameter']!r}")
    if s.get("scale", "linear") == "log":
        if not (s["start"] > 0 and s["stop"] > 0):
            raise ConfigError("log sweeps need positive start and stop")
        return np.geomspace(s["start"], s["stop"], s["points"])
    return np.linspace(s["start"], s["stop"], s["points"])


def _kgrid(cfg: dict, a: float, default_points: int = 64, default_extent: float = 1.0) -> KGrid:
    k = cfg.get("kgrid", {})
    return KGrid((k.get("points", default_points),), (k.get("extent", default_extent),), a)


def _tolerances(cfg: dict) -> interband.Tolerances:
    return interband.Tolerances(**cfg.get("tolerances", {}))


def _T2(value):
    if value is None or value == "inf":
        return math.inf
    return float(value)


# subcommands ---------------------------------------------------------------
# Each returns (summary line, [artifacts]) where an artifact is
# ("csv", name, columns, data, comment) or ("json", name, payload).


def cmd_materials(cfg, ctx):
    name = cfg.get("options", {}).get("name")
    if name:
        payload = material_lookup(name).to_dict()
    else:
        payload = {"materials": [r.to_dict() for r in MATERIALS.values()]}
    return json.dumps(to_jsonable(payload), sort_keys=True), [("json", "materials.json", payload)]


def cmd_regimes(cfg, ctx):
    material = _material(cfg)
    if material is None:
        raise ConfigError("regimes needs a material")
    pulse = _pulse(cfg.get("pulse"))
    bands = _band(cfg, material) if "band" in cfg else None
    if isinstance(bands, tuple):
        bands = bands[0] - bands[1]
    report = regimes.adiabaticity_report(material, pulse, bands)
    artifacts = [("json", "regimes.json", report.to_dict())]
    grid = _sweep(cfg, "F0")
    if grid is not None:
        if isinstance(bands, TightBinding):
            m_ema = abs(bands.curvature_mass())
        elif bands is not None:
            m_ema = abs(bands.mass)
        else:
            m_ema = material.m_reduced or HBAR2_OVER_M0 / (4.0 * material.xi_max ** 2 * material.Eg)
        rows = []
        for F0 in grid:
            p = PulseSpec(**{**_pulse_fields(pulse), "F0": float(F0)})
            r = regimes.adiabaticity_report(material, p, bands)
            up_ema = regimes.ponderomotive_ema(F0, p.photon_energy, m_ema, p.beta)
            rows.append([F0, r.gamma_DL, r.hbar_omegaB / p.photon_energy, r.Up, up_ema, r.gamma_K, r.N_tilde])
        artifacts.append(("csv", "regimes_sweep.csv",
                          {"F0": "V/Å", "gamma_DL": "", "omegaB_over_omega0": "", "Up": "eV", "Up_ema": "eV",
                           "gamma_K": "", "N_tilde": ""}, rows, f"parabolic mass for Up_ema: {m_ema:.6g} m0"))
    return json.dumps(to_jsonable(report.to_dict()), sort_keys=True), artifacts


def _pulse_fields(p: PulseSpec) -> dict:
    d = {f: getattr(p, f) for f in ("F0", "photon_energy", "envelope", "fwhm", "cep", "beta", "window", "t0",
                                    "ramp_cycles")}
    if p.envelope == "sine-square":
        d.pop("window")
    return d


def cmd_keldysh_scan(cfg, ctx):
    material = _material(cfg)
    model = _two_band(cfg, material)
    if model.mass is None:
        raise ConfigError("keldysh-scan needs a kane band (parabolic mass sets the channel count)")
    p = cfg.get("pulse") or {}
    hw = p.get("photon_energy") or (HC_EV_NM / p["wavelength_nm"] if "wavelength_nm" in p else None)
    if hw is None:
        raise ConfigError("keldysh-scan needs pulse.photon_energy")
    n_cycles = p.get("n_cycles", 20)
    ramp = p.get("ramp_cycles", 4)
    s = cfg.get("sweep")
    if s is None:
        raise ConfigError("keldysh-scan needs a sweep over F0 or gamma_NP")
    grid = _sweep(cfg, ("F0", "gamma_NP"))
    if s["parameter"] == "gamma_NP":
        F0s = np.sqrt(4.0 * model.mass * hw ** 3 * grid / HBAR2_OVER_M0)
    else:
        F0s = grid
    pulses = [PulseSpec.cycles(float(F), hw, n_cycles, ramp_cycles=ramp) for F in F0s]
    kg = _kgrid(cfg, model.a, 256, 2.4)
    opts = cfg.get("options", {})
    tol = _tolerances(cfg)
    scan = interband.excitation_rate_scan(model, pulses, kg, method=opts.get("method", "first-order"),
                                          samples_per_period=tol.samples_per_period, tolerances=tol,
                                          workers=ctx["threads"])
    analysis = interband.closing_analysis(scan)
    data = np.column_stack([scan.F0, scan.gamma_NP, scan.rate, scan.Up, scan.N_tilde, scan.closing.astype(int)])
    summary = (f"keldysh-scan: {len(F0s)} fields, slope below {analysis['slope_below']:.3g}, "
               f"above {analysis['slope_above']:.3g}, first closing at gamma_NP {analysis['first_closing_gamma_NP']:.3g}")
    return summary, [
        ("csv", "keldysh_scan.csv", {"F0": "V/Å", "gamma_NP": "", "rate": "1/fs", "Up": "eV", "N_tilde": "",
                                     "closing": ""}, data, None),
        ("json", "keldysh_scan.json", {"analysis": analysis, "metadata": scan.metadata}),
    ]


def cmd_intraband(cfg, ctx):
    material = _material(cfg)
    band = _band(cfg, material)
    if isinstance(band, tuple):
        raise ConfigError("intraband needs a single band (eps)")
    pulse = _pulse(cfg.get("pulse"))
    opts = cfg.get("options", {})
    k0 = opts.get("k0", 0.0)
    tr = intraband.trajectory(band, k0, pulse, samples=opts.get("samples", 4096))
    cols = {"t": "fs", "K": "1/Å", "v": "Å/fs", "dx": "Å"}
    data = tr.table()
    summary = f"intraband: {tr.t.size} samples, max |v| {np.max(np.abs(tr.v)):.4g} Å/fs"
    if opts.get("compare_ema", False):
        if not isinstance(band, TightBinding):
            raise ConfigError("compare_ema applies to tight-binding bands")
        ema = EffectiveMass(band.curvature_mass())
        te = intraband.trajectory(ema, k0, pulse, samples=opts.get("samples", 4096))
        data = np.column_stack([data, te.v, te.dx])
        cols.update({"v_ema": "Å/fs", "dx_ema": "Å"})
        rms = intraband.rms_relative_difference(tr.v, te.v)
        summary += f", TB-vs-EMA rms velocity difference {rms:.3%}"
    return summary, [("csv", "intraband.csv", cols, data, None)]


def cmd_hhg(cfg, ctx):
    material = _material(cfg)
    band = _band(cfg, material)
    if isinstance(band, tuple):
        raise ConfigError("hhg needs a single band (eps)")
    pulse = _pulse(cfg.get("pulse"))
    opts = cfg.get("options", {})
    spec = intraband.hhg_spectrum(band, opts.get("k0", 0.0), pulse, opts.get("samples_per_cycle", 256))
    data = np.column_stack([spec.order, spec.intensity, spec.intensity_db])
    return (f"hhg: {spec.order.size} bins, cutoff estimate order {spec.cutoff_estimate:.3g}",
            [("csv", "hhg.csv", {"order": "", "intensity": "arb", "intensity_db": "dB"}, data,
              f"window: {spec.window}")])


def cmd_tdse(cfg, ctx):
    material = _material(cfg)
    model = _two_band(cfg, material)
    pulse = _pulse(cfg.get("pulse"))
    kg = _kgrid(cfg, model.a)
    tr = interband.propagate_two_band(model, kg, pulse, _tolerances(cfg))
    data = np.column_stack([tr.k, tr.final_populations, tr.norm_drift])
    info = {"mean_population": float(np.mean(tr.final_populations)), "max_norm_drift": float(np.max(tr.norm_drift)),
            "local_maxima": interband.count_local_maxima(tr.final_populations)}
    return (f"tdse: {tr.k.size} k-points, mean population {info['mean_population']:.4g}, "
            f"max norm drift {info['max_norm_drift']:.2g}",
            [("csv", "tdse.csv", {"k": "1/Å", "population": "", "norm_drift": ""}, data, None),
             ("json", "tdse.json", info)])


def cmd_dephasing(cfg, ctx):
    material = _material(cfg)
    model = _two_band(cfg, material)
    pulse = _pulse(cfg.get("pulse"))
    kg = _kgrid(cfg, model.a, 128)
    T2 = _T2(cfg.get("options", {}).get("T2"))
    tol = _tolerances(cfg)
    coh = interband.propagate_with_dephasing(model, kg, pulse, math.inf, tol)
    dep = interband.propagate_with_dephasing(model, kg, pulse, T2, tol)
    ev = dep.eigenvalues()
    info = {"T2": T2, "maxima_coherent": interband.count_local_maxima(coh.final_populations),
            "maxima_dephased": interband.count_local_maxima(dep.final_populations),
            "eigenvalue_min": float(ev.min()), "eigenvalue_max": float(ev.max())}
    data = np.column_stack([coh.k, coh.final_populations, dep.final_populations])
    return (f"dephasing: T2 {T2:g} fs, local maxima {info['maxima_coherent']} -> {info['maxima_dephased']}",
            [("csv", "dephasing.csv", {"k": "1/Å", "population_T2_inf": "", "population_T2": ""}, data, None),
             ("json", "dephasing.json", info)])


def cmd_ladders(cfg, ctx):
    opts = cfg.get("options", {})
    mode = opts.get("mode", "localization")
    material = _material(cfg)
    if mode == "localization":
        grid = _sweep(cfg, "F0")
        if grid is None:
            raise ConfigError("localization mode needs an F0 sweep")
        for key in ("bandwidth", "wannier_extent"):
            if key not in opts:
                raise ConfigError(f"localization mode needs options.{key}")
        l_sc, l_k = ladders.localization_lengths(opts["bandwidth"], opts["wannier_extent"], grid)
        data = np.column_stack([grid, np.atleast_1d(l_sc), np.atleast_1d(l_k)])
        return (f"ladders: L_K from {data[0, 2]:.4g} to {data[-1, 2]:.4g} Å",
                [("csv", "localization.csv", {"F0": "V/Å", "L_SC": "Å", "L_K": "Å"}, data, None)])
    if mode == "fan":
        grid = _sweep(cfg, "F0")
        if grid is None:
            raise ConfigError("fan mode needs an F0 sweep")
        a = (cfg.get("band") or {}).get("a", material.a if material else None)
        if a is None or "E_bar_c" not in opts or "E_bar_v" not in opts:
            raise ConfigError("fan mode needs a lattice constant, E_bar_c and E_bar_v")
        Xi = {int(k): float(v) for k, v in opts.get("Xi", {"0": 1.0}).items()}
        rr = range(opts.get("rung_min", -4), opts.get("rung_max", 4) + 1)
        rows = ladders.ws_fan(opts["E_bar_c"], opts["E_bar_v"], a, grid, Xi, rr)
        return (f"ladders: fan with {rows.shape[0]} levels over {grid.size} fields",
                [("csv", "ws_fan.csv", {"F0": "V/Å", "level": "", "energy": "eV"}, rows, None)])
    band = _band(cfg, material)
    if not isinstance(band, TightBinding):
        raise ConfigError("kane mode needs a single tight-binding band (eps)")
    pulse = cfg.get("pulse") or {}
    if "F0" not in pulse:
        raise ConfigError("kane mode needs pulse.F0 (static field)")
    lad = ladders.kane_ladder(band, pulse["F0"], rungs=range(opts.get("rung_min", -3), opts.get("rung_max", 3) + 1))
    data = np.column_stack([lad.rungs, lad.energies])
    return (f"ladders: E_bar {lad.E_bar:.6g} eV, spacing {lad.hbar_omegaB:.6g} eV",
            [("csv", "kane_ladder.csv", {"rung": "", "energy": "eV"}, data, None)])


def cmd_fke(cfg, ctx):
    material = _material(cfg)
    b = cfg.get("band") or {}
    Eg = b.get("Eg", material.Eg if material else None)
    m = b.get("mass", material.m_reduced if material else None)
    if Eg is None or m is None:
        raise ConfigError("fke needs Eg and a reduced mass (band.mass)")
    F0 = (cfg.get("pulse") or {}).get("F0")
    if F0 is None:
        raise ConfigError("fke needs pulse.F0 (static field)")
    grid = _sweep(cfg, "photon_energy")
    if grid is None:
        grid = np.linspace(Eg - 1.0, Eg - 0.01, 200)
    theta, rel, raw = ladders.fke_absorption(grid, F0, m, Eg)
    return (f"fke: hbar theta {theta:.6g} eV",
            [("csv", "fke.csv", {"photon_energy": "eV", "alpha_rel": "", "alpha_raw": "eV^(1/2)"},
              np.column_stack([grid, rel, raw]), f"hbar_theta = {theta!r} eV")])


def cmd_rabi(cfg, ctx):
    opts = cfg.get("options", {})
    pulse = _pulse(cfg.get("pulse"))
    E1 = opts.get("E1", 0.0)
    E2 = opts.get("E2", E1 + pulse.photon_energy)
    sys2 = resonant.TwoLevelSystem(E1, E2, opts.get("d12", 1.0))
    traj = resonant.solve_two_level(sys2, pulse, samples=opts.get("samples", 2001))
    theta = resonant.envelope_area(pulse, sys2.d12, traj.t)
    w_rwa = -np.cos(theta)
    data = np.column_stack([traj.table(), w_rwa])
    dev = float(np.max(np.abs(traj.w - w_rwa)))
    return (f"rabi: final w {traj.w[-1]:.6f}, envelope area {theta[-1] / math.pi:.4g} pi, max RWA deviation {dev:.3g}",
            [("csv", "rabi.csv", {"t": "fs", "u": "", "v": "", "w": "", "w_rwa": ""}, data, None)])


def cmd_area(cfg, ctx):
    material = _material(cfg)
    model = _two_band(cfg, material)
    pulse = _pulse(cfg.get("pulse"))
    opts = cfg.get("options", {})
    k0 = opts.get("k0", 0.0)
    Up = None
    if model.mass is None:
        # cycle-averaged pair energy gain for a pair born at k0
        theta = 2 * math.pi * np.arange(4096) / 4096
        K = k0 - pulse.F0 / pulse.photon_energy * np.sin(theta)
        Up = float(np.mean(model.Ecv(K)) - model.Ecv(np.array([k0]))[0])
    res = resonant.generalized_area(model, k0, pulse, Up=Up, samples=opts.get("samples", 20001))
    info = {"area": res.area, "gamma_RP": res.gamma_RP, "counting": res.counting}
    return (f"area: {res.area / math.pi:.4g} pi, gamma_RP {res.gamma_RP:.3g}",
            [("csv", "area.csv", {"t": "fs", "hbar_OmegaR": "eV"}, res.table(), None),
             ("json", "area.json", info)])


def cmd_berry(cfg, ctx):
    opts = cfg.get("options", {})
    kind = opts.get("model", "chern")
    n = opts.get("n", 200)
    band = opts.get("band_index", 0)
    if kind == "ssh":
        model = geometry.ssh_model(opts.get("t1", 1.0), opts.get("t2", 2.0))
        z = geometry.zak_phase(model, band, n)
        info = {"model": "ssh", "zak_phase": z}
        return f"berry: Zak phase {z:.6f} rad", [("json", "berry.json", info)]
    model = geometry.chern_model(opts.get("u", -1.0))
    res = geometry.chern_and_curvature(model, band, n)
    KX, KY = np.meshgrid(res.kx, res.ky, indexing="ij")
    data = np.column_stack([KX.ravel(), KY.ravel(), res.curvature.ravel()])
    info = {"model": "chern", "u": opts.get("u", -1.0), "chern": res.chern, "chern_raw": res.chern_raw,
            "residual": res.residual, "sigma_xy": res.sigma_xy, "flagged": res.flagged, "notes": res.notes}
    return (f"berry: Chern number {res.chern} (residual {res.residual:.2g})",
            [("csv", "berry_curvature.csv", {"kx": "1/a", "ky": "1/a", "curvature": "a^2"}, data, None),
             ("json", "berry.json", info)])


def cmd_charge(cfg, ctx):
    material = _material(cfg)
    model = _two_band(cfg, material)
    pulse = _pulse(cfg.get("pulse"))
    opts = cfg.get("options", {})
    if "drive" not in opts:
        raise ConfigError("charge needs options.drive (the delayed drive pulse)")
    drive = _pulse(opts["drive"])
    # electrons and holes both move against A; equal split of the reduced mass by default
    m = model.mass or 0.5
    masses = opts.get("masses", [2.0 * m, 2.0 * m])
    delays = _sweep(cfg, "delay")
    if delays is None:
        delays = np.array([0.0])
    kg = _kgrid(cfg, model.a)
    tr = interband.propagate_two_band(model, kg, pulse, _tolerances(cfg))
    dk = kg.spacing(0)
    # occupation per unit volume: k-sum weight dk/2pi over a cross-section a^2
    f = tr.populations.T * dk / (2 * math.pi) / model.a ** 2
    pops = np.stack([f] * len(masses))
    area = opts.get("area", 1.0)
    Q = np.array([intraband.transferred_charge(pops, tr.t, masses, drive, float(d), area) for d in delays])
    return (f"charge: {delays.size} delays, max |Q| {np.max(np.abs(Q)):.4g} e",
            [("csv", "charge.csv", {"delay": "fs", "Q": "e"}, np.column_stack([delays, Q]),
              "carrier densities use the k-sum weight dk/2pi over a cross-section a^2")])


def cmd_energy(cfg, ctx):
    material = _material(cfg)
    model = _two_band(cfg, material)
    pulse = _pulse(cfg.get("pulse"))
    tol = _tolerances(cfg)
    if "n_output" not in cfg.get("tolerances", {}):
        tol = dataclasses.replace(tol, n_output=4001)
    kg = _kgrid(cfg, model.a)
    tr = interband.propagate_two_band(model, kg, pulse, tol)
    P = tr.interband_polarization(model, pulse)
    F = pulse.field(tr.t)
    res = intraband.energy_transfer(F, P, tr.t)
    info = {"W_max": res.W_max, "W_irrev": res.W_irrev}
    return (f"energy: W_max {res.W_max:.4g} eV, W_irrev {res.W_irrev:.4g} eV per k-point",
            [("csv", "energy.csv", {"t": "fs", "F": "V/Å", "P": "e·Å", "W": "eV"},
              np.column_stack([tr.t, F, P, res.W]), "interband polarization only; k-averaged"),
             ("json", "energy.json", info)])


_COMMANDS = {
    "materials": cmd_materials, "regimes": cmd_regimes, "keldysh-scan": cmd_keldysh_scan,
    "intraband": cmd_intraband, "hhg": cmd_hhg, "tdse": cmd_tdse, "dephasing": cmd_dephasing,
    "ladders": cmd_ladders, "fke": cmd_fke, "rabi": cmd_rabi, "area": cmd_area, "berry": cmd_berry,
    "charge": cmd_charge, "energy": cmd_energy,
}


# argument parsing ----------------------------------------------------------


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochwave",
        description="Strong-field dynamics of electrons in periodic potentials. " + UNITS_NOTE,
        epilog="Exit codes: 0 success, 2 configuration error, 3 numerical failure.",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True
    for name in SUBCOMMANDS:
        doc = (_COMMANDS[name].__doc__ or "").strip()
        p = sub.add_parser(name, help=doc or None, description=UNITS_NOTE)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out-dir", help="directory for CSV/JSON artifacts (default: ./blochwave-out)")
        p.add_argument("--threads", type=int, help="worker threads (fallback: $BLOCHWAVE_THREADS, else 1)")
        p.add_argument("--material", help="embedded material name, e.g. SiO2")
        p.add_argument("--F0", type=float, help="peak field amplitude, V/Å")
        p.add_argument("--lambda0-nm", type=float, dest="lambda0_nm", help="carrier wavelength, nm")
        p.add_argument("--photon-energy", type=float, dest="photon_energy", help="carrier photon energy, eV")
        p.add_argument("--envelope", choices=["monochromatic", "sine-square", "rectangular"])
        p.add_argument("--fwhm", type=float, help="sin^2 intensity FWHM, fs")
        p.add_argument("--cep", type=float, help="carrier-envelope phase, rad")
        p.add_argument("--beta", type=float, help="ellipticity in [-1, 1]")
        p.add_argument("--cycles", type=float, help="flat monochromatic cycles")
        p.add_argument("--ramp-cycles", type=float, dest="ramp_cycles", help="switch-on/off ramp cycles")
        p.add_argument("--name", help="material name (materials subcommand)")
        p.add_argument("--T2", type=float, help="dephasing time, fs")
        p.add_argument("--k0", type=float, help="initial crystal momentum, 1/Å")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="set options.KEY (VALUE parsed as JSON when possible)")
    return parser


def _merge_inline(args, cfg: dict) -> dict:
    cfg = json.loads(json.dumps(cfg))
    cfg["subcommand"] = args.subcommand
    if args.material is not None:
        cfg["material"] = args.material
    pulse = cfg.get("pulse", {})
    for key, attr in (("F0", "F0"), ("photon_energy", "photon_energy"), ("envelope", "envelope"),
                      ("fwhm", "fwhm"), ("cep", "cep"), ("beta", "beta"), ("n_cycles", "cycles"),
                      ("ramp_cycles", "ramp_cycles")):
        value = getattr(args, attr)
        if value is not None:
            pulse[key] = value
    if args.lambda0_nm is not None:
        pulse.pop("photon_energy", None)
        pulse["wavelength_nm"] = args.lambda0_nm
    elif args.photon_energy is not None:
        pulse.pop("wavelength_nm", None)
    if pulse:
        cfg["pulse"] = pulse
    opts = cfg.get("options", {})
    if args.name is not None:
        opts["name"] = args.name
    if args.T2 is not None:
        opts["T2"] = args.T2
    if args.k0 is not None:
        opts["k0"] = args.k0
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        opts[key.strip()] = _parse_value(value)
    if opts:
        cfg["options"] = opts
    if args.out_dir is not None:
        cfg.setdefault("output", {})["dir"] = args.out_dir
    return cfg


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        env = os.environ.get("BLOCHWAVE_THREADS")
        try:
            n = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"BLOCHWAVE_THREADS must be an integer, got {env!r}") from None
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


def run(argv=None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    try:
        base = load_config(args.config) if args.config else {}
        if base.get("subcommand", args.subcommand) != args.subcommand:
            raise ConfigError(f"config is for {base['subcommand']!r}, not {args.subcommand!r}")
        cfg = _merge_inline(args, base)
        validate(cfg)
        ctx = {"threads": _threads(args)}
        summary, artifacts = _COMMANDS[args.subcommand](cfg, ctx)
    except NumericalError as exc:
        print(f"blochwave {args.subcommand}: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"blochwave {args.subcommand}: configuration error: {exc}", file=sys.stderr)
        return 2
    # where artifacts go is not part of the computation
    sha = config_hash({k: v for k, v in cfg.items() if k != "output"})
    out = cfg.get("output", {})
    out_dir = Path(out.get("dir", "blochwave-out"))
    prefix = out.get("prefix", "")
    for art in artifacts:
        if art[0] == "csv":
            _, name, cols, data, comment = art
            write_csv(out_dir / (prefix + name), cols, data, sha, comment)
        else:
            _, name, payload = art
            write_json(out_dir / (prefix + name), {"config_sha256": sha, **payload}
                       if isinstance(payload, dict) else payload)
    print(summary)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


for _name, _fn in _COMMANDS.items():
    _fn.__doc__ = {
        "materials": "embedded material table (JSON)",
        "regimes": "adiabaticity parameters and regime labels; optional F0 sweep",
        "keldysh-scan": "cycle-averaged two-band excitation rate versus field",
        "intraband": "single-band trajectory (K, v, dx); optional parabolic comparison",
        "hhg": "intraband harmonic spectrum",
        "tdse": "two-band propagation over a k grid",
        "dephasing": "two-band density matrix with T2 dephasing",
        "ladders": "localization lengths, Wannier-Stark fan or Kane rungs",
        "fke": "below-gap Franz-Keldysh absorption tail",
        "rabi": "two-level dynamics against the envelope-area result",
        "area": "generalized Rabi frequency and pulse area",
        "berry": "Chern number, Berry curvature or Zak phase",
        "charge": "charge transferred by a delayed drive",
        "energy": "field-to-medium energy transfer",
    }[_name]
