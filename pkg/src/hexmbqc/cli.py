"""Command-line front end: reproducible runs, JSON/CSV artifacts.

Subcommands map onto the library modules: ``lattice`` and ``schedule``
build the trap-array geometry and its six-round entangling schedule,
``verify`` rebuilds the scheduled state on the stabilizer simulator and
checks every cluster stabilizer, ``mbqc`` executes a measurement-pattern
file, ``ionize`` evaluates rate/ratio/resonance/irradiance queries,
``electron`` runs the wavepacket, classical, Mathieu and timescale
calculations, and ``resources`` prints the operation-count arithmetic.

Every subcommand accepts ``--config FILE`` (JSON, one block per
subcommand, unknown keys rejected), ``--seed N``, ``--out DIR`` and
``--dump-config``.  Effective values resolve as defaults < config file <
explicit flags.  Identical config + seed gives byte-identical artifacts:
JSON is dumped canonically (sorted keys) and CSV uses fixed formats, with
no timestamps anywhere.

Exit codes: 0 success; 1 validation/usage error; 2 physics or
verification failure (e.g. ``verify`` on a corrupted schedule).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import electron_dynamics as ed
from . import graphstate, ionization, lattice, mbqc, resources, scheduler

__all__ = ["main", "dispatch", "parse_duration", "load_config"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PHYSICS = 2


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# defaults (also the schema for config-file blocks)

_LATTICE = {"rows": 4, "cols": 4, "d": 1.0, "n": 1, "periodic": False}
_SCHEDULE = {**_LATTICE, "t_gate": 1e-5, "t_shuttle": 1e-4}
_VERIFY = {**_SCHEDULE, "schedule_file": None}
_MBQC = {"pattern_file": None}
_IONIZE = {
    "rates": {"irradiance": 1e9, "i_min": 1e8, "i_max": 1e10, "points": 25},
    "resonances": {"lambda_min": 380.0, "lambda_max": 410.0,
                   "max_photons": 4, "detuning_cut": 0.03},
    "quadrupole": {"t_pulse": 2e-9},
    "raman": {"t_pulse": 1e-9, "detuning_linewidths": 1e4},
}
_ELECTRON = {
    "propagate": {
        "omega_e": 2.5e9, "omega_rf": 2.0 * math.pi * 25e6, "static_mode": True,
        "extent_x": 100e-6, "extent_y": 50e-6, "points_x": 512, "points_y": 256,
        "dt": 1e-13, "absorber_width_frac": 0.10, "absorber_gain": 12.0,
        "detector_gain": 12.0, "hbar_scale": 64.0,
        "detectors": [[30e-6, 20e-6], [-30e-6, 20e-6]],
        "v0": 7e3, "sigma_v": ed.SIGMA_V_DEFAULT, "sigma0": None,
        "t_final": 3e-9, "sample_interval": 5e-12, "snapshot_times": [],
    },
    "classical": {"omega_e": 2.5e9, "v0": 7e3, "t": 1.5e-9},
    "mathieu": {"a": 0.0, "q": None, "charge": 1.0, "mass": ed.M_CA40,
                "v_rf": None, "r0": None, "omega_rf": 2.0 * math.pi * 25e6,
                "boundary": False},
    "timescale": {"omega_rf": 2.0 * math.pi * 25e6, "m_ion": ed.M_CA40},
}
_RESOURCES = {"bits": 640, "wallclock": "5month", "n_qubits": 10000,
              "t_meas": 3e-9, "t_coh": 10.0}

_MODED = {"ionize": _IONIZE, "electron": _ELECTRON}
_FLAT = {"lattice": _LATTICE, "schedule": _SCHEDULE, "verify": _VERIFY,
         "mbqc": _MBQC, "resources": _RESOURCES}

_DURATION_UNITS = {
    "": 1.0, "s": 1.0, "sec": 1.0, "secs": 1.0, "second": 1.0, "seconds": 1.0,
    "ns": 1e-9, "us": 1e-6, "ms": 1e-3,
    "min": 60.0, "mins": 60.0, "minute": 60.0, "minutes": 60.0,
    "h": 3600.0, "hr": 3600.0, "hour": 3600.0, "hours": 3600.0,
    "d": 86400.0, "day": 86400.0, "days": 86400.0,
    "mo": resources.MONTH_SECONDS, "month": resources.MONTH_SECONDS,
    "months": resources.MONTH_SECONDS,
}


def parse_duration(value) -> float:
    """'300', '5min', '2 h', '5month' -> seconds (month = 30.44 days)."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        seconds = float(value)
    else:
        m = re.fullmatch(r"\s*([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*([a-zA-Z]*)\s*",
                         str(value))
        if not m:
            raise ValueError(f"cannot parse duration {value!r}")
        unit = m.group(2).lower()
        if unit not in _DURATION_UNITS:
            raise ValueError(f"unknown duration unit {m.group(2)!r} in {value!r}")
        seconds = float(m.group(1)) * _DURATION_UNITS[unit]
    if seconds <= 0:
        raise ValueError("duration must be positive")
    return seconds


# ---------------------------------------------------------------------------
# config plumbing

def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        text = fh.read()
    doc = json.loads(text) if text.strip() else {}
    if not isinstance(doc, dict):
        raise ValueError("config root must be a JSON object")
    allowed = set(_FLAT) | set(_MODED) | {"seed", "out"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return doc


def _merge_block(defaults: dict, block: dict, label: str, overrides: dict) -> dict:
    unknown = set(block) - set(defaults)
    if unknown:
        raise ValueError(f"unknown keys in config block {label!r}: {sorted(unknown)}")
    eff = dict(defaults)
    eff.update(block)
    eff.update({k: v for k, v in overrides.items() if v is not None})
    return eff


def _effective(args, subcommand: str, mode: str | None, overrides: dict) -> dict:
    cfg = load_config(args.config)
    if mode is None:
        block = cfg.get(subcommand, {})
        if not isinstance(block, dict):
            raise ValueError(f"config block {subcommand!r} must be an object")
        return _merge_block(_FLAT[subcommand], block, subcommand, overrides)
    outer = cfg.get(subcommand, {})
    if not isinstance(outer, dict):
        raise ValueError(f"config block {subcommand!r} must be an object")
    unknown = set(outer) - set(_MODED[subcommand])
    if unknown:
        raise ValueError(f"unknown {subcommand} modes in config: {sorted(unknown)}")
    block = outer.get(mode, {})
    if not isinstance(block, dict):
        raise ValueError(f"config block {subcommand}.{mode} must be an object")
    return _merge_block(_MODED[subcommand][mode], block, f"{subcommand}.{mode}",
                        overrides)


def _canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(args, filename: str, doc: dict, to_stdout=True) -> None:
    text = _canonical(doc)
    if to_stdout:
        sys.stdout.write(text)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, filename), "w") as fh:
        fh.write(text)


def _write_csv(args, filename: str, header: str, rows: list[str]) -> None:
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, filename), "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _dump_config(args, subcommand: str, mode: str | None, eff: dict) -> int:
    seed = args.seed if args.seed is not None else 0
    doc = {subcommand: eff if mode is None else {mode: eff},
           "seed": seed, "out": args.out}
    sys.stdout.write(_canonical(doc))
    return EXIT_OK


def _seed(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        return args.seed
    return int(cfg.get("seed", 0))


# ---------------------------------------------------------------------------
# subcommand handlers

def _build_assignment(eff: dict):
    array = lattice.build_hex_array(int(eff["rows"]), int(eff["cols"]),
                                    float(eff["d"]))
    assign = lattice.decompose_sublattices(array, int(eff["n"]))
    return array, assign


def _cmd_lattice(args) -> int:
    eff = _effective(args, "lattice", None, {
        "rows": args.rows, "cols": args.cols, "d": args.d, "n": args.n,
        "periodic": args.periodic})
    if args.dump_config:
        return _dump_config(args, "lattice", None, eff)
    array, assign = _build_assignment(eff)
    report = lattice.assignment_report(assign)
    _emit(args, "lattice.json", {
        "schema_version": 1, "sites": array.site_count(),
        "layers": assign.layer_count, "n": assign.n,
        "rows": int(eff["rows"]), "cols": int(eff["cols"]), "d": float(eff["d"]),
    })
    with open(os.path.join(args.out, "lattice_full.json"), "w") as fh:
        fh.write(_canonical(report))
    return EXIT_OK


def _schedule_doc(eff: dict):
    array, assign = _build_assignment(eff)
    sched = scheduler.build_schedule(
        assign, periodic=bool(eff["periodic"]),
        t_gate=float(eff["t_gate"]), t_shuttle=float(eff["t_shuttle"]))
    doc = scheduler.schedule_report(sched)
    doc["lattice"] = {"rows": int(eff["rows"]), "cols": int(eff["cols"]),
                      "d": float(eff["d"]), "n": int(eff["n"]),
                      "periodic": bool(eff["periodic"])}
    return array, assign, sched, doc


def _cmd_schedule(args) -> int:
    eff = _effective(args, "schedule", None, {
        "rows": args.rows, "cols": args.cols, "d": args.d, "n": args.n,
        "periodic": args.periodic, "t_gate": args.t_gate,
        "t_shuttle": args.t_shuttle})
    if args.dump_config:
        return _dump_config(args, "schedule", None, eff)
    array, assign, sched, doc = _schedule_doc(eff)
    _emit(args, "schedule.json", doc, to_stdout=False)
    sys.stdout.write(_canonical({
        "schema_version": 1, "rounds": len(sched.rounds),
        "edges": sum(len(r) for r in sched.rounds),
        "prep_time_s": scheduler.prep_time(sched, float(eff["t_gate"]),
                                           float(eff["t_shuttle"])),
        "sites": array.site_count()}))
    rows = [f"{k},{count},{dur:.9e}"
            for k, count, dur in scheduler.schedule_csv_rows(sched)]
    _write_csv(args, "schedule.csv", "round,pair_count,duration_s", rows)
    return EXIT_OK


def _cmd_verify(args) -> int:
    eff = _effective(args, "verify", None, {
        "rows": args.rows, "cols": args.cols, "d": args.d, "n": args.n,
        "periodic": args.periodic, "schedule_file": args.schedule})
    if args.dump_config:
        return _dump_config(args, "verify", None, eff)
    if eff["schedule_file"]:
        with open(eff["schedule_file"]) as fh:
            doc = json.load(fh)
        lat = doc.get("lattice")
        if lat is None:
            raise ValueError("schedule file lacks the lattice block")
        eff = {**eff, **lat}
        rounds = [[tuple(pair) for pair in rnd] for rnd in doc["rounds"]]
    else:
        _, _, sched, doc = _schedule_doc(eff)
        rounds = [list(rnd) for rnd in sched.rounds]
    array, assign = _build_assignment(eff)
    target = lattice.cluster_edges(assign, periodic=bool(eff["periodic"]))
    tab = graphstate.new_plus_state(array.site_count())
    for rnd in rounds:
        for a, b in rnd:
            tab.apply_cphase(int(a), int(b))
    ok = graphstate.verify_cluster(tab, target)
    _emit(args, "verification.json", {
        "schema_version": 1, "verified": bool(ok),
        "sites": array.site_count(), "rounds": len(rounds),
        "target_edges": len(target)})
    return EXIT_OK if ok else EXIT_PHYSICS


def _cmd_mbqc(args) -> int:
    eff = _effective(args, "mbqc", None, {"pattern_file": args.pattern})
    if args.dump_config:
        return _dump_config(args, "mbqc", None, eff)
    if not eff["pattern_file"]:
        raise ValueError("mbqc requires a pattern file (--pattern)")
    with open(eff["pattern_file"]) as fh:
        doc = json.load(fh)
    inp = doc.pop("input", None)
    n, edges, pattern = mbqc.pattern_from_dict(doc)
    input_state = None
    input_qubits: tuple[int, ...] = ()
    if inp is not None:
        input_qubits = tuple(int(q) for q in inp["qubits"])
        input_state = np.array([complex(re, im) for re, im in inp["amplitudes"]],
                               dtype=np.complex128)
    rng = np.random.default_rng(_seed(args))
    res = mbqc.run_pattern(n, edges, pattern, input_state=input_state,
                           input_qubits=input_qubits, rng=rng)
    _emit(args, "mbqc_result.json", {
        "schema_version": 1,
        "outcomes": res.outcomes,
        "probabilities": res.probabilities,
        "branch_probability": res.probability,
        "outputs": list(res.outputs),
        "byproduct_x": {str(q): v for q, v in res.byproduct_x.items()},
        "byproduct_z": {str(q): v for q, v in res.byproduct_z.items()},
        "state_re": [float(a.real) for a in res.state],
        "state_im": [float(a.imag) for a in res.state],
    })
    return EXIT_OK


def _cmd_ionize(args) -> int:
    mode = args.mode
    if mode == "rates":
        eff = _effective(args, "ionize", mode, {
            "irradiance": args.irradiance, "i_min": args.i_min,
            "i_max": args.i_max, "points": args.points})
        if args.dump_config:
            return _dump_config(args, "ionize", mode, eff)
        cal = ionization.load_calibration()
        def triple(irr):
            s = ionization.calibrated_inputs(irr, "s", cal)
            d = ionization.calibrated_inputs(irr, "d", cal)
            rs = ionization.rate_s(s)
            rd = ionization.rate_d(irr, d.j_channels)
            return rs, rd, ionization.discrimination_ratio(s, d)
        rs, rd, ratio = triple(float(eff["irradiance"]))
        _emit(args, "rates.json", {
            "schema_version": 1, "irradiance_w_cm2": float(eff["irradiance"]),
            "rate_s_per_s": rs, "rate_d_per_s": rd, "ratio": ratio})
        rows = []
        for irr in np.geomspace(float(eff["i_min"]), float(eff["i_max"]),
                                int(eff["points"])):
            a, b, c = triple(float(irr))
            rows.append(f"{irr:.12e},{a:.12e},{b:.12e},{c:.12e}")
        _write_csv(args, "rates.csv", "irradiance_w_cm2,rate_s,rate_d,ratio", rows)
        return EXIT_OK
    if mode == "resonances":
        eff = _effective(args, "ionize", mode, {
            "lambda_min": args.lambda_min, "lambda_max": args.lambda_max,
            "max_photons": args.max_photons, "detuning_cut": args.detuning_cut})
        if args.dump_config:
            return _dump_config(args, "ionize", mode, eff)
        table = ionization.load_level_table()
        scan = ionization.find_resonances(
            table, (float(eff["lambda_min"]), float(eff["lambda_max"])),
            int(eff["max_photons"]), float(eff["detuning_cut"]))
        _emit(args, "resonances.json", {
            "schema_version": 1,
            "hits": [{"level": h.level, "photons": h.photons,
                      "wavelength_nm": h.wavelength_nm,
                      "detuning_ev": h.detuning_ev} for h in scan.hits],
            "ionizing_throughout": scan.ionizing_throughout,
            "threshold_wavelength_nm": scan.threshold_wavelength_nm})
        return EXIT_OK
    if mode == "quadrupole":
        eff = _effective(args, "ionize", mode, {"t_pulse": args.t_pulse})
        if args.dump_config:
            return _dump_config(args, "ionize", mode, eff)
        ref = ionization.load_rabi_reference()
        _emit(args, "quadrupole.json", {
            "schema_version": 1, "t_pulse_s": float(eff["t_pulse"]),
            "irradiance_w_cm2": ionization.quadrupole_irradiance(
                ref, float(eff["t_pulse"]))})
        return EXIT_OK
    if mode == "raman":
        eff = _effective(args, "ionize", mode, {
            "t_pulse": args.t_pulse,
            "detuning_linewidths": args.detuning_linewidths})
        if args.dump_config:
            return _dump_config(args, "ionize", mode, eff)
        ref = ionization.load_rabi_reference()
        _emit(args, "raman.json", {
            "schema_version": 1, "t_pulse_s": float(eff["t_pulse"]),
            "detuning_linewidths": float(eff["detuning_linewidths"]),
            "irradiance_w_cm2": ionization.raman_irradiance(
                ref, float(eff["detuning_linewidths"]), float(eff["t_pulse"]))})
        return EXIT_OK
    raise _UsageError(f"unknown ionize mode {mode!r}")


def _trap_config(eff: dict) -> ed.TrapConfig:
    return ed.TrapConfig(
        omega_e=float(eff["omega_e"]), omega_rf=float(eff["omega_rf"]),
        static_mode=bool(eff["static_mode"]),
        detectors=tuple((float(c), float(w)) for c, w in eff["detectors"]),
        extent_x=float(eff["extent_x"]), extent_y=float(eff["extent_y"]),
        points_x=int(eff["points_x"]), points_y=int(eff["points_y"]),
        dt=float(eff["dt"]),
        absorber_width_frac=float(eff["absorber_width_frac"]),
        absorber_gain=float(eff["absorber_gain"]),
        detector_gain=float(eff["detector_gain"]),
        hbar_scale=float(eff["hbar_scale"]))


def _cmd_electron(args) -> int:
    mode = args.mode
    if mode == "propagate":
        eff = _effective(args, "electron", mode, {
            "t_final": args.t_final, "dt": args.dt, "omega_e": args.omega_e,
            "v0": args.v0, "points_x": args.points_x, "points_y": args.points_y,
            "static_mode": None if args.static is None else args.static,
            "hbar_scale": args.hbar_scale})
        if args.dump_config:
            return _dump_config(args, "electron", mode, eff)
        cfg = _trap_config(eff)
        wp = ed.gaussian_wavepacket(
            cfg, v0=float(eff["v0"]), sigma_v=float(eff["sigma_v"]),
            sigma0=None if eff["sigma0"] is None else float(eff["sigma0"]))
        res = ed.propagate(wp, cfg, float(eff["t_final"]),
                           sample_interval=float(eff["sample_interval"]),
                           snapshot_times=tuple(eff["snapshot_times"]))
        ndet = len(cfg.detectors)
        header = ("t_ns," + ",".join(f"p_detector_{i+1}" for i in range(ndet))
                  + ",p_total,norm_remaining")
        rows = []
        for s in res.trace.samples:
            caps = ",".join(f"{c:.9e}" for c in s.captured)
            rows.append(f"{s.t*1e9:.6f},{caps},{s.total_captured:.9e},"
                        f"{s.norm_remaining:.9e}")
        _write_csv(args, "trace.csv", header, rows)
        os.makedirs(args.out, exist_ok=True)
        for i, snap in enumerate(res.snapshots):
            path = os.path.join(args.out, f"psi2_{i:03d}.txt")
            hdr = (f"nx={cfg.points_x} ny={cfg.points_y} "
                   f"extent_x={cfg.extent_x:.9e} extent_y={cfg.extent_y:.9e} "
                   f"t_s={snap.t:.9e}")
            np.savetxt(path, snap.density, fmt="%.9e", header=hdr)
        last = res.trace.samples[-1]
        _emit(args, "efficiency.json", {
            "schema_version": 1, "t_final_s": float(eff["t_final"]),
            "captured": list(last.captured),
            "total_captured": last.total_captured,
            "norm_remaining": last.norm_remaining})
        return EXIT_OK
    if mode == "classical":
        eff = _effective(args, "electron", mode, {
            "omega_e": args.omega_e, "v0": args.v0, "t": args.t})
        if args.dump_config:
            return _dump_config(args, "electron", mode, eff)
        cfg = ed.TrapConfig(omega_e=float(eff["omega_e"]))
        x, v = ed.classical_trajectory(cfg, float(eff["v0"]), float(eff["t"]))
        _emit(args, "classical.json", {
            "schema_version": 1, "t_s": float(eff["t"]), "x_m": x, "v_m_s": v})
        return EXIT_OK
    if mode == "mathieu":
        eff = _effective(args, "electron", mode, {
            "a": args.a, "q": args.q, "charge": args.charge, "mass": args.mass,
            "v_rf": args.v_rf, "r0": args.r0, "omega_rf": args.omega_rf,
            "boundary": args.boundary})
        if args.dump_config:
            return _dump_config(args, "electron", mode, eff)
        if eff["q"] is not None:
            q = float(eff["q"])
        else:
            if eff["v_rf"] is None or eff["r0"] is None:
                raise ValueError("mathieu needs either q or (v_rf and r0)")
            q = ed.mathieu_q(float(eff["charge"]), float(eff["mass"]),
                             float(eff["v_rf"]), float(eff["r0"]),
                             float(eff["omega_rf"]))
        doc = {"schema_version": 1, "a": float(eff["a"]), "q": q,
               "stable": ed.mathieu_stable(float(eff["a"]), q)}
        if eff["boundary"]:
            doc["q_boundary"] = ed.stability_boundary(float(eff["a"]))
        _emit(args, "mathieu.json", doc)
        return EXIT_OK
    if mode == "timescale":
        eff = _effective(args, "electron", mode, {
            "omega_rf": args.omega_rf, "m_ion": args.m_ion})
        if args.dump_config:
            return _dump_config(args, "electron", mode, eff)
        est = ed.electron_timescale(float(eff["omega_rf"]), float(eff["m_ion"]))
        _emit(args, "timescale.json", {
            "schema_version": 1, "formula_s": est.formula_s,
            "reference_s": est.reference_s})
        return EXIT_OK
    raise _UsageError(f"unknown electron mode {mode!r}")


def _cmd_resources(args) -> int:
    eff = _effective(args, "resources", None, {
        "bits": args.bits, "wallclock": args.wallclock,
        "n_qubits": args.n_qubits, "t_meas": args.t_meas, "t_coh": args.t_coh})
    if args.dump_config:
        return _dump_config(args, "resources", None, eff)
    wall = parse_duration(eff["wallclock"])
    doc = resources.resource_report(int(eff["bits"]), wall,
                                    int(eff["n_qubits"]), float(eff["t_meas"]),
                                    float(eff["t_coh"]))
    doc["inputs"]["wallclock"] = str(eff["wallclock"])
    _emit(args, "resources.json", doc)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective config and exit")


def _add_lattice_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rows", type=int, default=None)
    p.add_argument("--cols", type=int, default=None)
    p.add_argument("--d", type=float, default=None, help="site spacing")
    p.add_argument("--n", type=int, default=None, help="cell-scaling integer")
    p.add_argument("--periodic", action=argparse.BooleanOptionalAction,
                   default=None, help="close the layer direction cyclically")


def _epilog(defaults: dict) -> str:
    return "defaults:\n" + json.dumps(defaults, sort_keys=True, indent=2)


def build_parser() -> _Parser:
    top = _Parser(prog="hexmbqc",
                  description="hexagonal-array measurement-based QC toolkit")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, helptext, defaults):
        return sub.add_parser(
            name, help=helptext, epilog=_epilog(defaults),
            formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("lattice", "build the array and layer decomposition", _LATTICE)
    _add_lattice_opts(p); _add_common(p)
    p.set_defaults(func=_cmd_lattice)

    p = add("schedule", "emit the six-round CPHASE schedule", _SCHEDULE)
    _add_lattice_opts(p)
    p.add_argument("--t-gate", dest="t_gate", type=float, default=None)
    p.add_argument("--t-shuttle", dest="t_shuttle", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_schedule)

    p = add("verify", "stabilizer-verify a schedule's output state", _VERIFY)
    _add_lattice_opts(p)
    p.add_argument("--t-gate", dest="t_gate", type=float, default=None)
    p.add_argument("--t-shuttle", dest="t_shuttle", type=float, default=None)
    p.add_argument("--schedule", default=None,
                   help="schedule.json to verify (default: rebuild from params)")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = add("mbqc", "run a measurement-pattern file", _MBQC)
    p.add_argument("--pattern", default=None, help="pattern JSON file")
    _add_common(p)
    p.set_defaults(func=_cmd_mbqc)

    p = add("ionize", "ionization rates and laser estimates", _IONIZE)
    p.add_argument("mode", choices=("rates", "resonances", "quadrupole", "raman"))
    p.add_argument("--irradiance", type=float, default=None)
    p.add_argument("--i-min", dest="i_min", type=float, default=None)
    p.add_argument("--i-max", dest="i_max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--lambda-min", dest="lambda_min", type=float, default=None)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, default=None)
    p.add_argument("--max-photons", dest="max_photons", type=int, default=None)
    p.add_argument("--detuning-cut", dest="detuning_cut", type=float, default=None)
    p.add_argument("--t-pulse", dest="t_pulse", type=float, default=None)
    p.add_argument("--detuning-linewidths", dest="detuning_linewidths",
                   type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_ionize)

    p = add("electron", "wavepacket, classical and stability runs", _ELECTRON)
    p.add_argument("mode", choices=("propagate", "classical", "mathieu",
                                    "timescale"))
    p.add_argument("--t-final", dest="t_final", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--omega-e", dest="omega_e", type=float, default=None)
    p.add_argument("--v0", type=float, default=None)
    p.add_argument("--points-x", dest="points_x", type=int, default=None)
    p.add_argument("--points-y", dest="points_y", type=int, default=None)
    p.add_argument("--hbar-scale", dest="hbar_scale", type=float, default=None)
    p.add_argument("--static", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--t", type=float, default=None, help="classical: time (s)")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--charge", type=float, default=None, help="multiples of e")
    p.add_argument("--mass", type=float, default=None, help="kg")
    p.add_argument("--v-rf", dest="v_rf", type=float, default=None)
    p.add_argument("--r0", type=float, default=None)
    p.add_argument("--omega-rf", dest="omega_rf", type=float, default=None)
    p.add_argument("--m-ion", dest="m_ion", type=float, default=None)
    p.add_argument("--boundary", action="store_true", default=None,
                   help="mathieu: also bisect the first-zone boundary")
    _add_common(p)
    p.set_defaults(func=_cmd_electron)

    p = add("resources", "operation-count / timing arithmetic", _RESOURCES)
    p.add_argument("--bits", type=int, default=None)
    p.add_argument("--wallclock", default=None,
                   help="duration, e.g. 300, 5min, 2h, 5month")
    p.add_argument("--n-qubits", dest="n_qubits", type=int, default=None)
    p.add_argument("--t-meas", dest="t_meas", type=float, default=None)
    p.add_argument("--t-coh", dest="t_coh", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_resources)

    return top


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_VALIDATION
    except (ValueError, KeyError, OSError, ed.ConfigurationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
