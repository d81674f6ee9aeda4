"""Command-line front end.

Exit codes
----------
0  classical-consistent result (verdict satisfied or boundary), or success
1  input error (bad flags, unphysical state, gamma = 0 where inversion is needed)
2  inadmissible measurement model (a POVM element is not positive)
3  complementarity inequality violated (simulate: violated at the requested confidence)
4  internal consistency failure between independent computation paths
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classical, detector, measurement, sampling, young
from .measurement import InadmissibleModelError, MeasurementModel
from .qubit import BlochState, UnphysicalStateError
from .tables import NegativeProbabilityError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INADMISSIBLE = 2
EXIT_VIOLATED = 3
EXIT_INTERNAL = 4

PATH_AGREEMENT_TOL = 1e-10

SWEEP_COLUMNS = (
    "theta", "phi", "gamma_x", "gamma_z", "gamma_xz", "factor",
    "margin_upper", "margin_lower", "verdict", "max_dev",
)
REGION_COLUMNS = ("gamma_x", "gamma_z", "in_povm_region", "in_positive_square")
BOUNDARY_COLUMNS = ("gamma_x", "gamma_z_boundary")


class InputError(Exception):
    pass


class ConsistencyError(Exception):
    pass


@dataclass
class ScenarioConfig:
    """A state plus exactly one measurement specification.

    ``model`` holds either explicit gammas (``gamma_x``, ``gamma_z``,
    ``gamma_xz``, ``n``) or ``{"young": {"theta": ..., "phi": ...}}`` with
    angles in radians.
    """

    state: list[float]
    model: dict
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.state = [float(v) for v in self.state]
        if len(self.state) != 3:
            raise InputError("state must have three components")
        young_spec = "young" in self.model
        explicit = any(k.startswith("gamma") for k in self.model)
        if young_spec == explicit:
            raise InputError("model must give either explicit gammas or a young setting, not both")

    @property
    def is_young(self) -> bool:
        return "young" in self.model

    def bloch(self) -> BlochState:
        return BlochState(self.state)

    def young_setting(self) -> young.YoungSetting:
        y = self.model["young"]
        return young.YoungSetting(y["theta"], y["phi"], extended=bool(y.get("extended", False)))

    def measurement(self) -> MeasurementModel:
        if self.is_young:
            return young.gammas_from_angles(self.young_setting())
        return MeasurementModel.from_dict(self.model)

    def to_dict(self) -> dict:
        return {"state": list(self.state), "model": self.model, "options": self.options}

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        try:
            return cls(d["state"], d["model"], d.get("options", {}))
        except KeyError as exc:
            raise InputError(f"config is missing {exc}") from None


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else float(value)


def config_from_args(args) -> ScenarioConfig:
    if getattr(args, "config", None):
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}") from None
        cfg = ScenarioConfig.from_dict(raw)
        if args.degrees and cfg.is_young:
            y = cfg.model["young"]
            cfg.model = {"young": {**y, "theta": math.radians(y["theta"]), "phi": math.radians(y["phi"])}}
        return cfg
    if args.young is not None and args.gammas is not None:
        raise InputError("give either --gammas or --young, not both")
    if args.young is not None:
        theta, phi = (_angle(v, args.degrees) for v in args.young)
        model = {"young": {"theta": theta, "phi": phi}}
    elif args.gammas is not None:
        gx, gz, gxz = args.gammas
        model = {"gamma_x": gx, "gamma_z": gz, "gamma_xz": gxz, "n": list(args.direction)}
    else:
        raise InputError("a measurement is required: --gammas, --young or --config")
    return ScenarioConfig(args.state, model)


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2, allow_nan=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _write_csv(rows, columns, out) -> None:
    handle = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if out:
            handle.close()


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("COMPLAB_JOBS", "1")))
    except ValueError:
        return 1


def _admissible_model(cfg: ScenarioConfig) -> MeasurementModel:
    m = cfg.measurement()
    measurement.require_admissible(m)
    return m


# -- commands --------------------------------------------------------------

def cmd_check(cfg: ScenarioConfig) -> tuple[dict, int]:
    s = cfg.bloch()
    m = _admissible_model(cfg)
    d = measurement.joint_statistics(s, m)
    t = measurement.moments(d)
    report = classical.compact_inequality(t, m.gamma_x, m.gamma_z)
    state_report = classical.state_form_inequality(s, m)
    dev = max(
        abs(report.margin_upper - state_report.margin_upper),
        abs(report.margin_lower - state_report.margin_lower),
    )
    scale = max(1.0, abs(report.margin_upper), abs(report.margin_lower))
    if dev > PATH_AGREEMENT_TOL * scale or report.verdict != state_report.verdict:
        raise ConsistencyError(f"moment and state forms disagree by {dev:.3e}")
    out = {
        "state": cfg.state,
        "model": m.to_dict(),
        "distribution": d.as_dict(),
        "moments": {"mean_x": t.mean_x, "mean_z": t.mean_z, "corr_xz": t.corr_xz},
        "report": report.to_dict(),
        "state_form_margins": [state_report.margin_upper, state_report.margin_lower],
    }
    return out, EXIT_VIOLATED if report.verdict == classical.VIOLATED else EXIT_OK


def cmd_invert(cfg: ScenarioConfig) -> tuple[dict, int]:
    s = cfg.bloch()
    m = _admissible_model(cfg)
    d = measurement.joint_statistics(s, m)
    eq = classical.equivalence_check(d, m.gamma_x, m.gamma_z)
    return {
        "observed": d.as_dict(),
        "inverted": eq.inverted.as_dict(),
        "reconstructed": eq.reconstructed.as_dict(),
        "max_abs_difference": eq.max_abs_difference,
    }, EXIT_OK


def _sweep_row(theta: float, phi: float, state) -> tuple:
    y = young.YoungSetting(theta, phi)
    m = young.gammas_from_angles(y)
    factor = young.nonclassicality_factor(y) if phi > 0 else math.inf
    report = young.young_inequality(state, y)
    dev = young.full_quantum_joint(state, y).max_abs_difference(
        measurement.joint_statistics(state, m)
    )
    return (theta, phi, m.gamma_x, m.gamma_z, m.gamma_xz, factor,
            report.margin_upper, report.margin_lower, report.verdict, dev)


def _sweep_theta_row(args) -> list[tuple]:
    theta, phis, state = args
    return [_sweep_row(theta, phi, state) for phi in phis]


def cmd_young_sweep(theta_steps: int, phi_steps: int, state, jobs: int = 1) -> list[tuple]:
    """Rows over an inclusive ``[0, pi/2]**2`` grid, ordered by theta then phi."""
    if theta_steps < 2 or phi_steps < 2:
        raise InputError("sweeps need at least 2 steps per angle")
    state = BlochState(state).s
    thetas = np.linspace(0, np.pi / 2, theta_steps)
    phis = np.linspace(0, np.pi / 2, phi_steps)
    work = [(float(t), [float(p) for p in phis], state) for t in thetas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_theta_row, work))
    else:
        chunks = [_sweep_theta_row(w) for w in work]
    return [row for chunk in chunks for row in chunk]


def cmd_regions(resolution: int, out: str, boundary_out: str) -> detector.RegionScan:
    scan = detector.povm_factorized_region(resolution)
    _write_csv(scan.rows(), REGION_COLUMNS, out)
    _write_csv(zip(scan.boundary_x, scan.boundary_z), BOUNDARY_COLUMNS, boundary_out)
    return scan


def cmd_search(state) -> tuple[dict, int]:
    s = BlochState(state)
    m = classical.violation_search(s)
    report = classical.state_form_inequality(s, m)
    positivity = measurement.povm_positivity(m)
    if report.verdict != classical.VIOLATED or not positivity.admissible:
        raise ConsistencyError("search returned a model that does not violate")
    return {
        "model": m.to_dict(),
        "factor": classical.nonclassicality_factor(m),
        "worst_povm_eigenvalue": positivity.worst_eigenvalue,
        "report": report.to_dict(),
    }, EXIT_OK


def cmd_simulate(cfg: ScenarioConfig, N: int, seed: int, confidence: float) -> tuple[dict, int]:
    s = cfg.bloch()
    m = _admissible_model(cfg)
    d = measurement.joint_statistics(s, m)
    counts = sampling.sample(d, N, seed)
    est = sampling.estimate(counts, (m.gamma_x, m.gamma_z), confidence=confidence)
    code = EXIT_VIOLATED if est.verdict == classical.VIOLATED and est.verdict_confident else EXIT_OK
    return {"counts": counts.to_dict(), "estimate": est.to_dict()}, code


# -- argument parsing ------------------------------------------------------

def _scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", nargs=3, type=float, default=[0.0, 0.0, 0.0],
                   metavar=("SX", "SY", "SZ"), help="Bloch vector (default: maximally mixed)")
    p.add_argument("--gammas", nargs=3, type=float, metavar=("GX", "GZ", "GXZ"))
    p.add_argument("--direction", nargs=3, type=float, default=[0.0, 1.0, 0.0],
                   metavar=("NX", "NY", "NZ"), help="correlation direction n (default e_Y)")
    p.add_argument("--young", nargs=2, type=float, metavar=("THETA", "PHI"),
                   help="Young interferometer setting instead of explicit gammas")
    p.add_argument("--degrees", action="store_true", help="angles are in degrees")
    p.add_argument("--config", help="JSON scenario file")
    p.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="complab",
        description="Complementarity inequalities for noisy joint qubit measurements.",
        epilog=__doc__.split("Exit codes", 1)[1].replace("-" * 10, "Exit codes:"),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate the inequalities for one scenario")
    _scenario_args(p)

    p = sub.add_parser("invert", help="invert observed statistics to the noise-free table")
    _scenario_args(p)

    p = sub.add_parser("young-sweep", help="CSV landscape over the interferometer angles")
    p.add_argument("--theta-steps", type=int, default=19)
    p.add_argument("--phi-steps", type=int, default=19)
    p.add_argument("--state", nargs=3, type=float, default=[0.0, 0.0, 0.0])
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("regions", help="grid and boundary CSVs of the factorized-kernel regions")
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--out", default="regions.csv")
    p.add_argument("--boundary-out", default="regions_boundary.csv")

    p = sub.add_parser("search", help="find a measurement under which a state violates")
    p.add_argument("--state", nargs=3, type=float, required=True)
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="Monte Carlo experiment with error bars")
    _scenario_args(p)
    p.add_argument("--n", dest="samples", type=int, default=100_000, help="number of samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--confidence", type=float, default=sampling.DEFAULT_CONFIDENCE)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            out, code = cmd_check(config_from_args(args))
            _emit(out, args.out)
            return code
        if args.command == "invert":
            out, code = cmd_invert(config_from_args(args))
            _emit(out, args.out)
            return code
        if args.command == "young-sweep":
            rows = cmd_young_sweep(args.theta_steps, args.phi_steps, args.state,
                                   args.jobs or default_jobs())
            _write_csv(rows, SWEEP_COLUMNS, args.out)
            return EXIT_OK
        if args.command == "regions":
            cmd_regions(args.resolution, args.out, args.boundary_out)
            return EXIT_OK
        if args.command == "search":
            out, code = cmd_search(args.state)
            _emit(out, args.out)
            return code
        if args.command == "simulate":
            out, code = cmd_simulate(config_from_args(args), args.samples, args.seed, args.confidence)
            _emit(out, args.out)
            return code
    except InadmissibleModelError as exc:
        print(f"error: inadmissible model: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except ConsistencyError as exc:
        print(f"error: internal consistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except classical.InversionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, UnphysicalStateError, NegativeProbabilityError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    parser.error(f"unknown command {args.command!r}")
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())
