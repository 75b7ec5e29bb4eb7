"""Command-line front end: design pulses, run simulations, emit data files.

Subcommands: design, evolve, sweep, figures, metrics.  All data files are
CSV with fixed 17-significant-digit formatting (byte-identical for
identical configs); run summaries are JSON.  Exit codes: 0 success,
2 validation error, 3 integration-accuracy error, 4 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import metrics as metrics_mod
from .dynamics import (
    Trajectory,
    bloch_coordinates,
    cavity_qed_hamiltonian,
    evolve,
    extract_theta_kappa,
)
from .errors import (
    CdpulseError,
    IntegrationAccuracyError,
    InvalidInputError,
    UsageError,
)
from .protocols import (
    Branch,
    Design,
    Protocol,
    ProtocolRequest,
    TargetState,
    design,
    preset_targets,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ACCURACY = 3
EXIT_USAGE = 4

# CLI amplitudes are typically quoted to 4-8 digits; renormalize quietly
# below this residual, reject above it.
CLI_NORM_TOL = 1e-2

_SQ2 = 1.0 / math.sqrt(2.0)
_SQ3 = 1.0 / math.sqrt(3.0)
_SQ6 = 1.0 / math.sqrt(6.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise UsageError(message)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_config(path: str) -> dict:
    """INI-style key=value file; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _add_common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=[x.value for x in Protocol])
    p.add_argument("--mu", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--gamma", type=float, default=0.0, help="phase on |2>")
    p.add_argument("--kappa", type=float, default=0.0, help="phase on |3>")
    p.add_argument("--initial", help="1|2|3 or comma-separated amplitudes")
    p.add_argument("--T", type=float, default=1.0, dest="T")
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--branch", choices=[b.value for b in Branch],
                   default=Branch.LEAST_ENERGY.value)
    p.add_argument("--lambda", type=float, dest="lambda_rate",
                   help="phase winding rate for the phased protocol")
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--config", help="key=value config file; flags override")
    p.add_argument("--preset",
                   choices=["beamsplit12", "beamsplit13", "cavity-bell"])


def build_parser(defaults: dict | None = None) -> _Parser:
    parser = _Parser(prog="cdpulse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("design", "synthesize a pulse set and write pulses.csv/design.json"),
        ("evolve", "design, integrate, and write trajectory.csv/summary.json"),
        ("sweep", "write the single/multi-mode ratio surface"),
        ("metrics", "report time-averaged frequency and energy"),
        ("figures", "emit the canonical data set for one figure (1..13)"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common_options(p)
        if name == "figures":
            p.add_argument("figure", type=int)
        if defaults:
            known = {}
            for action in p._actions:
                if action.dest in defaults:
                    raw = defaults[action.dest]
                    known[action.dest] = action.type(raw) if action.type else raw
            p.set_defaults(**known)
    return parser


def _resolve_target(args) -> TargetState:
    mu, eta, nu = args.mu, args.eta, args.nu
    eta = 0.0 if eta is None else eta
    if mu is None and nu is None:
        mu = 0.0
    known_sq = sum(v**2 for v in (mu, eta, nu) if v is not None)
    if known_sq > 1.0 + CLI_NORM_TOL:
        raise InvalidInputError(
            f"amplitudes exceed unit norm: residual {known_sq - 1.0:.3e}"
        )
    if mu is None:
        mu = math.sqrt(max(0.0, 1.0 - known_sq))
    elif nu is None:
        nu = math.sqrt(max(0.0, 1.0 - known_sq))
    residual = abs(mu**2 + eta**2 + nu**2 - 1.0)
    if residual > CLI_NORM_TOL:
        raise InvalidInputError(
            f"target not normalized: norm residual {residual:.3e}"
        )
    return TargetState.normalized(mu, eta, nu, args.gamma, args.kappa)


def _parse_initial(raw):
    if raw is None:
        return None
    if raw in {"1", "2", "3"}:
        return int(raw)
    try:
        return np.array([complex(x) for x in raw.split(",")])
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse initial state {raw!r}") from exc


def _build_request(args) -> ProtocolRequest:
    if args.preset:
        return preset_targets(args.preset, tf=args.T)
    if not args.protocol:
        raise UsageError("either --protocol or --preset is required")
    return ProtocolRequest(
        protocol=Protocol(args.protocol),
        target=_resolve_target(args),
        initial_state=_parse_initial(args.initial),
        t0=0.0,
        tf=args.T,
        branch=Branch(args.branch),
        lambda_rate=args.lambda_rate,
    )


def _pulse_rows(dsg: Design, steps: int):
    t, op, os_, oa = dsg.pulses.sample(steps + 1)
    return zip(t, op, os_, oa)


def _design_payload(dsg: Design) -> dict:
    return {"protocol": dsg.protocol.value, **dsg.boundary}


def cmd_design(args) -> int:
    dsg = design(_build_request(args))
    out = Path(args.out)
    rows = list(_pulse_rows(dsg, args.steps))
    if args.format == "json":
        _write_json(out / "pulses.json", {
            "header": ["t", "omega_p", "omega_s", "omega_a"],
            "rows": [[float(v) for v in row] for row in rows],
        })
    else:
        _write_csv(out / "pulses.csv", ["t", "omega_p", "omega_s", "omega_a"], rows)
    _write_json(out / "design.json", _design_payload(dsg))
    return EXIT_OK


def _trajectory_columns(dsg: Design, traj: Trajectory):
    """(header, columns) for the trajectory file, protocol-dependent."""
    dim = traj.dimension
    header = ["t"] + [f"P{n}" for n in range(1, dim + 1)]
    cols = [traj.times] + [traj.populations[:, n] for n in range(dim)]
    for n in range(dim):
        header += [f"re_a{n + 1}", f"im_a{n + 1}"]
        cols += [traj.states[:, n].real, traj.states[:, n].imag]
    header.append("norm")
    cols.append(traj.norms)
    if dsg.protocol is Protocol.PHASED:
        extraction = extract_theta_kappa(traj)
        bloch = bloch_coordinates(traj)
        header += ["theta_prime", "kappa_prime", "bloch_x", "bloch_y", "bloch_z"]
        cols += [extraction.theta_prime, extraction.kappa_prime,
                 bloch[:, 0], bloch[:, 1], bloch[:, 2]]
    return header, cols


def _write_trajectory(out: Path, name: str, dsg: Design, traj: Trajectory,
                      fmt: str = "csv") -> None:
    header, cols = _trajectory_columns(dsg, traj)
    rows = zip(*cols)
    if fmt == "json":
        _write_json(out / f"{name}.json", {
            "header": header,
            "rows": [[float(v) for v in row] for row in rows],
        })
    else:
        _write_csv(out / f"{name}.csv", header, rows)


def cmd_evolve(args) -> int:
    request = _build_request(args)
    dsg = design(request)
    traj = evolve(dsg.hamiltonian, dsg.initial_state, request.t0, request.tf,
                  steps=args.steps)
    out = Path(args.out)
    _write_trajectory(out, "trajectory", dsg, traj, fmt=args.format)
    _write_json(out / "summary.json", {
        "protocol": dsg.protocol.value,
        "final_populations": [float(p) for p in traj.populations[-1]],
        "final_fidelity": traj.fidelity_to(dsg.target_vector),
        "max_norm_drift": float(np.max(np.abs(traj.norms - 1.0))),
    })
    return EXIT_OK


def cmd_sweep(args) -> int:
    surface = metrics_mod.ratio_surface(args.resolution)
    _write_csv(Path(args.out) / "ratio_surface.csv",
               ["mu", "eta", "omega_ratio", "energy_ratio"], surface.rows())
    return EXIT_OK


def cmd_metrics(args) -> int:
    request = _build_request(args)
    dsg = design(request)
    dm = metrics_mod.drive_metrics(dsg.pulses)
    payload = {
        "protocol": dsg.protocol.value,
        "omega_bar": dm.omega_bar,
        "energy_bar": dm.energy_bar,
        "peak": dm.peak,
        "T": dm.T,
    }
    tgt = request.target
    if tgt.mu >= 0.0 and tgt.eta >= 0.0 and tgt.nu >= 0.0:
        omega_ratio, energy_ratio = metrics_mod.mode_comparison_ratio(
            tgt.mu, tgt.eta, tgt.nu
        )
        payload["omega_ratio"] = omega_ratio
        payload["energy_ratio"] = energy_ratio
    _write_json(Path(args.out) / "metrics.json", payload)
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _figure_runs(args):
    """Designs/trajectories behind each figure, keyed by figure number."""
    out = Path(args.out)
    steps = args.steps

    def run(protocol, mu, eta, nu, name, kind, tf=1.0, branch=Branch.LEAST_ENERGY,
            initial=None, lambda_rate=None):
        request = ProtocolRequest(
            protocol=protocol,
            target=TargetState.normalized(mu, eta, nu),
            initial_state=initial,
            tf=tf,
            branch=branch,
            lambda_rate=lambda_rate,
        )
        dsg = design(request)
        if kind == "pulses":
            _write_csv(out / f"{name}.csv", ["t", "omega_p", "omega_s", "omega_a"],
                       _pulse_rows(dsg, steps))
        else:
            traj = evolve(dsg.hamiltonian, dsg.initial_state, request.t0,
                          request.tf, steps=steps)
            _write_trajectory(out, name, dsg, traj)

    fig = args.figure
    if fig == 1:
        run(Protocol.SINGLE_MODE_I, _SQ2, 0.0, _SQ2, "fig1a_pulses", "pulses")
        run(Protocol.SINGLE_MODE_I, _SQ2, 0.0, _SQ2, "fig1b_populations", "traj")
    elif fig == 2:
        for T, tag in [(0.1, "0.1"), (1.0, "1"), (10.0, "10")]:
            run(Protocol.SINGLE_MODE_I, 0.0, 0.0, 1.0,
                f"fig2_populations_T{tag}", "traj", tf=T)
    elif fig == 3:
        branches = [
            ("a", Branch.ARCSIN_PLUS),
            ("b", Branch.ARCCOS_MINUS),
            ("c", Branch.ARCCOS_PLUS),
            ("d", Branch.ARCSIN_MINUS),
        ]
        for tag, branch in branches:
            run(Protocol.SINGLE_MODE_I, _SQ2, 0.0, _SQ2,
                f"fig3{tag}_fidelities", "traj", branch=branch)
    elif fig in (4, 5):
        kind = "pulses" if fig == 4 else "traj"
        label = "pulses" if fig == 4 else "populations"
        run(Protocol.SINGLE_MODE_II, 0.0, _SQ2, _SQ2, f"fig{fig}a_{label}", kind)
        run(Protocol.SINGLE_MODE_II, _SQ3, _SQ3, _SQ3, f"fig{fig}b_{label}", kind)
    elif fig in (6, 7):
        kind = "pulses" if fig == 6 else "traj"
        label = "pulses" if fig == 6 else "populations"
        run(Protocol.SINGLE_MODE_II_NO_MICROWAVE, _SQ2, 0.0, _SQ2,
            f"fig{fig}a_{label}", kind)
        run(Protocol.SINGLE_MODE_II_NO_MICROWAVE, _SQ6, _SQ3, _SQ2,
            f"fig{fig}b_{label}", kind)
    elif fig == 8:
        run(Protocol.MULTI_MODE, _SQ3, _SQ3, _SQ3, "fig8a_pulses", "pulses")
        run(Protocol.MULTI_MODE, _SQ3, _SQ3, _SQ3, "fig8b_populations", "traj")
    elif fig == 9:
        cases = [
            ("a", 0.0, 0.0, 1.0),
            ("b", 0.0, _SQ2, _SQ2),
            ("c", _SQ2, 0.5, 0.5),
            ("d", _SQ2, 0.0, _SQ2),
        ]
        for tag, mu, eta, nu in cases:
            run(Protocol.MULTI_MODE, mu, eta, nu, f"fig9{tag}_populations", "traj")
    elif fig == 10:
        surface = metrics_mod.ratio_surface(args.resolution)
        _write_csv(out / "fig10_ratio_surface.csv",
                   ["mu", "eta", "omega_ratio", "energy_ratio"], surface.rows())
    elif fig in (11, 12):
        run(Protocol.PHASED, _SQ2, 0.0, _SQ2,
            "fig11_bloch" if fig == 11 else "fig12_angles", "traj")
    elif fig == 13:
        request = preset_targets("cavity-bell", tf=args.T)
        dsg = design(request)
        cavity = cavity_qed_hamiltonian(dsg.pulses)
        traj = evolve(cavity, dsg.initial_state, request.t0, request.tf,
                      steps=steps)
        _write_trajectory(out, "fig13_populations", dsg, traj)
    else:
        raise UsageError(f"figure must be 1..13, got {fig}")
    return EXIT_OK


_COMMANDS = {
    "design": cmd_design,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "metrics": cmd_metrics,
    "figures": _figure_runs,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        defaults = None
        for i, token in enumerate(argv):
            if token == "--config" and i + 1 < len(argv):
                defaults = _load_config(argv[i + 1])
            elif token.startswith("--config="):
                defaults = _load_config(token.split("=", 1)[1])
        args = build_parser(defaults).parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cdpulse: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationAccuracyError as exc:
        print(f"cdpulse: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except CdpulseError as exc:
        print(f"cdpulse: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
