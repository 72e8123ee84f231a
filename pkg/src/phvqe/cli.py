"""Batch driver.

Subcommands reproduce the dissociation scans, single-point energies, and
the Trotter-step study on committed FCIDUMP fixtures, emitting CSV plus
a replayable run manifest (all settings, seed, fixture hashes).  Energies
are in Hartree with 12-significant-digit formatting.
"""

from __future__ import annotations

import argparse
import csv
import glob
import hashlib
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .estimator import PhVqeSolver, build_ansatz, build_context
from .integrals import load_fcidump
from .oracle import ground_energy_in_sector, uccsd_analytic_energy
from .validation import check_ansatz_name
from .vqe import VqeConfig, VqeProblem, minimize, trotter_replay

CHEMICAL_ACCURACY = 5e-3  # Hartree

ENERGY_COLUMNS = [
    "R_label", "E_HF", "E_VQE", "E_diag", "error",
    "iterations", "evaluations", "params",
    "one_qubit_gates", "two_qubit_gates", "D",
]


def fmt(value):
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _r_label(path):
    stem = os.path.basename(path)
    stem = stem.rsplit(".", 1)[0]
    match = re.search(r"_(\d+\.\d+)$", stem)
    return match.group(1) if match else stem


def _sorted_fixtures(paths):
    def key(p):
        label = _r_label(p)
        try:
            return (0, float(label), p)
        except ValueError:
            return (1, 0.0, p)

    return sorted(paths, key=key)


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        digest.update(handle.read())
    return digest.hexdigest()


def _parse_config_file(path):
    values = {}
    with open(path) as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="phvqe",
        description="Particle-hole VQE batch driver (energies in Hartree)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("energy", "single-point VQE energy on one fixture"),
        ("scan", "VQE energies over a fixture series (dissociation scan)"),
        ("trotter", "replay vs reoptimized Trotter errors on one fixture"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fixtures", help="FCIDUMP glob or path list (comma separated)")
        p.add_argument("--ansatz", default="uccsd", help="uccsd | ex1 | ex2 | cnot")
        p.add_argument("--active-occ", type=int, default=None,
                       help="occupied spin orbitals kept active (from the Fermi level down)")
        p.add_argument("--active-virt", type=int, default=None,
                       help="virtual spin orbitals kept active (from the Fermi level up)")
        p.add_argument("--depth", type=int, default=8, help="entangler blocks D")
        p.add_argument("--trotter", default="1",
                       help="Trotter steps; comma list for the trotter command")
        p.add_argument("--mu", type=float, default=0.0, help="number-penalty strength")
        p.add_argument("--mu-ramp", action="store_true",
                       help="ramp the penalty on gradually instead of holding it constant")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-7, help="energy convergence tolerance")
        p.add_argument("--grad-step", type=float, default=1e-6)
        p.add_argument("--max-iter", type=int, default=200)
        p.add_argument("--jobs", type=int, default=1, help="concurrent geometries (scan)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--config", default=None,
                       help="key=value settings file; flags override file values")
    return parser


_FILE_KEYS = {
    "fixtures": str, "ansatz": str, "active_occ": int, "active_virt": int,
    "depth": int, "trotter": str, "mu": float, "mu_ramp": lambda v: v.lower() == "true",
    "seed": int, "tol": float, "grad_step": float, "max_iter": int,
    "jobs": int, "out": str,
}


def _merge_config(args, argv):
    if not args.config:
        return args
    values = _parse_config_file(args.config)
    values.pop("command", None)
    supplied = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in values.items():
        attr = key.replace("-", "_")
        if attr not in _FILE_KEYS:
            continue
        if attr in supplied:
            continue
        if value == "":
            continue
        setattr(args, attr, _FILE_KEYS[attr](value))
    return args


def _resolve_fixtures(spec):
    if not spec:
        raise SystemExit("error: --fixtures is required")
    paths = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        matches = glob.glob(chunk)
        paths.extend(matches if matches else ([chunk] if os.path.exists(chunk) else []))
    paths = _sorted_fixtures(dict.fromkeys(paths))
    if not paths:
        raise SystemExit(f"error: no fixtures match {spec!r}")
    return paths


def _write_manifest(out_dir, command, args, fixtures):
    lines = [f"command={command}"]
    lines.append("fixtures=" + ",".join(fixtures))
    for key in ("ansatz", "active_occ", "active_virt", "depth", "trotter",
                "mu", "mu_ramp", "seed", "tol", "grad_step", "max_iter", "jobs"):
        value = getattr(args, key)
        lines.append(f"{key}={'' if value is None else value}")
    for path in fixtures:
        lines.append(f"sha256:{os.path.basename(path)}={_sha256(path)}")
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")
    return path


def _solver_kwargs(args, seed):
    return dict(
        ansatz=check_ansatz_name(args.ansatz),
        depth=args.depth,
        trotter_steps=int(str(args.trotter).split(",")[0]),
        active_occ=args.active_occ,
        active_virt=args.active_virt,
        tolerance=args.tol,
        grad_step=args.grad_step,
        max_iterations=args.max_iter,
        mu=args.mu,
        mu_ramp=args.mu_ramp,
        seed=seed,
        compute_exact=True,
    )


def _energy_row(path, kwargs, depth_label):
    solver = PhVqeSolver(**kwargs).fit(path)
    result = solver.result_
    ones, twos = solver.gate_counts_
    return {
        "R_label": _r_label(path),
        "E_HF": solver.hf_energy_,
        "E_VQE": solver.energy_,
        "E_diag": solver.exact_energy_,
        "error": solver.energy_ - solver.exact_energy_,
        "iterations": result.iterations,
        "evaluations": result.energy_evaluations,
        "params": solver.n_parameters_,
        "one_qubit_gates": ones,
        "two_qubit_gates": twos,
        "D": depth_label,
    }, solver


def _run_geometry(task):
    path, kwargs, depth_label = task
    row, solver = _energy_row(path, kwargs, depth_label)
    return row, solver.result_.to_record(), solver.result_.trace_csv()


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row.get(c, "")) for c in columns])


def _depth_label(args):
    return args.depth if check_ansatz_name(args.ansatz) != "uccsd" else ""


def cmd_energy(args, argv):
    fixtures = _resolve_fixtures(args.fixtures)
    if len(fixtures) != 1:
        print(f"error: energy expects exactly one fixture, got {len(fixtures)}",
              file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    _write_manifest(args.out, "energy", args, fixtures)
    try:
        row, solver = _energy_row(fixtures[0], _solver_kwargs(args, args.seed),
                                  _depth_label(args))
    except Exception as exc:  # propagate as exit code per contract
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_csv(os.path.join(args.out, "energy.csv"), ENERGY_COLUMNS, [row])
    record = solver.result_.to_record()
    with open(os.path.join(args.out, f"{row['R_label']}.record"), "w") as handle:
        handle.write(record)
    with open(os.path.join(args.out, f"{row['R_label']}.trace.csv"), "w") as handle:
        handle.write(solver.result_.trace_csv())
    if not solver.converged_:
        print("error: optimizer did not converge", file=sys.stderr)
        return 1
    print(",".join(fmt(row[c]) for c in ENERGY_COLUMNS))
    return 0


def cmd_scan(args, argv):
    fixtures = _resolve_fixtures(args.fixtures)
    if len(fixtures) < 2:
        print("error: scan expects at least two fixtures", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    _write_manifest(args.out, "scan", args, fixtures)
    depth_label = _depth_label(args)
    tasks = [
        (path, _solver_kwargs(args, args.seed + index), depth_label)
        for index, path in enumerate(fixtures)
    ]
    rows = []
    outputs = []
    csv_path = os.path.join(args.out, "scan.csv")
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                outputs = list(pool.map(_run_geometry, tasks))
        else:
            for task in tasks:
                outputs.append(_run_geometry(task))
    except Exception as exc:
        # flush whatever completed, in geometry order, then abort
        _write_csv(csv_path, ENERGY_COLUMNS, [row for row, _, _ in outputs])
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for (row, record, trace), path in zip(outputs, fixtures):
        rows.append(row)
        label = row["R_label"]
        with open(os.path.join(args.out, f"{label}.record"), "w") as handle:
            handle.write(record)
        with open(os.path.join(args.out, f"{label}.trace.csv"), "w") as handle:
            handle.write(trace)
    errors = np.array([abs(r["error"]) for r in rows])
    rows.append({"R_label": "summary", "error": float(errors.max())})
    _write_csv(csv_path, ENERGY_COLUMNS, rows)
    summary = {
        "max_abs_error": float(errors.max()),
        "mean_abs_error": float(errors.mean()),
        "error_spread": float(errors.max() - errors.min()),
        "chemical_accuracy": CHEMICAL_ACCURACY,
        "within_chemical_accuracy": str(bool(errors.max() < CHEMICAL_ACCURACY)).lower(),
    }
    with open(os.path.join(args.out, "scan_summary.txt"), "w") as handle:
        for key, value in summary.items():
            handle.write(f"{key}={fmt(value)}\n")
    print(f"scan: {len(fixtures)} geometries, max|error| = {fmt(float(errors.max()))} Ha")
    return 0


def cmd_trotter(args, argv):
    fixtures = _resolve_fixtures(args.fixtures)
    if len(fixtures) != 1:
        print("error: trotter expects exactly one fixture", file=sys.stderr)
        return 2
    if check_ansatz_name(args.ansatz) != "uccsd":
        print("error: the trotter study uses the uccsd ansatz", file=sys.stderr)
        return 2
    steps = sorted({int(s) for s in str(args.trotter).split(",") if s.strip()})
    if not steps or steps[0] < 1:
        print("error: --trotter must list positive step counts", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    _write_manifest(args.out, "trotter", args, fixtures)

    mi = load_fcidump(fixtures[0])
    context = build_context(mi, args.active_occ, args.active_virt)
    ansatz, _, _ = build_ansatz("uccsd", context)
    excitations = ansatz.excitations
    e_diag, _ = ground_energy_in_sector(context.h_q, context.n_electrons)
    oracle_config = VqeConfig(tolerance=min(args.tol, 1e-11),
                              grad_step=args.grad_step, max_iterations=args.max_iter)
    e_an, theta_opt = uccsd_analytic_energy(
        context.so, context.occ, excitations, config=oracle_config)

    rows = []
    for n in steps:
        replay = trotter_replay(context.h_q, excitations, context.occ, theta_opt, n)
        from .uccsd import UccsdAnsatz, build_uccsd_circuit

        step_ansatz = UccsdAnsatz(context.n_qubits, excitations, trotter_steps=n)
        problem = VqeProblem(
            hamiltonian=context.h_q,
            builder=lambda th, a=step_ansatz: build_uccsd_circuit(a, th),
            n_params=excitations.n_parameters,
            reference=context.occ,
            initial_theta=theta_opt,
            label=f"trotter-{n}",
        )
        config = VqeConfig(tolerance=args.tol, grad_step=args.grad_step,
                           max_iterations=args.max_iter)
        reopt = minimize(problem, config)
        rows.append({
            "n": n,
            "replay_error": abs(replay - e_diag),
            "reopt_error": abs(reopt.e_final - e_diag),
        })
    _write_csv(os.path.join(args.out, "trotter.csv"),
               ["n", "replay_error", "reopt_error"], rows)
    with open(os.path.join(args.out, "trotter_reference.txt"), "w") as handle:
        handle.write(f"e_diag={e_diag!r}\ne_an={e_an!r}\n")
        handle.write("theta_opt=" + ",".join(repr(float(t)) for t in theta_opt) + "\n")
    for row in rows:
        print(f"n={row['n']} replay_error={fmt(row['replay_error'])} "
              f"reopt_error={fmt(row['reopt_error'])}")
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _merge_config(args, argv)
    handler = {"energy": cmd_energy, "scan": cmd_scan, "trotter": cmd_trotter}[args.command]
    return handler(args, argv)


if __name__ == "__main__":
    sys.exit(main())
