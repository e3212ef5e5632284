"""Command-line entry point.

A job is described by a single JSON config document; command-line flags
override scalar config fields.  Commands: basis, qfim, uct, criteria,
witness, invariance, sweep.  Exit codes: 0 success, 2 unknown command or
invalid parameters, 3 dimension cap exceeded, 4 numerical failure.  Errors
are reported as one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .basis import (
    DIM_CAP_DEFAULT,
    build_collective_symmetric,
    build_full_observable_basis,
    build_gellmann,
    build_spin1_dipole,
    build_su3_collective,
)
from .criteria import avg_response, entanglement_witness, evaluate_criteria
from .dynamics import SweepSpec, run_sweep
from .exceptions import (
    ConfigError,
    DimensionCapError,
    LieMetricError,
    NumericalError,
    UndefinedIncompatibilityError,
    ValidationError,
)
from .geometry import (
    RANK_REL_DEFAULT,
    RHO_SUPPORT_REL_DEFAULT,
    Uct,
    incompatibility_from_matrices,
    qfim,
    _qgt,
)
from .invariance import run_invariance_suite
from . import io as lio
from .states import (
    DensityMatrix,
    PureState,
    css,
    density,
    ghz_balanced,
    initial_example_state,
    maximally_mixed,
    noon,
)

COMMANDS = ("basis", "qfim", "uct", "criteria", "witness", "invariance", "sweep")

GRID_PRESETS = {
    "fig4-coarse": {
        "alpha_grid": [0.0, np.pi / 8, np.pi / 4, np.pi / 2],
        "beta_grid": [0.0, np.pi / 4, np.pi / 2, np.pi],
        "quantities": ["lambda_max_g1", "lambda_max_g2"],
    },
    "fig5-coarse": {
        "alpha_grid": [0.0, np.pi / 8, np.pi / 4, np.pi / 2],
        "beta_grid": [0.0, np.pi / 4, np.pi / 2, np.pi],
        "quantities": ["gamma_g1", "gamma_g2"],
    },
    "fig4": {
        "alpha_grid": list(np.linspace(0.0, np.pi, 101)),
        "beta_grid": list(np.linspace(0.0, 2 * np.pi, 101)),
        "quantities": ["lambda_max_g1", "lambda_max_g2"],
    },
    "fig5": {
        "alpha_grid": list(np.linspace(0.0, np.pi, 101)),
        "beta_grid": list(np.linspace(0.0, 2 * np.pi, 101)),
        "quantities": ["gamma_g1", "gamma_g2"],
    },
}


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="liemetric",
        description="Quantum Fisher information geometry over Lie-algebra bases.",
    )
    p.add_argument("--config", required=True, help="path to a JSON job config")
    p.add_argument("--output", help="output file path (default: config output_path or stdout)")
    p.add_argument("--format", choices=["csv", "json"], help="output format (sweeps support csv)")
    p.add_argument("--seed", type=int, help="seed for randomized commands")
    p.add_argument("--threads", type=int, help="worker threads (wall time only, never values)")
    p.add_argument("--cap", type=int, help="dimension cap override")
    p.add_argument("--quiet", action="store_true", help="suppress progress/stdout chatter")
    p.add_argument(
        "--quiet-meta",
        action="store_true",
        help="omit the runtime field from metadata (byte-reproducible output)",
    )
    return p


def _parse_amplitudes(raw) -> np.ndarray:
    out = []
    for x in raw:
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ConfigError(f"amplitude entries must be numbers or [re, im], got {x}")
            out.append(complex(x[0], x[1]))
        else:
            out.append(complex(x))
    return np.array(out, dtype=np.complex128)


def _basis_vector(d: int, index: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[index] = 1.0
    return v


def _build_state(spec: dict, cap: int):
    if not isinstance(spec, dict):
        raise ConfigError("'state' must be an object with a 'kind'")
    kind = spec.get("kind")
    if kind == "css":
        return css(int(spec["d"]), int(spec["N"]), _parse_amplitudes(spec["amplitudes"]))
    if kind == "noon":
        d = int(spec["d"])
        psi = _parse_amplitudes(spec["psi"]) if "psi" in spec else _basis_vector(d, 0)
        perp = _parse_amplitudes(spec["perp"]) if "perp" in spec else _basis_vector(d, 1)
        return noon(d, int(spec["N"]), psi, perp)
    if kind == "ghz":
        return ghz_balanced(int(spec["d"]), int(spec["N"]))
    if kind == "initial":
        return initial_example_state(int(spec["N"]))
    if kind == "mixed":
        return maximally_mixed(int(spec["D"]))
    raise ConfigError(f"unknown state kind {kind!r} (css/noon/ghz/initial/mixed)")


def _build_basis(spec: dict, cap: int):
    if not isinstance(spec, dict):
        raise ConfigError("'basis' must be an object")
    kind = spec.get("kind")
    if kind is None:
        if "D" in spec:
            kind = "full_observable"
        elif "N" in spec:
            kind = "collective"
        else:
            kind = "gellmann"
    if kind == "gellmann":
        return build_gellmann(int(spec["d"]))
    if kind == "collective":
        return build_collective_symmetric(int(spec["d"]), int(spec["N"]), cap=cap)
    if kind == "spin1_dipole":
        return build_spin1_dipole(int(spec["N"]), cap=cap)
    if kind == "su3_collective":
        return build_su3_collective(int(spec["N"]), cap=cap)
    if kind == "full_observable":
        return build_full_observable_basis(int(spec["D"]), cap=cap)
    raise ConfigError(f"unknown basis kind {kind!r}")


def _as_density(state) -> DensityMatrix:
    return density(state) if isinstance(state, PureState) else state


def _cmd_basis(config, ctx):
    basis = _build_basis(
        {k: config[k] for k in ("kind", "d", "N", "D") if k in config}, ctx["cap"]
    )
    return lio.basis_to_jsonable(basis), None


def _cmd_qfim(config, ctx):
    basis = _build_basis(config["basis"], ctx["cap"])
    rho = _as_density(_build_state(config["state"], ctx["cap"]))
    q = qfim(rho, basis, ctx["cutoffs"]["rho_support_rel"])
    return lio.qfim_to_jsonable(q, {"rank_rel": ctx["cutoffs"]["rank_rel"]}), None


def _cmd_uct(config, ctx):
    basis = _build_basis(config["basis"], ctx["cap"])
    rho = _as_density(_build_state(config["state"], ctx["cap"]))
    f, u = _qgt(rho, basis, ctx["cutoffs"]["rho_support_rel"])
    inc = incompatibility_from_matrices(f, u, ctx["cutoffs"]["rank_rel"])
    payload = lio.uct_to_jsonable(
        Uct(u, basis.name, ctx["cutoffs"]["rho_support_rel"]),
        {"rank_rel": ctx["cutoffs"]["rank_rel"]},
    )
    payload["incompatibility"] = lio.incompatibility_to_jsonable(inc)
    return payload, None


def _cmd_criteria(config, ctx):
    basis = _build_basis(config["basis"], ctx["cap"])
    rho = _as_density(_build_state(config["state"], ctx["cap"]))
    q = qfim(rho, basis, ctx["cutoffs"]["rho_support_rel"])
    report = evaluate_criteria(
        q,
        zero_tol_rel=ctx["cutoffs"]["rank_rel"],
        n_particles=config.get("N"),
        levels=config.get("d"),
    )
    if not ctx["quiet"]:
        _print_criteria_table(report, q)
    return lio.criteria_to_jsonable(report), None


def _print_criteria_table(report, q):
    rows = [
        ("A", "average variance (trace)", f"{report.a_opt:.12g}"),
        ("C", "single-direction variance", f"<= lambda_max = {q.lambda_max():.12g}"),
        ("D", "generalized variance (pdet)", f"{report.d_opt!r}"),
        ("E", "smallest eigenvalue", f"{report.e_opt_all:.12g} (nonzero: {report.e_opt_nonzero!r})"),
        ("S", "parameter alignment", f"{report.s_opt!r} (basis dependent)"),
        ("T", "two-state distinguishability", "use uhlmann_distance_sq(rho, sigma)"),
    ]
    width = max(len(r[1]) for r in rows)
    for tag, label, value in rows:
        print(f"  {tag}  {label:<{width}}  {value}")


def _cmd_witness(config, ctx):
    d, n = int(config["d"]), int(config["N"])
    basis = build_collective_symmetric(d, n, cap=ctx["cap"])
    state_spec = config["state"]
    if isinstance(state_spec, str):
        state_spec = {"kind": state_spec, "d": d, "N": n}
    rho = _as_density(_build_state(state_spec, ctx["cap"]))
    q = qfim(rho, basis, ctx["cutoffs"]["rho_support_rel"])
    return lio.witness_to_jsonable(entanglement_witness(q, n, d)), None


def _cmd_invariance(config, ctx):
    basis = _build_basis(config["basis"], ctx["cap"])
    checks = run_invariance_suite(
        basis,
        n_pairs=int(config.get("n_pairs", 20)),
        seed=ctx["seed"],
        tol=float(config.get("tol", 1e-7)),
        scale=float(config.get("scale", np.pi)),
        support_cutoff=ctx["cutoffs"]["rho_support_rel"],
        rank_rel=ctx["cutoffs"]["rank_rel"],
    )
    payload = {
        "basis": basis.name,
        "n_pairs": len(checks),
        "all_passed": all(c.passed for c in checks),
        "checks": [
            {
                "state_rank": c.state_rank,
                "element_seed": c.seed,
                "spectrum_deviation": c.spectrum_deviation,
                "law_residual": c.law_residual,
                "uct_residual": c.uct_residual,
                "gamma_deviation": c.gamma_deviation,
                "gamma_defined": c.gamma_defined,
                "adjoint_orthogonality": c.adjoint_orthogonality,
                "adjoint_determinant": c.adjoint_determinant,
                "passed": c.passed,
            }
            for c in checks
        ],
    }
    return payload, None


def _cmd_sweep(config, ctx):
    if "grid" in config:
        preset = GRID_PRESETS.get(config["grid"])
        if preset is None:
            raise ConfigError(
                f"unknown grid preset {config['grid']!r}; valid: {sorted(GRID_PRESETS)}"
            )
        grid = dict(preset)
    else:
        grid = {}
    spec = SweepSpec(
        n_particles=int(config["N"]),
        alpha_grid=config.get("alpha_grid", grid.get("alpha_grid")),
        beta_grid=config.get("beta_grid", grid.get("beta_grid")),
        quantities=config.get("quantities", grid.get("quantities")),
    )
    result = run_sweep(
        spec,
        rank_rel=ctx["cutoffs"]["rank_rel"],
        threads=ctx["threads"],
        cap=ctx["cap"],
    )
    if ctx["format"] == "csv":
        return lio.sweep_result_to_jsonable(result), lio.sweep_result_to_csv(result)
    return lio.sweep_result_to_jsonable(result), None


_HANDLERS = {
    "basis": _cmd_basis,
    "qfim": _cmd_qfim,
    "uct": _cmd_uct,
    "criteria": _cmd_criteria,
    "witness": _cmd_witness,
    "invariance": _cmd_invariance,
    "sweep": _cmd_sweep,
}


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        config = lio.load_json(args.config)
        if not isinstance(config, dict):
            raise ConfigError("config must be a JSON object")
        command = config.get("command")
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}; valid: {list(COMMANDS)}")

        cutoffs = dict(config.get("cutoffs") or {})
        cutoffs.setdefault("rho_support_rel", RHO_SUPPORT_REL_DEFAULT)
        cutoffs.setdefault("rank_rel", RANK_REL_DEFAULT)
        ctx = {
            "cutoffs": {k: float(v) for k, v in cutoffs.items()},
            "seed": args.seed if args.seed is not None else int(config.get("seed", 0)),
            "threads": args.threads if args.threads is not None else int(config.get("threads", 1)),
            "cap": args.cap if args.cap is not None else int(config.get("cap", DIM_CAP_DEFAULT)),
            "format": args.format or config.get("format", "json"),
            "quiet": args.quiet,
        }
        if ctx["format"] == "csv" and command != "sweep":
            raise ConfigError("csv output is only supported for the sweep command")
        output_path = args.output or config.get("output_path")

        payload, csv_text = _HANDLERS[command](config, ctx)

        effective = dict(config)
        effective.update(
            seed=ctx["seed"], cap=ctx["cap"], format=ctx["format"], cutoffs=ctx["cutoffs"]
        )
        effective.pop("output_path", None)
        canonical = json.dumps(effective, sort_keys=True, default=str)
        metadata = {
            "tool_version": __version__,
            "command": command,
            "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
            "seed": ctx["seed"],
            "cutoffs": ctx["cutoffs"],
            "threads": ctx["threads"],
        }
        if not args.quiet_meta:
            metadata["runtime_s"] = time.perf_counter() - started

        if ctx["format"] == "csv":
            meta_lines = "".join(
                f"# {k} = {json.dumps(v, sort_keys=True)}\r\n" for k, v in sorted(metadata.items())
            )
            text = meta_lines + csv_text
        else:
            text = lio.dump_json({"metadata": metadata, "result": payload})

        if output_path:
            with open(output_path, "w", encoding="utf-8") as fh:
                fh.write(text if text.endswith("\n") else text + "\n")
            if not args.quiet:
                print(f"wrote {output_path}")
        else:
            print(text)
        return 0
    except DimensionCapError as exc:
        return _fail(3, "dimension-cap", str(exc))
    except (UndefinedIncompatibilityError, NumericalError) as exc:
        return _fail(4, "numerical-failure", str(exc))
    except (ConfigError, ValidationError, KeyError, TypeError) as exc:
        detail = f"missing config key {exc}" if isinstance(exc, KeyError) else str(exc)
        return _fail(2, "invalid-config", detail)
    except LieMetricError as exc:
        return _fail(2, "invalid-config", str(exc))


if __name__ == "__main__":
    sys.exit(main())
