"""Command-line front end.

Subcommands: ``motifs`` (extract and export motif sets), ``predict``
(closed-form predictions plus comparison), ``sweep`` (richness over a nu
grid), ``verify`` (property suites), ``kernel`` (evaluate kernels on
time-series files).  Options may come from a flat ``key = value`` config
file via --config; explicit flags override file values.

Exit codes: 0 success, 1 usage or configuration error, 2 property-suite
failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import _io
from . import coupling as cp
from .errors import ContractViolation, ConvergenceError, PsdViolationError
from .motifs import (
    compare_motifs,
    extract_motifs,
    predict_cycle,
    predict_cycle_periodic,
    predict_random,
    predict_symmetric,
)
from .richness import SweepConfig, default_nu_grid, sweep
from .temporal_kernel import (
    ReadoutModel,
    TensorSource,
    build_metric_tensor,
    kernel_eval,
    kernel_poly,
    readout_eval,
)
from .verify import inject_asymmetry, run_all


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_REGIMES = {
    "random": cp.RANDOM_IID,
    "symmetric": cp.SYMMETRIC_WIGNER,
    "cycle": cp.CYCLE_PERMUTATION,
}
_INPUTS = {
    "gaussian": "gaussian",
    "uniform": "uniform",
    "ones-random-signs": "ones_random_signs",
    "pi-signs": "ones_pi_signs",
    "e-signs": "ones_e_signs",
    "periodic-binary": "periodic_binary",
    "periodic-bipolar": "periodic_bipolar",
}

_MODEL_DEFAULTS = {
    "regime": "random",
    "input": "gaussian",
    "dist": "gaussian",
    "N": 100,
    "nu": 0.995,
    "tau": None,
    "ell": None,
    "period": None,
    "seed": 0,
    "threshold": 1e-2,
    "trials": None,
    "out": ".",
    "normalize": True,
    "nu_grid": None,
    "regimes": None,
    "inputs": None,
}

_KEY_TYPES = {
    "regime": str, "input": str, "dist": str, "N": int, "nu": float, "tau": int,
    "ell": int, "period": int, "seed": int, "threshold": float, "trials": int,
    "out": str, "normalize": bool, "nu_grid": str, "regimes": str, "inputs": str,
}

# Flags copied verbatim into the resolved mapping when present.
_PASSTHROUGH_FLAGS = ("regime", "input", "dist", "N", "nu", "tau", "ell", "period",
                      "seed", "threshold", "trials", "out", "nu_grid", "regimes",
                      "inputs")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--regime", choices=sorted(_REGIMES), default=None,
                        help="reservoir regime (default random)")
    parser.add_argument("--input", choices=sorted(_INPUTS), default=None,
                        help="input coupling kind (default gaussian)")
    parser.add_argument("--dist", choices=sorted(cp.ENTRY_DISTRIBUTIONS), default=None,
                        help="entry distribution for random regimes (default gaussian)")
    parser.add_argument("--N", type=int, default=None, help="state dimension (default 100)")
    parser.add_argument("--nu", type=float, default=None,
                        help="largest singular value target (default 0.995)")
    parser.add_argument("--tau", type=int, default=None,
                        help="kernel horizon (default ell * N)")
    parser.add_argument("--ell", type=int, default=None,
                        help="horizon in multiples of N (default 2)")
    parser.add_argument("--period", type=int, default=None,
                        help="block length for periodic input kinds")
    parser.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
    parser.add_argument("--threshold", type=float, default=None,
                        help="motif retention ratio (default 1e-2)")
    parser.add_argument("--trials", type=int, default=None,
                        help="number of trials (default 1; sweep chooses by randomness)")
    parser.add_argument("--out", default=None, help="output directory (default .)")
    parser.add_argument("--config", default=None, help="flat key = value config file")
    parser.add_argument("--no-unit-norm", action="store_true",
                        help="skip unit normalization of the input coupling")


def _coerce(key: str, raw: str):
    typ = _KEY_TYPES[key]
    try:
        if typ is bool:
            lowered = raw.lower()
            if lowered in ("true", "yes", "1"):
                return True
            if lowered in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError as exc:
        raise UsageError(
            f"config value for {key!r} is not a valid {typ.__name__}: {raw!r}"
        ) from exc


def _resolve(args: argparse.Namespace) -> tuple[dict, set]:
    """Merge defaults, config file, and flags; flags win.

    Returns the resolved mapping and the set of keys the user provided
    explicitly (by flag or config file).
    """
    resolved = dict(_MODEL_DEFAULTS)
    provided: set[str] = set()
    if args.config:
        for key, raw in _io.parse_config_file(args.config).items():
            if key not in _KEY_TYPES:
                raise UsageError(f"unknown config key {key!r}")
            resolved[key] = _coerce(key, raw)
            provided.add(key)
    for key in _PASSTHROUGH_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
            provided.add(key)
    if getattr(args, "no_unit_norm", False):
        resolved["normalize"] = False
        provided.add("normalize")
    if resolved["regime"] not in _REGIMES:
        raise UsageError(f"unknown regime {resolved['regime']!r}")
    if resolved["input"] not in _INPUTS:
        raise UsageError(f"unknown input kind {resolved['input']!r}")
    if resolved["dist"] not in cp.ENTRY_DISTRIBUTIONS:
        raise UsageError(f"unknown distribution {resolved['dist']!r}")
    return resolved, provided


def _horizon(resolved: dict) -> int:
    if resolved["tau"] is not None:
        return resolved["tau"]
    ell = resolved["ell"] if resolved["ell"] is not None else 2
    return ell * resolved["N"]


def _specs(resolved: dict):
    kind = _INPUTS[resolved["input"]]
    res_spec = cp.ReservoirSpec(regime=_REGIMES[resolved["regime"]], size=resolved["N"],
                                nu=resolved["nu"], distribution=resolved["dist"])
    in_spec = cp.InputCouplingSpec(
        kind=kind, size=resolved["N"],
        period=resolved["period"] if kind.startswith("periodic") else None,
        normalize_unit=resolved["normalize"],
    )
    return res_spec, in_spec


def _materialize(resolved: dict, trial: int):
    res_spec, in_spec = _specs(resolved)
    seed = cp.mix_seed(resolved["seed"], 0, trial)
    reservoir = cp.generate_reservoir(res_spec, seed)
    coupling_vec = cp.generate_input(in_spec, seed)
    tensor = build_metric_tensor(reservoir, coupling_vec, _horizon(resolved),
                                 source=TensorSource(res_spec, in_spec, seed))
    return reservoir, coupling_vec, tensor


def _outdir(resolved: dict) -> Path:
    out = Path(resolved["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_motifs(args) -> int:
    resolved, _ = _resolve(args)
    out = _outdir(resolved)
    trials = resolved["trials"] if resolved["trials"] is not None else 1
    if trials < 1:
        raise UsageError("--trials must be positive")
    weight_runs = []
    first = None
    for trial in range(trials):
        _, _, tensor = _materialize(resolved, trial)
        motif_set = extract_motifs(tensor, resolved["threshold"])
        weight_runs.append(np.sqrt(motif_set.spectrum))
        if trial == 0:
            first = motif_set
    _io.write_motifs_csv(first.vectors, first.weights, out / "motifs.csv")
    _io.write_weights_csv(weight_runs[0], out / "weights.csv")
    if trials > 1:
        stack = np.stack(weight_runs)
        _io.write_weights_mean_std_csv(stack.mean(axis=0), stack.std(axis=0),
                                       out / "weights_mean_std.csv")
    print(f"retained {len(first)} of {first.horizon} motifs "
          f"(threshold {_io.fmt_float(resolved['threshold'])})")
    if len(first):
        print(f"top weight {_io.fmt_float(first.weights[0])}")
    print(f"wrote {out / 'motifs.csv'} and {out / 'weights.csv'}"
          + (f" and {out / 'weights_mean_std.csv'}" if trials > 1 else ""))
    return 0


def _prediction_for(resolved: dict, reservoir, coupling_vec, horizon: int):
    regime = _REGIMES[resolved["regime"]]
    if regime == cp.RANDOM_IID:
        return predict_random(resolved["N"], resolved["nu"],
                              float(np.linalg.norm(coupling_vec)), horizon)
    if regime == cp.CYCLE_PERMUTATION:
        if horizon % resolved["N"] != 0:
            raise UsageError("cycle predictions need tau to be a multiple of N; "
                             "use --ell (or a matching --tau)")
        copies = horizon // resolved["N"]
        if _INPUTS[resolved["input"]].startswith("periodic"):
            return predict_cycle_periodic(resolved["N"], resolved["nu"],
                                          coupling_vec[:resolved["period"]], copies)
        return predict_cycle(resolved["N"], resolved["nu"], coupling_vec, copies)
    return predict_symmetric(reservoir, coupling_vec, horizon)


def cmd_predict(args) -> int:
    resolved, _ = _resolve(args)
    out = _outdir(resolved)
    reservoir, coupling_vec, tensor = _materialize(resolved, 0)
    empirical = extract_motifs(tensor, resolved["threshold"])
    prediction = _prediction_for(resolved, reservoir, coupling_vec, tensor.horizon)
    _io.write_motifs_csv(prediction.vectors, prediction.weights,
                         out / "predicted_motifs.csv")
    _io.write_weights_csv(prediction.weights, out / "predicted_weights.csv")
    if prediction.orthonormal:
        comparison = compare_motifs(empirical, prediction)
        _io.write_comparison_csv(comparison, prediction.weights, empirical.weights,
                                 out / "comparison.csv")
        print(f"compared {comparison.n_compared} motifs: "
              f"min alignment {_io.fmt_float(comparison.min_alignment)}, "
              f"max weight rel error {_io.fmt_float(comparison.max_weight_rel_error)}")
        print(f"wrote predicted_motifs.csv, predicted_weights.csv, comparison.csv in {out}")
    else:
        recon = prediction.extras["reconstruction"]
        residual = float(np.max(np.abs(recon - tensor.matrix)))
        scale = float(np.max(np.abs(tensor.matrix)))
        _io.write_csv(out / "reconstruction.csv",
                      ["max_abs_residual", "tensor_max_abs", "relative_residual"],
                      [[residual, scale, residual / scale if scale > 0.0 else 0.0]])
        print("symmetric regime: components are not eigenvectors; "
              "wrote reconstruction residual instead of a comparison")
        print(f"reconstruction residual {_io.fmt_float(residual)} "
              f"(tensor scale {_io.fmt_float(scale)})")
        print(f"wrote predicted_motifs.csv, predicted_weights.csv, reconstruction.csv in {out}")
    return 0


def _parse_nu_grid(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--nu-grid expects lo:step:hi")
    try:
        lo, step, hi = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"--nu-grid values must be numbers: {text!r}") from exc
    if step <= 0.0 or hi < lo:
        raise UsageError("--nu-grid needs step > 0 and hi >= lo")
    values = []
    k = 0
    while True:
        value = round(lo + k * step, 9)
        if value > hi + 1e-12:
            break
        values.append(value)
        k += 1
    return tuple(values)


def _split_aliases(text: str, aliases: dict, what: str) -> tuple[str, ...]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if item in aliases:
            out.append(aliases[item])
        elif item in aliases.values():
            out.append(item)
        else:
            raise UsageError(f"unknown {what} {item!r}")
    if not out:
        raise UsageError(f"empty {what} list")
    return tuple(out)


def cmd_sweep(args) -> int:
    resolved, provided = _resolve(args)
    out = _outdir(resolved)
    if resolved["regimes"] is not None:
        regimes = _split_aliases(resolved["regimes"], _REGIMES, "regime")
    elif "regime" in provided:
        regimes = (_REGIMES[resolved["regime"]],)
    else:
        regimes = (cp.CYCLE_PERMUTATION, cp.RANDOM_IID)
    if resolved["inputs"] is not None:
        kinds = _split_aliases(resolved["inputs"], _INPUTS, "input kind")
    elif "input" in provided:
        kinds = (_INPUTS[resolved["input"]],)
    else:
        kinds = ("ones_pi_signs",)
    nu_values = (_parse_nu_grid(resolved["nu_grid"]) if resolved["nu_grid"]
                 else default_nu_grid())
    if not nu_values:
        raise UsageError("nu grid is empty")
    config = SweepConfig(
        nu_values=nu_values,
        regimes=regimes,
        input_kinds=kinds,
        state_dim=resolved["N"],
        horizon=resolved["tau"],
        period=resolved["period"],
        threshold_ratio=resolved["threshold"],
        trials=resolved["trials"],
        base_seed=resolved["seed"],
        distribution=resolved["dist"],
        normalize_unit=resolved["normalize"],
    )
    reports = sweep(config)
    _io.write_sweep_csv(reports, out / "sweep.csv")
    print(f"swept {len(nu_values)} nu values, {len(regimes)} regimes, "
          f"{len(kinds)} input kinds: {len(reports)} trial rows")
    print(f"wrote {out / 'sweep.csv'}")
    return 0


def cmd_verify(args) -> int:
    resolved, _ = _resolve(args)
    out = _outdir(resolved)
    tamper = inject_asymmetry if args.inject_asymmetry else None
    results = run_all(base_seed=resolved["seed"],
                      equivalence_configs=args.configs,
                      spectrum_configs=args.spectrum_configs,
                      containment_trials=args.containment_trials,
                      tamper=tamper)
    all_passed = True
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.n_checked} checked, {result.detail}")
        if not result.passed:
            all_passed = False
            if result.replay is not None:
                slug = result.name.replace(" ", "_").replace(",", "")
                path = out / f"verify_failure_{slug}.json"
                _io.atomic_write_text(path, json.dumps(result.replay, indent=2,
                                                       default=float) + "\n")
                print(f"  offending instance written to {path}")
    return 0 if all_passed else 2


def cmd_kernel(args) -> int:
    resolved, _ = _resolve(args)
    out = _outdir(resolved)
    u = _io.read_time_series(args.u_file)
    v = _io.read_time_series(args.v_file)
    if u.horizon != v.horizon:
        raise UsageError(f"time series horizons differ: {u.horizon} vs {v.horizon}")
    if (args.offset is None) != (args.degree is None):
        raise UsageError("--offset and --degree must be given together")
    res_spec, in_spec = _specs(resolved)
    seed = cp.Seed(resolved["seed"])
    reservoir = cp.generate_reservoir(res_spec, seed)
    coupling_vec = cp.generate_input(in_spec, seed)
    tensor = build_metric_tensor(reservoir, coupling_vec, u.horizon,
                                 source=TensorSource(res_spec, in_spec, seed))
    rows = [["kernel", kernel_eval(tensor, u, v)]]
    if args.offset is not None:
        rows.append(["kernel_poly", kernel_poly(tensor, u, v, args.offset, args.degree)])
    if args.support:
        if len(args.coeff or []) != len(args.support):
            raise UsageError("one --coeff per --support is required")
        supports = tuple(_io.read_time_series(p) for p in args.support)
        model = ReadoutModel(supports=supports, coefficients=np.array(args.coeff),
                             bias=args.bias)
        rows.append(["readout", readout_eval(model, tensor, v)])
    _io.write_csv(out / "kernel.csv", ["name", "value"], rows)
    for name, value in rows:
        print(f"{name} = {_io.fmt_float(value)}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="reskernel",
                     description="Temporal kernels and motifs of linear reservoirs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_motifs = sub.add_parser("motifs", help="extract motifs and write CSV files")
    _add_model_flags(p_motifs)
    p_motifs.set_defaults(func=cmd_motifs)

    p_predict = sub.add_parser("predict", help="closed-form motif predictions")
    _add_model_flags(p_predict)
    p_predict.set_defaults(func=cmd_predict)

    p_sweep = sub.add_parser("sweep", help="richness sweep over a nu grid")
    _add_model_flags(p_sweep)
    p_sweep.add_argument("--nu-grid", dest="nu_grid", default=None,
                         help="lo:step:hi (default 0.90:0.005:1.00 plus reference points)")
    p_sweep.add_argument("--regimes", default=None,
                         help="comma list of regimes (default cycle,random)")
    p_sweep.add_argument("--inputs", default=None,
                         help="comma list of input kinds (default pi-signs)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the property suites")
    _add_model_flags(p_verify)
    p_verify.add_argument("--configs", type=int, default=100,
                          help="configurations for the equivalence suite")
    p_verify.add_argument("--spectrum-configs", type=int, default=60,
                          help="configurations for the spectrum suites")
    p_verify.add_argument("--containment-trials", type=int, default=50,
                          help="trials for the error-containment suite")
    p_verify.add_argument("--inject-asymmetry", action="store_true",
                          help="negative control: tamper with built tensors "
                               "so the suites must fail")
    p_verify.set_defaults(func=cmd_verify)

    p_kernel = sub.add_parser("kernel", help="evaluate kernels on time-series files")
    _add_model_flags(p_kernel)
    p_kernel.add_argument("u_file", help="time series file, one sample per line, "
                                         "most recent first")
    p_kernel.add_argument("v_file", help="second time series file")
    p_kernel.add_argument("--offset", type=float, default=None,
                          help="additive offset of the polynomial kernel")
    p_kernel.add_argument("--degree", type=int, default=None,
                          help="degree of the polynomial kernel")
    p_kernel.add_argument("--support", action="append", default=None,
                          help="support time series for a readout (repeatable)")
    p_kernel.add_argument("--coeff", action="append", type=float, default=None,
                          help="readout coefficient, one per --support")
    p_kernel.add_argument("--bias", type=float, default=0.0, help="readout bias")
    p_kernel.set_defaults(func=cmd_kernel)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, PsdViolationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
