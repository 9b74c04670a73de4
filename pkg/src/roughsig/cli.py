"""Command-line interface: ``roughsig <command> [options] [files]``.

Exit status is 0 on success, 1 when a check fails and 2 on input errors.
Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import io as rio
from ._layout import DEFAULT_ENTRY_CAP, entry_cap
from .errors import InputError, RoughPathError
from .grouplike import is_grouplike
from .rough import (
    graded_holder,
    holder_norm,
    is_multiplicative,
    minimal_depth,
    rho_holder,
    young_integral,
)
from .signature import SampledPath, levy_area, log_signature, path_signature, signature_path
from .tensor import project, rho_metric

COMMANDS = (
    "sig", "logsig", "dist", "levy", "young", "check-chen",
    "check-shuffle", "holder", "depth-for-alpha",
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    depth: int = 2
    interval: tuple[float, float] | None = None
    alpha: float | None = None
    beta: float | None = None
    tol: float = 1e-8
    cap: int = DEFAULT_ENTRY_CAP
    strict: bool = False
    refine: int | None = None

    def validate(self) -> None:
        if self.depth < 1:
            raise InputError("--depth must be >= 1")
        if self.tol <= 0:
            raise InputError("--tol must be positive")
        if self.interval is not None:
            s, t = self.interval
            if not 0.0 <= s <= t <= 1.0:
                raise InputError("--interval needs 0 <= S <= T <= 1")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise InputError("--alpha must lie in (0, 1)")


def _read_input(src):
    """Load a CSV path or a tensor JSON document; returns (kind, payload, name)."""
    if src in (None, "-"):
        text, name = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(src, encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot read {src}: {exc}") from exc
        name = src
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{name}: invalid JSON: {exc}") from exc
        if isinstance(obj, dict) and "increments" in obj:
            return "functional", rio.parse_functional_json(text, name), name
        return "tensor", rio.parse_tensor_json(text, name), name
    return "csv", rio.parse_csv(text, name), name


def _window(cfg: RunConfig, path):
    if cfg.interval is None:
        return float(path.times[0]), float(path.times[-1])
    return cfg.interval


def _signature_of(src, cfg: RunConfig):
    kind, payload, name = _read_input(src)
    if kind == "csv":
        s, t = _window(cfg, payload)
        return path_signature(payload, cfg.depth, s, t), (s, t), payload.meta
    if kind == "tensor":
        x, interval, meta = payload
        if x.depth < cfg.depth:
            raise InputError(f"{name}: tensor depth {x.depth} below --depth {cfg.depth}")
        return project(x, cfg.depth), interval, meta
    raise InputError(f"{name}: expected a CSV path or a tensor document")


def _csv_only(src):
    kind, payload, name = _read_input(src)
    if kind != "csv":
        raise InputError(f"{name}: expected CSV input")
    return payload


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dispatch(command: str, cfg: RunConfig, inputs: list[str]) -> tuple[int, str, str]:
    """Run one command; returns (exit status, stdout text, stderr text)."""
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    cfg.validate()
    want = {"dist": 2, "young": 2, "depth-for-alpha": 0}.get(command, 1)
    if want and len(inputs) > want:
        raise InputError(f"{command} takes at most {want} input(s)")
    inputs = list(inputs) + [None] * (want - len(inputs))
    if want == 2 and None in inputs:
        raise InputError(f"{command} needs two inputs")
    first = inputs[0] if inputs else None

    with entry_cap(cfg.cap):
        if command == "sig":
            x, interval, meta = _signature_of(first, cfg)
            return EXIT_OK, rio.write_tensor_json(x, interval, _span(meta)), ""

        if command == "logsig":
            path = _csv_only(first)
            s, t = _window(cfg, path)
            x = log_signature(path, cfg.depth, s, t)
            return EXIT_OK, rio.write_tensor_json(x, (s, t), _span(path.meta)), ""

        if command == "dist":
            x, _, _ = _signature_of(inputs[0], cfg)
            y, _, _ = _signature_of(inputs[1], cfg)
            if x.d != y.d:
                raise InputError(f"dimension mismatch: {x.d} vs {y.d}")
            return EXIT_OK, _fmt(rho_metric(x, y)), ""

        if command == "levy":
            path = _csv_only(first)
            s, t = _window(cfg, path)
            if path.d < 2:
                raise InputError("levy needs at least two coordinates")
            times, pts = path.window(s, t)
            area = levy_area(SampledPath(times, pts))
            return EXIT_OK, json.dumps({"levy_area": area.tolist()}), ""

        if command == "young":
            y, x = _csv_only(inputs[0]), _csv_only(inputs[1])
            res = young_integral(y, x, cfg.refine, cfg.strict, cfg.alpha, cfg.beta)
            note = ""
            if res.condition_met is None:
                note = "warning: exponents not declared, Young condition unchecked\n"
            elif not res.condition_met:
                note = "warning: alpha + beta <= 1, sums may not converge\n"
            out = {"value": res.value.tolist(), "condition_met": res.condition_met}
            return EXIT_OK, json.dumps(out), note

        if command == "check-chen":
            kind, payload, name = _read_input(first)
            if kind == "csv":
                target = signature_path(payload, cfg.depth)
            elif kind == "functional":
                target = payload
            else:
                raise InputError(f"{name}: check-chen needs CSV or functional JSON input")
            report = is_multiplicative(target, cfg.tol)
            status = EXIT_OK if report.ok else EXIT_CHECK_FAILED
            msg = "chen: pass\n" if report.ok else f"chen: FAIL, worst triple {report.worst}\n"
            return status, json.dumps(report.to_json()), msg

        if command == "check-shuffle":
            x, _, _ = _signature_of(first, cfg)
            report = is_grouplike(x, cfg.tol)
            out = {
                "pass": report.ok,
                "worst": None if report.worst is None else report.worst.to_json(),
                "tol": cfg.tol,
            }
            msg = "shuffle: pass\n" if report.ok else f"shuffle: FAIL at {report.worst}\n"
            return (EXIT_OK if report.ok else EXIT_CHECK_FAILED), json.dumps(out), msg

        if command == "holder":
            if cfg.alpha is None:
                raise InputError("holder needs --alpha")
            path = _csv_only(first)
            if len(path) < 2:
                raise InputError("holder needs at least two samples")
            sp = signature_path(path, cfg.depth)
            rho = rho_holder(sp, cfg.alpha, cfg.tol)
            out = {
                "alpha": cfg.alpha,
                "depth": cfg.depth,
                "holder_norm": holder_norm(path, cfg.alpha),
                "graded": graded_holder(sp, cfg.alpha).tolist(),
                "rho_holder": rho.value,
                "rho_bounds": [rho.lower, rho.upper],
                "time_span": path.meta.get("time_span"),
                "time": "normalised to [0, 1]",
            }
            return EXIT_OK, json.dumps(out), ""

        if command == "depth-for-alpha":
            if cfg.alpha is None:
                raise InputError("depth-for-alpha needs --alpha")
            return EXIT_OK, str(minimal_depth(cfg.alpha)), ""

    raise AssertionError("unreachable")


def _span(meta) -> dict | None:
    if meta and "time_span" in meta:
        return {"time_span": meta["time_span"]}
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughsig", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("inputs", nargs="*", help="CSV or JSON files; '-' or none reads stdin")
    parser.add_argument("--depth", type=int, default=2)
    parser.add_argument("--interval", type=float, nargs=2, metavar=("S", "T"))
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float, help="declared Hölder exponent of the integrand (young)")
    parser.add_argument("--refine", type=int, help="uniform refinement steps (young)")
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--strict", action="store_true")
    parser.add_argument("--cap", type=int, default=DEFAULT_ENTRY_CAP)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg = RunConfig(
        depth=args.depth,
        interval=tuple(args.interval) if args.interval else None,
        alpha=args.alpha,
        beta=args.beta,
        tol=args.tol,
        cap=args.cap,
        strict=args.strict,
        refine=args.refine,
    )
    try:
        status, out, err = dispatch(args.command, cfg, args.inputs)
    except RoughPathError as exc:
        print(f"roughsig: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if err:
        sys.stderr.write(err)
    print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
