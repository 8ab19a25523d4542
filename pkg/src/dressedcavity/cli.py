"""Command-line front end.

A thin client over the HTTP service: every subcommand builds a request,
posts it (in-process by default, to --server when given), and renders the
response. Exit codes: 0 success, 2 usage error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from .errors import UsageError
from .params import PARAM_FIELDS, load_config

_PARAM_HELP = {
    "delta_a": "atom-laser detuning",
    "delta_c": "cavity-laser detuning",
    "omega_rabi": "strong-laser Rabi frequency",
    "epsilon": "cavity-drive amplitude",
    "g": "atom-cavity coupling",
    "kappa": "cavity photon leak rate",
    "gamma0": "central-frequency spontaneous rate",
    "gamma_plus": "upper-sideband spontaneous rate",
    "gamma_minus": "lower-sideband spontaneous rate",
    "gamma_d": "pure dephasing rate",
    "phi": "laser phase difference in radians",
}

_SOLVERS = ("analytic", "moments", "oracle_secular", "oracle_full")


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("physical parameters (gamma0 = 1 units)")
    for name in PARAM_FIELDS:
        flags = [f"--{name}"]
        dashed = name.replace("_", "-")
        if dashed != name:
            flags.append(f"--{dashed}")
        group.add_argument(
            *flags, dest=name, type=float, default=None, help=_PARAM_HELP[name]
        )
    parser.add_argument(
        "--config",
        default=None,
        metavar="FILE",
        help="flat JSON object of parameter values; flags override it",
    )


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        default=None,
        metavar="FILE",
        help="write output to FILE instead of standard output",
    )
    parser.add_argument(
        "--server",
        default=None,
        metavar="URL",
        help="send the request to a running service instead of in-process",
    )


def _parse_axis(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(
            f"axis spec must be name:start:stop:steps (e.g. epsilon:0:2:101), got {text!r}"
        )
    name, start, stop, steps = parts
    try:
        return {
            "param_name": name,
            "start": float(start),
            "stop": float(stop),
            "steps": int(steps),
        }
    except ValueError as exc:
        raise UsageError(f"bad axis spec {text!r}: {exc}") from exc


def _parse_ratios(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad ratio list {text!r}: {exc}") from exc
    if not values:
        raise UsageError("ratio list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dressedcavity",
        description=(
            "Steady-state and transient photon statistics of a weakly driven "
            "cavity coupled to a strongly dressed two-level emitter. All "
            "frequencies share one unit; the defaults set gamma0 = 1."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    steady = sub.add_parser(
        "steady", help="evaluate the steady state at one parameter point"
    )
    _add_param_flags(steady)
    steady.add_argument("--solver", choices=_SOLVERS, default="moments")
    steady.add_argument(
        "--regime-factor",
        "--regime_factor",
        dest="regime_factor",
        type=float,
        default=10.0,
        help="separation demanded by the secular validity check",
    )
    _add_common_flags(steady)

    minimum = sub.add_parser(
        "min", help="find the drive amplitude minimizing the steady photon number"
    )
    _add_param_flags(minimum)
    minimum.add_argument(
        "--method",
        choices=("auto", "analytic", "numeric"),
        default="auto",
        help="vertex formula, golden-section search, or automatic choice",
    )
    _add_common_flags(minimum)

    sweep = sub.add_parser("sweep", help="run a 1D or 2D parameter sweep to CSV")
    _add_param_flags(sweep)
    sweep.add_argument(
        "--preset",
        default=None,
        help="figure preset name (see the preset subcommand)",
    )
    sweep.add_argument(
        "--axis1",
        default=None,
        metavar="NAME:START:STOP:STEPS",
        help="first sweep axis (required unless a preset supplies it)",
    )
    sweep.add_argument(
        "--axis2", default=None, metavar="NAME:START:STOP:STEPS", help="second sweep axis"
    )
    sweep.add_argument(
        "--solver",
        choices=_SOLVERS,
        default=None,
        help="solver for every grid point (default: preset's, else moments)",
    )
    sweep.add_argument(
        "--regime-factor",
        "--regime_factor",
        dest="regime_factor",
        type=float,
        default=10.0,
    )
    _add_common_flags(sweep)

    oracle_check = sub.add_parser(
        "oracle-check",
        help=(
            "cross-check the moment dynamics against the density-matrix "
            "oracle; defaults to omega_rabi=50, delta_a=150, epsilon=0.3"
        ),
    )
    _add_param_flags(oracle_check)
    oracle_check.add_argument(
        "--mode", choices=("closure", "secular_scan"), default="closure"
    )
    oracle_check.add_argument(
        "--t-final",
        "--t_final",
        dest="t_final",
        type=float,
        default=None,
        help="closure comparison window (default 50/kappa)",
    )
    oracle_check.add_argument(
        "--ratios",
        default=None,
        metavar="R1,R2,...",
        help="splitting-to-coupling ratios for secular_scan (default 5,10,20,50)",
    )
    oracle_check.add_argument(
        "--target-tail",
        "--target_tail",
        dest="target_tail",
        type=float,
        default=1e-8,
        help="top Fock level population allowed when sizing the space",
    )
    _add_common_flags(oracle_check)

    preset = sub.add_parser("preset", help="list the figure presets")
    _add_common_flags(preset)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


class ServiceClient:
    """In-process ASGI client by default, real HTTP when a server is given."""

    def __init__(self, server: str | None):
        if server is None:
            from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)
        else:
            self._client = httpx.Client(base_url=server, timeout=600.0)

    def get(self, path: str) -> httpx.Response:
        return self._client.get(path)

    def post(self, path: str, payload: dict) -> httpx.Response:
        return self._client.post(path, json=payload)


def _gather_params(args: argparse.Namespace) -> dict[str, float]:
    values: dict[str, float] = {}
    if args.config is not None:
        values.update(load_config(args.config))
    for name in PARAM_FIELDS:
        flag = getattr(args, name)
        if flag is not None:
            values[name] = flag
    return values


def _write_out(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fail(resp: httpx.Response) -> int:
    try:
        body = resp.json()
    except ValueError:
        body = {"detail": resp.text}
    detail = body.get("detail", resp.text)
    if isinstance(detail, (list, dict)):
        detail = json.dumps(detail)
    kind = body.get("kind")
    prefix = f"error ({kind}): " if kind else "error: "
    print(prefix + str(detail), file=sys.stderr)
    return 2 if resp.status_code in (400, 422) else 3


def _fmt(x: float) -> str:
    return f"{x:.8e}"


def _render_steady(data: dict) -> str:
    lines = [
        f"n = {_fmt(data['n'])}",
        f"rz = {_fmt(data['rz'])}",
        f"a_mean = {_fmt(data['a_mean']['re'])} {data['a_mean']['im']:+.8e}i",
        f"rza = {_fmt(data['rza']['re'])} {data['rza']['im']:+.8e}i",
        f"solver = {data['solver']}",
        f"regime_ok = {'true' if data['regime_ok'] else 'false'}",
        f"worst_ratio = {_fmt(data['worst_ratio'])}",
    ]
    return "\n".join(lines) + "\n"


def _render_min(data: dict) -> str:
    bound = "n/a" if data["bound"] is None else _fmt(data["bound"])
    lines = [
        f"eps_min = {_fmt(data['eps_min'])}",
        f"n_min = {_fmt(data['n_min'])}",
        f"bound = {bound}",
        f"method = {data['method']}",
    ]
    return "\n".join(lines) + "\n"


def _render_presets(items: list[dict]) -> str:
    lines = []
    for item in items:
        lines.append(f"{item['name']}: {item['description']}")
        lines.append(f"  solver = {item['solver']}")
        lines.append(f"  base = {json.dumps(item['base'], sort_keys=True)}")
        for key in ("axis1", "axis2"):
            axis = item.get(key)
            if axis:
                lines.append(
                    f"  {key} = {axis['param_name']} "
                    f"[{axis['start']}, {axis['stop']}] steps={axis['steps']}"
                )
        if item.get("gamma_star") is not None:
            lines.append(f"  gamma_star = {item['gamma_star']}")
        for note in item.get("notes", ()):
            lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "serve":
        import uvicorn

        uvicorn.run("dressedcavity.service.app:app", host=args.host, port=args.port)
        return 0
    client = ServiceClient(args.server)
    if args.command == "steady":
        resp = client.post(
            "/steady",
            {
                "params": _gather_params(args),
                "solver": args.solver,
                "regime_factor": args.regime_factor,
            },
        )
        if resp.status_code != 200:
            return _fail(resp)
        data = resp.json()
        if data.get("warning"):
            print(f"warning: {data['warning']}", file=sys.stderr)
        _write_out(_render_steady(data), args.out)
        return 0
    if args.command == "min":
        resp = client.post(
            "/min", {"params": _gather_params(args), "method": args.method}
        )
        if resp.status_code != 200:
            return _fail(resp)
        _write_out(_render_min(resp.json()), args.out)
        return 0
    if args.command == "sweep":
        payload: dict = {
            "params": _gather_params(args),
            "regime_factor": args.regime_factor,
        }
        if args.preset is not None:
            payload["preset"] = args.preset
        if args.axis1 is not None:
            payload["axis1"] = _parse_axis(args.axis1)
        if args.axis2 is not None:
            payload["axis2"] = _parse_axis(args.axis2)
        if args.solver is not None:
            payload["solver"] = args.solver
        resp = client.post("/sweep", payload)
        if resp.status_code != 200:
            return _fail(resp)
        _write_out(resp.text, args.out)
        return 0
    if args.command == "oracle-check":
        payload = {
            "params": _gather_params(args),
            "mode": args.mode,
            "target_tail": args.target_tail,
        }
        if args.t_final is not None:
            payload["t_final"] = args.t_final
        if args.ratios is not None:
            payload["ratios"] = _parse_ratios(args.ratios)
        resp = client.post("/oracle-check", payload)
        if resp.status_code != 200:
            return _fail(resp)
        _write_out(resp.text, args.out)
        return 0
    if args.command == "preset":
        resp = client.get("/presets")
        if resp.status_code != 200:
            return _fail(resp)
        _write_out(_render_presets(resp.json()), args.out)
        return 0
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except UsageError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
