"""Command-line front end.

By default each command runs the analysis in-process; ``--server URL`` turns
the CLI into a thin client that POSTs the same request to a running service
and renders the response identically.  Exit codes: 0 success, 2 input error
(parse failures, bad dimensions, invalid matrices), 3 internal consistency
failure (the two decomposition routes disagreed).

Operators for ``witness`` may be given as bra-ket text (the projector is
taken) or as ``@path/to/matrix.json`` in the documented matrix JSON format.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from pydantic import BaseModel, ValidationError

from .errors import ConsistencyError, InputError, KetParseError
from .models import (
    AnalysisReport,
    AnalyzeRequest,
    MatrixPayload,
    TeleportReport,
    TeleportRequest,
    WitnessReportModel,
    WitnessRequest,
)
from .reports import build_analysis, build_teleport, build_witness_report

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3

SCHEMA_MODELS: dict[str, type[BaseModel]] = {
    "analysis_report": AnalysisReport,
    "teleport_report": TeleportReport,
    "witness_report": WitnessReportModel,
}


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_list(values) -> str:
    return ", ".join(_fmt(v) for v in values)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qschmidt",
        description="Schmidt decomposition, teleportation and witness tooling "
        "for small qubit systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
        p.add_argument("--server", metavar="URL", help="POST to a running service instead of computing locally")

    analyze = sub.add_parser("analyze", help="Schmidt-decompose a pure state by both methods")
    analyze.add_argument("--state", required=True, help="bra-ket expression")
    analyze.add_argument("--partition", type=int, default=1, metavar="K",
                         help="qubits in subsystem A (default 1)")
    analyze.add_argument("--threshold", type=float, default=None,
                         help="coefficient cutoff (default: SCHMIDT_THRESHOLD env, else 1e-10)")
    add_output_flags(analyze)

    teleport = sub.add_parser("teleport", help="run the teleportation protocol")
    teleport.add_argument("--state", required=True, help="bra-ket expression, one qubit")
    teleport.add_argument("--seed", type=int, default=0)
    teleport.add_argument("--shots", type=int, default=1)
    add_output_flags(teleport)

    witness = sub.add_parser("witness", help="build W = mu1*I - X and evaluate tr[W rho]")
    witness.add_argument("--target", required=True,
                         help="X as bra-ket text (projector taken) or @matrix.json")
    witness.add_argument("--test", required=True,
                         help="rho as bra-ket text (projector taken) or @matrix.json")
    witness.add_argument("--partition", type=int, default=1, metavar="K")
    witness.add_argument("--threshold", type=float, default=None)
    add_output_flags(witness)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    schemas = sub.add_parser("schemas", help="write the report JSON schemas")
    schemas.add_argument("--output", default="docs/schemas", metavar="DIR")

    return parser


# ---------------------------------------------------------------------------
# operator loading


def _operator_argument(raw: str):
    if not raw.startswith("@"):
        return raw
    path = Path(raw[1:])
    try:
        data = json.loads(path.read_text())
    except OSError as err:
        raise InputError(f"cannot read matrix file {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"matrix file {path} is not valid JSON: {err}") from None
    try:
        return MatrixPayload.model_validate(data)
    except ValidationError as err:
        raise InputError(f"matrix file {path}: {err.errors()[0]['msg']}") from None


# ---------------------------------------------------------------------------
# text renderers


def _render_analysis(report: AnalysisReport) -> str:
    lines = [
        f"state: {report.input}",
        f"qubits: {report.qubits}  partition: {report.partition} | "
        f"{report.qubits - report.partition}",
        f"threshold: {_fmt(report.threshold)}",
    ]
    if report.drifted:
        lines.append(f"note: input was renormalized (norm drift {_fmt(report.norm_drift)})")
    lines += [
        f"verdict: {report.verdict}",
        f"schmidt number: {report.schmidt_number}",
        f"coefficients: {_fmt_list(report.coefficients)}",
    ]
    for method in report.methods:
        lines.append(
            f"method {method.method}: coefficients {_fmt_list(method.coefficients)}; "
            f"residual {_fmt(method.residual)}"
        )
    lines.append(f"max coefficient deviation: {_fmt(report.max_deviation)}")
    lines.append(f"canonical: {report.canonical_form}")
    if report.separable_factors is not None:
        a, b = report.separable_factors
        lines.append(f"factors: A = {a}; B = {b}")
    return "\n".join(lines)


def _render_teleport(report: TeleportReport) -> str:
    lines = [
        f"input: {report.input_state.text}",
        f"seed: {report.seed}  shots: {report.shots}",
        f"joint: {report.joint_state.text}",
        f"probabilities: {_fmt_list(report.outcome_probabilities)}",
    ]
    for k, shot in enumerate(report.results):
        lines.append(
            f"shot {k}: {shot.outcome} (bits {shot.classical_bits})  "
            f"correction {shot.correction}  fidelity {_fmt(shot.fidelity)}  "
            f"output {shot.output_state.text}"
        )
    if report.shots > 1:
        lines.append("histogram: " + ", ".join(
            f"{name}={count}" for name, count in report.histogram.items()
        ))
        lines.append(f"mean fidelity: {_fmt(report.mean_fidelity)}")
    return "\n".join(lines)


def _render_witness(report: WitnessReportModel) -> str:
    target = report.target if report.target is not None else "(matrix)"
    return "\n".join([
        f"target: {target}",
        f"dims: {report.dim_a} x {report.dim_b}",
        f"mu1: {_fmt(report.mu1)}",
        f"coefficients: {_fmt_list(report.coefficients)}",
        f"expectation: {_fmt(report.expectation)}",
        f"verdict: {report.verdict}",
    ])


_RENDERERS: dict[str, Callable] = {
    "analyze": _render_analysis,
    "teleport": _render_teleport,
    "witness": _render_witness,
}

_REPORT_TYPES: dict[str, type[BaseModel]] = {
    "analyze": AnalysisReport,
    "teleport": TeleportReport,
    "witness": WitnessReportModel,
}


# ---------------------------------------------------------------------------
# command plumbing


def _post_to_server(server: str, endpoint: str, request: BaseModel) -> BaseModel:
    import httpx

    url = server.rstrip("/") + "/" + endpoint
    try:
        response = httpx.post(url, json=request.model_dump(mode="json"), timeout=60.0)
    except httpx.HTTPError as err:
        raise InputError(f"cannot reach server {server}: {err}") from None
    if response.status_code == 200:
        return _REPORT_TYPES[endpoint].model_validate(response.json())
    try:
        body = response.json()
    except json.JSONDecodeError:
        raise InputError(f"server error {response.status_code}: {response.text}") from None
    message = body.get("error") or json.dumps(body)
    if body.get("kind") == "consistency":
        raise ConsistencyError(message)
    raise InputError(message, position=body.get("position"))


def _emit(report: BaseModel, command: str, fmt: str, output: str | None) -> None:
    if fmt == "json":
        text = report.model_dump_json(indent=2)
    else:
        text = _RENDERERS[command](report)
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def _run_report_command(command: str, request: BaseModel, args) -> int:
    builders: dict[str, Callable] = {
        "analyze": build_analysis,
        "teleport": build_teleport,
        "witness": build_witness_report,
    }
    if args.server:
        report = _post_to_server(args.server, command, request)
    else:
        report = builders[command](request)
    _emit(report, command, args.format, args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    request = AnalyzeRequest(
        state=args.state, partition=args.partition, threshold=args.threshold
    )
    return _run_report_command("analyze", request, args)


def cmd_teleport(args) -> int:
    if args.shots < 1:
        raise InputError(f"shots must be positive, got {args.shots}")
    request = TeleportRequest(state=args.state, seed=args.seed, shots=args.shots)
    return _run_report_command("teleport", request, args)


def cmd_witness(args) -> int:
    request = WitnessRequest(
        target=_operator_argument(args.target),
        test=_operator_argument(args.test),
        partition=args.partition,
        threshold=args.threshold,
    )
    return _run_report_command("witness", request, args)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def cmd_schemas(args) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for name, model in SCHEMA_MODELS.items():
        schema = model.model_json_schema()
        path = out / f"{name}.schema.json"
        path.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
    return EXIT_OK


_COMMANDS: dict[str, Callable] = {
    "analyze": cmd_analyze,
    "teleport": cmd_teleport,
    "witness": cmd_witness,
    "serve": cmd_serve,
    "schemas": cmd_schemas,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except KetParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    raise SystemExit(main())
