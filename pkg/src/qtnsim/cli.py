"""Command-line entry point.

Subcommands: simulate (run a circuit file), paths (cost analysis without
numeric contraction), bench (training tasks to CSV), serve (HTTP service).
Exit codes: 2 for input/schema problems, 3 for engine errors.
"""

from __future__ import annotations

import json
import socket
import sys
import time

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from . import circuit_json
from .compiler import Mode, TnOptions, compile, evaluate_with_stats
from .errors import (HamiltonianParseError, ParamLengthMismatch,
                     QtnError, SchemaViolation, UnknownTask)
from .statevector import MAX_QUBITS
from .vqa.train import TASKS, train

INPUT_ERRORS = (SchemaViolation, UnknownTask, HamiltonianParseError,
                ParamLengthMismatch, json.JSONDecodeError,
                FileNotFoundError, tomllib.TOMLDecodeError)

# config keys mirror the user-facing option dictionaries
_SLICING_KEYS = ("target_size", "repeats", "target_num_slices",
                 "contract_parallel")
_HYPER_KEYS = ("max_time", "max_repeats", "search_parallel")


def _fail(exc: Exception) -> None:
    code = 2 if isinstance(exc, INPUT_ERRORS) else 3
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def tn_options_from(config: dict, seed: int | None) -> TnOptions:
    hyper = config.get("hyper_opts", {})
    slicing = hyper.get("slicing_opts", config.get("slicing_opts", {}))
    kwargs = {k: slicing[k] for k in _SLICING_KEYS if k in slicing}
    kwargs.update({k: hyper[k] for k in _HYPER_KEYS if k in hyper})
    if kwargs.get("target_num_slices") in (0, None):
        kwargs.pop("target_num_slices", None)
    if "tn_simplify" in config:
        kwargs["tn_simplify"] = config["tn_simplify"]
    kwargs["seed"] = seed if seed is not None else config.get("seed", 0)
    return TnOptions(**kwargs)


def _parse_params(text: str | None):
    if not text:
        return None
    return [float(x) for x in text.replace(",", " ").split()]


def _format_value(result: dict) -> str:
    if result["kind"] == "probs":
        return " ".join(f"{p:g}" for p in result["value"])
    if result["kind"] == "expval":
        return f"{result['value']:g}"
    real, imag = result["value"]["real"], result["value"]["imag"]
    return " ".join(f"{r:g}{i:+g}j" for r, i in zip(real, imag))


def _result_payloads(circuit, values) -> list[dict]:
    return [circuit_json.result_payload(m, v)
            for m, v in zip(circuit.measurements, values)]


@click.group()
def main() -> None:
    """Quantum circuit simulation with statevector and tensor-network
    engines."""


@main.command()
@click.argument("circuit_file", type=click.Path())
@click.option("--params", help="parameter values, comma or space separated")
@click.option("--mode", type=click.Choice([m.value for m in Mode]),
              default=None, help="execution engine (default statevector)")
@click.option("--config", "config_path", type=click.Path(),
              help="TOML run configuration")
@click.option("--seed", type=int, default=None, help="path-search seed")
@click.option("--output", type=click.Path(), help="write a JSON report")
def simulate(circuit_file, params, mode, config_path, seed, output):
    """Run a circuit JSON file and print its measurement values."""
    try:
        config = load_config(config_path)
        mode = Mode(mode or config.get("mode", "statevector"))
        opts = tn_options_from(config, seed)
        with open(circuit_file) as fh:
            circuit = circuit_json.parse(json.load(fh))
        start = time.perf_counter()
        cc = compile(circuit, mode=mode, tn_options=opts)
        values, stats = evaluate_with_stats(cc, _parse_params(params))
        wall_ms = (time.perf_counter() - start) * 1e3
    except Exception as exc:
        _fail(exc)
    results = _result_payloads(circuit, values)
    for result in results:
        click.echo(_format_value(result))
    if output:
        report = {"results": results, "mode": mode.value,
                  "seed": opts.seed, "timing": {"wall_ms": wall_ms}}
        if mode is Mode.TENSOR_NETWORK:
            report["path_stats"] = [
                {"total_flops": program.plan.sliced_flops,
                 "n_slices": s["n_slices"],
                 "peak_elements": s["peak_elements"]}
                for program, s in zip(cc.programs, stats)]
        with open(output, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")


@main.command()
@click.argument("circuit_file", type=click.Path())
@click.option("--config", "config_path", type=click.Path(),
              help="TOML run configuration")
@click.option("--seed", type=int, default=None, help="path-search seed")
@click.option("--output", type=click.Path(), help="write a JSON report")
def paths(circuit_file, config_path, seed, output):
    """Estimate both engines' costs for a circuit and recommend one.

    No numeric contraction happens; the tensor-network numbers come from
    path search and slicing alone.
    """
    try:
        config = load_config(config_path)
        opts = tn_options_from(config, seed)
        with open(circuit_file) as fh:
            circuit = circuit_json.parse(json.load(fh))
        cc = compile(circuit, mode=Mode.TENSOR_NETWORK, tn_options=opts)
    except Exception as exc:
        _fail(exc)
    n = circuit.n_qubits
    # dense gate application: (2k mults + 2k-1 adds) per amplitude per gate
    sv_flops = sum(2 ** n * (2 ** (2 * len(g.qubits)) * 2 - 1)
                   for g in circuit.gates)
    sv = {"amplitudes": 2 ** n, "gate_count": len(circuit.gates),
          "flops": sv_flops, "fits": n <= MAX_QUBITS}
    programs = []
    for program in cc.programs:
        plan = program.plan
        programs.append({
            "total_flops": plan.sliced_flops,
            "per_slice_flops": plan.per_slice_flops,
            "n_slices": plan.n_slices,
            "overhead_ratio": plan.overhead_ratio,
            "width": int(np.log2(max(plan.tree.max_size, 1))),
            "peak_elements": plan.tree.max_size,
        })
    tn = {"programs": programs,
          "total_flops": sum(p["total_flops"] for p in programs),
          "max_width": max(p["width"] for p in programs)}
    recommendation = "statevector" if sv["fits"] else "tensor-network"
    report = {"n_qubits": n, "statevector": sv, "tensor_network": tn,
              "recommendation": recommendation, "seed": opts.seed}
    click.echo(json.dumps(report, indent=2))
    if output:
        with open(output, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")


@main.command()
@click.argument("task", type=str)
@click.option("--config", "config_path", type=click.Path(),
              help="TOML run configuration")
@click.option("--n-qubits", type=int, default=None)
@click.option("--depth", type=int, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--hamiltonian", type=click.Path(),
              help="Pauli-sum file (vqe)")
@click.option("--output", type=click.Path(), help="CSV destination")
def bench(task, config_path, n_qubits, depth, epochs, seed, hamiltonian,
          output):
    """Train a benchmark task (mqr, vqe, mbl) and emit its CSV trace."""
    try:
        if task.lower() not in TASKS:
            raise UnknownTask(f"unknown task {task!r}; expected one of {TASKS}")
        config = load_config(config_path)
        mode = Mode(config.get("mode", "statevector"))
        opts = tn_options_from(config, None)
        trace = train(task, n_qubits=n_qubits, depth=depth, epochs=epochs,
                      seed=seed, mode=mode, tn_options=opts,
                      hamiltonian=hamiltonian,
                      grad_method=config.get("grad_method", "adjoint"))
    except Exception as exc:
        _fail(exc)
    csv = trace.to_csv()
    notes = {k: v for k, v in trace.extras.items()
             if isinstance(v, (int, float)) and not isinstance(v, bool)}
    csv += "".join(f"# {k}={v:.12g}\n" for k, v in sorted(notes.items()))
    if output:
        with open(output, "w") as fh:
            fh.write(csv)
    else:
        click.echo(csv, nl=False)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Start the HTTP service used by the browser composer."""
    import uvicorn

    from .service import create_app
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError:
        click.echo(f"error: port {port} on {host} is busy (409)", err=True)
        sys.exit(3)
    finally:
        probe.close()
    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
