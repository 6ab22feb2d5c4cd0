"""Pauli-sum Hamiltonians: text ingestion, dense form, exact ground energy.

File format: one term per line, "coefficient PAULISTRING" (e.g.
"-0.4804 ZIII").  Blank lines and lines starting with '#' are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from ..circuit import Measurement
from ..errors import HamiltonianParseError
from ..gates import pauli_matrix


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    ops: str


def parse_pauli_sum(text: str) -> list[PauliTerm]:
    terms: list[PauliTerm] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianParseError(
                f"line {lineno}: expected 'coefficient PAULISTRING', "
                f"got {raw!r}")
        coeff_text, ops = parts
        try:
            coeff = float(coeff_text)
        except ValueError:
            raise HamiltonianParseError(
                f"line {lineno}: bad coefficient {coeff_text!r}") from None
        if not ops or set(ops) - set("IXYZ"):
            raise HamiltonianParseError(
                f"line {lineno}: Pauli string must be non-empty IXYZ, "
                f"got {ops!r}")
        terms.append(PauliTerm(coeff, ops))
    if not terms:
        raise HamiltonianParseError("no terms found")
    lengths = {len(t.ops) for t in terms}
    if len(lengths) > 1:
        raise HamiltonianParseError(
            f"inconsistent Pauli string lengths: {sorted(lengths)}")
    return terms


def load_pauli_sum(path) -> list[PauliTerm]:
    return parse_pauli_sum(Path(path).read_text())


def n_qubits_of(terms: list[PauliTerm]) -> int:
    return len(terms[0].ops)


def to_measurements(terms: list[PauliTerm]) -> list[Measurement]:
    return [Measurement.expval(t.ops, coefficient=t.coefficient)
            for t in terms]


def dense_matrix(terms: list[PauliTerm]) -> np.ndarray:
    n = n_qubits_of(terms)
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for t in terms:
        h += t.coefficient * reduce(np.kron, (pauli_matrix(c) for c in t.ops))
    return h


def ground_energy(terms: list[PauliTerm]) -> float:
    return float(np.linalg.eigvalsh(dense_matrix(terms))[0])
