from .templates import TemplateKind, TemplateSpec, expand_template, \
    template_param_count
from .encodings import EncodingKind, EncodingSpec, EncodedPrefix, encode
from .optimizers import GradientDescent, Adam
from .hamiltonian import (PauliTerm, parse_pauli_sum, load_pauli_sum,
                          n_qubits_of, to_measurements, dense_matrix,
                          ground_energy)
from .mbl import (MBLTaskConfig, MBLSample, chain_hamiltonian,
                  evolution_unitary, neel_gates, generate_mbl_dataset,
                  classifier_gates, imbalance)
from .train import TrainingTrace, train, TASKS

__all__ = [
    "TemplateKind", "TemplateSpec", "expand_template", "template_param_count",
    "EncodingKind", "EncodingSpec", "EncodedPrefix", "encode",
    "GradientDescent", "Adam",
    "PauliTerm", "parse_pauli_sum", "load_pauli_sum", "n_qubits_of",
    "to_measurements", "dense_matrix", "ground_energy",
    "MBLTaskConfig", "MBLSample", "chain_hamiltonian", "evolution_unitary",
    "neel_gates", "generate_mbl_dataset", "classifier_gates", "imbalance",
    "TrainingTrace", "train", "TASKS",
]
