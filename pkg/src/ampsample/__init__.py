"""Sampling measurement outcomes from amplitude oracles."""

from .backends import build_oracle
from .circuit import Circuit, Gate, load_circuit, parse_circuit
from .samplers import gate_by_gate_sample, induced_sampler_distribution, qubit_by_qubit_sample, reference_distribution

__version__ = "0.1.0"
