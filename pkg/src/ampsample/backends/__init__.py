from .base import AmplitudeOracle, OracleError, UnsupportedError, marginal_probability
from .chform import CHForm, NotCliffordError, ch_form, clifford_amplitude
from .noisy import NoisePlan, NoisyOracle, wrap_noisy_oracle
from .pathsum import PathSumOracle, build_pathsum_oracle
from .stabdecomp import StabDecompOracle, StabilizerTerm, build_stabdecomp_oracle, stabilizer_decompose
from .statevector import StatevectorOracle, build_statevector_oracle, simulate

BACKENDS = {
    "statevector": build_statevector_oracle,
    "pathsum": build_pathsum_oracle,
    "stabdecomp": build_stabdecomp_oracle,
}


def build_oracle(name: str, circuit):
    try:
        factory = BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(BACKENDS)}") from None
    return factory(circuit)
