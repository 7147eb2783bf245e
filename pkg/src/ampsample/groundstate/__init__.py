from .hamiltonian import (
    DegenerateGroundStateError,
    GroundState,
    HamiltonianError,
    SparseHamiltonian,
    exact_ground_state,
    load_hamiltonian,
    parse_hamiltonian,
    sensitivity,
    stoquastic_check_and_bound,
)
from .magic import (
    MagicRatioError,
    MagicRatioHamiltonian,
    MagicRatioOracle,
    load_magic,
    magic_ratio,
    parse_magic,
    random_magic_instance,
    verify_magic_ratio_structure,
)
from .mcmc import (
    ChainConfig,
    ChainError,
    ExactGroundStateOracle,
    chain_matrix,
    gap_bound_check,
    metropolis_step,
    mixing_time,
    propose,
    run_chain,
    run_chains,
    runtime_estimate,
    tv_decay_check,
)
