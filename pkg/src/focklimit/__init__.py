"""Numerical lab for the scaling limit of a cutoff QED Hamiltonian on truncated Fock spaces."""

from .assembly import QEDModel
from .config import ConfigError, ModelConfig, load_config
from .lab import (
    ConvergenceTable,
    SuiteReport,
    bound_suite,
    convergence_sweep,
    dressed_split,
    dressing_unitary,
    evolve,
    identity_suite,
    resolvent_apply,
)

__all__ = [
    "QEDModel",
    "ConfigError",
    "ModelConfig",
    "load_config",
    "ConvergenceTable",
    "SuiteReport",
    "bound_suite",
    "convergence_sweep",
    "dressed_split",
    "dressing_unitary",
    "evolve",
    "identity_suite",
    "resolvent_apply",
]
