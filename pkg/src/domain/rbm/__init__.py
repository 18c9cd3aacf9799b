from .model import (
    softplus, log_unnormalized_probability, partition_function, amplitude,
    fidelity_exact, log_likelihood, empirical_kl,
)
from .sampling import hidden_probabilities, visible_probabilities, gibbs_step, gibbs_chain, sample_rbm
from .training import RbmGradient, cd_gradient, exact_gradient, train_tomography
from .scaling import hidden_unit_scaling_study

__all__ = [
    'softplus', 'log_unnormalized_probability', 'partition_function', 'amplitude',
    'fidelity_exact', 'log_likelihood', 'empirical_kl',
    'hidden_probabilities', 'visible_probabilities', 'gibbs_step', 'gibbs_chain', 'sample_rbm',
    'RbmGradient', 'cd_gradient', 'exact_gradient', 'train_tomography',
    'hidden_unit_scaling_study',
]
