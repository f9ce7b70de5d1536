"""Exact discrete uniform samples from a coin of unknown bias."""

from .numtheory import PrimeFactorization, cost_c, factorize, is_prime, sublinearity_fraction
from .sampler import (
    RoundCapExceeded,
    RoundOutcome,
    SampleReport,
    SamplerConfig,
    SamplingError,
    SourceExhaustedError,
    compose_digits,
    decompose_value,
    sample_prime,
    sample_uniform,
    sample_von_neumann,
)
from .source import (
    BiasParams,
    BitSource,
    CountingSource,
    Flip,
    SourceExhausted,
    file_source,
    simulated_source,
    with_counter,
    write_bit_file,
)

__version__ = "0.1.0"
