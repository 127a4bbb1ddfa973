"""Entropically secure short-key encryption at desk scale.

Exact-rational source coding, randomized padding, small-bias XOR pads over
GF(2^s), and an exhaustive statistical-distance verifier.
"""

from .bias import BiasKey, FieldParams, family_bias_exact, field_params, required_s
from .cipher import (
    CipherParams,
    CiphertextEnvelope,
    KeyHandle,
    decrypt,
    decrypt_ds,
    derive_params,
    encrypt,
    encrypt_ds,
    keygen,
    load_key,
    save_key,
)
from .coding import (
    Codebook,
    build_shannon,
    build_trimmed,
    decode_prefix,
    encode,
    is_prefix_free,
    kraft_sum,
    shannon_length,
    trim_tree,
)
from .dist import (
    Distribution,
    make_distribution,
    min_entropy_exceeds,
    min_entropy_floor,
    parse_distribution,
    product_extend,
)
from .kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .padding import Block, induced_distribution, induced_min_entropy, randomize, strip
from .verify import (
    ExactOutputDistribution,
    VerifyReport,
    chain_distances,
    check_indistinguishability,
    data_processing_check,
    exact_output_distribution,
    monte_carlo_sd,
    pushforward_g_prime,
    statistical_distance,
)

__version__ = "0.1.0"
