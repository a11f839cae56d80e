"""Geometric quantum discord of reduced multiqubit cat states."""

from .discord import (
    ClassicalStateSpec,
    ClosestClassical,
    DiscordReport,
    brute_force_discord,
    build_K,
    classical_state_matrix,
    closed_form_eigs,
    closest_classical_state,
    discord_report,
    geometric_discord,
    hs_distance_sq,
    optimal_classical_params,
)
from .encoding import EncodedState, RTensor, discord_encoded, encode, l_values, r_tensor, scheme_equivalence_report
from .errors import CatDiscordError, DimensionError, InvariantError, SingularNormalization, SizeLimit, UnsupportedK
from .fano_bloch import (
    CorrelationTensor,
    block_decompose,
    full_tensor,
    reconstruct_density,
    recursive_tensor,
    tensor_element,
)
from .states import CatSpec, Parity, cat_state_vector, partial_trace, reduced_density

__version__ = "0.1.0"
