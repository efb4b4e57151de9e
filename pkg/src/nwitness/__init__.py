"""Witness of genuine n-photon indistinguishability.

Circuit construction, exact bunching statistics via matrix permanents,
bounds on the all-identical weight ``c1``, the set-intersection model and
analysis of experimental count tables.
"""

from .circuitry import (
    CircuitConfig,
    build_beam_splitter,
    build_qft,
    build_witness_circuit,
    canonical_input,
    check_unitary,
    load_config,
    reference_input,
)
from .errors import WitnessError
from .expdata import EventTable, WitnessReport, analyze, load_counts, multipair_corrected_pb
from .interference import (
    OutputDistribution,
    PhotonMixture,
    bunching_probability,
    conditional_bs_bunching,
    enumerate_extremal_labels,
    extremal_distribution,
    hom_bunching_from_overlap,
    mixture_distribution,
)
from .permanent import BACKEND, output_probability, permanent_naive, permanent_ryser
from .witness import (
    bs_pair_bunching,
    c1_bounds,
    extremal_bunching,
    ideal_threshold,
    nonideal_threshold,
    tighter_c1_upper,
    verdict,
)

__version__ = "0.1.0"
