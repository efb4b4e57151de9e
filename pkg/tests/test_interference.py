import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nwitness.circuitry import (
    CircuitConfig,
    build_beam_splitter,
    build_witness_circuit,
    canonical_input,
    reference_input,
)
from nwitness.errors import LabelError, ParameterError, ParseError, SizeLimitError, ValidationError
from nwitness.interference import (
    OutputDistribution,
    PhotonMixture,
    bunching_probability,
    canonical_label,
    conditional_bs_bunching,
    distinguishable_count,
    enumerate_extremal_labels,
    extremal_distribution,
    hom_bunching_from_overlap,
    mixture_distribution,
    parse_mixture,
)
from nwitness.witness import ideal_threshold

from oracles import fock_oracle, naive_bell, total_variation

IDEAL3 = build_witness_circuit(CircuitConfig(3))
IN3 = canonical_input(3)


def ideal(n):
    return build_witness_circuit(CircuitConfig(n)), canonical_input(n)


def test_label_enumeration():
    assert enumerate_extremal_labels(2) == ["AA", "AB"]
    assert enumerate_extremal_labels(3) == ["AAA", "AAB", "ABA", "ABB", "ABC"]
    labels = enumerate_extremal_labels(4)
    assert labels == sorted(labels)
    assert len(labels) == naive_bell(4) == 15
    assert all(canonical_label(lab) == lab for lab in labels)
    with pytest.raises(SizeLimitError):
        enumerate_extremal_labels(0)
    with pytest.raises(SizeLimitError):
        enumerate_extremal_labels(11)


@pytest.mark.parametrize("n", range(1, 7))
def test_label_count_is_bell(n):
    assert len(enumerate_extremal_labels(n)) == naive_bell(n)


def test_canonical_label():
    assert canonical_label("BAA") == "ABB"
    assert canonical_label("ZYZ") == "ABA"
    with pytest.raises(LabelError):
        canonical_label("")


@pytest.mark.parametrize("label, expected", [("AAA", 1.0), ("ABC", 0.5), ("AAB", 0.75)])
def test_extremal_bunching_examples(label, expected):
    dist = extremal_distribution(IDEAL3, IN3, label)
    assert bunching_probability(dist) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bunching_formula_for_all_labels(n):
    U, inputs = ideal(n)
    for label in enumerate_extremal_labels(n):
        p_b = bunching_probability(extremal_distribution(U, inputs, label))
        m = distinguishable_count(label)
        assert abs(p_b - (1 - m / (2 * (n - 1)))) <= 1e-10, label


@pytest.mark.parametrize("label", enumerate_extremal_labels(3))
def test_distribution_matches_fock_oracle_ideal(label):
    dist = extremal_distribution(IDEAL3, IN3, label)
    assert dist.total() == pytest.approx(1.0, abs=1e-10)
    assert total_variation(dist.probabilities, fock_oracle(IDEAL3, IN3, label)) <= 1e-10


def test_distribution_matches_fock_oracle_on_random_six_mode_unitaries(rng):
    for _ in range(5):
        Q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        inputs = tuple(rng.choice(6, size=3, replace=False))
        for label in enumerate_extremal_labels(3):
            dist = extremal_distribution(Q, inputs, label)
            assert total_variation(dist.probabilities, fock_oracle(Q, inputs, label)) <= 1e-10


def test_distribution_matches_fock_oracle_two_photons(rng):
    U = build_beam_splitter(0.3)
    for label in ("AA", "AB"):
        dist = extremal_distribution(U, (0, 1), label)
        assert total_variation(dist.probabilities, fock_oracle(U, (0, 1), label)) <= 1e-10


def test_relabelling_changes_nothing():
    cfg = CircuitConfig(3, build_beam_splitter(0.49), [0.45, 0.45])
    U = build_witness_circuit(cfg)
    for a, b in [("AAB", "BBA"), ("ABA", "CAC"), ("ABC", "CBA")]:
        da = extremal_distribution(U, IN3, a)
        db = extremal_distribution(U, IN3, b)
        assert da.probabilities == db.probabilities


@given(st.floats(0.0, 1.0))
def test_two_photon_bunching_matches_closed_form(R):
    U = build_witness_circuit(CircuitConfig(2, layer_b_reflectivities=[R]))
    aa = bunching_probability(extremal_distribution(U, (0, 1), "AA"))
    ab = bunching_probability(extremal_distribution(U, (0, 1), "AB"))
    assert aa == pytest.approx(4 * R * (1 - R), abs=1e-12)
    assert ab == pytest.approx(2 * R * (1 - R), abs=1e-12)


def test_mixture_examples():
    point = mixture_distribution(IDEAL3, IN3, PhotonMixture({"AAA": 1.0}))
    assert point.probabilities == extremal_distribution(IDEAL3, IN3, "AAA").probabilities
    half = mixture_distribution(IDEAL3, IN3, PhotonMixture({"AAA": 0.5, "ABC": 0.5}))
    assert bunching_probability(half) == pytest.approx(0.75, abs=1e-12)
    for c in (0.0, 0.3, 0.9):
        mix = PhotonMixture({"AAA": c, "ABA": 1 - c})
        p_b = bunching_probability(mixture_distribution(IDEAL3, IN3, mix))
        assert p_b == pytest.approx(c + (1 - c) * ideal_threshold(3), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=5, max_size=5).filter(lambda w: sum(w) > 0.1))
def test_mixture_is_linear(raw):
    total = math.fsum(raw)
    weights = dict(zip(enumerate_extremal_labels(3), (w / total for w in raw)))
    # renormalise exactly so the validator accepts it
    labels = list(weights)
    weights[labels[-1]] = 1.0 - math.fsum(weights[k] for k in labels[:-1])
    if weights[labels[-1]] < 0:
        weights[labels[-1]] = 0.0
        return
    mix = PhotonMixture(weights)
    p_mix = bunching_probability(mixture_distribution(IDEAL3, IN3, mix))
    p_sum = math.fsum(
        w * bunching_probability(extremal_distribution(IDEAL3, IN3, lab)) for lab, w in mix.weights.items()
    )
    assert abs(p_mix - p_sum) <= 1e-12


def test_mixture_validation():
    with pytest.raises(ValidationError):
        PhotonMixture({"AAA": 0.5, "ABC": 0.4})
    with pytest.raises(ValidationError):
        PhotonMixture({"AAA": 1.2, "ABC": -0.2})
    with pytest.raises(ValidationError):
        PhotonMixture({"AAA": 0.5, "AB": 0.5})
    merged = PhotonMixture({"AAB": 0.25, "BBA": 0.25, "AAA": 0.5})
    assert merged.weights == {"AAA": 0.5, "AAB": 0.5}
    assert merged.c1 == 0.5


def test_bunching_probability_examples():
    hom = OutputDistribution({(2, 0): 0.5, (0, 2): 0.5, (1, 1): 0.0}, 2, 2)
    assert bunching_probability(hom) == 1.0
    flat = OutputDistribution({(1, 1, 0, 0): 0.25, (1, 0, 1, 0): 0.25, (0, 1, 0, 1): 0.25, (0, 0, 1, 1): 0.25}, 2, 4)
    assert bunching_probability(flat) == 0.0


@pytest.mark.parametrize(
    "label, k, expected",
    [("AAA", 1, 1.0), ("ABA", 1, 0.5), ("AAB", 2, 0.5), ("AAB", 1, 1.0), ("ABA", 2, 1.0)],
)
def test_conditional_bs_bunching(label, k, expected):
    dist = extremal_distribution(IDEAL3, IN3, label)
    assert conditional_bs_bunching(dist, k) == pytest.approx(expected, abs=1e-12)


def test_conditional_bs_bunching_errors_and_undefined():
    dist = extremal_distribution(IDEAL3, IN3, "AAA")
    with pytest.raises(ParameterError):
        conditional_bs_bunching(dist, 3)
    with pytest.raises(ParameterError):
        conditional_bs_bunching(dist, 0)
    # BS1 receives a single photon in every event: nothing to condition on
    idle = OutputDistribution({(1, 0, 0, 2): 0.5, (0, 0, 1, 2): 0.5}, 3, 4)
    assert conditional_bs_bunching(idle, 1) is None
    assert conditional_bs_bunching(idle, 2) == 1.0


def test_hom_from_overlap():
    assert hom_bunching_from_overlap(1) == 1
    assert hom_bunching_from_overlap(0) == 0.5
    assert hom_bunching_from_overlap(0.56) == pytest.approx(0.78)
    with pytest.raises(ParameterError):
        hom_bunching_from_overlap(1.5)


def test_other_reference_photon():
    # photon 2 is the odd one out; with photon 1 as reference it sits on BS1
    U = build_witness_circuit(CircuitConfig(3))
    inputs = reference_input(3, 1)
    dist = extremal_distribution(U, inputs, "AAB")
    assert bunching_probability(dist) == pytest.approx(0.75, abs=1e-12)
    dist = extremal_distribution(U, reference_input(3, 2), "AAB")
    assert bunching_probability(dist) == pytest.approx(0.5, abs=1e-12)


def test_label_photon_mismatch():
    with pytest.raises(LabelError):
        extremal_distribution(IDEAL3, IN3, "AA")
    with pytest.raises(ValidationError):
        extremal_distribution(IDEAL3, (0, 0, 1), "AAA")


def test_table_round_trip():
    dist = extremal_distribution(IDEAL3, IN3, "ABA")
    text = dist.to_table()
    first = text.splitlines()[0]
    assert first.startswith("0,0,0,3\t")
    again = OutputDistribution.from_table(text)
    assert again.probabilities == dist.probabilities


def test_parse_mixture():
    mix = parse_mixture("AAA = 0.5\nABC = 0.5\n")
    assert mix.weights == {"AAA": 0.5, "ABC": 0.5}
    with pytest.raises(ParseError) as info:
        parse_mixture("AAA = half\n")
    assert info.value.line == 1
    with pytest.raises(ParseError):
        parse_mixture("AAA = 0.3\n")
