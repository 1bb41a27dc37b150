import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dunkl_analyzer.errors import InvalidWeightDirectionError, SequenceConstructionError
from dunkl_analyzer.eft.lattice import (
    AvoidanceSequence,
    build_sequence,
    make_lattice,
    perturb_lattice,
    verify_sequence,
)

entry = st.one_of(st.just(0.0), st.floats(1.0, 3.0), st.floats(-3.0, -1.0))


@st.composite
def directions(draw):
    d = draw(st.integers(1, 3))
    m = draw(st.integers(1, 3))
    vectors = []
    for _ in range(m):
        b = draw(st.lists(entry, min_size=d, max_size=d))
        if not any(b):
            b[-1] = 1.0
        vectors.append(b)
    return d, vectors


@settings(max_examples=40, deadline=None)
@given(directions())
def test_sequence_postconditions(case):
    """Bounded deviation, avoidance by 1/2 and monotone coordinates for admissible directions"""
    d, vectors = case
    seq = build_sequence(vectors, d, 3)
    assert seq.size == 7 ** d
    assert np.all(np.abs(seq.rho - seq.nodes) <= len(vectors))
    assert np.all(np.abs(seq.rho @ np.asarray(vectors).T) >= 0.5)
    verify_sequence(seq)



def test_verify_rejects_broken_sequences():
    seq = build_sequence([[1.0, 2.0]], 2, 2)
    drifted = AvoidanceSequence(seq.nodes, seq.rho + 3, seq.b_vectors, seq.N, seq.bound)
    with pytest.raises(SequenceConstructionError, match="exceeds"):
        verify_sequence(drifted)
    on_plane = AvoidanceSequence(seq.nodes, seq.nodes.astype(float), seq.b_vectors, seq.N, 2)
    with pytest.raises(SequenceConstructionError, match="1/2"):
        verify_sequence(on_plane)


def test_no_directions_omits_origin():
    seq = build_sequence([], 2, 4)
    assert seq.size == 9 ** 2 - 1
    assert not np.any(np.all(seq.rho == 0, axis=1))
    assert seq.bound == 0


def test_single_direction_skips_zero():
    seq = build_sequence([[1.0]], 1, 5)
    rho = seq.rho[:, 0]
    assert 0 not in rho
    assert np.all(np.diff(rho) > 0)


@pytest.mark.parametrize("b", [[[0.5]], [[0.0, 0.0]], [[1.0, 0.3]]])
def test_invalid_direction(b):
    with pytest.raises(InvalidWeightDirectionError):
        build_sequence(b, len(b[0]), 3)


def test_window_limits():
    with pytest.raises(ValueError):
        build_sequence([], 5, 3)
    with pytest.raises(ValueError):
        build_sequence([], 1, 0)
    with pytest.raises(ValueError):
        build_sequence([[1.0]] * 7, 1, 3)


def test_make_lattice_constants():
    seq = make_lattice([1.0, 2.0], [[1.0, 1.0]], k0=1.0, N=6)
    assert seq.delta > 0
    assert seq.separation > 0
    assert seq.avoidance > 0
    assert seq.L >= 0
    assert seq.delta == min(seq.separation, seq.avoidance)
    assert seq.to_dict()["N"] == 6


def test_unweighted_lattice_is_exact():
    seq = make_lattice([1.0], N=10)
    assert seq.L == pytest.approx(0.0)
    assert seq.delta == pytest.approx(np.pi)


def test_make_lattice_rejects_nonpositive_a():
    with pytest.raises(ValueError):
        make_lattice([1.0, 0.0])


def test_perturbation_keeps_separation():
    seq = make_lattice([1.0, 1.0], [[1.0, -1.0]], N=5)
    perturbed = perturb_lattice(seq, seq.delta / 4, rng=np.random.default_rng(7))
    assert perturbed.delta > 0
    assert perturbed.separation >= seq.separation - seq.delta / 2
    with pytest.raises(ValueError):
        perturb_lattice(seq, seq.delta)
    with pytest.raises(ValueError):
        perturb_lattice(seq, -0.1)


if __name__ == "__main__":
    pytest.main([__file__])
