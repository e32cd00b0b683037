import numpy as np
import pytest
from pydantic import ValidationError

from bpsmooth.core.errors import FamilyParameterError
from bpsmooth.generators.density import DensitySpec, event_phi_densities
from bpsmooth.generators.events import check_event_E, check_event_E_phi, event_hits, event_slack
from bpsmooth.generators.families import (HEAVY_TOP, Custom, EventK22, GadgetCopies, RandomFlow, SmoothedKnn,
                                          UniformK22, family_adapter)
from bpsmooth.generators.sampling import (derived_seed, sample, sample_custom, sample_flow, sample_weights,
                                          uniform_stream)
from bpsmooth.instance.models import BipartiteInstance
from bpsmooth.instance.validation import validate


def test_stream_does_not_depend_on_chunking():
    whole = uniform_stream(11, 0, 10, 7)
    tail = uniform_stream(11, 5, 5, 7)
    np.testing.assert_array_equal(whole[5:], tail)


def test_same_trial_same_instance():
    family = UniformK22()
    assert sample(family, 5, 17) == sample(family, 5, 17)
    assert sample(family, 5, 17) != sample(family, 5, 18)


def test_derived_seed():
    assert derived_seed(4, 3) == 3
    assert derived_seed(16, 3) == 12


def test_gadget_structure():
    instance = sample(GadgetCopies(n=8), 0, 0)
    assert instance.m == 8
    assert all(i // 2 == j // 2 for i, j, _ in instance.edges)
    assert validate(instance) is None


def test_gadget_needs_multiple_of_four():
    with pytest.raises(ValidationError):
        GadgetCopies(n=6)


def test_smoothed_weights_stay_in_intervals():
    family = SmoothedKnn(n=4, phi=26)
    weights = sample_weights(family, 1, 0, 500)
    heavy = family.heavy()
    assert (weights[:, ~heavy] <= 1 / 26).all()
    rows, cols = family.layout()
    position = 2 * (rows % 2) + cols % 2
    w11 = weights[:, heavy & (position == 0)]
    cross = weights[:, heavy & ((position == 1) | (position == 2))]
    assert (w11 >= 1 - 1 / 26).all()
    assert ((cross > HEAVY_TOP) & (cross <= HEAVY_TOP + 1 / 26)).all()


def test_smoothed_requires_phi():
    with pytest.raises(ValidationError):
        SmoothedKnn(n=4, phi=20)


def test_custom_uniform_mean():
    family = Custom.complete(1, 1, 1.0, [DensitySpec.uniform(0.0, 1.0)])
    weights = sample_weights(family, 2, 0, 200_000)
    assert weights.mean() == pytest.approx(0.5, abs=0.005)


def test_custom_support():
    family = Custom.complete(1, 1, 8.0, [DensitySpec.uniform(0.875, 1.0)])
    for trial in range(50):
        (_, _, w), = sample_custom(family, 4, trial).edges
        assert 0.875 <= w <= 1.0


def test_custom_density_above_phi():
    with pytest.raises(ValidationError):
        Custom.complete(1, 1, 4.0, [DensitySpec.uniform(0.875, 1.0)])


def test_density_mass_must_be_one():
    with pytest.raises(ValidationError):
        DensitySpec.model_validate({'pieces': [{'low': 0.0, 'high': 0.5, 'density': 1.0}]})


def test_event_phi_densities_bounded_by_phi():
    specs = event_phi_densities(26)
    assert all(abs(s.mass - 1.0) < 1e-12 for s in specs)
    assert max(s.max_density for s in specs) == 26


def test_family_adapter_discriminates():
    family = family_adapter.validate_python({'kind': 'smoothed_knn', 'n': 2, 'phi': 30})
    assert isinstance(family, SmoothedKnn)


def test_event_e_membership():
    instance = BipartiteInstance.from_dense(np.array([[0.9, 0.6], [0.7, 0.35]]))
    assert check_event_E(instance, 0.05)
    assert not check_event_E(instance, 0.04)
    low_w11 = BipartiteInstance.from_dense(np.array([[0.8, 0.6], [0.7, 0.35]]))
    assert not check_event_E(low_w11, 0.05)


def test_event_e_rejects_eps():
    instance = BipartiteInstance.from_dense(np.array([[0.9, 0.6], [0.7, 0.35]]))
    with pytest.raises(FamilyParameterError):
        check_event_E(instance, 0.2)


def test_event_e_phi_membership():
    inside = BipartiteInstance.from_dense(np.array([[1.0, 0.890625], [0.890625, 0.765625]]))
    boundary = BipartiteInstance.from_dense(np.array([[1.0, 0.890625], [0.890625, 0.78125]]))
    assert check_event_E_phi(inside, 1 / 32, 26)
    assert not check_event_E_phi(boundary, 1 / 32, 26)
    with pytest.raises(FamilyParameterError):
        check_event_E_phi(inside, 1 / 32, 20)


def test_event_slack_matches_scalar_check():
    weights = sample_weights(UniformK22(), 9, 0, 20_000)
    hits = event_hits(event_slack(weights), 0.08)
    scalar = [check_event_E(BipartiteInstance.from_dense(w.reshape(2, 2)), 0.08) for w in weights[hits]]
    assert all(scalar)


def test_event_k22_always_in_event():
    family = EventK22(eps=1 / 16)
    for trial in range(200):
        assert check_event_E(sample(family, 0, trial), 1 / 16)


def test_random_flow_is_feasible():
    family = RandomFlow(n_nodes=4, max_capacity=2, edge_probability=0.5)
    for trial in range(20):
        network = sample_flow(family, 1, trial)
        assert validate(network) is None
        assert all(1 <= e.capacity <= 2 for e in network.edges)
