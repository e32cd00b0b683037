import numpy as np
import pytest

from bpsmooth.core.errors import InstanceFormatError, InstanceShapeError, InstanceValidationError
from bpsmooth.generators.families import GadgetCopies
from bpsmooth.generators.sampling import sample
from bpsmooth.instance.io import read_instance, write_instance
from bpsmooth.instance.models import BipartiteInstance, FlowNetwork, IntegerFlow, Matching, matching_to_flow
from bpsmooth.instance.validation import validate, validate_flow, validate_matching, zero_complete


def test_valid_k22(k22):
    assert validate(k22) is None
    assert k22.complete_flag
    assert k22.m == 4


def test_weight_out_of_range():
    instance = BipartiteInstance.create(1, 1, [(0, 0, 1.5)])
    assert validate(instance) == 'weight out of [0,1]'


def test_duplicate_edge():
    instance = BipartiteInstance.create(2, 2, [(0, 0, 0.5), (0, 0, 0.4)])
    assert validate(instance) == 'duplicate edge'


def test_budgets_must_balance():
    network = FlowNetwork.create([1, 1], [])
    assert validate(network) == 'budgets do not sum to 0'


def test_flow_self_loop():
    network = FlowNetwork.create([0, 0], [(0, 0, 1, 0.5)])
    assert validate(network) == 'self-loop'


def test_validate_flow_conservation(parallel_network):
    assert validate_flow(parallel_network, IntegerFlow.create([1, 0])) is None
    assert validate_flow(parallel_network, IntegerFlow.create([1, 1])) == 'flow conservation violated at node 1'
    assert validate_flow(parallel_network, IntegerFlow.create([2, 0])) == 'flow exceeds capacity'


def test_validate_matching(k22):
    assert validate_matching(k22, Matching.of(k22, [(0, 1), (1, 0)])) is None
    assert validate_matching(k22, Matching.of(k22, [(0, 0), (1, 0)])) == 'node matched twice'
    assert validate_matching(k22, Matching(frozenset({(0, 1)}), 0.9)) == 'weight does not equal the sum of edge weights'


def test_zero_complete_single_edge():
    instance = BipartiteInstance.create(2, 2, [(0, 0, 0.9)])
    complete = zero_complete(instance)
    assert complete.complete_flag
    np.testing.assert_array_equal(complete.weights, [[0.9, 0.0], [0.0, 0.0]])


def test_zero_complete_identity(k22):
    assert zero_complete(k22) is k22


def test_zero_complete_gadget():
    instance = sample(GadgetCopies(n=8), seed=3, trial_index=0)
    complete = zero_complete(instance)
    assert complete.m == 16
    assert int((complete.weights[~instance.mask] == 0).sum()) == 8


def test_zero_complete_rectangular():
    with pytest.raises(InstanceShapeError):
        zero_complete(BipartiteInstance.create(2, 3, []))


def test_read_bipartite(k22):
    text = '# K2,2\nbip 2 2\n1 1 0.9\n1 2 0.6\n2 1 0.7\n2 2 0.35\n'
    instance = read_instance(text)
    assert instance == k22


def test_read_empty_edge_section():
    instance = read_instance('bip 2 3\n')
    assert instance.m == 0
    assert not instance.complete_flag


def test_read_flow(parallel_network):
    text = 'flow 2 2\nnode 1 1\nnode 2 -1\n1 2 1 0.2\n1 2 1 0.5\n'
    assert read_instance(text) == parallel_network


def test_malformed_line_reports_number():
    with pytest.raises(InstanceFormatError) as exc:
        read_instance('bip 2 2\n1 1 0.9\n1 x 0.5\n')
    assert exc.value.line_no == 3


def test_invalid_instance_rejected():
    with pytest.raises(InstanceValidationError, match='weight out of'):
        read_instance('bip 1 1\n1 1 1.5\n')


def test_written_weights_survive_reading():
    rng = np.random.default_rng(7)
    instance = BipartiteInstance.from_dense(rng.random((8, 8)))
    again = read_instance(write_instance(instance))
    np.testing.assert_array_equal(again.weights, instance.weights)


def test_matching_to_flow(k22):
    network = matching_to_flow(k22)
    assert network.budgets == (1, 1, -1, -1)
    assert validate(network) is None
    assert [e.cost for e in network.edges] == pytest.approx([0.1, 0.4, 0.3, 0.65])
