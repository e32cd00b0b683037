import numpy as np
import pytest

from bpsmooth.core.errors import EnumerationCapError, InfeasibleFlowError, NegativeCycleError
from bpsmooth.generators.families import RandomFlow, UniformK22
from bpsmooth.generators.sampling import sample, sample_flow
from bpsmooth.instance.models import FlowNetwork, IntegerFlow, matching_to_flow
from bpsmooth.instance.validation import validate_flow
from bpsmooth.oracles.flow import cheapest_residual_cycle, flow_delta_enumeration, min_cost_flow, residual
from bpsmooth.oracles.matching import matching_delta


def test_min_cost_flow_picks_cheap_edge(parallel_network):
    flow = min_cost_flow(parallel_network)
    assert flow.flow == (1, 0)
    assert flow.cost(parallel_network) == pytest.approx(0.2)


def test_zero_budgets_give_zero_flow():
    network = FlowNetwork.create([0, 0, 0], [(0, 1, 2, 0.3), (1, 2, 1, 0.1)])
    flow = min_cost_flow(network)
    assert flow.flow == (0, 0)
    assert flow.cost(network) == 0.0


def test_infeasible_budgets():
    network = FlowNetwork.create([1, -1], [(1, 0, 1, 0.5)])
    with pytest.raises(InfeasibleFlowError):
        min_cost_flow(network)
    with pytest.raises(InfeasibleFlowError):
        flow_delta_enumeration(network)


def test_min_cost_flow_matches_enumeration():
    family = RandomFlow(n_nodes=4, max_capacity=2, edge_probability=0.5)
    for trial in range(40):
        network = sample_flow(family, 5, trial)
        if network.m > 8:
            continue
        flow = min_cost_flow(network)
        assert validate_flow(network, flow) is None
        best = flow_delta_enumeration(network).best
        assert flow.cost(network) == pytest.approx(best.cost(network))


def test_residual_after_optimal_flow(parallel_network):
    net = residual(parallel_network, IntegerFlow.create([1, 0]))
    arcs = set(zip(net.tail.tolist(), net.head.tolist(), net.capacity.tolist(), net.cost.tolist()))
    assert arcs == {(1, 0, 1, -0.2), (0, 1, 1, 0.5)}


def test_residual_of_zero_flow(parallel_network):
    net = residual(parallel_network, IntegerFlow.create([0, 0]))
    assert net.forward.all()
    assert net.capacity.tolist() == [1, 1]
    assert net.cost.tolist() == [0.2, 0.5]


def test_saturated_edge_has_no_forward_copy():
    network = FlowNetwork.create([2, -2], [(0, 1, 2, 0.4)])
    net = residual(network, IntegerFlow.create([2]))
    assert not net.forward.any()


def test_residual_rejects_infeasible_flow(parallel_network):
    with pytest.raises(InfeasibleFlowError):
        residual(parallel_network, IntegerFlow.create([1, 1]))


def test_cheapest_cycle_parallel(parallel_network):
    assert cheapest_residual_cycle(parallel_network, IntegerFlow.create([1, 0])) == pytest.approx(0.3)


def test_tree_network_has_no_cycle():
    network = FlowNetwork.create([1, 0, -1], [(0, 1, 1, 0.3), (1, 2, 1, 0.6)])
    assert cheapest_residual_cycle(network, min_cost_flow(network)) is None


def test_suboptimal_flow_detected(parallel_network):
    with pytest.raises(NegativeCycleError, match='flow not optimal'):
        cheapest_residual_cycle(parallel_network, IntegerFlow.create([0, 1]))


def test_matching_as_flow(k22):
    network = matching_to_flow(k22)
    cycle = cheapest_residual_cycle(network, min_cost_flow(network))
    assert cycle == pytest.approx(0.05)
    assert cycle == pytest.approx(matching_delta(k22, perfect_only=True).delta)


def test_matching_as_flow_random():
    family = UniformK22()
    for trial in range(30):
        instance = sample(family, 8, trial)
        network = matching_to_flow(instance)
        cycle = cheapest_residual_cycle(network, min_cost_flow(network))
        assert cycle == pytest.approx(matching_delta(instance, perfect_only=True).delta)


def test_enumeration_parallel(parallel_network):
    report = flow_delta_enumeration(parallel_network)
    assert report.best.flow == (1, 0)
    assert report.second_best.flow == (0, 1)
    assert report.delta == pytest.approx(0.3)


def test_enumeration_unique_flow():
    network = FlowNetwork.create([1, -1], [(0, 1, 1, 0.4)])
    report = flow_delta_enumeration(network)
    assert report.second_best is None
    assert report.delta is None
    assert report.unique_flag


def test_enumeration_cap():
    edges = [(t, h, 9, 0.5) for t in range(4) for h in range(4) if t != h]
    network = FlowNetwork.create([0, 0, 0, 0], edges)
    with pytest.raises(EnumerationCapError):
        flow_delta_enumeration(network)


def test_cycle_at_least_delta():
    family = RandomFlow(n_nodes=4, max_capacity=2, edge_probability=0.4)
    checked = 0
    for trial in range(60):
        network = sample_flow(family, 13, trial)
        if network.m > 8:
            continue
        report = flow_delta_enumeration(network)
        cycle = cheapest_residual_cycle(network, report.best)
        if report.delta is not None and report.delta > 0:
            assert cycle is not None
            assert cycle >= report.delta - 1e-9
            checked += 1
    assert checked > 0


def test_empty_network():
    network = FlowNetwork.create([0, 0], [])
    assert min_cost_flow(network).flow == ()
    report = flow_delta_enumeration(network)
    assert report.best.flow == ()
    assert report.unique_flag
    assert np.isclose(report.best.cost(network), 0.0)
