import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcpsim import (EnergyLedger, Node, ProtocolState, SimConfig, cal_distance, dcp_cycle,
                    energy_max, generate_topology, make_cluster, run_dcp, status_update)

import oracles


def nodes_with(energies, assigned=()):
    return [Node(i + 1, e, cluster_no=1 if i + 1 in assigned else 0)
            for i, e in enumerate(energies)]


class TestEnergyMax:
    def test_argmax(self):
        assert energy_max(nodes_with([5, 9, 7])) == 2

    def test_all_assigned(self):
        assert energy_max(nodes_with([5, 9, 7], assigned={1, 2, 3})) is None

    def test_ties_lowest_id(self):
        assert energy_max(nodes_with([4, 9, 9])) == 2

    def test_skips_assigned(self):
        assert energy_max(nodes_with([4, 9, 8], assigned={2})) == 3


class TestMakeCluster:
    def test_line_example(self, backend):
        topo = cal_distance([(0, 0), (5, 0), (20, 0), (25, 0), (100, 0)], (0, 0))
        state = ProtocolState.fresh([10, 8, 9, 3, 1])
        make_cluster(state, topo, 10)
        a = state.assignment
        assert a.subsink == (1, 3, 5)
        assert {c.head: set(c.members) for c in a.clusters.values()} == {1: {2}, 3: {4}, 5: set()}
        assert state.ss_flag.tolist() == [True, False, True, False, True]

    def test_single_node(self, backend):
        state = ProtocolState.fresh([3])
        make_cluster(state, cal_distance([(1, 1)], (0, 0)), 5)
        assert state.subsink == [1]
        assert state.cluster_no.tolist() == [1]

    def test_discards_previous_assignment(self, backend):
        topo = cal_distance([(0, 0), (5, 0)], (0, 0))
        state = ProtocolState.fresh([1, 2])
        make_cluster(state, topo, 10)
        assert state.subsink == [2]
        state.energy[:] = [5, 2]
        make_cluster(state, topo, 10)
        assert state.subsink == [1]
        assert state.ss_flag.tolist() == [True, False]

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_matches_pseudocode_transcription(self, data):
        n = data.draw(st.integers(1, 8))
        pos = data.draw(st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)),
                                 min_size=n, max_size=n))
        energies = data.draw(st.lists(st.integers(-5, 20), min_size=n, max_size=n))
        range_ = data.draw(st.floats(0.1, 150))
        state = ProtocolState.fresh(energies)
        make_cluster(state, cal_distance(pos, (50, 50)), range_)
        labels, subsink = oracles.make_cluster(energies, pos, range_)
        assert state.cluster_no.tolist() == labels
        assert state.subsink == subsink

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 60), st.integers(0, 10**6), st.floats(1, 400))
    def test_partition_range_and_dominance(self, n, seed, range_):
        cfg = SimConfig(node_count=n, area_width=500, area_height=500)
        topo = generate_topology(cfg, seed)
        energies = np.random.default_rng(seed).integers(0, 50, n)
        state = ProtocolState.fresh(energies)
        make_cluster(state, topo, range_)
        a = state.assignment
        assert (state.cluster_no != 0).all()
        seen = set()
        for c in a.clusters.values():
            assert not (c.nodes & seen)
            seen |= c.nodes
            for m in c.members:
                assert topo.distance[m - 1, c.head - 1] <= range_
                # members joined while unassigned, so the head was elected before them
                assert energies[c.head - 1] >= energies[m - 1]
        assert seen == set(range(1, n + 1))
        assert state.ss_flag.sum() == len(a) == len(set(a.subsink))


class TestStatusUpdate:
    def _state(self, n=10):
        topo = cal_distance([(i, 0) for i in range(n)], (0, 0))
        state = ProtocolState.fresh(list(range(n, 0, -1)), seed=4)
        return make_cluster(state, topo, 2.5)

    def test_zero_probability(self):
        state = status_update(self._state(), 0.0)
        assert not state.active.any()

    def test_certain_activation(self):
        state = status_update(self._state(), 1.0)
        assert (state.active == ~state.ss_flag).all()
        assert not (state.active & state.ss_flag).any()

    def test_empirical_fraction(self):
        state = self._state(10)
        members = ~state.ss_flag
        hits = 0
        trials = 0
        while trials < 10_000:
            status_update(state, 0.5)
            hits += int(state.active[members].sum())
            trials += int(members.sum())
        assert abs(hits / trials - 0.5) <= 0.02

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            status_update(self._state(), 1.5)

    def test_seeded(self):
        a = status_update(self._state(), 0.5).active
        b = status_update(self._state(), 0.5).active
        assert np.array_equal(a, b)


def two_node(energy=(500, 500), p_active=0.0, refresh_time=10):
    cfg = SimConfig(node_count=2, area_width=10, area_height=10, range=5,
                    refresh_time=refresh_time, p_active=p_active, positions=((0, 0), (1, 0)))
    topo = generate_topology(cfg, 0)
    state = ProtocolState.fresh(list(energy))
    make_cluster(state, topo, cfg.range)
    return cfg, topo, state


class TestDcpCycle:
    def test_two_node_cycle(self, backend):
        cfg, topo, state = two_node()
        ledger = EnergyLedger(1000)
        state, records, alive = dcp_cycle(state, topo, cfg, ledger)
        assert alive
        assert state.energy.tolist() == [490, 490]
        assert [r.tick for r in records] == list(range(1, 11))
        assert records[-1].cumulative_dissipated == 20
        assert records[-1].remaining_total == 980

    def test_dead_head_before_any_decrement(self, backend):
        cfg, topo, state = two_node(energy=(0, 0))
        state, records, alive = dcp_cycle(state, topo, cfg, EnergyLedger(0))
        assert not alive and not state.alive
        assert records == []
        assert state.energy.tolist() == [0, 0]

    def test_dead_member_detected_on_first_tick(self, backend):
        cfg, topo, state = two_node(energy=(500, 0))
        state, records, alive = dcp_cycle(state, topo, cfg, EnergyLedger(500))
        assert not alive
        assert state.tick == 0

    def test_heads_skip_tick_schedule(self, backend):
        cfg, topo, state = two_node(p_active=1.0)
        state, records, _ = dcp_cycle(state, topo, cfg, EnergyLedger(1000))
        # node 1 was head (10 per cycle), node 2 member active every tick (2 x 10)
        assert state.energy.tolist() == [490, 480]

    def test_accounting_identity(self, backend):
        cfg = SimConfig(node_count=40, area_width=200, area_height=200, range=40,
                        refresh_time=7, p_active=0.3)
        topo = generate_topology(cfg, 9)
        state = ProtocolState.fresh(np.full(40, 500), seed=9)
        make_cluster(state, topo, cfg.range)
        ledger = EnergyLedger(40 * 500)
        for _ in range(5):
            heads = len(state.subsink)
            before = state.energy.copy()
            # replay the cycle's draws to count actives independently
            shadow = np.random.default_rng()
            shadow.bit_generator.state = state.rng.bit_generator.state
            is_head = state.ss_flag.copy()
            actives = sum(int(((shadow.random(40) < cfg.p_active) & ~is_head).sum())
                          for _ in range(cfg.refresh_time))
            idles = cfg.refresh_time * int((~is_head).sum()) - actives
            state, _, alive = dcp_cycle(state, topo, cfg, ledger)
            assert alive
            assert int((before - state.energy).sum()) == heads * 10 + 2 * actives + idles

    def test_sleep_wait_resets_active(self, backend):
        cfg, topo, state = two_node(p_active=1.0)
        dcp_cycle(state, topo, cfg, EnergyLedger(1000))
        assert not state.active.any()

    def test_horizon_mid_cycle(self, backend):
        cfg, topo, state = two_node()
        cfg = cfg.replace(horizon=4)
        state, records, alive = dcp_cycle(state, topo, cfg, EnergyLedger(1000))
        assert alive and state.tick == 4 and len(records) == 4


class TestRunDcp:
    def test_zero_initial_energy(self, backend):
        cfg = SimConfig(node_count=5, area_width=10, area_height=10, initial_energy_joules=0.0)
        res = run_dcp(cfg, generate_topology(cfg, 0))
        assert res.lifetime == 0 and res.died
        assert [r.tick for r in res.records] == [0]

    def test_table1_defaults_run(self, backend):
        cfg = SimConfig()
        res = run_dcp(cfg, generate_topology(cfg, 0))
        assert res.died and res.lifetime > 0
        assert [r.tick for r in res.records] == list(range(res.lifetime + 1))

    def test_bit_identical_repeat(self, backend):
        cfg = SimConfig(node_count=100)
        topo = generate_topology(cfg, 3)
        assert run_dcp(cfg, topo, seed=3) == run_dcp(cfg, topo, seed=3)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 1000), st.integers(1, 6),
           st.sampled_from([0.0, 0.3, 0.5, 1.0]), st.integers(5, 80))
    def test_matches_plain_python_loop(self, n, seed, refresh_time, p, initial):
        cfg = SimConfig(node_count=n, area_width=60, area_height=60, range=20,
                        refresh_time=refresh_time, p_active=p,
                        initial_energy_joules=initial / 1000)
        topo = generate_topology(cfg, seed)
        res = run_dcp(cfg, topo, seed=seed)
        history, lifetime, died = oracles.simulate_dcp(
            [initial] * n, topo.positions.tolist(), 20, refresh_time, p, seed)
        assert res.lifetime == lifetime
        assert res.died == died
        assert [r.remaining_total for r in res.records] == [sum(h) for h in history]

    def test_energy_monotone_per_node(self):
        cfg = SimConfig(node_count=20, area_width=100, area_height=100, range=30, horizon=60)
        topo = generate_topology(cfg, 1)
        history, _, _ = oracles.simulate_dcp([500] * 20, topo.positions.tolist(), 30, 10, 0.5, 1,
                                             max_ticks=60)
        res = run_dcp(cfg, topo, seed=1)
        assert [sum(h) for h in history] == [r.remaining_total for r in res.records]
        for prev, cur in zip(history, history[1:]):
            assert all(c <= p for p, c in zip(prev, cur))
