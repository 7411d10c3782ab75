import math

import pytest
from pydantic import ValidationError

from core_model import (
    CommTopology,
    GradientDescentModel,
    GraphWorkload,
    HardwareSpec,
    TimeBreakdown,
    bp_ops_per_edge,
    comm_time,
    effective_ops_per_sec,
    gd_step_time,
    gi_step_time,
    linear_scales,
    per_instance_breakdown,
    per_instance_time,
    weak_speedup_limit,
)
from speedup import strong_scaling_curve

ALL_TOPOLOGIES = [
    CommTopology(variant="none"),
    CommTopology(variant="linear", bits_per_param=64),
    CommTopology(variant="log_tree", stages=2, bits_per_param=32),
    CommTopology(variant="spark_hybrid", bits_per_param=64),
]


class TestHardwareSpec:
    def test_effective_ops(self):
        assert effective_ops_per_sec(HardwareSpec(peak_ops_per_sec=105.6e9, efficiency=0.8, bandwidth_bits_per_sec=1e9)) == pytest.approx(84.48e9)
        assert effective_ops_per_sec(HardwareSpec(peak_ops_per_sec=4.28e12, efficiency=0.5, bandwidth_bits_per_sec=1e9)) == pytest.approx(2.14e12)
        assert effective_ops_per_sec(HardwareSpec(peak_ops_per_sec=1.0, efficiency=1.0, bandwidth_bits_per_sec=1.0)) == 1.0

    @pytest.mark.parametrize("fields", [
        dict(peak_ops_per_sec=0, efficiency=0.5, bandwidth_bits_per_sec=1e9),
        dict(peak_ops_per_sec=1e9, efficiency=0, bandwidth_bits_per_sec=1e9),
        dict(peak_ops_per_sec=1e9, efficiency=1.5, bandwidth_bits_per_sec=1e9),
        dict(peak_ops_per_sec=1e9, efficiency=0.5, bandwidth_bits_per_sec=-1),
    ])
    def test_invalid_hardware_rejected(self, fields):
        with pytest.raises(ValidationError):
            HardwareSpec(**fields)

    def test_invalid_topology_rejected(self):
        with pytest.raises(ValidationError):
            CommTopology(variant="ring")
        with pytest.raises(ValidationError):
            CommTopology(variant="log_tree", stages=0)
        with pytest.raises(ValidationError):
            CommTopology(variant="log_tree", bits_per_param=16)


class TestCommTime:
    def test_log_tree(self):
        topo = CommTopology(variant="log_tree", stages=2, bits_per_param=32)
        hw = HardwareSpec(peak_ops_per_sec=1e9, efficiency=1, bandwidth_bits_per_sec=1e9)
        assert comm_time(topo, 4, 12e6, hw) == pytest.approx(1.536)

    def test_spark_hybrid(self, spark_hw, spark_topo):
        assert comm_time(spark_topo, 9, 12e6, spark_hw) == pytest.approx(0.768 * math.log2(9) + 2 * 0.768 * 3)
        assert comm_time(spark_topo, 9, 12e6, spark_hw) == pytest.approx(7.0425, abs=1e-4)

    def test_linear(self, spark_hw):
        topo = CommTopology(variant="linear", bits_per_param=64)
        assert comm_time(topo, 5, 12e6, spark_hw) == pytest.approx(0.768 * 5)

    @pytest.mark.parametrize("topo", ALL_TOPOLOGIES, ids=lambda t: t.variant)
    def test_single_worker_sends_nothing(self, topo, spark_hw):
        assert comm_time(topo, 1, 12e6, spark_hw) == 0.0

    def test_none_is_free(self, spark_hw):
        assert comm_time(CommTopology(variant="none"), 64, 12e6, spark_hw) == 0.0

    @pytest.mark.parametrize("topo", ALL_TOPOLOGIES[1:], ids=lambda t: t.variant)
    def test_non_decreasing_in_n(self, topo, spark_hw):
        times = [comm_time(topo, n, 12e6, spark_hw) for n in range(2, 1025)]
        assert all(b >= a for a, b in zip(times, times[1:]))

    def test_ceil_sqrt_at_perfect_squares(self, spark_hw, spark_topo):
        message = 0.768
        for n, root in [(4, 2), (5, 3), (16, 4), (17, 5)]:
            expected = message * math.log2(n) + 2 * message * root
            assert comm_time(spark_topo, n, 12e6, spark_hw) == pytest.approx(expected)

    def test_rejects_zero_workers(self, spark_hw, spark_topo):
        with pytest.raises(ValueError):
            comm_time(spark_topo, 0, 12e6, spark_hw)


class TestGradientDescent:
    def test_spark_nine_workers(self, spark_model, spark_hw, spark_topo):
        t = gd_step_time(spark_model, spark_hw, spark_topo, 9)
        assert t.t_cp == pytest.approx(5.682, abs=1e-3)
        assert t.t_cm == pytest.approx(7.043, abs=1e-3)
        assert t.t_total == pytest.approx(12.725, abs=1e-3)

    def test_spark_one_worker(self, spark_model, spark_hw, spark_topo):
        t = gd_step_time(spark_model, spark_hw, spark_topo, 1)
        assert t.t_cp == pytest.approx(51.14, abs=1e-2)
        assert t.t_cm == 0.0
        assert t.t_total == t.t_cp

    def test_empty_batch(self, spark_hw, spark_topo):
        m = GradientDescentModel(cost_per_point_ops=72e6, batch_size=0, num_params=12e6)
        assert gd_step_time(m, spark_hw, spark_topo, 4).t_cp == 0.0

    def test_compute_shrinks_as_one_over_n(self, spark_model, spark_hw, spark_topo):
        total = spark_model.cost_per_point_ops * spark_model.batch_size / effective_ops_per_sec(spark_hw)
        previous = math.inf
        for n in range(1, 200):
            t_cp = gd_step_time(spark_model, spark_hw, spark_topo, n).t_cp
            assert t_cp < previous
            assert t_cp * n == pytest.approx(total, rel=1e-9)
            previous = t_cp

    def test_breakdown_sums_exactly(self, spark_model, spark_hw, spark_topo):
        for n in (1, 2, 7, 100):
            t = gd_step_time(spark_model, spark_hw, spark_topo, n)
            assert t.t_total == t.t_cp + t.t_cm
            assert t.t_cp >= 0 and t.t_cm >= 0


class TestPerInstance:
    def test_reference_values(self, conv_model, gpu_hw, tree_topo):
        assert per_instance_time(conv_model, gpu_hw, tree_topo, 50) == pytest.approx(0.19855, abs=1e-5)
        assert per_instance_time(conv_model, gpu_hw, tree_topo, 100) == pytest.approx(0.11527, abs=1e-5)
        assert per_instance_time(conv_model, gpu_hw, tree_topo, 1) == pytest.approx(0.8972, abs=1e-4)

    def test_breakdown_matches_time(self, conv_model, gpu_hw, tree_topo):
        for n in (1, 25, 50, 512):
            breakdown = per_instance_breakdown(conv_model, gpu_hw, tree_topo, n)
            assert breakdown.t_total == pytest.approx(per_instance_time(conv_model, gpu_hw, tree_topo, n), rel=1e-12)

    def test_log_tree_scales_forever(self, conv_model, gpu_hw, tree_topo):
        for n in range(2, 513):
            assert per_instance_time(conv_model, gpu_hw, tree_topo, 2 * n) < per_instance_time(conv_model, gpu_hw, tree_topo, n)

    def test_linear_saturates(self, conv_model, gpu_hw):
        topo = CommTopology(variant="linear", bits_per_param=32)
        limit = weak_speedup_limit(conv_model, gpu_hw, topo, 50)
        reference = per_instance_time(conv_model, gpu_hw, topo, 50)
        assert limit == pytest.approx(reference / 0.8)
        assert reference / per_instance_time(conv_model, gpu_hw, topo, 10**6) < limit
        assert weak_speedup_limit(conv_model, gpu_hw, CommTopology(variant="log_tree"), 50) is None

    def test_linear_scales_only_when_compute_dominates(self, conv_model, gpu_hw):
        topo = CommTopology(variant="linear", bits_per_param=32)
        assert linear_scales(conv_model, gpu_hw, topo)  # 0.897 s compute vs 0.8 s transfer
        heavy = GradientDescentModel(cost_per_point_ops=15e9, batch_size=128, num_params=50e6)
        assert not linear_scales(heavy, gpu_hw, topo)


class TestGraphInference:
    def test_bp_cost(self):
        assert bp_ops_per_edge(2) == 14
        assert bp_ops_per_edge(1) == 5
        assert bp_ops_per_edge(0) == 0

    def test_shared_memory_compute(self):
        hw = HardwareSpec(peak_ops_per_sec=1e3, efficiency=1, bandwidth_bits_per_sec=1e9)
        w = GraphWorkload(num_vertices=100, num_edges=1000, num_states=2, shared_memory=True)
        t = gi_step_time(w, 1000, hw, 2)
        assert t.t_cp == pytest.approx(14.0)
        assert t.t_cm == 0.0

    def test_literal_divide_by_n(self):
        hw = HardwareSpec(peak_ops_per_sec=1e3, efficiency=1, bandwidth_bits_per_sec=1e9)
        w = GraphWorkload(num_vertices=100, num_edges=1000, num_states=2, shared_memory=True, literal_divide_by_n=True)
        assert gi_step_time(w, 1000, hw, 2).t_cp == pytest.approx(7.0)

    def test_replicated_state_traffic(self):
        hw = HardwareSpec(peak_ops_per_sec=1e9, efficiency=1, bandwidth_bits_per_sec=1e9)
        w = GraphWorkload(num_vertices=10**6, num_edges=10**7, num_states=2, replication_factor=1)
        assert gi_step_time(w, 10**6, hw, 4).t_cm == pytest.approx(0.064)
        assert gi_step_time(w, 10**7, hw, 1).t_cm == 0.0

    def test_throughput_cancels_in_speedup(self):
        w = GraphWorkload(num_vertices=1000, num_edges=5000, num_states=2, shared_memory=True)
        max_edges = {n: 5000 / n + 17 * (n > 1) for n in range(1, 33)}

        def curve(peak):
            hw = HardwareSpec(peak_ops_per_sec=peak, efficiency=1, bandwidth_bits_per_sec=1e9)
            return strong_scaling_curve(lambda n: gi_step_time(w, max_edges[n], hw, n), (1, 32))

        slow, fast = curve(1e9), curve(1e12)
        for a, b in zip(slow.points, fast.points):
            assert a.n == b.n
            assert a.s == pytest.approx(b.s, rel=1e-12)


class TestTimeBreakdown:
    def test_total_must_match(self):
        with pytest.raises(ValidationError):
            TimeBreakdown(t_cp=1.0, t_cm=1.0, t_total=3.0)

    def test_of_sums(self):
        t = TimeBreakdown.of(1.5, 0.5)
        assert (t.t_cp, t.t_cm, t.t_total) == (1.5, 0.5, 2.0)
