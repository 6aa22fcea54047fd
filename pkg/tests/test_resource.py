import numpy as np
import pytest

from floqnet.codes import BivariateSpec, CssCode, build_bb_code
from floqnet.floquet import pairwise_decompose
from floqnet.gf2 import BinaryMatrix
from floqnet.network import NodePartition, PhysicalParams, single_node
from floqnet.resource import (
    estimate_cycle,
    sweep_point,
    throughput_report,
)


def disjoint_w7_rows(row_count):
    """row r occupies qubits 7r..7r+6; each decomposes into 4 slots with
    the slot-3 wrap pair (7r, 7r+6)."""
    n = 7 * row_count
    dense = np.zeros((row_count, n), dtype=np.uint8)
    for r in range(row_count):
        dense[r, 7 * r : 7 * r + 7] = 1
    hx = BinaryMatrix.from_dense(dense)
    hz = BinaryMatrix.from_dense(np.zeros((0, n), dtype=np.uint8))
    return CssCode.from_checks(hx, hz)


def shared_hub_partition(row_count, channels=1):
    """node 0 holds the last qubit of every row, node 1 the rest, so all
    slot-3 wrap checks cross and queue on node 0 in the same sub-round."""
    n = 7 * row_count
    assignment = np.ones(n, dtype=np.int64)
    for r in range(row_count):
        assignment[7 * r + 6] = 0
    return NodePartition(2, assignment, channels_per_node=channels)


class TestEstimateCycle:
    def test_c_seq_1_frozen(self):
        code = disjoint_w7_rows(1)
        s = pairwise_decompose(code)
        est = estimate_cycle(s, shared_hub_partition(1), PhysicalParams())
        assert est.sub_rounds == 4
        assert est.c_seq == 1
        assert est.nonlocal_total == 1
        assert est.bell_pairs_per_cycle == 1
        assert est.tau_sub == pytest.approx(7.76e-6, rel=1e-12)
        assert est.tau_cycle == pytest.approx(31.04e-6, rel=1e-12)
        assert 30e-6 <= est.tau_cycle <= 80e-6

    def test_c_seq_2_frozen(self):
        s = pairwise_decompose(disjoint_w7_rows(2))
        est = estimate_cycle(s, shared_hub_partition(2), PhysicalParams())
        assert est.sub_rounds == 4
        assert est.c_seq == 2
        assert est.tau_sub == pytest.approx(14.46e-6, rel=1e-12)
        assert est.tau_cycle == pytest.approx(57.84e-6, rel=1e-12)
        assert 30e-6 <= est.tau_cycle <= 80e-6

    def test_c_seq_3_near_band_edge(self):
        s = pairwise_decompose(disjoint_w7_rows(3))
        est = estimate_cycle(s, shared_hub_partition(3), PhysicalParams())
        assert est.c_seq == 3
        assert est.tau_cycle == pytest.approx(84.64e-6, rel=1e-12)
        assert est.tau_cycle <= 80e-6 * 1.10  # within 10% of the band edge

    def test_channels_absorb_queue(self):
        s = pairwise_decompose(disjoint_w7_rows(2))
        est = estimate_cycle(s, shared_hub_partition(2, channels=2), PhysicalParams())
        assert est.c_seq == 1

    def test_no_nonlocal_checks(self):
        s = pairwise_decompose(disjoint_w7_rows(1))
        p = PhysicalParams()
        est = estimate_cycle(s, single_node(s.n), p)
        assert est.c_seq == 0
        assert est.bell_pairs_per_cycle == 0
        assert est.tau_sub == pytest.approx(p.tau_gate + p.tau_meas, rel=1e-12)

    def test_distillation_scales_queue_and_pairs(self):
        s = pairwise_decompose(disjoint_w7_rows(1))
        part = shared_hub_partition(1)
        p = PhysicalParams()
        base = estimate_cycle(s, part, p, distill_rounds=0)
        one = estimate_cycle(s, part, p, distill_rounds=1)
        two = estimate_cycle(s, part, p, distill_rounds=2)
        assert (base.c_seq, one.c_seq, two.c_seq) == (1, 2, 4)
        assert (base.bell_pairs_per_cycle, one.bell_pairs_per_cycle,
                two.bell_pairs_per_cycle) == (1, 2, 4)
        assert base.tau_cycle < one.tau_cycle < two.tau_cycle
        with pytest.raises(ValueError):
            estimate_cycle(s, part, p, distill_rounds=-1)

    def test_monotone_in_c_seq_and_eta(self):
        cycles = []
        for rows in (1, 2, 3):
            s = pairwise_decompose(disjoint_w7_rows(rows))
            est = estimate_cycle(s, shared_hub_partition(rows), PhysicalParams())
            cycles.append(est.tau_cycle)
        assert cycles[0] < cycles[1] < cycles[2]

        s = pairwise_decompose(disjoint_w7_rows(2))
        part = shared_hub_partition(2)
        by_eta = [
            estimate_cycle(s, part, PhysicalParams(eta=eta)).tau_cycle
            for eta in (0.3, 0.4, 0.6, 0.9)
        ]
        assert by_eta == sorted(by_eta, reverse=True)

    def test_sub_round_band(self):
        # stock params keep single- and double-queued sub-rounds
        # inside the documented 7-20 us window
        for rows in (1, 2):
            s = pairwise_decompose(disjoint_w7_rows(rows))
            est = estimate_cycle(s, shared_hub_partition(rows), PhysicalParams())
            assert 7e-6 <= est.tau_sub <= 20e-6

    def test_reaction_limit(self):
        s = pairwise_decompose(disjoint_w7_rows(1))
        p = PhysicalParams()
        est = estimate_cycle(s, shared_hub_partition(1), p)
        assert est.reaction_limit == pytest.approx(4 * p.tau_meas, rel=1e-12)
        assert est.reaction_limit < est.tau_cycle


class TestThroughputReport:
    def build_points(self):
        p = PhysicalParams()
        points = []
        for rows in (1, 2, 3):
            s = pairwise_decompose(disjoint_w7_rows(rows))
            points.append(
                sweep_point(f"hub{rows}", s, shared_hub_partition(rows), p)
            )
        return points

    def test_linear_scaling_and_rates(self):
        report = throughput_report(self.build_points())
        assert report.linear_scaling_ok
        pairs = [pt.estimate.bell_pairs_per_cycle for pt in report.points]
        assert pairs == [1, 2, 3]
        for pt in report.points:
            assert pt.pairs_per_second == pytest.approx(
                pt.estimate.bell_pairs_per_cycle / pt.estimate.tau_cycle
            )

    def test_doubling_cut_doubles_pairs(self):
        points = self.build_points()
        assert (
            points[1].estimate.bell_pairs_per_cycle
            == 2 * points[0].estimate.bell_pairs_per_cycle
        )

    def test_bb_gross_rate(self):
        bb = build_bb_code(BivariateSpec(12, 6, ((3, 0), (0, 1), (0, 2)), ((0, 3), (1, 0), (2, 0))))
        s = pairwise_decompose(bb)
        pt = sweep_point("bb-gross", s, single_node(s.n), PhysicalParams())
        assert pt.k == 12
        assert pt.n == 144
        assert pt.rate == pytest.approx(12 / 144)

    def test_table_and_csv(self, tmp_path):
        report = throughput_report(self.build_points())
        table = report.to_table()
        assert "hub1" in table and "hub3" in table
        assert "tau_cycle" in table
        path = tmp_path / "sweep.csv"
        report.write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("label,sub_rounds,c_seq,")
        assert len(lines) == 4
        d = report.to_dict()
        assert d["linear_scaling_ok"] is True
        assert len(d["points"]) == 3

    def test_empty_report_rejected(self):
        with pytest.raises(ValueError):
            throughput_report([])
