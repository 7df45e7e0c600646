import random

import numpy as np
import pytest

from lattice_net import intmat, lattice
from lattice_net.errors import PreconditionError, ResourceLimitError

EXAMPLE2 = lattice.custom([[4, 0, 0], [0, 4, 2], [0, 0, 4]], name="example2")


class TestCatalog:
    def test_orders(self):
        assert lattice.pc(4).order == 64
        assert lattice.rtt(4).order == 32
        assert lattice.fcc(2).order == 16
        assert lattice.bcc(2).order == 32
        assert lattice.fcc4(2).order == 32
        assert lattice.bcc4(2).order == 128
        assert lattice.lip(2).order == 256
        assert lattice.hybrid(2).order == 128
        assert lattice.torus((8, 4, 4)).order == 128

    def test_crystal_bases_match_catalog(self):
        assert lattice.crystal_fcc(4).equivalent(lattice.fcc(4))
        assert lattice.crystal_bcc(2).equivalent(lattice.bcc(2))

    def test_hybrid_matrix(self):
        assert lattice.hybrid(2).hermite == (
            (4, 0, 0, 2),
            (0, 4, 0, 2),
            (0, 0, 4, 0),
            (0, 0, 0, 2),
        )

    def test_make_topology_dispatch(self):
        assert lattice.make_topology("fcc", a=3).order == 54
        assert lattice.make_topology("torus", sides=(4, 2)).order == 8
        assert lattice.make_topology("custom", matrix="4,2;0,2").equivalent(
            lattice.rtt(2)
        )
        with pytest.raises(PreconditionError):
            lattice.make_topology("fcc")
        with pytest.raises(PreconditionError):
            lattice.make_topology("torus")
        with pytest.raises(PreconditionError):
            lattice.make_topology("klein", a=2)

    def test_order_cap(self):
        with pytest.raises(ResourceLimitError):
            lattice.torus((1 << 13, 1 << 13))


class TestVertexSet:
    def test_index_label_round_trip(self):
        g = lattice.fcc(3)
        for idx in range(g.order):
            assert g.index(g.label(idx)) == idx

    def test_vertices_are_boxed(self):
        g = lattice.rtt(3)
        vs = list(g.vertices())
        assert len(vs) == g.order == 18
        assert all(0 <= x < s for v in vs for x, s in zip(v, g.sides))
        assert vs == sorted(vs)

    def test_degree(self):
        assert lattice.bcc4(2).degree == 8


class TestAdjacency:
    def test_rtt_wrap(self):
        g = lattice.rtt(2)
        assert g.move((3, 1), 1, 1) == (1, 0)

    def test_neighbor_order(self):
        g = lattice.fcc(2)
        v = (0, 0, 0)
        expect = [
            g.reduce((1, 0, 0)),
            g.reduce((-1, 0, 0)),
            g.reduce((0, 1, 0)),
            g.reduce((0, -1, 0)),
            g.reduce((0, 0, 1)),
            g.reduce((0, 0, -1)),
        ]
        assert g.neighbors(v) == expect

    def test_handshake(self):
        for g in (lattice.rtt(3), lattice.bcc(2), EXAMPLE2, lattice.torus((4, 2))):
            for v in g.vertices():
                for w in g.neighbors(v):
                    assert v in g.neighbors(w)

    def test_delta_and_record(self):
        g = lattice.fcc(4)
        assert g.delta((1, 3, 3), (6, 0, 1)) == (5, 1, 2)
        assert g.apply_record((1, 3, 3), (1, 1, -2)) == (6, 0, 1)

    def test_example2_cycle_meets_copies_twice(self):
        g = EXAMPLE2
        assert g.element_order((0, 0, 1)) == 8
        v = (0, 0, 0)
        hits = {}
        for _ in range(8):
            v = g.move(v, 2, 1)
            hits[v[2]] = hits.get(v[2], 0) + 1
        assert v == (0, 0, 0)
        assert hits == {0: 2, 1: 2, 2: 2, 3: 2}


class TestVectorized:
    def test_reduce_array_matches_scalar(self):
        rng = random.Random(7)
        for g in (lattice.rtt(3), lattice.fcc(2), EXAMPLE2, lattice.bcc4(2)):
            raw = [
                [rng.randrange(-50, 51) for _ in range(g.n)] for _ in range(200)
            ]
            vec = g.reduce_array(raw)
            for row, v in zip(raw, vec):
                assert tuple(v) == g.reduce(row)

    def test_neighbor_table_matches_scalar(self):
        for g in (lattice.rtt(3), lattice.fcc(2), EXAMPLE2, lattice.torus((4, 2, 2))):
            table = g.neighbor_table()
            assert table.shape == (g.order, g.degree)
            for idx in range(g.order):
                want = [g.index(w) for w in g.neighbors(g.label(idx))]
                assert list(table[idx]) == want


class TestProjection:
    def test_fcc_projects_to_twisted_rectangle(self):
        p = lattice.projection(lattice.fcc(3))
        assert p.graph.equivalent(lattice.rtt(3))
        assert p.side == 3
        assert p.twist == (3, 0)

    def test_bcc_projects_to_square_torus(self):
        p = lattice.projection(lattice.bcc(3))
        assert p.graph.equivalent(lattice.torus((6, 6)))
        assert p.side == 3
        assert p.twist == (3, 3)

    def test_pc_projects_trivially(self):
        p = lattice.projection(lattice.pc(3))
        assert p.graph.equivalent(lattice.torus((3, 3)))
        assert p.twist == (0, 0)

    def test_4d_projections(self):
        p = lattice.projection(lattice.bcc4(2))
        assert p.graph.equivalent(lattice.pc(4))
        assert p.side == 2 and p.twist == (2, 2, 2)
        p = lattice.projection(lattice.fcc4(2))
        assert p.graph.equivalent(lattice.fcc(2))
        assert p.side == 2
        p = lattice.projection(lattice.lip(2))
        assert p.graph.equivalent(lattice.fcc(4))
        assert p.side == 2

    def test_every_axis_of_fcc_looks_alike(self):
        g = lattice.fcc(3)
        for axis in range(3):
            p = lattice.projection(g, axis=axis)
            assert p.graph.equivalent(lattice.rtt(3))
            assert p.side == 3

    def test_every_axis_of_bcc_looks_alike(self):
        g = lattice.bcc(2)
        for axis in range(3):
            p = lattice.projection(g, axis=axis)
            assert p.graph.equivalent(lattice.torus((4, 4)))
            assert p.side == 2

    def test_copy_count_times_copy_order_is_total(self):
        for g in (lattice.fcc(2), lattice.bcc(2), EXAMPLE2):
            p = lattice.projection(g)
            assert p.side * p.graph.order == g.order

    def test_bad_axis(self):
        with pytest.raises(PreconditionError):
            lattice.projection(lattice.rtt(2), axis=5)


class TestLift:
    def test_hybrid_overlap(self):
        assert lattice.lift_overlap(lattice.pc(4), lattice.bcc(2)) == 2

    def test_hybrid_from_lift(self):
        g = lattice.common_lift(lattice.pc(4), lattice.bcc(2))
        assert g.equivalent(lattice.hybrid(2))
        assert g.order == 128

    def test_pc_over_fcc(self):
        g = lattice.common_lift(lattice.pc(4), lattice.fcc(2))
        assert g.n == 5
        assert g.hermite == (
            (4, 0, 0, 2, 2),
            (0, 4, 0, 0, 0),
            (0, 0, 4, 0, 0),
            (0, 0, 0, 2, 0),
            (0, 0, 0, 0, 2),
        )
        assert g.order == 256

    def test_fcc_over_bcc(self):
        g = lattice.common_lift(lattice.fcc(2), lattice.bcc(2))
        assert g.n == 5
        assert g.hermite == (
            (4, 2, 2, 0, 2),
            (0, 2, 0, 0, 0),
            (0, 0, 2, 0, 0),
            (0, 0, 0, 4, 2),
            (0, 0, 0, 0, 2),
        )
        assert g.order == 128

    def test_square_torus_over_twisted_rectangle(self):
        g = lattice.common_lift(lattice.torus((4, 4)), lattice.rtt(2))
        assert g.n == 3
        assert g.hermite == ((4, 0, 2), (0, 4, 0), (0, 0, 2))
        assert g.order == 32

    def test_disjoint_lift_is_cartesian_product(self):
        g = lattice.common_lift(lattice.rtt(2), lattice.torus((3, 3)))
        assert g.n == 4
        assert g.order == 72
        assert g.hermite == (
            (4, 2, 0, 0),
            (0, 2, 0, 0),
            (0, 0, 3, 0),
            (0, 0, 0, 3),
        )

    def test_self_lift_is_identity(self):
        g = lattice.fcc(3)
        assert lattice.common_lift(g, g).equivalent(g)

    def test_lift_projects_back_to_right_operand(self):
        left, right = lattice.pc(4), lattice.bcc(2)
        g = lattice.common_lift(left, right)
        p = lattice.projection(g)
        assert p.graph.equivalent(left)


class TestDistances:
    def test_torus_known_values(self):
        g = lattice.torus((4, 4))
        dist = lattice.single_source_distances(g)
        assert dist[g.index((0, 0))] == 0
        assert dist.max() == 4
        assert (dist == 1).sum() == 4
        assert (dist >= 0).all()

    def test_symmetry_of_distance(self):
        g = lattice.fcc(3)
        dist = lattice.single_source_distances(g)
        rng = random.Random(3)
        vs = list(g.vertices())
        for _ in range(100):
            v, w = rng.choice(vs), rng.choice(vs)
            assert dist[g.index(g.delta(v, w))] == dist[g.index(g.delta(w, v))]

    def test_matches_per_source_bfs(self):
        g = lattice.rtt(3)
        dist0 = lattice.single_source_distances(g)
        for src in range(g.order):
            per = lattice.single_source_distances(g, source=src)
            lbl_src = g.label(src)
            for idx in range(g.order):
                assert per[idx] == dist0[g.index(g.delta(lbl_src, g.label(idx)))]
