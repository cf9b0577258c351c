from itertools import product

import pytest

from treedim import (
    RngSpec,
    brute_force_md,
    build_from_parents,
    is_resolving,
    md_report,
    resolving_witness,
    sample_uniform_tree,
)
from treedim.errors import TooLarge, VertexOutOfRange


def chain(n):
    return build_from_parents([None] + list(range(n - 1)))


def star(leaves):
    return build_from_parents([None] + [0] * leaves)


def spider_three_legs_of_two():
    # center 0, legs 0-1-2, 0-3-4, 0-5-6
    return build_from_parents([None, 0, 1, 0, 3, 0, 5])


class TestReport:
    def test_path(self):
        report = md_report(chain(5))
        assert report.is_path and report.beta == 1
        assert report.leaves == (0, 4)
        assert report.exterior_major == ()

    def test_single_vertex(self):
        report = md_report(build_from_parents([None]))
        assert report.is_path and report.beta == 0

    def test_star(self):
        report = md_report(star(3))
        assert not report.is_path
        assert set(report.leaves) == {1, 2, 3}
        assert report.exterior_major == (0,)
        assert report.beta == 2

    def test_spider(self):
        report = md_report(spider_three_legs_of_two())
        assert len(report.leaves) == 3
        assert report.exterior_major == (0,)
        assert report.beta == 2

    def test_major_vertex_counted_once(self):
        # two leaf-lines meeting the same degree-3 vertex
        t = build_from_parents([None, 0, 1, 1, 2, 3])
        report = md_report(t)
        assert report.exterior_major == (1,)

    def test_exterior_majors_have_degree_three(self):
        rng = RngSpec(21).stream(0)
        from treedim import degrees

        for _ in range(50):
            t = sample_uniform_tree(int(rng.integers(4, 40)), rng)
            report = md_report(t)
            if report.is_path:
                continue
            deg = degrees(t).deg
            assert all(deg[v] >= 3 for v in report.exterior_major)
            assert len(report.leaves) > len(report.exterior_major)


class TestResolving:
    def test_path_end_vertex_resolves(self):
        assert is_resolving(chain(3), {0})

    def test_star_single_leaf_fails_by_symmetry(self):
        assert not is_resolving(star(3), {1})

    def test_star_two_leaves_resolve(self):
        assert is_resolving(star(3), {1, 2})

    def test_empty_set(self):
        assert is_resolving(build_from_parents([None]), set())
        assert not is_resolving(chain(2), set())

    def test_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            is_resolving(chain(3), {7})

    def test_witness_table_shape(self):
        witness = resolving_witness(chain(3), {0})
        assert witness.distance_table == ((0, 1, 2),)


class TestBruteForce:
    def test_single_vertex(self):
        assert brute_force_md(build_from_parents([None])) == (0, ())

    def test_edge(self):
        assert brute_force_md(build_from_parents([None, 0])) == (1, (0,))

    def test_star_witness_is_two_leaves(self):
        beta, witness = brute_force_md(star(3))
        assert beta == 2 and witness == (1, 2)

    def test_cap(self):
        with pytest.raises(TooLarge):
            brute_force_md(chain(17))
        brute_force_md(chain(17), cap=17)

    def test_witness_resolves(self):
        rng = RngSpec(31).stream(0)
        for _ in range(30):
            t = sample_uniform_tree(int(rng.integers(2, 11)), rng)
            beta, witness = brute_force_md(t)
            assert is_resolving(t, witness)
            assert len(witness) == beta

    def test_monotone_under_additions(self):
        rng = RngSpec(32).stream(0)
        for _ in range(20):
            t = sample_uniform_tree(int(rng.integers(3, 11)), rng)
            _, witness = brute_force_md(t)
            extra = set(witness)
            for v in range(t.n):
                extra.add(v)
                assert is_resolving(t, extra)


class TestOracleEquivalence:
    def test_exhaustive_small_increasing_trees(self):
        for n in range(2, 8):
            for choice in product(*[range(i) for i in range(1, n)]):
                t = build_from_parents([None, *choice])
                assert md_report(t).beta == brute_force_md(t)[0]

    def test_random_trees(self):
        spec = RngSpec(33)
        for i in range(200):
            rng = spec.stream(i)
            t = sample_uniform_tree(int(rng.integers(2, 13)), rng)
            assert md_report(t).beta == brute_force_md(t)[0]
