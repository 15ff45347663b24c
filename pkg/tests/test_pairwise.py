import pytest
from hypothesis import given, settings

from wspanner.core import (
    BudgetMode,
    WeightedGraph,
    build_path_table,
    terminal_pairs,
    verify_spanner,
)
from wspanner.generate import GeneratorSpec, Model, generate
from wspanner.pairwise import (
    PairwiseAlgo,
    PairwiseParams,
    advertised_budget,
    d_light_init,
    default_d,
    default_ell,
    limited_missing_path,
    pairwise_spanner,
    pairwise_spanner_run,
    shortest_path_tree,
)

from strategies import graphs_with_pairs

TRIANGLE = WeightedGraph(3, ((0, 1, 1), (1, 2, 1), (0, 2, 3)))
TRIANGLE_123 = WeightedGraph(3, ((0, 1, 1), (1, 2, 2), (0, 2, 3)))
ALL_ALGOS = list(PairwiseAlgo)


class TestDefaults:
    def test_d_exact_on_perfect_powers(self):
        assert default_d(PairwiseAlgo.P2W, 8) == 2       # 8^(1/3)
        assert default_d(PairwiseAlgo.P2W, 9) == 3       # ceil(9^(1/3))
        assert default_d(PairwiseAlgo.P2W, 27) == 3
        assert default_d(PairwiseAlgo.P8W, 16) == 2      # 16^(1/4)
        assert default_d(PairwiseAlgo.P8W, 17) == 3
        assert default_d(PairwiseAlgo.P4W, 128) == 4     # 128^(2/7) = 4
        assert default_d(PairwiseAlgo.P4W, 129) == 5

    def test_ell_exact(self):
        assert default_ell(PairwiseAlgo.P2W, 3, 1) == 3          # n / 1
        assert default_ell(PairwiseAlgo.P2W, 100, 8) == 25       # 100 / 8^(2/3)
        assert default_ell(PairwiseAlgo.P2W, 100, 1000) == 1     # 100/100
        assert default_ell(PairwiseAlgo.P8W, 10, 10000) == 1     # clamped to 1

    def test_budgets(self):
        assert advertised_budget(PairwiseParams(PairwiseAlgo.P2W)).mode is BudgetMode.LOCAL
        assert advertised_budget(PairwiseParams(PairwiseAlgo.P2W)).c == 2
        assert advertised_budget(PairwiseParams(PairwiseAlgo.P4W)).c == 4
        p8 = advertised_budget(PairwiseParams(PairwiseAlgo.P8W))
        assert p8.mode is BudgetMode.GLOBAL and p8.c == 6
        relabeled = advertised_budget(PairwiseParams(PairwiseAlgo.P8W, relabel_plus8=True))
        assert relabeled.c == 8

    def test_rejects_nonpositive_overrides(self):
        with pytest.raises(ValueError):
            PairwiseParams(PairwiseAlgo.P2W, d_override=0)
        with pytest.raises(ValueError):
            PairwiseParams(PairwiseAlgo.P2W, ell_override=0)


class TestDLightInit:
    def test_d_at_least_max_degree_returns_all_edges(self):
        g = generate(GeneratorSpec(Model.ER, 15, 2))
        max_deg = max(g.degree(v) for v in range(g.n))
        assert d_light_init(g, max_deg) == g.edge_set

    def test_star_every_leaf_claims_its_edge(self):
        star = WeightedGraph(4, ((0, 1, 1), (0, 2, 2), (0, 3, 3)))
        assert d_light_init(star, 1) == star.edge_set

    def test_triangle_d1_drops_heaviest(self):
        assert d_light_init(TRIANGLE_123, 1) == {(0, 1), (1, 2)}

    def test_tie_prefers_smaller_neighbor(self):
        g = WeightedGraph(3, ((0, 1, 2), (0, 2, 2)))
        assert (0, 1) in d_light_init(g, 1)

    def test_rejects_d_zero(self):
        with pytest.raises(ValueError):
            d_light_init(TRIANGLE, 0)


@given(graphs_with_pairs())
@settings(max_examples=40, deadline=None)
def test_d_light_init_monotone_in_d(gp):
    g, _ = gp
    previous = set()
    for d in range(1, g.n + 1):
        current = d_light_init(g, d)
        assert previous <= current
        previous = current


class TestShortestPathTree:
    def test_tree_input_returns_all_edges(self):
        tree = WeightedGraph(5, ((0, 1, 2), (1, 2, 1), (1, 3, 4), (3, 4, 1)))
        assert shortest_path_tree(tree, 2) == tree.edge_set

    def test_triangle_root_zero(self):
        assert shortest_path_tree(TRIANGLE, 0) == {(0, 1), (1, 2)}

    def test_k2(self):
        assert shortest_path_tree(WeightedGraph(2, ((0, 1, 7),)), 1) == {(0, 1)}

    def test_matches_path_table_variant(self):
        g = generate(GeneratorSpec(Model.ER, 12, 5))
        pt = build_path_table(g)
        for root in range(g.n):
            assert shortest_path_tree(g, root) == shortest_path_tree(g, root, pt)

    def test_disconnected_raises(self):
        with pytest.raises(ValueError):
            shortest_path_tree(WeightedGraph(3, ((0, 1, 1),)), 0)


class TestLimitedMissingPath:
    def test_large_cap_gives_shortest_path_weight(self):
        pt = build_path_table(TRIANGLE)
        path = limited_missing_path(TRIANGLE, 0, 2, set(), TRIANGLE.n - 1)
        weight = sum(TRIANGLE.weight(a, b) for a, b in zip(path, path[1:]))
        assert weight == pt.dist(0, 2)

    def test_cap_zero_without_connection_is_none(self):
        assert limited_missing_path(TRIANGLE, 0, 2, set(), 0) is None

    def test_cap_zero_uses_present_heavy_edge(self):
        assert limited_missing_path(TRIANGLE, 0, 2, {(0, 2)}, 0) == (0, 2)

    def test_trivial_endpoints(self):
        assert limited_missing_path(TRIANGLE, 1, 1, set(), 0) == (1,)

    def test_rejects_negative_cap(self):
        with pytest.raises(ValueError):
            limited_missing_path(TRIANGLE, 0, 1, set(), -1)

    def test_prefers_fewer_missing_edges_on_weight_tie(self):
        # routes 0-1-3 and 0-2-3 both weigh 2; only 0-2-3 is fully present
        g = WeightedGraph(4, ((0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)))
        path = limited_missing_path(g, 0, 3, {(0, 2), (2, 3)}, 2)
        assert path == (0, 2, 3)


class TestPairwiseSpanner:
    def test_triangle_p2w_defaults(self):
        pt = build_path_table(TRIANGLE)
        params = PairwiseParams(PairwiseAlgo.P2W, seed=0)
        h, report = pairwise_spanner_run(TRIANGLE, [(0, 2)], params, pt)
        assert report.d == 1 and report.ell == 3
        assert h == {(0, 1), (1, 2)}
        assert report.passes == 1 and not report.fallback

    def test_canonical_path_inside_init_needs_no_retries(self):
        g = generate(GeneratorSpec(Model.ER, 20, 8))
        pt = build_path_table(g)
        pair = terminal_pairs(range(g.n))[0]
        params = PairwiseParams(PairwiseAlgo.P2W, d_override=g.n, seed=0)
        h, report = pairwise_spanner_run(g, [pair], params, pt)
        assert report.passes == 1
        assert report.missing_trace[-1] == 0
        assert h == d_light_init(g, g.n)

    @pytest.mark.parametrize("algo", ALL_ALGOS)
    def test_zero_retries_patches_init_directly(self, algo):
        g = generate(GeneratorSpec(Model.ER, 18, 4))
        pt = build_path_table(g)
        pairs = terminal_pairs(range(0, g.n, 3))
        params = PairwiseParams(algo, max_retries=0, seed=1)
        h, report = pairwise_spanner_run(g, pairs, params, pt)
        assert report.fallback and report.passes == 0
        init = d_light_init(g, report.d)
        budget = advertised_budget(params)
        expected = set(init)
        for pair in verify_spanner(g, init, pairs, budget, pt):
            expected.update(e for e in pt.path_edges(*pair) if e not in init)
        assert h == expected
        assert verify_spanner(g, h, pairs, budget, pt) == []

    @pytest.mark.parametrize("algo", ALL_ALGOS)
    def test_deterministic_given_seed(self, algo):
        g = generate(GeneratorSpec(Model.ER, 16, 9))
        pt = build_path_table(g)
        pairs = terminal_pairs(range(0, g.n, 2))
        params = PairwiseParams(algo, seed=77)
        assert pairwise_spanner(g, pairs, params, pt) == pairwise_spanner(g, pairs, params, pt)

    def test_rejects_empty_pairs(self):
        with pytest.raises(ValueError):
            pairwise_spanner(TRIANGLE, [], PairwiseParams(PairwiseAlgo.P2W))

    def test_rejects_disconnected_pair(self):
        g = WeightedGraph(4, ((0, 1, 1), (2, 3, 1)))
        with pytest.raises(ValueError):
            pairwise_spanner(g, [(0, 3)], PairwiseParams(PairwiseAlgo.P2W))

    @pytest.mark.parametrize("algo", ALL_ALGOS)
    def test_disconnected_graph_with_connected_pairs(self, algo):
        # two components; all requested pairs stay inside the first
        left = generate(GeneratorSpec(Model.ER, 8, 6))
        edges = left.edges + ((8, 9, 1),)
        g = WeightedGraph(10, edges)
        pt = build_path_table(g)
        pairs = terminal_pairs(range(5))
        params = PairwiseParams(algo, ell_override=1, seed=2)
        h = pairwise_spanner(g, pairs, params, pt)
        assert verify_spanner(g, h, pairs, advertised_budget(params), pt) == []


@pytest.mark.parametrize("algo", ALL_ALGOS)
@given(gp=graphs_with_pairs())
@settings(max_examples=25, deadline=None)
def test_output_meets_advertised_budget(algo, gp):
    g, pairs = gp
    pt = build_path_table(g)
    params = PairwiseParams(algo, seed=5)
    h = pairwise_spanner(g, pairs, params, pt)
    assert h <= g.edge_set
    assert verify_spanner(g, h, pairs, advertised_budget(params), pt) == []


@pytest.mark.parametrize("algo", ALL_ALGOS)
def test_d_override_sweep_outputs_stay_valid(algo):
    g = generate(GeneratorSpec(Model.ER, 25, 13))
    pt = build_path_table(g)
    pairs = terminal_pairs(range(0, g.n, 2))
    base = default_d(algo, len(pairs))
    d = base
    while True:
        params = PairwiseParams(algo, d_override=d, seed=3)
        h = pairwise_spanner(g, pairs, params, pt)
        assert verify_spanner(g, h, pairs, advertised_budget(params), pt) == []
        if d == 1:
            break
        d = (d + 1) // 2
