import io

import numpy as np
import pytest

from probcore.graph import (
    GraphFormatError,
    from_edges,
    connected_components,
    generate_random,
    induced_subgraph,
    parse_edge_list,
    row_sums,
    write_edge_list,
)

from builders import graph_of
from oracles import union_find_components


def test_parse_example(example_graph):
    g = example_graph
    assert g.n == 6
    assert g.m == 6
    assert g.vertex_tokens == ["0", "1", "2", "3", "4", "5"]
    g.validate()


def test_parse_empty_input():
    g = parse_edge_list("")
    assert g.n == 0 and g.m == 0
    g = parse_edge_list("# only a comment\n\n")
    assert g.n == 0 and g.m == 0


def test_parse_tokens_in_first_appearance_order():
    g = parse_edge_list("b a 0.5\nc a 0.5\n")
    assert g.vertex_tokens == ["b", "a", "c"]


def test_parse_comments_and_blank_lines():
    g = parse_edge_list("# header\n\n0 1 0.5\n   \n# tail\n1 2 0.25\n")
    assert g.n == 3 and g.m == 2


def test_parse_self_loop_reports_line():
    with pytest.raises(GraphFormatError, match="line 1"):
        parse_edge_list("a a 0.5\n")


def test_parse_errors_carry_line_numbers():
    cases = [
        ("0 1 0.5\n0 1\n", "line 2"),
        ("0 1 0.5\n1 2 zero\n", "line 2"),
        ("0 1 0.5\n1 2 0.0\n", "line 2"),
        ("0 1 0.5\n1 2 1.5\n", "line 2"),
        ("0 1 0.5\n1 0 0.5\n", "line 2"),
    ]
    for text, needle in cases:
        with pytest.raises(GraphFormatError, match=needle):
            parse_edge_list(text)


def test_parse_rejects_negative_probability():
    with pytest.raises(GraphFormatError):
        parse_edge_list("0 1 -0.5\n")


def test_from_edges_rejects_duplicates_and_loops():
    with pytest.raises(ValueError, match="duplicate"):
        from_edges(["a", "b"], [0, 1], [1, 0], [0.5, 0.5])
    with pytest.raises(ValueError, match="self-loop"):
        from_edges(["a"], [0], [0], [0.5])


def test_adjacency_is_sorted_and_symmetric(example_graph):
    g = example_graph
    for v in range(g.n):
        row = g.neighbors(v)
        assert np.all(np.diff(row) > 0)
    # edge (1,3) has the same probability from both ends
    one, three = g.id_of("1"), g.id_of("3")
    k = int(np.searchsorted(g.neighbors(one), three))
    assert g.incident_probs(one)[k] == 0.6


def test_write_parse_round_trip(example_graph):
    buf = io.StringIO()
    write_edge_list(example_graph, buf)
    again = parse_edge_list(buf.getvalue())
    assert again == example_graph


def _edge_map(g):
    out = {}
    for u in range(g.n):
        for k in range(g.indptr[u], g.indptr[u + 1]):
            v = int(g.indices[k])
            if v > u:
                key = tuple(sorted((g.vertex_tokens[u], g.vertex_tokens[v])))
                out[key] = float(g.probs[k])
    return out


def test_round_trip_preserves_exact_floats():
    # generated ids need not follow appearance order, so compare the
    # token-level edge maps, bit-for-bit on probabilities
    for trial in range(20):
        g = generate_random(30, 60, prob_law="uniform", seed=trial)
        buf = io.StringIO()
        write_edge_list(g, buf)
        again = parse_edge_list(buf.getvalue())
        assert _edge_map(again) == _edge_map(g)


def test_round_trip_identity_for_parsed_graphs():
    # appearance order must survive write + parse even when the first
    # vertex's adjacency would list later-introduced tokens first
    text = "a b .5\nb c .5\na d .5\n"
    g = parse_edge_list(text)
    for _ in range(3):
        buf = io.StringIO()
        write_edge_list(g, buf)
        again = parse_edge_list(buf.getvalue())
        assert again == g
        g = again
    for trial in range(10):
        g0 = generate_random(25, 50, prob_law="uniform", seed=100 + trial)
        buf = io.StringIO()
        write_edge_list(g0, buf)
        g1 = parse_edge_list(buf.getvalue())  # appearance-ordered now
        buf = io.StringIO()
        write_edge_list(g1, buf)
        assert parse_edge_list(buf.getvalue()) == g1


def test_graph_is_immutable(example_graph):
    with pytest.raises(ValueError):
        example_graph.probs[0] = 0.9


def test_degree_sum_is_twice_m():
    for seed in range(10):
        g = generate_random(40, 100, seed=seed)
        assert int(np.diff(g.indptr).sum()) == 2 * g.m


def test_generate_is_deterministic():
    a = generate_random(1000, 5000, prob_law="uniform", seed=1)
    b = generate_random(1000, 5000, prob_law="uniform", seed=1)
    assert a == b
    c = generate_random(1000, 5000, prob_law="uniform", seed=2)
    assert c != a


def test_generate_uniform_mean_probability():
    g = generate_random(1000, 5000, prob_law="uniform", seed=1)
    assert abs(float(g.probs.mean()) - 0.5) < 0.05


def test_generate_complete_graph_constant_law():
    g = generate_random(4, 6, prob_law="constant", seed=123)
    assert g.m == 6
    assert np.all(g.probs == 1.0)
    assert all(g.degree(v) == 3 for v in range(4))


def test_generate_constant_with_parameter():
    g = generate_random(10, 20, prob_law="constant:0.25", seed=0)
    assert np.all(g.probs == 0.25)


def test_generate_beta_law_in_range():
    g = generate_random(50, 200, prob_law="beta:2,5", seed=3)
    assert float(g.probs.min()) > 0.0
    assert float(g.probs.max()) <= 1.0
    g.validate()


def test_generate_rejects_bad_requests():
    with pytest.raises(ValueError):
        generate_random(3, 4)  # only 3 possible edges
    with pytest.raises(ValueError):
        generate_random(5, 2, prob_law="nonsense")
    with pytest.raises(ValueError):
        generate_random(5, 2, prob_law="constant:0")
    with pytest.raises(ValueError):
        generate_random(-1, 0)


def test_generate_edge_counts_exact():
    for n, m, seed in ((10, 45, 0), (100, 99, 1), (57, 800, 2), (12, 0, 3)):
        g = generate_random(n, m, seed=seed)
        assert g.n == n and g.m == m
        g.validate()


def test_induced_subgraph_example(example_graph):
    mask = np.zeros(6, dtype=bool)
    for t in ("1", "2", "3", "4"):
        mask[example_graph.id_of(t)] = True
    sub = induced_subgraph(example_graph, mask)
    assert sub.n == 4 and sub.m == 4
    assert sorted(sub.probs.tolist()) == [0.4, 0.4, 0.4, 0.4, 0.6, 0.6, 0.6, 0.6]
    assert sub.vertex_tokens == ["1", "2", "3", "4"]
    sub.validate()


def test_induced_subgraph_identity_and_empty(example_graph):
    allv = np.ones(6, dtype=bool)
    assert induced_subgraph(example_graph, allv) == example_graph
    none = np.zeros(6, dtype=bool)
    empty = induced_subgraph(example_graph, none)
    assert empty.n == 0 and empty.m == 0


def test_induced_subgraph_is_monotone():
    for seed in range(10):
        g = generate_random(30, 100, seed=seed)
        rng = np.random.default_rng(seed)
        big = rng.random(30) < 0.8
        small = big & (rng.random(30) < 0.7)
        assert induced_subgraph(g, small).m <= induced_subgraph(g, big).m


def test_connected_components_example(example_graph):
    comps = connected_components(example_graph)
    assert len(comps) == 1
    assert int(comps[0].sum()) == 6


def test_connected_components_edgeless():
    g = graph_of([], n=3)
    comps = connected_components(g)
    assert len(comps) == 3
    assert all(int(c.sum()) == 1 for c in comps)


def test_connected_components_two_triangles():
    g = graph_of([(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5),
                  (3, 4, 0.5), (4, 5, 0.5), (3, 5, 0.5)])
    comps = connected_components(g)
    assert len(comps) == 2
    assert [int(c.sum()) for c in comps] == [3, 3]


def test_connected_components_match_union_find():
    for seed in range(15):
        g = generate_random(40, 50, seed=seed)
        ours = [set(np.flatnonzero(c)) for c in connected_components(g)]
        theirs = union_find_components(g)
        assert sorted(map(sorted, ours)) == sorted(map(sorted, theirs))


def test_row_sums_matches_python_loop():
    rng = np.random.default_rng(9)
    for _ in range(20):
        g = generate_random(25, 60, seed=int(rng.integers(1 << 30)))
        got = row_sums(g.indptr, g.probs)
        want = [float(g.incident_probs(v).sum()) for v in range(g.n)]
        assert np.allclose(got, want, atol=1e-12)
