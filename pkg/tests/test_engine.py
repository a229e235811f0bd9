import random

import pytest

from sessionrec import (
    ClassWeights,
    DegreeScope,
    RecommendParams,
    RecommendationVector,
    Variant,
    expand_one,
    expand_two,
    kernel_id,
    object_id,
    rank,
    recommend,
    recommend_pathway,
    recommend_three_layer,
    score_candidates,
)
from sessionrec.errors import (
    EmptyPathwayError,
    GraphNotFrozenError,
    InvalidGraphError,
    MissingWeightsError,
    UnknownObjectError,
)
from sessionrec.graph import KernelClass, SessionGraph
from sessionrec.synth import build_graph, random_session_rows

from conftest import make_graph
from oracle import brute_force_vector


def entries_as_raw(vec):
    return [(obj.raw, score) for obj, score in vec.entries]


# -- expansion over the walkthrough graph ----------------------------------

def test_expand_one_worked(worked_graph):
    nb = expand_one(worked_graph, object_id("o3"))
    assert nb.kernels == {
        kernel_id("K1", "j2"),
        kernel_id("K1", "j4"),
        kernel_id("K1", "j5"),
    }
    assert nb.candidates == frozenset()


def test_expand_two_worked(worked_graph):
    nb = expand_two(worked_graph, expand_one(worked_graph, object_id("o3")))
    assert {o.raw for o in nb.candidates} == {
        "o2", "o3", "o4", "o5", "o6", "o7", "o8", "o9",
    }
    assert object_id("o3") in nb.candidates
    assert all(kernel in nb.kernels for kernel, _ in nb.candidate_edges)
    assert {obj for _, obj in nb.candidate_edges} == nb.candidates


def test_expand_one_f1(f1_graph):
    nb = expand_one(f1_graph, object_id("a"))
    assert {k.raw for k in nb.kernels} == {"j1", "j2", "j3"}


def test_expand_single_session_object(f1_graph):
    nb = expand_one(f1_graph, object_id("c"))
    assert len(nb.kernels) == 1


def test_expand_unknown_object(f1_graph):
    with pytest.raises(UnknownObjectError):
        expand_one(f1_graph, object_id("zz"))


# -- scoring ----------------------------------------------------------------

def test_scores_subgraph_f1(f1_graph):
    nb = expand_two(f1_graph, expand_one(f1_graph, object_id("a")))
    scores = score_candidates(f1_graph, nb, RecommendParams())
    assert {obj.raw: s for obj, s in scores.items()} == {"a": 3, "b": 2, "c": 1}


def test_scores_global_worked(worked_graph):
    nb = expand_two(worked_graph, expand_one(worked_graph, object_id("o3")))
    params = RecommendParams(degree_scope=DegreeScope.GLOBAL)
    scores = {o.raw: s for o, s in score_candidates(worked_graph, nb, params).items()}
    assert scores["o2"] == 3
    assert scores["o5"] == 2
    assert scores["o6"] == 1
    assert scores["o8"] == 2


def test_weighted_all_ones_equals_base(f1_graph):
    nb = expand_two(f1_graph, expand_one(f1_graph, object_id("a")))
    base = score_candidates(f1_graph, nb, RecommendParams())
    weighted = score_candidates(
        f1_graph,
        nb,
        RecommendParams(
            variant=Variant.WEIGHTED, weights=ClassWeights({"K1": 1, "K2": 1})
        ),
    )
    assert base == weighted


def test_weighted_scores_scale_with_class_weight(f1_graph):
    params = RecommendParams(
        variant=Variant.WEIGHTED, weights=ClassWeights({"K1": 2.0})
    )
    vec = recommend(f1_graph, object_id("a"), params)
    assert entries_as_raw(vec) == [("b", 4.0), ("c", 2.0)]


def test_weighted_zero_weight_drops_candidates(f1_graph):
    params = RecommendParams(
        variant=Variant.WEIGHTED, weights=ClassWeights({"K1": 0.0})
    )
    vec = recommend(f1_graph, object_id("a"), params)
    assert vec.entries == ()


def test_weighted_requires_weights():
    with pytest.raises(MissingWeightsError):
        RecommendParams(variant=Variant.WEIGHTED)


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        ClassWeights({"K1": -0.5})


def test_parse_weights():
    weights = ClassWeights.parse("K1=2,K2=0.5")
    assert weights.weight_of("K1") == 2.0
    assert weights.weight_of("K2") == 0.5
    assert weights.weight_of("K9") == 1.0
    with pytest.raises(ValueError):
        ClassWeights.parse("K1")


# -- ranking ----------------------------------------------------------------

def test_rank_f1(f1_graph):
    nb = expand_two(f1_graph, expand_one(f1_graph, object_id("a")))
    scores = score_candidates(f1_graph, nb, RecommendParams())
    vec = rank(scores, {object_id("a")})
    assert entries_as_raw(vec) == [("b", 2), ("c", 1)]


def test_rank_all_excluded(f1_graph):
    nb = expand_two(f1_graph, expand_one(f1_graph, object_id("a")))
    scores = score_candidates(f1_graph, nb, RecommendParams())
    vec = rank(scores, set(scores))
    assert vec.entries == ()


def test_rank_truncates(f1_graph):
    vec = recommend(f1_graph, object_id("a"), RecommendParams(k=1))
    assert entries_as_raw(vec) == [("b", 2)]


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        RecommendParams(k=0)


def test_vector_invariants_enforced():
    a, b = object_id("a"), object_id("b")
    with pytest.raises(ValueError):
        RecommendationVector(seed=a, entries=((a, 1),))
    with pytest.raises(ValueError):
        RecommendationVector(seed=None, entries=((b, 1), (b, 1)))
    with pytest.raises(ValueError):
        RecommendationVector(seed=None, entries=((b, 1), (a, 2)))


# -- recommend --------------------------------------------------------------

def test_recommend_f1(f1_graph):
    vec = recommend(f1_graph, object_id("a"))
    assert entries_as_raw(vec) == [("b", 2), ("c", 1)]
    assert vec.seed == object_id("a")
    assert vec.params == RecommendParams()


def test_recommend_worked_base(worked_graph):
    vec = recommend(worked_graph, object_id("o3"))
    assert entries_as_raw(vec) == [
        ("o2", 2), ("o4", 1), ("o5", 1), ("o6", 1), ("o7", 1), ("o8", 1), ("o9", 1),
    ]


def test_recommend_worked_global(worked_graph):
    params = RecommendParams(degree_scope=DegreeScope.GLOBAL)
    vec = recommend(worked_graph, object_id("o3"), params)
    assert entries_as_raw(vec) == [
        ("o2", 3), ("o4", 2), ("o5", 2), ("o8", 2), ("o6", 1), ("o7", 1), ("o9", 1),
    ]


def test_recommend_degenerate_session():
    g = make_graph(["K1"], [("K1", "j1", "m"), ("K1", "j2", "x"), ("K1", "j2", "y")])
    assert recommend(g, object_id("m")).entries == ()


def test_recommend_requires_frozen_graph():
    g = SessionGraph([KernelClass("K1")])
    g.add_edge(kernel_id("K1", "j1"), "K1", object_id("a"))
    with pytest.raises(GraphNotFrozenError):
        recommend(g, object_id("a"))


def test_recommend_requires_valid_graph():
    g = SessionGraph([KernelClass("K1")])
    g.add_edge(kernel_id("K1", "j1"), "K1", object_id("a"))
    g.add_object(object_id("orphan"))
    g.freeze()
    with pytest.raises(InvalidGraphError):
        recommend(g, object_id("a"))


def test_recommend_deterministic(f1_graph):
    first = recommend(f1_graph, object_id("a"))
    second = recommend(f1_graph, object_id("a"))
    assert first == second


def test_truncated_vector_is_prefix(worked_graph):
    full = recommend(worked_graph, object_id("o3"))
    for k in range(1, len(full.entries) + 1):
        cut = recommend(worked_graph, object_id("o3"), RecommendParams(k=k))
        assert cut.entries == full.entries[:k]


def test_seed_dominance_worked(worked_graph):
    nb = expand_two(worked_graph, expand_one(worked_graph, object_id("o3")))
    scores = score_candidates(worked_graph, nb, RecommendParams())
    assert max(scores.values()) == scores[object_id("o3")]


# -- three-layer variant ------------------------------------------------------

def test_three_layer_reaches_second_degree_objects():
    # y never shares a session with m but co-occurs with candidate x;
    # j4 is a single-object session and must be pruned.
    g = make_graph(
        ["K1"],
        [
            ("K1", "j1", "m"),
            ("K1", "j1", "x"),
            ("K1", "j2", "x"),
            ("K1", "j2", "y"),
            ("K1", "j4", "x"),
        ],
    )
    vec = recommend_three_layer(g, object_id("m"))
    assert entries_as_raw(vec) == [("x", 2), ("y", 1)]


def test_three_layer_collapses_to_base_when_layers_coincide(f1_graph):
    three = recommend_three_layer(f1_graph, object_id("a"))
    base = recommend(f1_graph, object_id("a"))
    assert three.entries == base.entries


def test_three_layer_all_single_object_sessions():
    g = make_graph(["K1"], [("K1", "j1", "m"), ("K1", "j2", "x")])
    assert recommend_three_layer(g, object_id("m")).entries == ()


def test_recommend_dispatches_three_layer():
    g = make_graph(
        ["K1"],
        [
            ("K1", "j1", "m"),
            ("K1", "j1", "x"),
            ("K1", "j2", "x"),
            ("K1", "j2", "y"),
        ],
    )
    params = RecommendParams(variant=Variant.THREE_LAYER)
    assert recommend(g, object_id("m"), params) == recommend_three_layer(
        g, object_id("m"), params
    )


# -- pathway variant ----------------------------------------------------------

def test_pathway_single_seed_matches_recommend(f1_graph):
    single = recommend_pathway(f1_graph, [object_id("a")])
    base = recommend(f1_graph, object_id("a"))
    assert single.entries == base.entries


def test_pathway_two_seeds(f1_graph):
    vec = recommend_pathway(f1_graph, [object_id("a"), object_id("d")])
    assert entries_as_raw(vec) == [("b", 2), ("c", 1), ("e", 1)]
    assert vec.seed == (object_id("a"), object_id("d"))


def test_pathway_repeated_seed_counts_twice(f1_graph):
    doubled = recommend_pathway(f1_graph, [object_id("a"), object_id("a")])
    assert entries_as_raw(doubled) == [("b", 4), ("c", 2)]


def test_pathway_empty():
    with pytest.raises(EmptyPathwayError):
        recommend_pathway(make_graph(["K1"], [("K1", "j1", "a")]), [])


def test_pathway_unknown_objects_listed(f1_graph):
    with pytest.raises(UnknownObjectError) as excinfo:
        recommend_pathway(f1_graph, [object_id("a"), object_id("zz"), object_id("yy")])
    assert {n.raw for n in excinfo.value.nodes} == {"zz", "yy"}


# -- oracle equivalence -------------------------------------------------------

def test_matches_brute_force_on_random_graphs():
    for seed in range(10):
        rng = random.Random(seed)
        rows, class_ids = random_session_rows(rng, max_objects=40, max_kernels=60)
        g = build_graph(rows, class_ids)
        objects = g.object_ids()
        for m in objects[:: max(1, len(objects) // 5)]:
            expected = brute_force_vector(rows, m.raw)
            got = entries_as_raw(recommend(g, m))
            assert got == expected, f"seed={seed} m={m.raw}"


def test_recommended_objects_share_a_session_with_seed(f1_graph):
    for m in f1_graph.object_ids():
        vec = recommend(f1_graph, m)
        seed_kernels = f1_graph.kernels_of(m)
        for obj, score in vec.entries:
            assert score >= 1
            assert f1_graph.kernels_of(obj) & seed_kernels
