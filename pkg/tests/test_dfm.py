import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_dfm, exact_similarity
from otcluster import (
    Dfm, OcelLog, discover_dfm, export_dot, pairwise_similarity, parse_ocel, postset, preset,
    similarity_matrix, to_markov,
)
from otcluster.dfm import dfm_from_json, dfm_to_json
from otcluster.errors import UnknownObjectType, UnknownTask

RUNNING_FREQ = {
    ("po", "o", "ca"): 3, ("po", "i", "ca"): 6, ("ca", "o", "ca"): 3, ("ca", "i", "ca"): 3,
    ("ca", "o", "pi"): 6, ("ca", "i", "pi"): 6, ("pi", "o", "ca"): 3, ("sp", "p", "sr"): 2,
}
RUNNING_DFM = Dfm(("o", "i", "p"), ("po", "ca", "pi", "sp", "sr"), RUNNING_FREQ)


def test_empty_log():
    dfm = discover_dfm(OcelLog())
    assert dfm.object_types == () and dfm.tasks == () and dict(dfm.freq) == {}


def test_three_event_log(three_event_bytes):
    dfm = discover_dfm(parse_ocel(three_event_bytes))
    assert dict(dfm.freq) == {("A", "order", "B"): 1, ("B", "item", "C"): 1}
    assert dfm.tasks == ("A", "B", "C")


def test_running_example_frequencies(running_log):
    dfm = discover_dfm(running_log)
    assert dict(dfm.freq) == RUNNING_FREQ
    assert set(dfm.tasks) == {"po", "ca", "pi", "sp", "sr"}
    assert set(dfm.object_types) == {"o", "i", "p"}


def test_restricted_discovery(running_log):
    dfm = discover_dfm(running_log, ["i", "o"])
    assert set(dfm.object_types) == {"i", "o"}
    assert set(dfm.tasks) == {"po", "ca", "pi"}
    assert dict(dfm.freq) == {r: n for r, n in RUNNING_FREQ.items() if r[1] != "p"}
    assert dfm == discover_dfm(running_log).restrict(["o", "i"])
    with pytest.raises(UnknownObjectType):
        discover_dfm(running_log, ["x"])


def test_dfm_validation():
    with pytest.raises(UnknownTask):
        Dfm(("o",), ("a",), {("a", "o", "b"): 1})
    with pytest.raises(UnknownObjectType):
        Dfm(("o",), ("a",), {("a", "x", "a"): 1})
    with pytest.raises(ValueError):
        Dfm(("o",), ("a",), {("a", "o", "a"): 0})


@pytest.mark.parametrize("t, thetas, expected", [
    ("ca", {"i"}, {"po", "ca"}),
    ("ca", {"o"}, {"po", "ca", "pi"}),
    ("po", {"o", "i", "p"}, set()),
])
def test_preset(t, thetas, expected):
    assert preset(RUNNING_DFM, t, thetas) == expected


@pytest.mark.parametrize("t, thetas, expected", [
    ("ca", {"i"}, {"ca", "pi"}),
    ("po", {"o"}, {"ca"}),
    ("sr", {"p"}, set()),
])
def test_postset(t, thetas, expected):
    assert postset(RUNNING_DFM, t, thetas) == expected


def test_set_operator_errors():
    with pytest.raises(UnknownTask):
        preset(RUNNING_DFM, "zz", {"o"})
    with pytest.raises(UnknownObjectType):
        postset(RUNNING_DFM, "ca", {"zz"})


def test_probabilities():
    m = to_markov(RUNNING_DFM)
    assert m.prob["ca", "o", "pi"] == pytest.approx(2 / 3, abs=1e-12)
    assert m.prob["ca", "o", "ca"] == pytest.approx(1 / 3, abs=1e-12)
    assert m.prob["po", "o", "ca"] == 1.0
    assert m.prob["sp", "p", "sr"] == 1.0
    assert set(m.prob) == set(RUNNING_FREQ)


def test_probability_matrices():
    m = to_markov(RUNNING_DFM)
    # tasks in sorted order: ca, pi, po, sp, sr
    third = 1 / 3
    p_i = np.zeros((5, 5))
    p_i[0, 0], p_i[0, 1], p_i[2, 0] = third, 2 * third, 1
    p_o = p_i.copy()
    p_o[1, 0] = 1
    np.testing.assert_allclose(m.probability_matrix("i"), p_i)
    np.testing.assert_allclose(m.probability_matrix("o"), p_o)
    assert m.probability_matrix("p")[3, 4] == 1


def test_similarity_values():
    m = to_markov(RUNNING_DFM)
    assert pairwise_similarity(m, "i", "o") == pytest.approx(252 / 333, abs=1e-12)
    assert pairwise_similarity(m, "i", "p") == 0.0
    assert pairwise_similarity(m, "o", "p") == 0.0
    assert pairwise_similarity(m, "o", "o") == 1.0
    with pytest.raises(UnknownObjectType):
        pairwise_similarity(m, "o", "q")


def test_similarity_matrix_table():
    sm = similarity_matrix(to_markov(RUNNING_DFM))
    order = ("o", "i", "p")
    got = np.array([[sm[a, b] for b in order] for a in order])
    expected = np.array([[1, 0.76, 0], [0.76, 1, 0], [0, 0, 1]])
    assert np.abs(got - expected).max() < 0.005
    np.testing.assert_array_equal(sm.rounded(2), sm.rounded(2).T)


def test_single_type_matrix():
    sm = to_markov(Dfm(("t",), ("a", "b"), {("a", "t", "b"): 4})).sim_matrix
    assert sm.values.tolist() == [[1.0]]


def test_relationless_types():
    m = to_markov(Dfm(("a", "b", "c"), ("x", "y"), {("x", "c", "y"): 1}))
    assert m.sim("a", "b") == 0.0
    assert m.sim("a", "a") == 1.0


def test_duplicate_type_is_fully_similar():
    freq = dict(RUNNING_FREQ)
    freq.update({(s, "o2", t): 5 * n for (s, o, t), n in RUNNING_FREQ.items() if o == "o"})
    m = to_markov(Dfm(("o", "i", "p", "o2"), RUNNING_DFM.tasks, freq))
    assert m.sim("o", "o2") == 1.0
    assert m.sim("i", "o2") == m.sim("i", "o")


def test_matches_exact_oracle_on_running_example():
    m = to_markov(RUNNING_DFM)
    for a in m.object_types:
        for b in m.object_types:
            exact = exact_similarity(RUNNING_FREQ, RUNNING_DFM.tasks, a, b)
            assert m.sim(a, b) == pytest.approx(float(exact), abs=1e-12)
    assert exact_similarity(RUNNING_FREQ, RUNNING_DFM.tasks, "i", "o") == Fraction(252, 333)


@st.composite
def dfms(draw):
    types = [f"t{i}" for i in range(draw(st.integers(1, 4)))]
    tasks = [f"a{i}" for i in range(draw(st.integers(1, 4)))]
    keys = st.tuples(st.sampled_from(tasks), st.sampled_from(types), st.sampled_from(tasks))
    freq = draw(st.dictionaries(keys, st.integers(1, 20), max_size=12))
    return Dfm(tuple(types), tuple(tasks), freq)


@given(dfms())
@settings(max_examples=200, deadline=None)
def test_similarity_against_exact_oracle(dfm):
    m = to_markov(dfm)
    for a in dfm.object_types:
        for b in dfm.object_types:
            exact = exact_similarity(dfm.freq, dfm.tasks, a, b)
            assert m.sim(a, b) == pytest.approx(float(exact), abs=1e-12)


@given(dfms())
@settings(max_examples=200, deadline=None)
def test_markov_invariants(dfm):
    m = to_markov(dfm)
    totals = {}
    for (s, o, t), p in m.prob.items():
        totals[s, o] = totals.get((s, o), 0.0) + p
    assert all(abs(v - 1) < 1e-9 for v in totals.values())
    for (s, o, a), pa in m.prob.items():
        for (s2, o2, b), pb in m.prob.items():
            if (s2, o2) == (s, o):
                assert abs(pa / pb - dfm.freq[s, o, a] / dfm.freq[s, o, b]) < 1e-9
    v = m.sim_matrix.values
    assert np.array_equal(v, v.T)
    assert ((v >= 0) & (v <= 1)).all()
    assert (np.diag(v) == 1).all()


def test_brute_force_oracle_on_small_logs():
    import random
    from datetime import datetime, timedelta, timezone
    from otcluster import Event, ObjectInstance
    rng = random.Random(0)
    base = datetime(2022, 1, 1, tzinfo=timezone.utc)
    for _ in range(300):
        objects = {f"o{k}": ObjectInstance(f"o{k}", rng.choice("xy")) for k in range(3)}
        events = tuple(
            Event(f"e{i}", rng.choice("ABC"), base + timedelta(minutes=rng.randint(0, 2)),
                  tuple(rng.sample(sorted(objects), rng.randint(0, 3))))
            for i in range(rng.randint(0, 5))
        )
        log = OcelLog(events, objects)
        assert dict(discover_dfm(log).freq) == brute_force_dfm(log)


def test_frequency_conservation(running_log):
    total = sum(discover_dfm(running_log).freq.values())
    expected = sum(max(0, len(running_log.ordered_events_for_object(o)) - 1)
                   for o in running_log.objects)
    assert total == expected


def test_dot_empty():
    assert " ".join(export_dot(Dfm()).split()) == "digraph dfm { }"


def test_dot_running_example():
    dot = export_dot(RUNNING_DFM)
    lines = dot.splitlines()
    node_lines = [ln for ln in lines if ln.strip().endswith(";") and "->" not in ln
                  and "=" not in ln]
    edge_lines = [ln for ln in lines if "->" in ln]
    assert len(node_lines) == 5
    assert len(edge_lines) == 8
    colors = {ln.split("color=")[1].split(",")[0] for ln in edge_lines}
    assert len(colors) == 3
    assert 'label="f=3"' in dot
    assert dot == export_dot(RUNNING_DFM)


def test_dot_with_probabilities():
    dot = export_dot(to_markov(RUNNING_DFM), include_probabilities=True)
    assert '"ca" -> "pi" [label="f=6 p=0.67"' in dot
    assert export_dot(RUNNING_DFM, include_probabilities=True) == dot


def test_json_export_round_trip():
    text = dfm_to_json(RUNNING_DFM)
    doc = json.loads(text)
    assert doc["object_types"] == ["i", "o", "p"]
    assert doc["relations"] == sorted(doc["relations"],
                                      key=lambda r: (r["source"], r["otype"], r["target"]))
    assert len(doc["relations"]) == 8
    assert dfm_from_json(text) == RUNNING_DFM
