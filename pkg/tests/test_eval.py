import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npkg.errors import DataError, ParseError
from npkg.evaluate import (
    GroundTruthAssertion,
    Interaction,
    Polarity,
    PolarityTable,
    Verdict,
    classify_assertion,
    contradiction_pair_json,
    find_contradictory_edge_pairs,
    load_ground_truth,
    summarize_evaluation,
)
from npkg.relations import (
    DIRECTLY_POSITIVELY_REGULATES_QUANTITY_OF,
    INHIBITS,
    INTERACTS_WITH,
    MOLECULARLY_INTERACTS_WITH,
    NEGATIVELY_REGULATES,
    POSITIVELY_REGULATES,
)
from tests.conftest import lit, make_graph
from tests.oracles import contradiction_pairs

INH = Interaction.INHIBITS


def verdict_for(registry, rows, interaction=INH, a="X:1", b="Y:1", nodes=("X:1", "Y:1")):
    g = make_graph(registry, rows, nodes=nodes).seal()
    return classify_assertion(g, GroundTruthAssertion(a, b, interaction), PolarityTable.default(registry))


# -- classifier -------------------------------------------------------------------

@pytest.mark.parametrize("rels, expected", [
    ([INHIBITS], Verdict.CONGRUENT),
    ([POSITIVELY_REGULATES], Verdict.CONTRADICTORY),
    ([INTERACTS_WITH], Verdict.INDETERMINATE),
    ([INHIBITS, DIRECTLY_POSITIVELY_REGULATES_QUANTITY_OF], Verdict.BOTH),
    ([INHIBITS, INTERACTS_WITH], Verdict.CONGRUENT),
    ([], Verdict.NO_PATH),
])
def test_inhibition_cases(registry, rels, expected):
    v = verdict_for(registry, [("X:1", r, "Y:1") for r in rels])
    assert v.verdict is expected
    assert (v.verdict is Verdict.BOTH) == bool(v.supporting and v.opposing)


def test_fixture_examples(fixture_graph):
    pol = PolarityTable.default(fixture_graph.registry)
    cases = {("FIX:mitragynine", "FIX:CYP2C19"): Verdict.INDETERMINATE,
             ("FIX:mitragynine", "PR_000006130"): Verdict.BOTH,
             ("FIX:mitragynine", "PR_000006121"): Verdict.BOTH}
    for (a, b), want in cases.items():
        assert classify_assertion(fixture_graph, GroundTruthAssertion(a, b, INH), pol).verdict is want


def test_induction_mirrors_inhibition(registry):
    assert verdict_for(registry, [("X:1", POSITIVELY_REGULATES, "Y:1")], Interaction.INDUCES).verdict \
        is Verdict.CONGRUENT
    assert verdict_for(registry, [("X:1", NEGATIVELY_REGULATES, "Y:1")], Interaction.INDUCES).verdict \
        is Verdict.CONTRADICTORY


@pytest.mark.parametrize("rels, expected", [
    ([], Verdict.CONGRUENT),
    ([INHIBITS], Verdict.CONTRADICTORY),
    ([POSITIVELY_REGULATES], Verdict.CONTRADICTORY),
    ([MOLECULARLY_INTERACTS_WITH], Verdict.INDETERMINATE),
])
def test_no_interaction(registry, rels, expected):
    v = verdict_for(registry, [("X:1", r, "Y:1") for r in rels], Interaction.NO_INTERACTION)
    assert v.verdict is expected and not v.supporting


def test_path_uses_final_hop(registry):
    v = verdict_for(registry, [("X:1", POSITIVELY_REGULATES, "M:1"), ("M:1", INHIBITS, "Y:1")])
    assert v.verdict is Verdict.CONGRUENT and v.path.nodes == ("X:1", "M:1", "Y:1")
    assert v.as_dict()["basis"] == "shortest_path"


def test_missing_node(registry):
    v = verdict_for(registry, [], a="X:1", b="Q:1")
    assert v.verdict is Verdict.NO_PATH and "Q:1" in v.note


def test_direction_mode(registry):
    rows = [("Y:1", INHIBITS, "X:1")]
    assert verdict_for(registry, rows).verdict is Verdict.NO_PATH
    g = make_graph(registry, rows).seal()
    a = GroundTruthAssertion("X:1", "Y:1", INH)
    assert classify_assertion(g, a, PolarityTable.default(registry), directed=False).verdict is Verdict.CONGRUENT


def test_assertion_rejects_self_pair():
    with pytest.raises(ValueError):
        GroundTruthAssertion("X:1", "X:1", INH)


polar = st.sampled_from([INHIBITS, NEGATIVELY_REGULATES, POSITIVELY_REGULATES,
                         DIRECTLY_POSITIVELY_REGULATES_QUANTITY_OF, INTERACTS_WITH])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["X:1", "M:1", "Y:1"]), polar, st.sampled_from(["X:1", "M:1", "Y:1"])),
                max_size=8))
def test_flip_swaps_support_and_opposition(registry, rows):
    g = make_graph(registry, rows, nodes=["X:1", "Y:1"]).seal()
    pol = PolarityTable.default(registry)
    a = GroundTruthAssertion("X:1", "Y:1", INH)
    v, w = classify_assertion(g, a, pol), classify_assertion(g, a.flipped(), pol)
    assert v.supporting == w.opposing and v.opposing == w.supporting
    assert not set(v.supporting) & set(v.opposing)
    assert classify_assertion(g, a, pol).as_dict() == v.as_dict()


# -- summaries -------------------------------------------------------------------

def counts_to_verdicts(c, x, i, b):
    return [Verdict.CONGRUENT] * c + [Verdict.CONTRADICTORY] * x + [Verdict.INDETERMINATE] * i + [Verdict.BOTH] * b


def test_summary_percentages():
    rows = summarize_evaluation(counts_to_verdicts(23, 9, 25, 2))["rows"]
    assert [rows[k]["percent"] for k in ("CONGRUENT", "CONTRADICTORY", "INDETERMINATE", "BOTH")] == \
        [38.98, 15.25, 42.37, 3.39]


def test_empty_summary():
    s = summarize_evaluation([])
    assert s["total"] == 0 and all(r == {"count": 0} for r in s["rows"].values())


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(list(Verdict)), min_size=1, max_size=300))
def test_percentages_sum_to_100(verdicts):
    s = summarize_evaluation(verdicts)
    assert abs(sum(r["percent"] for r in s["rows"].values()) - 100) <= 0.02 + 1e-9
    assert sum(r["count"] for r in s["rows"].values()) == s["total"] == len(verdicts)


# -- polarity table and ground truth files -------------------------------------------

def test_default_polarity_covers_registry(registry):
    pol = PolarityTable.default(registry)
    assert pol.positive | pol.negative | pol.neutral == set(registry.ids())
    assert pol.of(INTERACTS_WITH) is Polarity.NEUTRAL and pol.of(INHIBITS) is Polarity.NEGATIVE


def test_polarity_file(tmp_path, registry):
    p = tmp_path / "p.tsv"
    p.write_text(f"relation_id\tpolarity\n{INHIBITS}\tnegative\n{INTERACTS_WITH}\tPOSITIVE\n")
    pol = PolarityTable.load(p, registry)
    assert pol.of(INTERACTS_WITH) is Polarity.POSITIVE and pol.of(POSITIVELY_REGULATES) is Polarity.NEUTRAL
    p.write_text(f"relation_id\tpolarity\n{INHIBITS}\tnegative\n{INHIBITS}\tpositive\n")
    with pytest.raises(DataError):
        PolarityTable.load(p)
    p.write_text(f"relation_id\tpolarity\n{INHIBITS}\tsideways\n")
    with pytest.raises(ParseError):
        PolarityTable.load(p)


def test_ground_truth_file(tmp_path):
    p = tmp_path / "g.tsv"
    p.write_text("np_node\ttarget_node\tinteraction\tevidence_type\nX:1\tY:1\tinhibits\tclinical\n")
    assert load_ground_truth(p) == [GroundTruthAssertion("X:1", "Y:1", INH, "clinical")]
    p.write_text("np_node\ttarget_node\tinteraction\tevidence_type\nX:1\tY:1\tblocks\tclinical\n")
    with pytest.raises(ParseError, match=":2:"):
        load_ground_truth(p)


# -- contradiction audit -------------------------------------------------------------

def test_neutral_only_graph_has_no_pairs(registry):
    g = make_graph(registry, [("X:1", INTERACTS_WITH, "Y:1"), ("X:1", MOLECULARLY_INTERACTS_WITH, "Y:1")])
    assert find_contradictory_edge_pairs(g, PolarityTable.default(registry)) == []


def test_pair_json_carries_years(registry):
    g = make_graph(registry, [("X:1", INHIBITS, "Y:1", lit(2013)), ("X:1", INHIBITS, "Y:1", lit(2017)),
                              ("X:1", POSITIVELY_REGULATES, "Y:1", lit(2013))])
    (pair,) = find_contradictory_edge_pairs(g, PolarityTable.default(registry))
    doc = contradiction_pair_json(pair)
    assert [e["year"] for e in doc["negative"]["evidence"]] == [2013, 2017]


@pytest.mark.parametrize("seed", range(10))
def test_pairs_match_double_loop(registry, seed):
    rnd = random.Random(seed)
    rels = [INHIBITS, NEGATIVELY_REGULATES, POSITIVELY_REGULATES, DIRECTLY_POSITIVELY_REGULATES_QUANTITY_OF,
            INTERACTS_WITH]
    g = make_graph(registry, [(f"N:{rnd.randrange(6)}", rnd.choice(rels), f"N:{rnd.randrange(6)}")
                              for _ in range(rnd.randint(0, 120))])
    pol = PolarityTable.default(registry)
    got = find_contradictory_edge_pairs(g, pol)
    assert len(got) == len({(x.key, y.key) for x, y in got})
    assert {(x.key, y.key) for x, y in got} == contradiction_pairs(list(g.edges()), pol.positive, pol.negative)
