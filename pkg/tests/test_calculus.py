"""Rule tables, derivations, reduction witnesses, normalize_bound."""

import json
import random

import pytest

from sharpcells.calculus import (
    CalculusError,
    Leaf,
    Node,
    P_SYSTEM,
    ReductionWitness,
    SHARP_SYSTEM,
    W_SYSTEM,
    apply_rule,
    check_reduction,
    derivation_from_json,
    derivation_to_json,
    derive_fd,
    normalize_bound,
    witness_from_json,
    witness_to_json,
)
from sharpcells.fd import FDPair


A = FDPair(2, 3)
B = FDPair(4, 5)
C = FDPair(1, 7)


def test_union_rules_across_systems():
    assert apply_rule(P_SYSTEM, "union", [A, B]) == FDPair(5, 8)
    assert apply_rule(W_SYSTEM, "union", [A, B, C]) == FDPair(4, 15)
    assert apply_rule(SHARP_SYSTEM, "union", [A, B, C]) == FDPair(4, 15)


def test_intersection_rules():
    assert apply_rule(P_SYSTEM, "intersection", [A, B]) == FDPair(5, 8)
    assert apply_rule(W_SYSTEM, "intersection", [A, B, C]) == FDPair(5, 15)
    assert apply_rule(SHARP_SYSTEM, "intersection", [A, B, C]) == FDPair(4, 15)


def test_unary_rules():
    for op in ("projection", "complement"):
        assert apply_rule(P_SYSTEM, op, [A]) == FDPair(3, 3)
        assert apply_rule(SHARP_SYSTEM, op, [A]) == A
    for op in ("times_R_left", "times_R_right"):
        for system in (P_SYSTEM, W_SYSTEM, SHARP_SYSTEM):
            assert apply_rule(system, op, [A]) == FDPair(3, 3)


def test_arity_enforcement():
    with pytest.raises(CalculusError):
        apply_rule(P_SYSTEM, "union", [A, B, C])  # binary only in P
    with pytest.raises(CalculusError):
        apply_rule(SHARP_SYSTEM, "projection", [A, B])
    with pytest.raises(CalculusError):
        apply_rule(SHARP_SYSTEM, "union", [])
    with pytest.raises(CalculusError):
        apply_rule(SHARP_SYSTEM, "widget", [A])


def random_derivation(rng, depth=3):
    if depth == 0 or rng.random() < 0.3:
        return Leaf(f"g{rng.randrange(100)}",
                    FDPair(rng.randrange(1, 5), rng.randrange(1, 9)))
    op = rng.choice(["union", "intersection", "projection", "complement",
                     "times_R_left"])
    n = 1 if op not in ("union", "intersection") else rng.randrange(2, 4)
    return Node(op, [random_derivation(rng, depth - 1) for _ in range(n)])


def hand_fd(d, system):
    # independent recursion over the rule table
    if isinstance(d, Leaf):
        return d.fd
    subs = [hand_fd(c, system) for c in d.children]
    fmt = max(p.format for p in subs)
    deg = sum(p.degree for p in subs)
    bump = {
        "P": {"union": 1, "intersection": 1, "projection": 1,
              "complement": 1, "times_R_left": 1, "times_R_right": 1},
        "W": {"union": 0, "intersection": 1, "projection": 1,
              "complement": 1, "times_R_left": 1, "times_R_right": 1},
        "Sharp": {"union": 0, "intersection": 0, "projection": 0,
                  "complement": 0, "times_R_left": 1, "times_R_right": 1},
    }[system.variant][d.op]
    return FDPair(fmt + bump, deg)


def test_derive_fd_matches_hand_recursion():
    rng = random.Random(17)
    for _ in range(30):
        d = random_derivation(rng)
        for system in (W_SYSTEM, SHARP_SYSTEM):
            assert derive_fd(d, system) == hand_fd(d, system)


def test_sharp_never_exceeds_weaker_systems():
    rng = random.Random(23)
    for _ in range(30):
        d = random_derivation(rng)
        assert derive_fd(d, SHARP_SYSTEM) <= derive_fd(d, W_SYSTEM)


def test_check_reduction_pass_and_fail():
    corpus = [
        (FDPair(1, 2),
         Node("union", [Leaf("a", FDPair(1, 1)), Leaf("b", FDPair(1, 1))])),
        (FDPair(2, 4),
         Node("intersection", [Leaf("c", FDPair(2, 2)),
                               Leaf("d", FDPair(2, 2))])),
    ]
    ok = ReductionWitness({1: 1, 2: 2}, {1: [0, 2], 2: [0, 2]})
    rep = check_reduction(corpus, ok, SHARP_SYSTEM)
    assert rep["passed"] and rep["entries"] == 2
    assert rep["format_range"] == [1, 2]
    tight = ReductionWitness({1: 1, 2: 1}, {1: [1], 2: [1]})
    rep = check_reduction(corpus, tight, SHARP_SYSTEM)
    assert not rep["passed"]
    assert len(rep["violations"]) == 2


def test_witness_validation():
    with pytest.raises(CalculusError):
        ReductionWitness({1: 1}, {1: [0]})
    with pytest.raises(CalculusError):
        ReductionWitness({1: 1}, {1: [-1, 2]})
    w = ReductionWitness({3: 5}, {3: [1, 0, 2]})
    assert w.format_bound(3) == 5
    assert w.degree_bound(3, 4) == 33
    with pytest.raises(CalculusError):
        w.format_bound(7)


def test_normalize_bound_values():
    assert [normalize_bound(F, lambda x: x + 1) for F in (1, 2, 3)] == [2, 4, 6]
    assert [normalize_bound(F, lambda x: 2 * x) for F in (1, 2, 3)] == [2, 8, 24]
    assert normalize_bound(0, lambda x: x + 1) == 0
    with pytest.raises(CalculusError):
        normalize_bound(3, lambda x: x - 1)


def test_json_round_trips():
    rng = random.Random(9)
    d = random_derivation(rng)
    doc = json.loads(json.dumps(derivation_to_json(d)))
    d2 = derivation_from_json(doc)
    assert derive_fd(d2, SHARP_SYSTEM) == derive_fd(d, SHARP_SYSTEM)
    w = ReductionWitness({1: 2, 2: 4}, {1: [1, 1], 2: [0, 0, 3]})
    w2 = witness_from_json(json.loads(json.dumps(witness_to_json(w))))
    assert w2.format_bound(2) == 4
    assert w2.degree_bound(2, 3) == 27
