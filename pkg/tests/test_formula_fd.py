"""Formula structure, evaluation, and format/degree measurement."""

from fractions import Fraction

import pytest

from sharpcells.fd import FDPair, atom_fd, fd_of_formula, pformat_of_formula
from sharpcells.formula import (
    Environment,
    FormulaError,
    eval_qf,
    is_quantifier_free,
    resolve_named,
    subs_rationals,
    to_text,
    validate,
)
from sharpcells.parser import parse_formula


def fd(text, env=None):
    return fd_of_formula(parse_formula(text), env).as_tuple()


def test_atom_fd():
    a = parse_formula("x^2 + y^2 - 1 = 0")
    assert atom_fd(a).as_tuple() == (2, 2)
    # degree floor: linear and constant atoms still cost 1
    assert atom_fd(parse_formula("x > 0")).as_tuple() == (1, 1)


def test_formula_fd_sums_degrees():
    assert fd("(x^2 + y^2 - 1 = 0) and (x - y > 0)") == (2, 3)
    # occurrences count separately
    assert fd("(x > 0) or (x > 0)") == (1, 2)


def test_format_counts_all_variables():
    # three distinct variables beat every atom's own format
    assert fd("(x > 0) and (y > 0) and (z > 0)") == (3, 3)
    # bound variables count too
    assert fd("exists y. x - y^2 = 0") == (2, 2)


def test_pformat_includes_depth():
    psi = parse_formula("not (not (not (x > 0)))")
    assert fd_of_formula(psi).format == 1
    assert pformat_of_formula(psi) == psi.depth()
    flat = parse_formula("x^5 - 2 > 0")
    assert pformat_of_formula(flat) == 1


def test_fdpair_partial_order():
    assert FDPair(2, 3) <= FDPair(2, 5)
    assert not FDPair(3, 1) <= FDPair(2, 5)
    with pytest.raises(ValueError):
        FDPair(1, 0)


def test_eval_qf():
    psi = parse_formula("(x^2 + y^2 - 1 < 0) or (x - 1 = 0)")
    assert eval_qf(psi, {"x": Fraction(0), "y": Fraction(0)})
    assert eval_qf(psi, {"x": Fraction(1), "y": Fraction(5)})
    assert not eval_qf(psi, {"x": Fraction(2), "y": Fraction(0)})
    assert is_quantifier_free(psi)
    assert not is_quantifier_free(parse_formula("exists x. x > 0"))


def test_subs_rationals():
    psi = parse_formula("x - l > 0")
    fixed = subs_rationals(psi, {"l": Fraction(3, 2)})
    assert fixed.free_vars() == ("x",)
    assert eval_qf(fixed, {"x": Fraction(2)})
    assert not eval_qf(fixed, {"x": Fraction(1)})


def test_environment_and_named_fd():
    env = Environment()
    disk = parse_formula("x^2 + y^2 - 1 < 0")
    env.register("disk", disk, fd_of_formula(disk))
    psi = parse_formula("@disk(u, v) and (u > 0)")
    assert fd_of_formula(psi, env).as_tuple() == (2, 3)
    inlined = resolve_named(psi, env)
    assert is_quantifier_free(inlined)
    assert eval_qf(inlined, {"u": Fraction(1, 2), "v": Fraction(0)})
    with pytest.raises(FormulaError):
        fd_of_formula(parse_formula("@nope(x)"), env)


def test_environment_rejects_conflicting_registration():
    env = Environment()
    a = parse_formula("x > 0")
    env.register("s", a, fd_of_formula(a))
    env.register("s", a, fd_of_formula(a))  # identical re-registration ok
    with pytest.raises(FormulaError):
        env.register("s", parse_formula("x < 0"), FDPair(1, 1))


def test_to_text_is_parseable_inverse():
    texts = [
        "(x^2 - y = 0) and ((y > 0) or (x < 0))",
        "forall e. ((e < 0) or (exists d. d - e^2 > 0))",
        "not (x*y - 1 = 0)",
    ]
    for t in texts:
        psi = parse_formula(t)
        assert parse_formula(to_text(psi)) == psi


def test_validate_rejects_shadowing():
    validate(parse_formula("x > 0"))
    with pytest.raises(FormulaError):
        parse_formula("exists x. ((x > 0) and (exists x. x < 0))")
