"""Syntax layer: parsing, printing, shifting, substitution.

The substitution tests are differential: a named-variable mirror of the term
language serves as the oracle.  Binder names in the mirror are globally
fresh, so naive textual replacement is capture-avoiding by construction, and
comparing results goes through a named -> de Bruijn conversion (alpha
equivalence for free).
"""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import costpcf.syntax as sx
from costpcf.syntax import (
    ANS, NAT, TRIV, UNIT, YES, ZERO,
    Ap, Arrow, Bind, F, Fix, Ifz, Lam, ParseError, Ret, Step, Succ, U, Var,
    numeral, parse, parse_comp_type, print_comp_type, print_term,
    print_value_type, shift, subst, term_size,
)

# ---------------------------------------------------------------------------
# Named-term oracle

_fresh_counter = itertools.count()


def _gensym():
    return f"b{next(_fresh_counter)}"


def to_named(t, names):
    """De Bruijn -> named tuples; `names` lists the context, innermost first."""
    if isinstance(t, Var):
        return ("var", names[t.index])
    if isinstance(t, (sx.Yes, sx.No, sx.Zero, sx.Triv)):
        return (type(t).__name__.lower(),)
    if isinstance(t, Succ):
        return ("succ", to_named(t.arg, names))
    if isinstance(t, Ret):
        return ("ret", to_named(t.arg, names))
    if isinstance(t, Step):
        return ("step", t.cost, to_named(t.body, names))
    if isinstance(t, Bind):
        x = _gensym()
        return ("bind", to_named(t.head, names), x, to_named(t.cont, [x] + names))
    if isinstance(t, Ifz):
        x = _gensym()
        return ("ifz", to_named(t.scrut, names), to_named(t.zcase, names),
                x, to_named(t.scase, [x] + names))
    if isinstance(t, Fix):
        x = _gensym()
        return ("fix", x, to_named(t.body, [x] + names))
    if isinstance(t, Lam):
        x = _gensym()
        return ("lam", t.dom, x, to_named(t.body, [x] + names))
    if isinstance(t, Ap):
        return ("ap", to_named(t.fun, names), to_named(t.arg, names))
    raise TypeError(t)


def named_replace(n, name, repl):
    """Textual substitution; safe because binder names never collide with
    the free names used by the tests (g*) nor with repl's binders (all fresh)."""
    tag = n[0]
    if tag == "var":
        return repl if n[1] == name else n
    if tag in ("yes", "no", "zero", "triv"):
        return n
    if tag == "succ":
        return ("succ", named_replace(n[1], name, repl))
    if tag == "ret":
        return ("ret", named_replace(n[1], name, repl))
    if tag == "step":
        return ("step", n[1], named_replace(n[2], name, repl))
    if tag == "bind":
        return ("bind", named_replace(n[1], name, repl), n[2],
                named_replace(n[3], name, repl))
    if tag == "ifz":
        return ("ifz", named_replace(n[1], name, repl),
                named_replace(n[2], name, repl), n[3],
                named_replace(n[4], name, repl))
    if tag == "fix":
        return ("fix", n[1], named_replace(n[2], name, repl))
    if tag == "lam":
        return ("lam", n[1], n[2], named_replace(n[3], name, repl))
    if tag == "ap":
        return ("ap", named_replace(n[1], name, repl),
                named_replace(n[2], name, repl))
    raise TypeError(n)


def from_named(n, names):
    tag = n[0]
    if tag == "var":
        return Var(names.index(n[1]))
    if tag == "yes":
        return YES
    if tag == "no":
        return sx.NO
    if tag == "zero":
        return ZERO
    if tag == "triv":
        return TRIV
    if tag == "succ":
        return Succ(from_named(n[1], names))
    if tag == "ret":
        return Ret(from_named(n[1], names))
    if tag == "step":
        return Step(n[1], from_named(n[2], names))
    if tag == "bind":
        return Bind(from_named(n[1], names), from_named(n[3], [n[2]] + names))
    if tag == "ifz":
        return Ifz(from_named(n[1], names), from_named(n[2], names),
                   from_named(n[4], [n[3]] + names))
    if tag == "fix":
        return Fix(from_named(n[2], [n[1]] + names))
    if tag == "lam":
        return Lam(n[1], from_named(n[3], [n[2]] + names))
    if tag == "ap":
        return Ap(from_named(n[1], names), from_named(n[2], names))
    raise TypeError(n)


# Untyped but well-scoped random terms; substitution is purely syntactic so
# typability is irrelevant here.
def random_term(rng, nvars, depth):
    leaves = [ZERO, TRIV, YES, sx.NO]
    if nvars:
        leaves += [Var(rng.randrange(nvars)) for _ in range(2)]
    if depth <= 0:
        return rng.choice(leaves)
    kind = rng.choice(
        ["leaf", "succ", "ret", "step", "bind", "ifz", "fix", "lam", "ap"])
    sub = lambda extra=0, d=None: random_term(
        rng, nvars + extra, depth - 1 if d is None else d)
    if kind == "leaf":
        return rng.choice(leaves)
    if kind == "succ":
        return Succ(sub())
    if kind == "ret":
        return Ret(sub())
    if kind == "step":
        return Step(rng.randrange(4), sub())
    if kind == "bind":
        return Bind(sub(), sub(extra=1))
    if kind == "ifz":
        return Ifz(sub(), sub(), sub(extra=1))
    if kind == "fix":
        return Fix(sub(extra=1))
    if kind == "lam":
        return Lam(rng.choice((NAT, UNIT, ANS)), sub(extra=1))
    return Ap(sub(), sub())


def test_subst_matches_named_oracle():
    rng = random.Random(20260814)
    for _ in range(200):
        n = rng.randint(1, 4)
        t = random_term(rng, n, rng.randint(1, 6))
        k = rng.randrange(n)
        r = random_term(rng, n - 1, rng.randint(0, 3))
        # replacement lives in the context with slot k removed
        full = [f"g{i}" for i in range(n)]
        smaller = full[:k] + full[k + 1:]
        expect = from_named(
            named_replace(to_named(t, full), f"g{k}", to_named(r, smaller)),
            smaller,
        )
        assert subst(t, r, k) == expect, print_term(t)


def test_subst_spec_examples():
    assert subst(Var(0), ZERO, 0) == ZERO
    assert subst(Succ(Var(0)), ZERO, 0) == Succ(ZERO)
    # closed replacement shifts to itself under the binder
    assert subst(Lam(NAT, Var(1)), ZERO, 0) == Lam(NAT, ZERO)
    # the binder's own variable is untouched
    assert subst(Lam(NAT, Var(0)), ZERO, 0) == Lam(NAT, Var(0))


def test_subst_after_shift_is_identity():
    # subst(shift(t, 1, k), r, k) == t: the shifted term never mentions slot k
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(0, 3)
        t = random_term(rng, n, rng.randint(0, 5))
        k = rng.randint(0, n)
        r = random_term(rng, n, 2)
        assert subst(shift(t, 1, k), r, k) == t


def test_shift_by_zero_is_identity():
    rng = random.Random(8)
    for _ in range(100):
        t = random_term(rng, 2, 4)
        assert shift(t, 0) == t
        assert shift(t, 0, 3) == t


# ---------------------------------------------------------------------------
# Parse / print

def test_parse_spec_examples():
    assert parse("(ret zero)") == Ret(ZERO)
    assert parse("(step 2 (ret triv))") == Step(2, Ret(TRIV))
    assert parse("(lam nat x (ret x))") == Lam(NAT, Ret(Var(0)))


def test_print_spec_examples():
    assert print_term(Ret(ZERO)) == "(ret zero)"
    assert print_term(Fix(Var(0))) == "(fix x x)"
    assert print_term(Step(0, Ret(ZERO))) == "(step 0 (ret zero))"


def test_numerals_desugar_and_print():
    assert parse("(ret 3)") == Ret(Succ(Succ(Succ(ZERO))))
    assert numeral(3) == Succ(Succ(Succ(ZERO)))
    assert print_term(Ret(numeral(3))) == "(ret 3)"
    assert print_term(numeral(0)) == "zero"
    # a succ of a non-numeral stays symbolic
    assert print_term(Succ(Var(0)), depth=1) == "(succ x)"


def test_parse_binders_and_shadowing():
    t = parse("(bind (ret zero) x (bind (ret x) x (ret x)))")
    assert t == Bind(Ret(ZERO), Bind(Ret(Var(0)), Ret(Var(0))))
    t2 = parse("(lam nat x (lam ans y (ret x)))")
    assert t2 == Lam(NAT, Lam(ANS, Ret(Var(1))))


def test_parse_comments_and_whitespace():
    src = "; header\n(bind (ret zero) n ; tail comment\n  (ret n))\n"
    assert parse(src) == Bind(Ret(ZERO), Ret(Var(0)))


def test_parse_vector_cost_literals():
    from costpcf.cost import vector_monoid
    v2 = vector_monoid(2)
    assert parse("(step [1,0] (ret triv))", monoid=v2) == Step((1, 0), Ret(TRIV))
    assert print_term(Step((1, 0), Ret(TRIV))) == "(step [1,0] (ret triv))"


@pytest.mark.parametrize("bad", [
    "",
    "(ret",
    "(ret zero) junk",
    "(ifz zero (ret triv))",
    "(step x (ret triv))",
    "(lam nat (ret zero))",
    "(ret unbound)",
    ")",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_parse_error_carries_position_and_expectations():
    try:
        parse("(ret\n  @)")
    except ParseError as e:
        assert e.line == 2
        assert e.column >= 1
    else:
        pytest.fail("no ParseError")
    try:
        parse("(ret zero")
    except ParseError as e:
        assert e.expected  # nonempty expectation set
    else:
        pytest.fail("no ParseError")


def test_roundtrip_on_random_terms():
    rng = random.Random(99)
    for _ in range(300):
        t = random_term(rng, 0, rng.randint(0, 6))
        assert parse(print_term(t)) == t


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.integers(0, 6))
def test_roundtrip_property(seed, depth):
    t = random_term(random.Random(seed), 0, depth)
    assert parse(print_term(t)) == t


def test_type_printing_roundtrip():
    cases = [
        F(UNIT),
        F(NAT),
        Arrow(NAT, F(NAT)),
        Arrow(U(F(UNIT)), F(ANS)),
        Arrow(NAT, Arrow(ANS, F(U(Arrow(NAT, F(NAT)))))),
    ]
    for x in cases:
        assert parse_comp_type(print_comp_type(x)) == x
    assert print_value_type(U(F(UNIT))) == "(U (F unit))"


def test_term_size_counts_nodes():
    assert term_size(ZERO) == 1
    assert term_size(Ret(ZERO)) == 2
    assert term_size(Bind(Ret(TRIV), Ret(Var(0)))) == 5


def test_terms_are_hashable_and_immutable():
    t = parse("(step 1 (ret zero))")
    assert hash(t) == hash(Step(1, Ret(ZERO)))
    with pytest.raises(Exception):
        t.cost = 2
