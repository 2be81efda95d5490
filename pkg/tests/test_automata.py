"""Finite-word automata: membership, determinisation, complement, product,
emptiness and the visibly pushdown summaries."""
import random

import pytest
from hypothesis import given, strategies as st

from conftest import PLAIN, REQGRANT, VISIBLY, make_anbn, make_rngn
from etlmc.automata import (Alphabet, FiniteAutomaton, Rule, append_symbol, fa_complement,
                            fa_determinize, fa_membership, fa_product, is_empty,
                            merge_alphabets, vpa_summaries, vpa_validate, words_upto)
from etlmc.errors import AlphabetMismatchError, PreconditionError, UnsupportedKindError
from etlmc.generators import random_dfa, random_nfa, random_vpa

seeds = st.integers(0, 10**6)


def nfa_accepts(a, word):
    """Independent backtracking run search."""
    def run(q, i):
        if i == len(word):
            return q in a.finals
        return any(run(r.dst, i + 1) for r in a.rules if r.src == q and r.symbol == word[i])
    return run(a.initial, 0)


def vpa_accepts(a, word):
    """Backtracking over runs with an explicit stack; pops need a non-empty stack."""
    def run(q, i, stack):
        if i == len(word):
            return q in a.finals
        for r in a.rules:
            if r.src != q or r.symbol != word[i]:
                continue
            if r.op == "int" and run(r.dst, i + 1, stack):
                return True
            if r.op == "push" and run(r.dst, i + 1, stack + (r.stack,)):
                return True
            if r.op == "pop" and stack and stack[-1] == r.stack and run(r.dst, i + 1, stack[:-1]):
                return True
        return False
    return run(a.initial, 0, ())


@given(seeds)
def test_nfa_membership_matches_backtracking(seed):
    a = random_nfa(random.Random(seed), PLAIN, 3)
    for w in words_upto(PLAIN.symbols, 5):
        assert fa_membership(a, w) == nfa_accepts(a, w)


@given(seeds)
def test_vpa_membership_matches_backtracking(seed):
    a = random_vpa(random.Random(seed), VISIBLY, 2, 2)
    assert vpa_validate(a) == []
    for w in words_upto(VISIBLY.symbols, 5):
        assert fa_membership(a, w) == vpa_accepts(a, w)


@given(seeds)
def test_determinise_preserves_language(seed):
    a = random_nfa(random.Random(seed), PLAIN, 3)
    d = fa_determinize(a)
    assert d.kind == "DFA" and vpa_validate(d) == []
    for w in words_upto(PLAIN.symbols, 5):
        assert fa_membership(a, w) == fa_membership(d, w)


@given(seeds)
def test_complement_flips_membership(seed):
    d = random_dfa(random.Random(seed), PLAIN, 3)
    c = fa_complement(d)
    for w in words_upto(PLAIN.symbols, 5):
        assert fa_membership(c, w) != fa_membership(d, w)


@given(seeds)
def test_product_is_intersection_and_emptiness_agrees(seed):
    rng = random.Random(seed)
    a, b = random_nfa(rng, PLAIN, 3, "A"), random_nfa(rng, PLAIN, 3, "B")
    p = fa_product(a, b)
    found = False
    for w in words_upto(PLAIN.symbols, 5):
        both = fa_membership(a, w) and fa_membership(b, w)
        assert fa_membership(p, w) == both
        found |= both
    # with at most 9 product states a shortest accepted word has length <= 8
    if not found:
        found = any(fa_membership(p, w) for w in words_upto(PLAIN.symbols, 8))
    assert is_empty(p) == (not found)


@given(seeds)
def test_append_symbol_language(seed):
    a = random_dfa(random.Random(seed), PLAIN, 3)
    h = append_symbol(a, "t^")
    for w in words_upto(PLAIN.symbols, 4):
        assert fa_membership(h, w + ("t^",)) == fa_membership(a, w)
        assert not fa_membership(h, w)


def well_matched(symbols_call, symbols_int, symbols_ret, n):
    """Well-matched words of length <= n."""
    out = {()}
    frontier = {((), 0)}
    for _ in range(n):
        nxt = set()
        for w, depth in frontier:
            for c in symbols_call:
                nxt.add((w + (c,), depth + 1))
            for i in symbols_int:
                nxt.add((w + (i,), depth))
            if depth:
                for r in symbols_ret:
                    nxt.add((w + (r,), depth - 1))
        frontier = nxt
        out |= {w for w, d in nxt if d == 0}
    return out


@given(seeds)
def test_summaries_cover_every_well_matched_run(seed):
    a = random_vpa(random.Random(seed), VISIBLY, 3, 2)
    summ = vpa_summaries(a)
    for q in a.states:
        for q2 in a.states:
            b = FiniteAutomaton("b", a.kind, a.alphabet, a.states, q, frozenset([q2]),
                                a.rules, a.stack_symbols)
            if any(fa_membership(b, w) for w in well_matched("c", "i", "r", 4)):
                assert (q, q2) in summ


def test_reqgrant_language():
    a = make_rngn()
    assert vpa_validate(a) == []
    assert fa_membership(a, ("req", "grant"))
    assert fa_membership(a, ("req", "req", "req", "grant", "grant", "grant"))
    assert not fa_membership(a, ("req", "req", "grant"))
    assert not fa_membership(a, ("req", "grant", "grant"))
    assert not fa_membership(a, ())
    assert ("s0", "s3") in vpa_summaries(a)


def test_anbn_language():
    a = make_anbn()
    assert fa_membership(a, ("a", "a", "b", "b"))
    assert not fa_membership(a, ("a", "a", "b"))


def test_validation_messages():
    bad = FiniteAutomaton("bad", "DVPA", REQGRANT, frozenset({"s"}), "s", frozenset({"t"}),
                          (Rule("s", "req", "s"), Rule("s", "grant", "s", "pop", "Q")),
                          frozenset({"Z"}))
    problems = " | ".join(vpa_validate(bad))
    assert "final state 't' not declared" in problems
    assert "requires a push rule" in problems
    assert "undeclared stack symbol" in problems
    nondet = FiniteAutomaton("n", "DFA", PLAIN, frozenset({"s", "t"}), "s", frozenset(),
                             (Rule("s", "a", "s"), Rule("s", "a", "t")))
    assert any("nondeterministic" in p for p in vpa_validate(nondet))


def test_errors():
    a = random_nfa(random.Random(0), PLAIN, 2)
    with pytest.raises(AlphabetMismatchError):
        fa_membership(a, ("z",))
    with pytest.raises(PreconditionError):
        fa_complement(a if a.kind == "NFA" else random_nfa(random.Random(1), PLAIN, 2))
    with pytest.raises(UnsupportedKindError):
        fa_determinize(make_rngn())
    with pytest.raises(PreconditionError):
        append_symbol(a, "a")
    with pytest.raises(AlphabetMismatchError):
        merge_alphabets([VISIBLY, Alphabet.visibly({"i"}, {"c"}, {"r"})])
    assert merge_alphabets([Alphabet.plain({"c", "i", "r"}), VISIBLY]) == VISIBLY
    with pytest.raises(ValueError):
        Alphabet.visibly({"a"}, {"a"}, ())
