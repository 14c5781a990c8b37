from __future__ import annotations

import random

import pytest

from verdd.errors import CycleLimitError
from verdd.fst import Arc, LookupResult, Transducer, lookup, parse_att

from conftest import all_strings, random_transducer
from oracles import oracle_lookup
from test_fst_parse import CAT_ATT


def test_cat_generation(kernel_mode):
    t = parse_att(CAT_ATT)
    assert lookup(t, "cat+N") == {LookupResult("cat", 0.0)}


def test_untokenizable_input_is_empty_set(kernel_mode):
    t = parse_att(CAT_ATT)
    assert lookup(t, "dog+N") == set()


def test_no_accepting_path_is_empty_set(kernel_mode):
    t = parse_att(CAT_ATT)
    assert lookup(t, "cat") == set()


def test_flag_blocked_path(kernel_mode):
    t = parse_att(
        "0\t1\t@U.X.A@\t@U.X.A@\n"
        "1\t2\ta\ta\n"
        "2\t3\t@D.X.A@\t@D.X.A@\n"
        "3"
    )
    assert lookup(t, "a") == set()


def test_flag_allowed_path(kernel_mode):
    t = parse_att(
        "0\t1\t@U.X.A@\t@U.X.A@\n"
        "1\t2\ta\ta\n"
        "2\t3\t@R.X.A@\t@R.X.A@\n"
        "3"
    )
    assert lookup(t, "a") == {LookupResult("a", 0.0)}


def test_empty_input_with_final_start(kernel_mode):
    t = parse_att("0\t0.5")
    assert lookup(t, "") == {LookupResult("", 0.5)}


def test_empty_input_epsilon_path(kernel_mode):
    t = parse_att("0\t1\t@0@\tx\n1\t0.0")
    assert lookup(t, "") == {LookupResult("x", 0.0), }


def test_empty_input_no_path(kernel_mode):
    t = parse_att("0\t1\ta\ta\n1")
    assert lookup(t, "") == set()


def test_nondeterministic_weights(kernel_mode):
    t = parse_att("0\t1\ta\tx\t1\n0\t2\ta\ty\t2\n1\t0.0\n2\t0.0")
    assert lookup(t, "a") == {LookupResult("x", 1.0), LookupResult("y", 2.0)}


def test_duplicate_outputs_collapse(kernel_mode):
    t = parse_att("0\t1\ta\tx\n0\t2\ta\tx\n1\n2")
    assert lookup(t, "a") == {LookupResult("x", 0.0)}


def test_weight_accumulation_with_final_weight(kernel_mode):
    t = parse_att("0\t1\ta\ta\t0.5\n1\t2\tb\tb\t1.0\n2\t0.25")
    assert lookup(t, "ab") == {LookupResult("ab", 1.75)}


def test_output_purity_flags_and_epsilons_stripped(kernel_mode):
    t = parse_att(
        "0\t1\t@P.X.A@\t@P.X.A@\n"
        "1\t2\ta\t@0@\n"
        "2\t3\t@0@\tb\n"
        "3"
    )
    results = lookup(t, "a")
    assert results == {LookupResult("b", 0.0)}
    for r in results:
        assert "@" not in r.output


def test_epsilon_cycle_hits_limit(kernel_mode):
    t = parse_att("0\t0\t@0@\t@0@\n0")
    with pytest.raises(CycleLimitError, match="cycle limit"):
        lookup(t, "")


def test_epsilon_limit_configurable(kernel_mode):
    # chain of 3 epsilon arcs: fine at limit 3, dies at limit 2
    t = parse_att("0\t1\t@0@\tx\n1\t2\t@0@\ty\n2\t3\t@0@\tz\n3")
    assert lookup(t, "", epsilon_limit=3) == {LookupResult("xyz", 0.0)}
    with pytest.raises(CycleLimitError):
        lookup(t, "", epsilon_limit=2)


def test_consuming_cycle_is_fine(kernel_mode):
    t = parse_att("0\t0\ta\ta\n0")
    assert lookup(t, "aaaa") == {LookupResult("aaaa", 0.0)}


def test_lookup_is_case_sensitive(kernel_mode):
    t = parse_att("0\t1\ta\ta\n0\t2\tA\tA\n1\n2")
    assert lookup(t, "A") == {LookupResult("A", 0.0)}
    assert lookup(t, "a") == {LookupResult("a", 0.0)}


def test_multichar_symbol_traversal(kernel_mode):
    t = parse_att("0\t1\txy\tXY\n1\t2\ta\ta\n2")
    assert lookup(t, "xya") == {LookupResult("XYa", 0.0)}


def test_oracle_equivalence_random_machines(kernel_mode):
    rng = random.Random(20260809)
    for _ in range(150):
        t = random_transducer(rng)
        strings = all_strings(sorted(t.input_alphabet), 3)
        for s in strings:
            expected = oracle_lookup(t, s)
            got = {(r.output, r.weight) for r in lookup(t, s)}
            assert got == expected, (t, s)


def test_flag_neutrality(kernel_mode):
    """Replacing never-failing flag arcs (P ops) with epsilons keeps outputs."""
    rng = random.Random(99)
    for _ in range(60):
        t = random_transducer(rng, with_flags=False)
        # thread a P flag through a random forward arc position
        arcs = {s: list(a) for s, a in t.arcs.items()}
        n = len(t.states)
        if n >= 2:
            src = rng.randrange(n - 1)
            tgt = rng.randrange(src + 1, n)
            sym = "@P.Z.V@"
            arcs.setdefault(src, []).append(Arc(tgt, sym, sym, 0.0))
        flagged = Transducer(
            states=set(t.states),
            arcs=arcs,
            finals=dict(t.finals),
            input_alphabet=set(t.input_alphabet),
        )
        plain_arcs = {
            s: [
                Arc(a.target, "@0@", "@0@", a.weight) if a.input.startswith("@P.") else a
                for a in arc_list
            ]
            for s, arc_list in arcs.items()
        }
        plain = Transducer(
            states=set(t.states),
            arcs=plain_arcs,
            finals=dict(t.finals),
            input_alphabet=set(t.input_alphabet),
        )
        for s in all_strings(sorted(t.input_alphabet), 2):
            left = {r.output for r in lookup(flagged, s)}
            right = {r.output for r in lookup(plain, s)}
            assert left == right
