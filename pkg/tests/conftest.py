from __future__ import annotations

import random

import pytest

from verdd.fst.transducer import Arc, Transducer, parse_att


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].replace("test_", "", 1)
    verdict = "PASS" if report.passed else "FAIL"
    print(f"\n[ACCEPTANCE] {verdict}: {name}", flush=True)

# Toy noun generator: lemma letters pass through, +N is deleted, +Sg is
# deleted, +Pl becomes "s".
TOY_GENERATOR_ATT = (
    "0\t0\tc\tc\n"
    "0\t0\ta\ta\n"
    "0\t0\tt\tt\n"
    "0\t0\td\td\n"
    "0\t0\to\to\n"
    "0\t0\tg\tg\n"
    "0\t1\t+N\t@0@\n"
    "1\t2\t+Sg\t@0@\n"
    "1\t3\t+Pl\ts\n"
    "1\t0.0\n"
    "2\t0.0\n"
    "3\t0.0\n"
)


@pytest.fixture
def toy_generator() -> Transducer:
    return parse_att(TOY_GENERATOR_ATT)


@pytest.fixture(params=["pure", "compiled"])
def kernel_mode(request, monkeypatch):
    """Run lookup tests against both kernels; skip compiled if not built."""
    import verdd.fst as fst_pkg

    if request.param == "pure":
        from verdd.fst import _pykernel as impl
    else:
        impl = pytest.importorskip("verdd.fst._kernel")
    monkeypatch.setattr(fst_pkg, "kernel", impl)
    return request.param


def random_transducer(rng: random.Random, with_flags: bool = True) -> Transducer:
    """Small random machine for oracle-equivalence testing.

    Bounded to 8 states, 12 arcs, 5 alphabet symbols and 2 flag features.
    Input-free arcs (epsilon or flag) always go strictly forward, which
    guarantees an acyclic epsilon structure.
    """
    n_states = rng.randint(1, 8)
    alpha_size = rng.randint(1, 5)
    pool = ["a", "b", "c", "d", "xy"]
    alphabet = pool[:alpha_size]
    flags = []
    if with_flags and rng.random() < 0.7:
        for feat in ("X", "Y")[: rng.randint(1, 2)]:
            for op_sym in rng.sample(
                [
                    f"@P.{feat}.A@",
                    f"@N.{feat}.A@",
                    f"@C.{feat}@",
                    f"@R.{feat}.A@",
                    f"@R.{feat}@",
                    f"@D.{feat}.A@",
                    f"@D.{feat}@",
                    f"@U.{feat}.A@",
                    f"@U.{feat}.B@",
                ],
                rng.randint(1, 3),
            ):
                flags.append(op_sym)

    states = set(range(n_states))
    arcs: dict[int, list[Arc]] = {}
    n_arcs = rng.randint(0, 12)
    for _ in range(n_arcs):
        src = rng.randrange(n_states)
        choice = rng.random()
        weight = rng.choice([0.0, 0.0, 0.5, 1.0, 2.0])
        if choice < 0.6 or (n_states == 1 and not alphabet):
            # consuming arc: any target, including backwards (cycles fine)
            tgt = rng.randrange(n_states)
            insym = rng.choice(alphabet)
            outsym = rng.choice(alphabet + ["@0@"])
            arcs.setdefault(src, []).append(Arc(tgt, insym, outsym, weight))
        else:
            # input-free arc: must go strictly forward to stay acyclic
            if src == n_states - 1:
                continue
            tgt = rng.randrange(src + 1, n_states)
            if flags and choice < 0.85:
                sym = rng.choice(flags)
                arcs.setdefault(src, []).append(Arc(tgt, sym, sym, weight))
            else:
                outsym = rng.choice(alphabet + ["@0@"])
                arcs.setdefault(src, []).append(Arc(tgt, "@0@", outsym, weight))

    finals = {}
    for s in states:
        if rng.random() < 0.4:
            finals[s] = rng.choice([0.0, 0.0, 0.5, 1.0])
    if not finals:
        finals[rng.randrange(n_states)] = 0.0

    return Transducer(
        states=states,
        arcs=arcs,
        finals=finals,
        input_alphabet=set(alphabet),
    )


def all_strings(alphabet: list[str], max_symbols: int) -> list[str]:
    """Every concatenation of up to max_symbols alphabet symbols."""
    out = [""]
    layer = [""]
    for _ in range(max_symbols):
        layer = [prefix + sym for prefix in layer for sym in alphabet]
        out.extend(layer)
    return out
