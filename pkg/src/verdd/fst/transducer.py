"""Weighted finite-state transducers read from the tabular text format.

A transducer file has one record per line, fields separated by tabs:

    src  dst  input  output [weight]     (4 or 5 fields: an arc)
    state [weight]                       (1 or 2 fields: a final state)

The symbols ``@0@`` and ``@_EPSILON_SYMBOL_@`` denote epsilon. Symbols of
the shape ``@...@`` that are not epsilon must be valid flag diacritics
(see :mod:`verdd.fst.flags`); anything else is rejected at parse time.

Lookup applies a string to the input side and collects every accepting
path's output string and tropical weight (arc-weight sum plus final
weight). Lookup is exact: no case folding.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from ..errors import CycleLimitError, ParseError, TokenizeError
from .flags import is_flag_shaped, parse_flag

EPSILON_SYMBOLS = frozenset({"@0@", "@_EPSILON_SYMBOL_@"})

#: Default bound on consecutive input-free transitions along one path.
DEFAULT_EPSILON_LIMIT = 100

# Symbol kinds inside a compiled program.
SYM_NORMAL = 0
SYM_EPSILON = 1
SYM_FLAG = 2

_FLAG_OP_CODES = {"P": 0, "N": 1, "C": 2, "R": 3, "D": 4, "U": 5}


@dataclass(frozen=True)
class Arc:
    target: int
    input: str
    output: str
    weight: float = 0.0


class LookupResult(NamedTuple):
    output: str
    weight: float


@dataclass
class Transducer:
    """Parsed machine; immutable after construction, safe for concurrent reads."""

    states: set[int]
    arcs: dict[int, list[Arc]]
    finals: dict[int, float]
    input_alphabet: set[str]
    start: int = 0
    epsilon_symbols: frozenset[str] = EPSILON_SYMBOLS
    _program: "Program | None" = field(default=None, repr=False, compare=False)

    def program(self) -> "Program":
        if self._program is None:
            object.__setattr__(self, "_program", compile_program(self))
        return self._program


def _check_symbol(symbol: str, line_no: int) -> None:
    if not symbol:
        raise ParseError("empty symbol", line=line_no)
    if symbol in EPSILON_SYMBOLS or not is_flag_shaped(symbol):
        return
    try:
        parse_flag(symbol)
    except ValueError as exc:
        raise ParseError(str(exc), line=line_no) from None


def parse_att(text: str) -> Transducer:
    """Parse the tabular transducer format into a Transducer.

    Raises ParseError (with the 1-based line number) on malformed lines,
    and a "no states" ParseError for empty input. State 0 must exist: it
    is the start state by convention of the format.
    """
    states: set[int] = set()
    arcs: dict[int, list[Arc]] = {}
    finals: dict[int, float] = {}
    input_alphabet: set[str] = set()

    for line_no, line in enumerate(text.split("\n"), start=1):
        if line == "":
            continue
        fields = line.split("\t")
        if len(fields) in (1, 2):
            try:
                state = int(fields[0])
            except ValueError:
                raise ParseError(f"non-integer state {fields[0]!r}", line=line_no) from None
            weight = 0.0
            if len(fields) == 2:
                try:
                    weight = float(fields[1])
                except ValueError:
                    raise ParseError(f"non-numeric weight {fields[1]!r}", line=line_no) from None
            states.add(state)
            finals[state] = weight
        elif len(fields) in (4, 5):
            try:
                src, dst = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(f"non-integer state in {fields[:2]!r}", line=line_no) from None
            insym, outsym = fields[2], fields[3]
            _check_symbol(insym, line_no)
            _check_symbol(outsym, line_no)
            weight = 0.0
            if len(fields) == 5:
                try:
                    weight = float(fields[4])
                except ValueError:
                    raise ParseError(f"non-numeric weight {fields[4]!r}", line=line_no) from None
            states.add(src)
            states.add(dst)
            arcs.setdefault(src, []).append(Arc(dst, insym, outsym, weight))
            if insym not in EPSILON_SYMBOLS and not is_flag_shaped(insym):
                input_alphabet.add(insym)
        else:
            raise ParseError(f"expected 1-2 or 4-5 fields, got {len(fields)}", line=line_no)

    if not states:
        raise ParseError("no states")
    if 0 not in states:
        raise ParseError("state 0 (the start state) does not exist")
    return Transducer(states=states, arcs=arcs, finals=finals, input_alphabet=input_alphabet)


def tokenize(t: Transducer, s: str) -> list[str]:
    """Greedy longest-match segmentation of ``s`` into input-alphabet symbols.

    Scans left to right; raises TokenizeError with the offending character
    offset when no alphabet symbol is a prefix of the remainder. Pure.
    """
    alphabet = t.input_alphabet
    max_len = max((len(sym) for sym in alphabet), default=0)
    tokens: list[str] = []
    pos = 0
    n = len(s)
    while pos < n:
        for length in range(min(max_len, n - pos), 0, -1):
            candidate = s[pos : pos + length]
            if candidate in alphabet:
                tokens.append(candidate)
                pos += length
                break
        else:
            raise TokenizeError(f"cannot tokenize {s!r}", offset=pos)
    return tokens


class Program:
    """Transducer flattened to integer-indexed arrays for the lookup kernels.

    States are renumbered densely; symbols are interned. Arcs are stored
    CSR-style: the arcs of dense state ``i`` occupy ``arc_*[arc_off[i] :
    arc_off[i+1]]`` in original file order.
    """

    __slots__ = (
        "n_states",
        "start",
        "arc_off",
        "arc_target",
        "arc_in",
        "arc_out",
        "arc_weight",
        "sym_kind",
        "flag_op",
        "flag_feature",
        "flag_value",
        "n_features",
        "is_final",
        "final_weight",
        "symbols",
        "input_symbol_ids",
        "max_input_symbol_len",
    )

    def __init__(self) -> None:
        self.symbols: list[str] = []
        self.input_symbol_ids: dict[str, int] = {}


def compile_program(t: Transducer) -> Program:
    p = Program()
    state_index = {s: i for i, s in enumerate(sorted(t.states))}
    p.n_states = len(state_index)
    p.start = state_index[t.start]

    sym_ids: dict[str, int] = {}
    kinds: list[int] = []
    flag_ops: list[int] = []
    flag_features: list[int] = []
    flag_values: list[int] = []
    features: dict[str, int] = {}
    values: dict[str, int] = {}

    def intern(symbol: str) -> int:
        sid = sym_ids.get(symbol)
        if sid is not None:
            return sid
        sid = len(p.symbols)
        sym_ids[symbol] = sid
        p.symbols.append(symbol)
        if symbol in t.epsilon_symbols:
            kinds.append(SYM_EPSILON)
            flag_ops.append(-1)
            flag_features.append(-1)
            flag_values.append(-1)
        elif is_flag_shaped(symbol):
            flag = parse_flag(symbol)
            kinds.append(SYM_FLAG)
            flag_ops.append(_FLAG_OP_CODES[flag.op])
            flag_features.append(features.setdefault(flag.feature, len(features)))
            if flag.value is None:
                flag_values.append(-1)
            else:
                flag_values.append(values.setdefault(flag.value, len(values)))
        else:
            kinds.append(SYM_NORMAL)
            flag_ops.append(-1)
            flag_features.append(-1)
            flag_values.append(-1)
        return sid

    arc_off = array("i")
    arc_target = array("i")
    arc_in = array("i")
    arc_out = array("i")
    arc_weight = array("d")
    for state in sorted(t.states):
        arc_off.append(len(arc_target))
        for arc in t.arcs.get(state, ()):
            arc_target.append(state_index[arc.target])
            arc_in.append(intern(arc.input))
            arc_out.append(intern(arc.output))
            arc_weight.append(arc.weight)
    arc_off.append(len(arc_target))

    p.arc_off = arc_off
    p.arc_target = arc_target
    p.arc_in = arc_in
    p.arc_out = arc_out
    p.arc_weight = arc_weight
    p.sym_kind = array("i", kinds)
    p.flag_op = array("i", flag_ops)
    p.flag_feature = array("i", flag_features)
    p.flag_value = array("i", flag_values)
    p.n_features = len(features)
    p.is_final = array("i", [1 if s in t.finals else 0 for s in sorted(t.states)])
    p.final_weight = array("d", [t.finals.get(s, 0.0) for s in sorted(t.states)])
    p.input_symbol_ids = {sym: sym_ids[sym] for sym in t.input_alphabet if sym in sym_ids}
    p.max_input_symbol_len = max((len(s) for s in t.input_alphabet), default=0)
    return p


def _tokenize_ids(p: Program, s: str) -> array:
    """Greedy longest-match straight to symbol ids; mirrors tokenize()."""
    ids = array("i")
    pos = 0
    n = len(s)
    max_len = p.max_input_symbol_len
    table = p.input_symbol_ids
    while pos < n:
        for length in range(min(max_len, n - pos), 0, -1):
            sid = table.get(s[pos : pos + length])
            if sid is not None:
                ids.append(sid)
                pos += length
                break
        else:
            raise TokenizeError(f"cannot tokenize {s!r}", offset=pos)
    return ids


def lookup(
    t: Transducer, s: str, epsilon_limit: int = DEFAULT_EPSILON_LIMIT
) -> set[LookupResult]:
    """All (output, weight) pairs reachable by applying ``s`` to the input side.

    Untokenizable input yields the empty set. A path whose run of
    consecutive input-free transitions (epsilon or flag arcs) exceeds
    ``epsilon_limit`` aborts the whole lookup with CycleLimitError, since
    it indicates an epsilon cycle in the machine.
    """
    from . import kernel  # resolved at import time: compiled or pure

    p = t.program()
    try:
        tokens = _tokenize_ids(p, s)
    except TokenizeError:
        return set()
    results = kernel.run(p, tokens, epsilon_limit)
    out: set[LookupResult] = set()
    symbols = p.symbols
    for out_ids, weight in results:
        out.add(LookupResult("".join(symbols[i] for i in out_ids), weight))
    return out


def lookup_all(
    t: Transducer, strings: Iterable[str], epsilon_limit: int = DEFAULT_EPSILON_LIMIT
) -> dict[str, set[LookupResult]]:
    """Convenience batch wrapper around lookup()."""
    return {s: lookup(t, s, epsilon_limit) for s in strings}
