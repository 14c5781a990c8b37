"""Flag-diacritic symbols and their constraint semantics.

Flag diacritics are special transducer symbols of the form
``@<OP>.<FEATURE>@`` or ``@<OP>.<FEATURE>.<VALUE>@`` that constrain which
paths through the machine may combine, without emitting any output. The
six operators:

  P.F.V   set F = V (positive)
  N.F.V   set F = V (negative, "anything but V")
  C.F     clear F
  R.F.V   require F = V (positive)
  R.F     require F set (either polarity)
  D.F.V   disallow F = V (positive)
  D.F     disallow F set (either polarity)
  U.F.V   unify: fail if F is positively bound to some other value, or
          negatively bound to V; otherwise set F = V (positive)
"""

from __future__ import annotations

import re
from typing import Mapping, NamedTuple, Optional

FLAG_OPS = "PNCRDU"

# Operator arity: P/N/U take a value, C never does, R/D go both ways.
_VALUE_REQUIRED = frozenset("PNU")
_VALUE_FORBIDDEN = frozenset("C")

_FLAG_RE = re.compile(r"^@([PNCRDU])\.([^.@]+)(?:\.([^.@]+))?@$")
_FLAG_SHAPED_RE = re.compile(r"^@.+@$")


class Flag(NamedTuple):
    op: str
    feature: str
    value: Optional[str]


def is_flag_shaped(symbol: str) -> bool:
    """True for any ``@...@``-delimited symbol (valid flag or not)."""
    return bool(_FLAG_SHAPED_RE.match(symbol))


def parse_flag(symbol: str) -> Flag:
    """Parse a flag symbol, raising ValueError if it does not fit the grammar.

    Arity is checked as well: a value-less P/N/U or a valued C is rejected,
    since silently misreading a flag corrupts every paradigm built on it.
    """
    m = _FLAG_RE.match(symbol)
    if not m:
        raise ValueError(f"not a flag diacritic: {symbol!r}")
    op, feature, value = m.group(1), m.group(2), m.group(3)
    if value is None and op in _VALUE_REQUIRED:
        raise ValueError(f"flag operator {op} requires a value: {symbol!r}")
    if value is not None and op in _VALUE_FORBIDDEN:
        raise ValueError(f"flag operator {op} takes no value: {symbol!r}")
    return Flag(op, feature, value)


class FlagRegister:
    """Immutable feature store threaded along a lookup path.

    Bindings map a feature name to ``(value, positive)``; an unset feature
    is simply absent.
    """

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Mapping[str, tuple[str, bool]] | None = None):
        self._bindings = dict(bindings) if bindings else {}

    @property
    def bindings(self) -> dict[str, tuple[str, bool]]:
        return dict(self._bindings)

    def get(self, feature: str) -> tuple[str, bool] | None:
        return self._bindings.get(feature)

    def _with(self, feature: str, binding: tuple[str, bool] | None) -> "FlagRegister":
        new = dict(self._bindings)
        if binding is None:
            new.pop(feature, None)
        else:
            new[feature] = binding
        return FlagRegister(new)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FlagRegister) and self._bindings == other._bindings

    def __hash__(self) -> int:
        return hash(frozenset(self._bindings.items()))

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{f}=({v},{'+' if pos else '-'})" for f, (v, pos) in sorted(self._bindings.items())
        )
        return f"FlagRegister({inner})"


EMPTY_REGISTER = FlagRegister()


def step_flag(register: FlagRegister, symbol: str) -> FlagRegister | None:
    """Apply one flag symbol to a register.

    Returns the (new) register on success and None when the constraint
    fails, i.e. the path carrying this flag must be abandoned. Raises
    ValueError for symbols outside the flag grammar; callers are expected
    to pre-filter.
    """
    op, feature, value = parse_flag(symbol)
    current = register.get(feature)

    if op == "P":
        return register._with(feature, (value, True))
    if op == "N":
        return register._with(feature, (value, False))
    if op == "C":
        return register._with(feature, None)
    if op == "R":
        if value is None:
            return register if current is not None else None
        return register if current == (value, True) else None
    if op == "D":
        if value is None:
            return register if current is None else None
        return None if current == (value, True) else register
    # U
    if current is not None:
        cur_value, cur_positive = current
        if cur_positive and cur_value != value:
            return None
        if not cur_positive and cur_value == value:
            return None
    return register._with(feature, (value, True))
