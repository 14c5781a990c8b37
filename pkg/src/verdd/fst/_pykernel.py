"""Pure-Python lookup kernel.

Depth-first traversal over a compiled Program. The compiled extension
(_kernel.pyx) implements the identical algorithm; this module is the
fallback selected at import when the extension is unavailable.

The DFS is iterative with explicit frames. Path effects (output symbols,
weight, flag-register writes) are attached to the edge leading into a
frame and undone when the frame is popped, so the register is a single
mutable array with an undo trail rather than per-path copies.
"""

from __future__ import annotations

from ..errors import CycleLimitError
from .transducer import SYM_EPSILON, SYM_FLAG, SYM_NORMAL, Program

# Flag op codes, matching transducer._FLAG_OP_CODES.
_OP_P, _OP_N, _OP_C, _OP_R, _OP_D, _OP_U = range(6)


def _apply_flag(
    op: int,
    feature: int,
    value: int,
    reg_value: list[int],
    reg_positive: list[int],
    undo: list[tuple[int, int, int]],
) -> bool:
    """Apply one flag to the register; push an undo entry if it mutates."""
    cur = reg_value[feature]
    pos = reg_positive[feature]
    if op == _OP_P:
        undo.append((feature, cur, pos))
        reg_value[feature] = value
        reg_positive[feature] = 1
        return True
    if op == _OP_N:
        undo.append((feature, cur, pos))
        reg_value[feature] = value
        reg_positive[feature] = 0
        return True
    if op == _OP_C:
        undo.append((feature, cur, pos))
        reg_value[feature] = -1
        reg_positive[feature] = 0
        return True
    if op == _OP_R:
        if value < 0:
            return cur != -1
        return cur == value and pos == 1
    if op == _OP_D:
        if value < 0:
            return cur == -1
        return not (cur == value and pos == 1)
    # unify
    if cur != -1:
        if pos == 1 and cur != value:
            return False
        if pos == 0 and cur == value:
            return False
    undo.append((feature, cur, pos))
    reg_value[feature] = value
    reg_positive[feature] = 1
    return True


def run(p: Program, tokens, epsilon_limit: int) -> list[tuple[tuple[int, ...], float]]:
    """Enumerate accepting paths; returns (output symbol ids, weight) pairs."""
    arc_off = p.arc_off
    arc_target = p.arc_target
    arc_in = p.arc_in
    arc_out = p.arc_out
    arc_weight = p.arc_weight
    sym_kind = p.sym_kind
    flag_op = p.flag_op
    flag_feature = p.flag_feature
    flag_value = p.flag_value
    is_final = p.is_final
    final_weight = p.final_weight

    n = len(tokens)
    results: list[tuple[tuple[int, ...], float]] = []
    out: list[int] = []
    reg_value = [-1] * p.n_features
    reg_positive = [0] * p.n_features
    undo: list[tuple[int, int, int]] = []
    weight = 0.0

    # Frame: [state, pos, eps_run, cursor, out_mark, weight_mark, undo_mark]
    # where the marks snapshot the shared path state *before* the edge into
    # this frame was taken.
    start = p.start
    frames: list[list] = [[start, 0, 0, arc_off[start], 0, 0.0, 0]]
    if n == 0 and is_final[start]:
        results.append(((), final_weight[start]))

    while frames:
        frame = frames[-1]
        state, pos, eps_run = frame[0], frame[1], frame[2]
        cursor = frame[3]
        end = arc_off[state + 1]
        pushed = False
        while cursor < end:
            a = cursor
            cursor += 1
            in_sid = arc_in[a]
            kind = sym_kind[in_sid]
            if kind == SYM_NORMAL:
                if pos >= n or tokens[pos] != in_sid:
                    continue
                child_pos = pos + 1
                child_eps = 0
                undo_mark = len(undo)
            elif kind == SYM_EPSILON:
                if eps_run >= epsilon_limit:
                    raise CycleLimitError("cycle limit")
                child_pos = pos
                child_eps = eps_run + 1
                undo_mark = len(undo)
            else:  # SYM_FLAG
                if eps_run >= epsilon_limit:
                    raise CycleLimitError("cycle limit")
                undo_mark = len(undo)
                ok = _apply_flag(
                    flag_op[in_sid],
                    flag_feature[in_sid],
                    flag_value[in_sid],
                    reg_value,
                    reg_positive,
                    undo,
                )
                if not ok:
                    continue
                child_pos = pos
                child_eps = eps_run + 1

            frame[3] = cursor
            out_mark = len(out)
            weight_mark = weight
            out_sid = arc_out[a]
            if sym_kind[out_sid] == SYM_NORMAL:
                out.append(out_sid)
            weight += arc_weight[a]
            target = arc_target[a]
            frames.append([target, child_pos, child_eps, arc_off[target], out_mark, weight_mark, undo_mark])
            if child_pos == n and is_final[target]:
                results.append((tuple(out), weight + final_weight[target]))
            pushed = True
            break

        if pushed:
            continue
        frame[3] = cursor
        frames.pop()
        del out[frame[4] :]
        weight = frame[5]
        undo_mark = frame[6]
        while len(undo) > undo_mark:
            feature, old_value, old_positive = undo.pop()
            reg_value[feature] = old_value
            reg_positive[feature] = old_positive

    return results
