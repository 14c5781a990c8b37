# cython: language_level=3
"""Compiled lookup kernel; same algorithm as _pykernel, C data layout.

Frames, the output trail, and the flag-register undo trail live in malloc'd
C arrays; only accepted results are materialized as Python objects.
"""

from libc.stdlib cimport free, malloc, realloc

from ..errors import CycleLimitError

cdef enum:
    SYM_NORMAL = 0
    SYM_EPSILON = 1
    SYM_FLAG = 2

cdef enum:
    OP_P = 0
    OP_N = 1
    OP_C = 2
    OP_R = 3
    OP_D = 4
    OP_U = 5

cdef struct Frame:
    int state
    int pos
    int eps_run
    int cursor
    int out_mark
    double weight_mark
    int undo_mark

cdef struct UndoEntry:
    int feature
    int value
    int positive


cdef inline bint _apply_flag(int op, int feature, int value,
                             int* reg_value, int* reg_positive,
                             UndoEntry* undo, int* undo_len) noexcept nogil:
    cdef int cur = reg_value[feature]
    cdef int pos = reg_positive[feature]
    if op == OP_R:
        if value < 0:
            return cur != -1
        return cur == value and pos == 1
    if op == OP_D:
        if value < 0:
            return cur == -1
        return not (cur == value and pos == 1)
    if op == OP_U and cur != -1:
        if pos == 1 and cur != value:
            return False
        if pos == 0 and cur == value:
            return False
    # P, N, C, or a succeeding U: mutate with undo.
    undo[undo_len[0]].feature = feature
    undo[undo_len[0]].value = cur
    undo[undo_len[0]].positive = pos
    undo_len[0] += 1
    if op == OP_N:
        reg_value[feature] = value
        reg_positive[feature] = 0
    elif op == OP_C:
        reg_value[feature] = -1
        reg_positive[feature] = 0
    else:
        reg_value[feature] = value
        reg_positive[feature] = 1
    return True


def run(p, tokens, int epsilon_limit):
    """Enumerate accepting paths; returns list of (output id tuple, weight)."""
    cdef const int[:] arc_off = p.arc_off
    cdef const int[:] arc_target = p.arc_target
    cdef const int[:] arc_in = p.arc_in
    cdef const int[:] arc_out = p.arc_out
    cdef const double[:] arc_weight = p.arc_weight
    cdef const int[:] sym_kind = p.sym_kind
    cdef const int[:] flag_op = p.flag_op
    cdef const int[:] flag_feature = p.flag_feature
    cdef const int[:] flag_value = p.flag_value
    cdef const int[:] is_final = p.is_final
    cdef const double[:] final_weight = p.final_weight

    cdef const int[:] toks
    cdef int n = len(tokens)
    cdef int n_features = p.n_features
    cdef int start = p.start

    results = []
    if n > 0:
        toks = tokens

    # A path consumes at most n input symbols and may take at most
    # epsilon_limit input-free transitions between consumptions.
    cdef int cap = (n + 2) * (epsilon_limit + 2)
    cdef Frame* frames = <Frame*> malloc(cap * sizeof(Frame))
    cdef int* out = <int*> malloc(cap * sizeof(int))
    cdef UndoEntry* undo = <UndoEntry*> malloc(cap * sizeof(UndoEntry))
    cdef int* reg_value = NULL
    cdef int* reg_positive = NULL
    if frames == NULL or out == NULL or undo == NULL:
        free(frames); free(out); free(undo)
        raise MemoryError()
    if n_features > 0:
        reg_value = <int*> malloc(n_features * sizeof(int))
        reg_positive = <int*> malloc(n_features * sizeof(int))
        if reg_value == NULL or reg_positive == NULL:
            free(frames); free(out); free(undo); free(reg_value); free(reg_positive)
            raise MemoryError()

    cdef int i
    for i in range(n_features):
        reg_value[i] = -1
        reg_positive[i] = 0

    cdef int top = 0
    cdef int out_len = 0
    cdef int undo_len = 0
    cdef double weight = 0.0

    cdef Frame* frame
    cdef int state, pos, eps_run, cursor, end, a
    cdef int in_sid, out_sid, kind, target
    cdef int child_pos, child_eps, undo_mark
    cdef bint pushed, ok
    cdef int cycle_hit = 0

    try:
        frames[0].state = start
        frames[0].pos = 0
        frames[0].eps_run = 0
        frames[0].cursor = arc_off[start]
        frames[0].out_mark = 0
        frames[0].weight_mark = 0.0
        frames[0].undo_mark = 0
        top = 1
        if n == 0 and is_final[start]:
            results.append(((), final_weight[start]))

        while top > 0:
            frame = &frames[top - 1]
            state = frame.state
            pos = frame.pos
            eps_run = frame.eps_run
            cursor = frame.cursor
            end = arc_off[state + 1]
            pushed = False
            while cursor < end:
                a = cursor
                cursor += 1
                in_sid = arc_in[a]
                kind = sym_kind[in_sid]
                if kind == SYM_NORMAL:
                    if pos >= n or toks[pos] != in_sid:
                        continue
                    child_pos = pos + 1
                    child_eps = 0
                    undo_mark = undo_len
                elif kind == SYM_EPSILON:
                    if eps_run >= epsilon_limit:
                        cycle_hit = 1
                        break
                    child_pos = pos
                    child_eps = eps_run + 1
                    undo_mark = undo_len
                else:
                    if eps_run >= epsilon_limit:
                        cycle_hit = 1
                        break
                    undo_mark = undo_len
                    ok = _apply_flag(flag_op[in_sid], flag_feature[in_sid],
                                     flag_value[in_sid], reg_value, reg_positive,
                                     undo, &undo_len)
                    if not ok:
                        continue
                    child_pos = pos
                    child_eps = eps_run + 1

                frame.cursor = cursor
                if top >= cap:
                    cap *= 2
                    frames = <Frame*> realloc(frames, cap * sizeof(Frame))
                    out = <int*> realloc(out, cap * sizeof(int))
                    undo = <UndoEntry*> realloc(undo, cap * sizeof(UndoEntry))
                    if frames == NULL or out == NULL or undo == NULL:
                        raise MemoryError()
                    frame = &frames[top - 1]
                target = arc_target[a]
                frames[top].state = target
                frames[top].pos = child_pos
                frames[top].eps_run = child_eps
                frames[top].cursor = arc_off[target]
                frames[top].out_mark = out_len
                frames[top].weight_mark = weight
                frames[top].undo_mark = undo_mark
                top += 1
                out_sid = arc_out[a]
                if sym_kind[out_sid] == SYM_NORMAL:
                    out[out_len] = out_sid
                    out_len += 1
                weight += arc_weight[a]
                if child_pos == n and is_final[target]:
                    results.append(
                        (tuple([out[i] for i in range(out_len)]),
                         weight + final_weight[target]))
                pushed = True
                break

            if cycle_hit:
                break
            if pushed:
                continue
            frame.cursor = cursor
            top -= 1
            out_len = frames[top].out_mark
            weight = frames[top].weight_mark
            while undo_len > frames[top].undo_mark:
                undo_len -= 1
                reg_value[undo[undo_len].feature] = undo[undo_len].value
                reg_positive[undo[undo_len].feature] = undo[undo_len].positive
    finally:
        free(frames)
        free(out)
        free(undo)
        free(reg_value)
        free(reg_positive)

    if cycle_hit:
        raise CycleLimitError("cycle limit")
    return results
