# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled automaton-stepping kernels.

Mirrors ``_kernels_py`` function for function; ``subshift_lab.kernels`` picks
whichever is importable.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def run_word(const int[:, ::1] trans, int state, const int[::1] word):
    cdef Py_ssize_t i
    for i in range(word.shape[0]):
        state = trans[state, word[i]]
    return state


def batch_run(const int[:, ::1] trans, const int[::1] starts,
              const int[:, ::1] words, const int[::1] lengths):
    cdef Py_ssize_t nw = words.shape[0], ns = starts.shape[0]
    cdef Py_ssize_t i, j, t
    cdef int s
    out = np.empty((nw, ns), dtype=np.int32)
    cdef int[:, ::1] res = out
    for i in range(nw):
        for j in range(ns):
            s = starts[j]
            for t in range(lengths[i]):
                s = trans[s, words[i, t]]
            res[i, j] = s
    return out


def enumerate_words(const int[:, ::1] trans, int dead, int root, int n, Py_ssize_t count):
    """All length-``n`` label sequences from ``root`` avoiding ``dead``, in lex order.

    ``count`` must be the exact number of such words (from the counting DP).
    """
    cdef int q = trans.shape[1]
    out = np.empty((count, n), dtype=np.int32)
    cdef int[:, ::1] res = out
    if n == 0:
        return np.zeros((1, 0), dtype=np.int32)
    cdef int[::1] stack_state = np.empty(n + 1, dtype=np.int32)
    cdef int[::1] letter = np.zeros(n, dtype=np.int32)
    cdef Py_ssize_t k = 0, depth = 0, t
    cdef int a, nxt
    stack_state[0] = root
    letter[0] = 0
    while depth >= 0:
        a = letter[depth]
        if a >= q:
            depth -= 1
            if depth >= 0:
                letter[depth] += 1
            continue
        nxt = trans[stack_state[depth], a]
        if nxt == dead:
            letter[depth] += 1
            continue
        if depth == n - 1:
            if k >= count:
                raise ValueError("word count exceeds the supplied total")
            for t in range(n - 1):
                res[k, t] = letter[t]
            res[k, n - 1] = a
            k += 1
            letter[depth] += 1
        else:
            stack_state[depth + 1] = nxt
            depth += 1
            letter[depth] = 0
    if k != count:
        raise ValueError("word count below the supplied total")
    return out


def count_occurrences(const int[:, ::1] words, const int[::1] pattern):
    cdef Py_ssize_t nw = words.shape[0], n = words.shape[1], p = pattern.shape[0]
    cdef Py_ssize_t i, j, t
    cdef long long total = 0
    cdef bint ok
    if p == 0:
        return nw * (n + 1)
    for i in range(nw):
        for j in range(n - p + 1):
            ok = True
            for t in range(p):
                if words[i, j + t] != pattern[t]:
                    ok = False
                    break
            if ok:
                total += 1
    return total
