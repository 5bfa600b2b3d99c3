"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def run_word(trans, state, word):
    for a in word:
        state = trans[state][a]
    return int(state)


def batch_run(trans, starts, words, lengths):
    table = trans.tolist()
    out = np.empty((len(words), len(starts)), dtype=np.int32)
    for i, (row, n) in enumerate(zip(words.tolist(), lengths.tolist())):
        row = row[:n]
        for j, s in enumerate(starts.tolist()):
            for a in row:
                s = table[s][a]
            out[i, j] = s
    return out


def enumerate_words(trans, dead, root, n, count):
    if n == 0:
        return np.zeros((1, 0), dtype=np.int32)
    table = trans.tolist()
    q = len(table[0])
    found = []
    prefix = []

    def walk(state, depth):
        for a in range(q):
            nxt = table[state][a]
            if nxt == dead:
                continue
            prefix.append(a)
            if depth == n - 1:
                found.append(list(prefix))
            else:
                walk(nxt, depth + 1)
            prefix.pop()

    walk(root, 0)
    if len(found) != count:
        raise ValueError("word count disagrees with the supplied total")
    return np.array(found, dtype=np.int32).reshape(count, n)


def count_occurrences(words, pattern):
    pat = tuple(pattern.tolist())
    p = len(pat)
    rows = words.tolist()
    if p == 0:
        return len(rows) * (words.shape[1] + 1)
    total = 0
    for row in rows:
        for j in range(len(row) - p + 1):
            if tuple(row[j:j + p]) == pat:
                total += 1
    return total
