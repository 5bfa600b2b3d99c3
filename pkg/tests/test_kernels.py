import numpy as np
import pytest

from subshift_lab import _kernels_py, kernels
from subshift_lab.core.language import count_language, enumerate_array

from conftest import sft

try:
    from subshift_lab import _kernels as _kernels_c
except ImportError:  # compiled extension not built
    _kernels_c = None

needs_c = pytest.mark.skipif(_kernels_c is None, reason="compiled kernels not built")


@pytest.fixture
def sample():
    _, aut = sft(3, ["00", "121", "222"])
    trans = np.ascontiguousarray(aut.trans, dtype=np.int32)
    return aut, trans


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_c
@pytest.mark.parametrize("n", [0, 1, 5, 9])
def test_enumerate_words_agree(sample, n):
    aut, trans = sample
    total = count_language(aut, n)
    a = _kernels_py.enumerate_words(trans, aut.dead, aut.root, n, total)
    b = _kernels_c.enumerate_words(trans, aut.dead, aut.root, n, total)
    assert np.array_equal(np.asarray(a), np.asarray(b))


@needs_c
def test_batch_run_and_occurrences_agree(sample):
    aut, trans = sample
    words = np.ascontiguousarray(enumerate_array(aut, 7), dtype=np.int32)
    starts = np.arange(aut.n_live, dtype=np.int32)
    lengths = np.random.default_rng(0).integers(0, 8, len(words)).astype(np.int32)
    a = _kernels_py.batch_run(trans, starts, words, lengths)
    b = _kernels_c.batch_run(trans, starts, words, lengths)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    for pat in ([1], [0, 1], [2, 1, 2], [1, 0, 1, 0]):
        p = np.array(pat, dtype=np.int32)
        assert _kernels_py.count_occurrences(words, p) == _kernels_c.count_occurrences(words, p)


@needs_c
def test_run_word_agree(sample):
    aut, trans = sample
    for w in ([0, 1, 2], [2, 2, 1, 0], [1, 2, 1]):
        arr = np.array(w, dtype=np.int32)
        assert _kernels_py.run_word(trans, aut.root, w) == _kernels_c.run_word(trans, aut.root, arr)
