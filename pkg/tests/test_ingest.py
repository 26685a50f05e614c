import numpy as np
import pytest

from graphonlab import ingest as I
from graphonlab.errors import InputError, ParameterError

P3 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_path_graph(tmp_path):
    assert np.array_equal(I.ingest_edgelist(write(tmp_path, "0 1\n1 2\n")), P3)


def test_reversed_duplicates_without_symmetrize(tmp_path):
    p = write(tmp_path, "0 1\n1 0\n1 2\n2 1\n")
    assert np.array_equal(I.ingest_edgelist(p, symmetrize=False),
                          I.ingest_edgelist(p, symmetrize=True))


def test_asymmetric_without_symmetrize(tmp_path):
    with pytest.raises(InputError):
        I.ingest_edgelist(write(tmp_path, "0 1\n"), symmetrize=False)


def test_one_indexed_comments_weights(tmp_path):
    text = "# header\n1 2 0.5  # trailing\n\n2 3\n3 3\n"
    A = I.ingest_edgelist(write(tmp_path, text), one_indexed=True)
    assert A.shape == (3, 3)
    assert A[0, 1] == 0.5 and A[1, 2] == 1.0
    assert A[2, 2] == 0  # self-loop dropped


def test_duplicates_collapse(tmp_path):
    A = I.ingest_edgelist(write(tmp_path, "0 1\n0 1\n1 0\n"))
    assert A.sum() == 2


@pytest.mark.parametrize("text,line", [("0 1\n1 2 3 4\n", 2), ("0 x\n", 1),
                                       ("0 1\n\n1 inf 0\n", 3), ("0 1 nan\n", 1)])
def test_malformed_line_numbers(tmp_path, text, line):
    with pytest.raises(InputError, match=f"line {line}"):
        I.ingest_edgelist(write(tmp_path, text))


def test_zero_index_in_one_indexed_file(tmp_path):
    with pytest.raises(InputError, match="line 1"):
        I.ingest_edgelist(write(tmp_path, "0 1\n"), one_indexed=True)


def test_out_of_range_n(tmp_path):
    with pytest.raises(InputError):
        I.ingest_edgelist(write(tmp_path, "0 5\n"), n=3)


def test_explicit_n_pads_isolated(tmp_path):
    assert I.ingest_edgelist(write(tmp_path, "0 1\n"), n=4).shape == (4, 4)


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        I.ingest_edgelist(tmp_path / "nope.txt")


def test_subsample_full_is_relabeling(tmp_path):
    A = I.ingest_edgelist(write(tmp_path, "0 1\n1 2\n2 3\n0 3\n0 2\n"))
    S, idx = I.subsample(A, 4, seed=3)
    assert sorted(idx.tolist()) == [0, 1, 2, 3]
    assert np.array_equal(S, A[np.ix_(idx, idx)])
    assert S.sum() == A.sum()


def test_subsample_seeded(tmp_path):
    A = np.ones((10, 10)) - np.eye(10)
    a, ia = I.subsample(A, 4, seed=1)
    b, ib = I.subsample(A, 4, seed=1)
    assert np.array_equal(ia, ib)
    with pytest.raises(ParameterError):
        I.subsample(A, 11)


def test_citation_fixture(fixture_dir):
    A = I.ingest_edgelist(fixture_dir / "citation_like.txt")
    assert A.shape == (400, 400)
    assert np.array_equal(A, A.T)
    assert set(np.unique(A)) == {0.0, 1.0}


def test_read_dense(tmp_path):
    p = tmp_path / "a.txt"
    np.savetxt(p, P3)
    assert np.array_equal(I.read_dense(p), P3)
    with pytest.raises(InputError):
        I.read_dense(write(tmp_path, "1 2\nx y\n", "bad.txt"))
