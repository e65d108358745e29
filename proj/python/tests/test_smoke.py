import math
from pathlib import Path

import numpy as np
import pytest

import ncvis

DATA = Path(__file__).resolve().parents[2] / "tests" / "data"


def two_blobs(per_blob=40, dim=5, gap=12.0, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(2 * per_blob, dim))
    x[per_blob:, 0] += gap
    return x


def test_embed_separates_blobs():
    x = two_blobs()
    coords, info = ncvis.embed(x, threads=1)
    assert coords.shape == (80, 2)
    assert np.isfinite(coords).all()
    assert math.isfinite(info["Q"])
    assert info["epochs"] == 50
    assert info["samples"] == 50 * 80
    d = np.linalg.norm(coords[:, None] - coords[None], axis=-1)
    same = np.equal.outer(np.arange(80) < 40, np.arange(80) < 40)
    off = ~np.eye(80, dtype=bool)
    assert d[same & off].mean() < d[~same].mean()


def test_embed_is_deterministic_single_threaded():
    x = two_blobs(seed=1)
    a, _ = ncvis.embed(x, threads=1, seed=7)
    b, _ = ncvis.embed(x, threads=1, seed=7)
    assert np.array_equal(a, b)


def test_estimator_wrapper():
    model = ncvis.NCVis(dim=3, k=10, threads=1)
    coords = model.fit_transform(two_blobs(seed=2))
    assert coords.shape == (80, 3)
    assert set(model.info_) >= {"Q", "time_knn", "time_graph", "time_init", "time_train"}


def test_knn_matches_exact_on_small_data():
    x = np.random.default_rng(3).normal(size=(300, 4))
    approx, dist = ncvis.knn(x, k=5)
    exact, exact_dist = ncvis.exact_knn(x, k=5)
    assert approx.shape == (300, 5)
    assert np.array_equal(approx, exact)
    assert np.allclose(dist, exact_dist)
    assert not (approx == np.arange(300)[:, None]).any()


def test_neighbor_graph_path_example():
    x = np.array([[0.0], [1.0], [3.0]])
    neighbors, _ = ncvis.exact_knn(x, k=1)
    assert neighbors[:, 0].tolist() == [1, 0, 1]
    edges, edge_prob, row_sums = ncvis.neighbor_graph(neighbors)
    assert edges.tolist() == [[0, 1], [1, 0], [1, 2], [2, 1]]
    assert edge_prob == 0.25
    assert row_sums.tolist() == [0.25, 0.5, 0.25]


def test_model_and_terms():
    assert ncvis.model_prob([0, 0], [0, 0]) == 1.0
    assert ncvis.model_prob([0, 0], [1, 0]) == 0.5
    assert ncvis.model_prob([0, 0], [1, 0], Q=math.log(2)) == pytest.approx(0.25)
    assert ncvis.positive_term(1, 1, 4) == pytest.approx(math.log(0.2))
    assert ncvis.noise_term(4, 1, 4) == pytest.approx(math.log(0.5))


def test_normalized_likelihood_equilateral():
    z = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, math.sqrt(3)]])
    neighbors = np.array([[1, 2], [0, 2], [0, 1]])
    assert ncvis.normalized_likelihood(z, neighbors) == pytest.approx(math.log(1 / 6))


def test_io_round_trip(tmp_path):
    x = np.random.default_rng(4).normal(size=(10, 3)).astype(np.float32).astype(np.float64)
    ncvis.write_bin(x, str(tmp_path / "x.bin"))
    assert np.array_equal(ncvis.read_bin(str(tmp_path / "x.bin")), x)
    ncvis.write_embedding(x, str(tmp_path / "x.tsv"))
    assert np.allclose(np.loadtxt(tmp_path / "x.tsv"), x, atol=1e-8, rtol=0)
    ncvis.write_svg(x[:, :2], str(tmp_path / "x.svg"), labels=["a"] * 5 + ["b"] * 5)
    assert (tmp_path / "x.svg").read_text().count("<circle") == 10


def test_digits_quality():
    x = ncvis.read_csv(str(DATA / "digits.csv"))
    labels = np.array((DATA / "digits_labels.txt").read_text().split())
    coords, _ = ncvis.embed(x)
    d = np.linalg.norm(coords[:, None] - coords[None], axis=-1)
    np.fill_diagonal(d, np.inf)
    nearest = np.argsort(d, axis=1)[:, :10]
    assert (labels[nearest] == labels[:, None]).mean() >= 0.8


def test_errors_are_reported():
    with pytest.raises(ncvis.NcvisError, match="k must be < N"):
        ncvis.embed(np.zeros((5, 2)), k=5)
    with pytest.raises(ncvis.NcvisError, match="non-finite"):
        ncvis.embed(np.array([[0.0, 1.0], [np.nan, 2.0], [1.0, 1.0]]), k=1)
    with pytest.raises(ncvis.NcvisError, match="metric"):
        ncvis.embed(np.zeros((5, 2)), k=1, metric="manhattan")
    with pytest.raises(ValueError):
        ncvis.read_csv("/nonexistent/file.csv")
