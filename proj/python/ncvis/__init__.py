"""Noise contrastive visualization of high-dimensional vectors."""

from ._ncvis import (
    NcvisError,
    embed,
    exact_knn,
    knn,
    model_prob,
    neighbor_graph,
    noise_term,
    normalized_likelihood,
    positive_term,
    read_bin,
    read_csv,
    write_bin,
    write_embedding,
    write_svg,
)

__all__ = [
    "NCVis",
    "NcvisError",
    "embed",
    "exact_knn",
    "knn",
    "model_prob",
    "neighbor_graph",
    "noise_term",
    "normalized_likelihood",
    "positive_term",
    "read_bin",
    "read_csv",
    "write_bin",
    "write_embedding",
    "write_svg",
]


class NCVis:
    """Estimator-style wrapper around :func:`embed`.

    Keyword arguments are those of :func:`embed`. After ``fit_transform`` the
    learned normalizer and timings are in ``info_``.
    """

    def __init__(self, **params):
        self.params = params
        self.info_ = None

    def fit_transform(self, data):
        coords, self.info_ = embed(data, **self.params)
        return coords
