"""Superspace embedding of a cluster: the vectors w_1..w_n in R^k.

Row i of the w-stack collects the i-th coordinate of every half point,
w_i = (v_i1, ..., v_ik), so column j is v_j itself. The physical space E_n is
span(w_1..w_n); projections are computed against these rows directly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from qpack_cli.errors import EmbeddingInvalid
from qpack_cli.orbits import Cluster

GRAM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Embedding:
    """Orthogonal equal-norm vectors w_1..w_n of R^k built from a cluster."""

    k: int
    n: int
    w: NDArray[np.float64]
    kappa: float
    cluster: Cluster

    @property
    def kappa_squared(self) -> float:
        return self.kappa * self.kappa

    @property
    def fingerprint(self) -> str:
        """Short hex digest of the w-stack, recorded with every packing.

        Entries are hashed relative to kappa and rounded to 12 decimals, so
        last-bit differences between platforms do not change it.
        """
        digest = hashlib.sha256()
        digest.update(f"{self.n}x{self.k}".encode())
        scaled = np.round(self.w / self.kappa, 12) + 0.0
        digest.update(";".join(f"{value:.12f}" for value in scaled.ravel()).encode())
        digest.update(f";{self.kappa:.12g}".encode())
        return digest.hexdigest()[:16]


def build_embedding(cluster: Cluster) -> Embedding:
    """Assemble w_i row-wise from the cluster and validate the Gram matrix.

    Raises:
        EmbeddingInvalid: fewer than n+1 half points, a zero norm, a pairwise
            inner product above 1e-9 kappa^2, or norms differing by more than
            1e-9 kappa.
    """
    n, k = cluster.n, cluster.k
    if k < n + 1:
        raise EmbeddingInvalid(f"superspace dimension k={k} must be at least n+1={n + 1}")

    w = np.array(cluster.half_points.T, dtype=np.float64)
    w.setflags(write=False)

    gram = w @ w.T
    norms = np.sqrt(np.diag(gram))
    kappa = float(np.mean(norms))
    if kappa <= 0.0:
        raise EmbeddingInvalid("w-vectors have zero norm")

    kappa_squared = kappa * kappa
    for i in range(n):
        if abs(norms[i] - kappa) > GRAM_TOLERANCE * kappa:
            raise EmbeddingInvalid(
                f"|w_{i + 1}| = {norms[i]:.12g} differs from the common norm {kappa:.12g}; "
                "the cluster does not come from an irreducible representation"
            )
        for j in range(i + 1, n):
            if abs(gram[i, j]) > GRAM_TOLERANCE * kappa_squared:
                raise EmbeddingInvalid(
                    f"<w_{i + 1}, w_{j + 1}> = {gram[i, j]:.3e} is not zero; "
                    "the cluster does not come from an irreducible representation"
                )

    return Embedding(k=k, n=n, w=w, kappa=kappa, cluster=cluster)


def project_physical(emb: Embedding, x: ArrayLike) -> NDArray[np.float64]:
    """Unnormalized physical coordinates (<x, w_1>, ..., <x, w_n>).

    Accepts one k-vector or a stack of them (one per row). Basis vectors map
    to cluster points: project_physical(e_j) = v_j.
    """
    vectors = np.asarray(x, dtype=np.float64)
    return vectors @ emb.w.T


def parallel_component(emb: Embedding, x: ArrayLike) -> NDArray[np.float64]:
    """Orthogonal projection of x onto E_n, expressed in R^k."""
    coefficients = project_physical(emb, x) / emb.kappa_squared
    return coefficients @ emb.w


def internal_residual(emb: Embedding, x: ArrayLike) -> NDArray[np.float64]:
    """Component of x orthogonal to E_n: x - sum_i <x, w_i/kappa> w_i/kappa."""
    vectors = np.asarray(x, dtype=np.float64)
    return vectors - parallel_component(emb, vectors)
