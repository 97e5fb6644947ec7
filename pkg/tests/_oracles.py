"""Independent brute-force oracles used to pin the fast implementations.

Everything here computes definitions literally (loops, explicit block
matrices) so the main code paths are checked against a different route.
"""

import numpy as np


def brute_leq_counts(values):
    """Quadratic count of entries <= each entry, divided by n."""
    v = np.asarray(values, dtype=float)
    n = v.size
    return np.array([np.sum(v <= v[i]) for i in range(n)]) / n


def brute_kendall_counts(x, y):
    """Concordant-minus-discordant via an explicit double loop."""
    n = len(x)
    cmd = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = (x[j] > x[i]) - (x[j] < x[i])
            dy = (y[j] > y[i]) - (y[j] < y[i])
            cmd += dx * dy
    return cmd


def brute_dcor(x, y):
    """Distance correlation from four explicit loops over the double sums."""
    X = np.atleast_2d(np.asarray(x, float).T).T
    Y = np.atleast_2d(np.asarray(y, float).T).T
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if Y.ndim == 1:
        Y = Y.reshape(-1, 1)
    n = X.shape[0]
    a = np.zeros((n, n))
    b = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            a[i, j] = np.sqrt(np.sum((X[i] - X[j]) ** 2))
            b[i, j] = np.sqrt(np.sum((Y[i] - Y[j]) ** 2))
    A = np.zeros((n, n))
    B = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            A[i, j] = a[i, j] - a[i, :].mean() - a[:, j].mean() + a.mean()
            B[i, j] = b[i, j] - b[i, :].mean() - b[:, j].mean() + b.mean()
    dcov2 = 0.0
    dvarx = 0.0
    dvary = 0.0
    for i in range(n):
        for j in range(n):
            dcov2 += A[i, j] * B[i, j]
            dvarx += A[i, j] ** 2
            dvary += B[i, j] ** 2
    dcov2 /= n * n
    dvarx /= n * n
    dvary /= n * n
    if dvarx <= 0 or dvary <= 0 or dcov2 <= 0:
        return 0.0
    return float(np.sqrt(dcov2 / np.sqrt(dvarx * dvary)))


def block_cca_oracle(A, B):
    """Canonical correlations from the explicit stacked eigenproblem.

    Builds the block matrix [[0, Cxx^-1 Cxy], [Cyy^-1 Cyx, 0]] from plain
    matrix inverses.  Its spectrum pairs as +-rho_i; the squared system
    Cxx^-1 Cxy Cyy^-1 Cyx has eigenvalues rho_i^2, whose square roots are
    returned after a consistency check between the two routes.
    """
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    n = A.shape[0]
    Ac = A - A.mean(axis=0)
    Bc = B - B.mean(axis=0)
    cxx = Ac.T @ Ac / (n - 1)
    cyy = Bc.T @ Bc / (n - 1)
    cxy = Ac.T @ Bc / (n - 1)
    ixx = np.linalg.inv(cxx)
    iyy = np.linalg.inv(cyy)
    p, q = cxx.shape[0], cyy.shape[0]

    block = np.zeros((p + q, p + q))
    block[:p, p:] = ixx @ cxy
    block[p:, :p] = iyy @ cxy.T
    block_eigs = np.linalg.eigvals(block)

    rho2 = np.linalg.eigvals(ixx @ cxy @ iyy @ cxy.T)
    rho2 = np.sort(rho2.real)[::-1][: min(p, q)]
    rho = np.sqrt(np.clip(rho2, 0.0, None))

    # each nontrivial rho must appear as a +- pair in the stacked spectrum
    mags = np.sort(np.abs(block_eigs))[::-1]
    for i, r in enumerate(rho):
        if r > 1e-6:
            assert abs(mags[2 * i] - r) < 1e-7 and abs(mags[2 * i + 1] - r) < 1e-7
    return np.sort(rho)[::-1]


def reference_feature_pipeline(x, y, wx, wy):
    """Transliteration of the classic published recipe: per-column ecdf
    ranks, an appended constant column, cosine block then sine block, and
    textbook canonical correlations via QR plus SVD."""
    def ecdf(col):
        return np.array([np.mean(col <= v) for v in col])

    def stage(m, w):
        u = np.column_stack([ecdf(m[:, j]) for j in range(m.shape[1])])
        e = np.hstack([u, np.ones((m.shape[0], 1))])
        theta = e @ w
        return u, np.hstack([np.cos(theta), np.sin(theta)])

    ux, fx = stage(np.asarray(x, float), wx)
    uy, fy = stage(np.asarray(y, float), wy)
    qx, _ = np.linalg.qr(fx - fx.mean(axis=0))
    qy, _ = np.linalg.qr(fy - fy.mean(axis=0))
    rho = np.linalg.svd(qx.T @ qy, compute_uv=False)
    return ux, uy, fx, fy, rho
