"""Pure-numpy evaluation of the odd-index double series."""

import numpy as np

_PI4 = np.pi**4


def series_sums(sigma, beta, max_index):
    """Damping and elastic series sums for each squeeze number in `sigma`.

    Both series run over odd m, n up to `max_index` with the shared
    denominator (mn)^2 * [(m^2 + (n/beta)^2)^2 + sigma^2/pi^4]; the damping
    sum carries m^2 + (n/beta)^2 in the numerator, the elastic sum carries 1.

    Returns a pair of arrays (damping_sum, elastic_sum) shaped like `sigma`.
    """
    sigma = np.asarray(sigma, dtype=float)
    idx = np.arange(1, max_index + 1, 2, dtype=float)
    m2 = idx[:, None] ** 2
    nb2 = (idx[None, :] / beta) ** 2
    q = (m2 + nb2).ravel()  # m^2 + (n/beta)^2
    w = (idx[:, None] * idx[None, :]).ravel() ** 2  # (mn)^2

    s2 = (sigma.reshape(-1, 1) ** 2) / _PI4
    denom = w * (q**2 + s2)
    s_d = np.sum(q / denom, axis=1)
    s_s = np.sum(1.0 / denom, axis=1)
    if sigma.ndim == 0:
        return s_d[0], s_s[0]
    return s_d.reshape(sigma.shape), s_s.reshape(sigma.shape)
