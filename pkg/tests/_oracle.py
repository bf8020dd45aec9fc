"""Reference simulation written straight from closed-form amplitudes.

Nothing here imports the engine; tests compare the package against it.
"""
import cmath

import numpy as np


def w(d, k):
    return cmath.exp(2j * cmath.pi * (k % d) / d)


def mub_vector(d, b, m):
    """``b is None`` means the computational basis."""
    if b is None:
        v = np.zeros(d, dtype=complex)
        v[m] = 1
        return v
    inv2 = pow(2, -1, d)
    return np.array([w(d, b * inv2 * n * (n - 1) - n * m) for n in range(d)]) / np.sqrt(d)


def line_vector(d, md, m0):
    v = np.zeros(d * d, dtype=complex)
    for n in range(d):
        v[((md + n) % d) * d + (md - n) % d] = w(d, -2 * m0 * n) / np.sqrt(d)
    return v


def branches(d, psi, b, tol=1e-12):
    """Yield ``(m, (md', m0''), probability)`` for every nonzero branch.

    King projects particle 1 on ``|m, b>``, then Alice projects on each line state.
    """
    lines = {(a, c): line_vector(d, a, c) for a in range(d) for c in range(d)}
    eye = np.eye(d)
    for m in range(d):
        u = mub_vector(d, b, m)
        post = np.kron(np.outer(u, u.conj()), eye) @ psi
        for key, v in lines.items():
            p = abs(np.vdot(v, post)) ** 2
            if p > tol:
                yield m, key, p


def sign_violations(d):
    """Count nonzero tracking branches breaking each sign of the slope constraint.

    ``plus``:  m0'' - m0 == b (md - md')
    ``minus``: m0'' - m0 == b (md' - md)
    """
    plus = minus = total = 0
    for md in range(d):
        for m0 in range(d):
            psi = line_vector(d, md, m0)
            for b in range(d):
                for _, (a, c), _ in branches(d, psi, b):
                    total += 1
                    plus += (c - m0 - b * (md - a)) % d != 0
                    minus += (c - m0 - b * (a - md)) % d != 0
    return {"plus": plus, "minus": minus, "total": total}
