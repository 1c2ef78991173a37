"""Independent reference computations.

Nothing here touches the package's arithmetic: values come from mpmath or
plain double precision and are compared against enclosures only at the end.
"""

import cmath
import math

import mpmath

mpmath.mp.dps = 60


def mpf(d):
    """Dyadic -> exact mpmath value (at the working dps)."""
    return mpmath.mpf(d.mantissa) * mpmath.mpf(2) ** d.exponent


def encloses(interval, value) -> bool:
    return mpf(interval.lo) <= value <= mpf(interval.hi)


def float_prefix(n_max):
    """theta(n) for n = 1..n_max by double-precision summation; index 0 unused."""
    theta = [0.0, 0.0]
    for k in range(1, n_max):
        theta.append(theta[-1] + math.atan(1 / math.sqrt(k)))
    return theta


def mp_prefix(n_max):
    theta = [mpmath.mpf(0), mpmath.mpf(0)]
    for k in range(1, n_max):
        theta.append(theta[-1] + mpmath.atan(1 / mpmath.sqrt(k)))
    return theta


def float_window_product(m, n):
    z = 1 + 0j
    for k in range(m, n):
        z *= 1 + 1j / math.sqrt(k)
    return z


def mp_window_product(m, n):
    z = mpmath.mpc(1)
    for k in range(m, n):
        z *= 1 + 1j / mpmath.sqrt(k)
    return z


def float_min_margin(N):
    """Brute-force min over 1 <= m < n <= N of |theta(n) - theta(m) - q pi|."""
    theta = float_prefix(N)
    best, where = math.inf, None
    for m in range(1, N):
        tm = theta[m]
        for n in range(m + 1, N + 1):
            x = theta[n] - tm
            d = abs(x - round(x / math.pi) * math.pi)
            if d < best:
                best, where = d, (m, n)
    return best, where


def float_recurrence(n_max):
    z = [None, 1 + 0j]
    for _ in range(2, n_max + 1):
        w = z[-1]
        z.append(w + 1j * w / abs(w))
    return z


def phase(z):
    return cmath.phase(z)
