"""Certify that no two hypotenuses of the spiral are collinear.

z_m and z_n (m < n) lie on one line through the origin exactly when the
window product prod_{k=m}^{n-1} (1 + i/sqrt(k)) is real, i.e. when the
window angle theta(n) - theta(m) is an integer multiple of pi.  Each window
gets a rigorous positive lower bound on its distance to the nearest such
multiple, escalating precision along a schedule until the bound is
positive.

The imaginary part of the window product is also computed directly
(``audit_im_sign``).  It is negative for some windows even though every
``1/sqrt(k)`` is positive, so the sign of ``Im`` alone cannot decide
collinearity.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from . import __version__
from .dyadic import Dyadic
from .elementary import iv_pi
from .interval import (
    ComplexInterval,
    Interval,
    check_precision,
    cx_round_out,
    iv_abs,
    iv_min,
    iv_scale,
    iv_sub,
    round_out,
)
from .spiral import (
    angle_prefix,
    inv_sqrt,
    modulus_sq,
    mul_by_factor,
    prefix_table,
    wrap_guard_bits,
)

DEFAULT_SCHEDULE = (64, 128, 256, 512, 1024, 2048, 4096, 8192)


class InvalidWindow(ValueError):
    pass


class InvalidBound(ValueError):
    pass


class Status(enum.Enum):
    CERTIFIED = "certified"
    UNRESOLVED = "unresolved"


class Verdict(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    STRADDLES_ZERO = "straddles-zero-at-cap"


@dataclass(frozen=True)
class WindowCertificate:
    m: int
    n: int
    theta: Interval
    nearest_q: int
    margin: Interval
    precision_bits: int
    status: Status

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED


@dataclass
class CertificationReport:
    N: int
    windows_total: int
    certified: int
    unresolved: list[tuple[int, int]]
    min_margin_window: tuple[int, int]
    min_margin_lo: Dyadic
    precision_schedule: list[int] = field(default_factory=list)
    # not part of the serialised schema
    max_precision_used: int = 0

    def to_dict(self, digits: int = 30) -> dict:
        return {
            "N": self.N,
            "windows_total": self.windows_total,
            "certified": self.certified,
            "unresolved": [list(w) for w in self.unresolved],
            "min_margin_window": list(self.min_margin_window),
            "min_margin_lo": self.min_margin_lo.to_decimal(digits, up=False),
            "precision_schedule": list(self.precision_schedule),
            "tool_version": f"theodorus {__version__}",
        }


@dataclass(frozen=True)
class AuditFinding:
    m: int
    n: int
    im_enclosure: Interval
    verdict: Verdict


def _check_window(m: int, n: int) -> None:
    if not (1 <= m < n):
        raise InvalidWindow(f"need 1 <= m < n, got (m, n) = ({m}, {n})")


def _check_schedule(schedule) -> tuple[int, ...]:
    schedule = tuple(schedule)
    if not schedule:
        raise ValueError("precision schedule is empty")
    for p in schedule:
        check_precision(p)
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"precision schedule must be increasing: {schedule}")
    return schedule


def window_angle(m: int, n: int, p: int) -> Interval:
    """Enclosure of sum_{k=m}^{n-1} arctan(1/sqrt(k)) from the prefix table."""
    _check_window(m, n)
    return iv_sub(angle_prefix(n, p), angle_prefix(m, p), p)


@lru_cache(maxsize=4096)
def _pi_multiple(q: int, p: int) -> Interval:
    return iv_scale(iv_pi(p), q, p)


def _candidate_range(theta: Interval, pi: Interval) -> tuple[int, int]:
    # smallest/largest q that can be nearest for some x in theta:
    # need q_lo*pi <= theta.lo and q_hi*pi >= theta.hi
    q_lo = max(0, int(float(theta.lo) / float(pi.mid())))
    while q_lo > 0 and pi.hi * Dyadic(q_lo) > theta.lo:
        q_lo -= 1
    q_hi = max(q_lo + 1, int(float(theta.hi) / float(pi.mid())) + 1)
    while pi.lo * Dyadic(q_hi) < theta.hi:
        q_hi += 1
    return q_lo, q_hi


def nearest_pi_multiple(theta: Interval, p: int) -> tuple[int, Interval]:
    """Return (q, margin) with margin enclosing min over integers q of |theta - q*pi|.

    Every q that can be nearest for some point of ``theta`` is evaluated and
    the pointwise minimum of their distance enclosures is returned; ``q`` is
    the candidate with the smallest upper distance bound.
    """
    if theta.lo.mantissa < 0:
        raise ValueError(f"window angle must be nonnegative, got {theta!r}")
    pi = iv_pi(p)
    q_lo, q_hi = _candidate_range(theta, pi)
    best_q, margin = None, None
    best_hi = None
    for q in range(q_lo, q_hi + 1):
        d = iv_abs(iv_sub(theta, _pi_multiple(q, p), p))
        if margin is None:
            best_q, best_hi, margin = q, d.hi, d
            continue
        if d.hi < best_hi:
            best_q, best_hi = q, d.hi
        margin = iv_min(margin, d)
    return best_q, margin


def _attempt(m: int, n: int, p: int, theta: Interval | None = None) -> WindowCertificate:
    if theta is None:
        theta = window_angle(m, n, p)
    q, margin = nearest_pi_multiple(theta, p)
    status = Status.CERTIFIED if margin.lo.mantissa > 0 else Status.UNRESOLVED
    return WindowCertificate(m, n, theta, q, margin, p, status)


def _walk(m: int, n: int, schedule: tuple[int, ...]) -> WindowCertificate:
    for p in schedule:
        cert = _attempt(m, n, p)
        if cert.certified:
            break
    return cert


def certify_window(m: int, n: int, schedule=DEFAULT_SCHEDULE) -> WindowCertificate:
    _check_window(m, n)
    return _walk(m, n, _check_schedule(schedule))


@dataclass
class _RowSummary:
    certified: int = 0
    unresolved: list[tuple[int, int]] = field(default_factory=list)
    min_lo: Dyadic | None = None
    min_window: tuple[int, int] | None = None
    max_bits: int = 0


def _certify_row(m: int, N: int, schedule: tuple[int, ...]) -> _RowSummary:
    p0 = schedule[0]
    entries = prefix_table(p0).entries
    base = entries[m - 1]
    out = _RowSummary()
    for n in range(m + 1, N + 1):
        cert = _attempt(m, n, p0, iv_sub(entries[n - 1], base, p0))
        if not cert.certified and len(schedule) > 1:
            cert = _walk(m, n, schedule[1:])
        out.max_bits = max(out.max_bits, cert.precision_bits)
        if cert.certified:
            out.certified += 1
        else:
            out.unresolved.append((m, n))
        lo = cert.margin.lo
        if out.min_lo is None or lo < out.min_lo:
            out.min_lo, out.min_window = lo, (m, n)
    return out


def certify_all(N: int, schedule=DEFAULT_SCHEDULE, workers: int = 1) -> CertificationReport:
    """Certify every window 1 <= m < n <= N.

    Rows (fixed m) are distributed over ``workers`` threads; summaries are
    merged in row order so the report does not depend on scheduling.
    """
    if N < 2:
        raise InvalidBound(f"need at least two points, got N = {N}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    schedule = _check_schedule(schedule)
    prefix_table(schedule[0]).extend_to(N)
    rows = range(1, N)
    if workers == 1:
        summaries = [_certify_row(m, N, schedule) for m in rows]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(lambda m: _certify_row(m, N, schedule), rows))

    certified = 0
    unresolved: list[tuple[int, int]] = []
    min_lo, min_window = None, None
    max_bits = 0
    for s in summaries:
        certified += s.certified
        max_bits = max(max_bits, s.max_bits)
        unresolved.extend(s.unresolved)
        if min_lo is None or s.min_lo < min_lo:
            min_lo, min_window = s.min_lo, s.min_window
    return CertificationReport(
        N=N,
        windows_total=N * (N - 1) // 2,
        certified=certified,
        unresolved=unresolved,
        min_margin_window=min_window,
        min_margin_lo=min_lo,
        precision_schedule=list(schedule),
        max_precision_used=max_bits,
    )


def window_product(m: int, n: int, p: int) -> ComplexInterval:
    """Box enclosure of prod_{k=m}^{n-1} (1 + i/sqrt(k)), accumulated left to right."""
    _check_window(m, n)
    check_precision(p)
    w = p + wrap_guard_bits(n - m)
    z = ComplexInterval.point(1, 0)
    for k in range(m, n):
        z = mul_by_factor(z, inv_sqrt(k, w), w)
    return cx_round_out(z, p)


def _verdict(im: Interval) -> Verdict:
    if im.lo.mantissa > 0:
        return Verdict.POSITIVE
    if im.hi.mantissa < 0:
        return Verdict.NEGATIVE
    return Verdict.STRADDLES_ZERO


def audit_window(m: int, n: int, p: int) -> AuditFinding:
    im = window_product(m, n, p).im
    return AuditFinding(m, n, im, _verdict(im))


def audit_im_sign(N: int, p: int) -> list[AuditFinding]:
    """Every window n <= N whose product does not have a strictly positive imaginary part.

    Findings come back in (m, n) lexicographic order.
    """
    if N < 2:
        raise InvalidBound(f"need at least two points, got N = {N}")
    check_precision(p)
    w = p + wrap_guard_bits(N)
    s = [None] + [inv_sqrt(k, w) for k in range(1, N)]
    findings = []
    for m in range(1, N):
        z = ComplexInterval.point(1, 0)
        for n in range(m + 1, N + 1):
            z = mul_by_factor(z, s[n - 1], w)
            im = round_out(z.im, p)
            verdict = _verdict(im)
            if verdict is not Verdict.POSITIVE:
                findings.append(AuditFinding(m, n, im, verdict))
    return findings


def window_modulus_sq(m: int, n: int, p: int) -> Interval:
    """Squared modulus of the window product; encloses n/m."""
    return modulus_sq(window_product(m, n, p), p)
