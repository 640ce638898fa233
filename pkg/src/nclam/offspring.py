"""Weight sequences, the criticality equation, and the offspring pair they induce.

For a weight sequence ``w`` on ``{1, 2, ...}`` define

    Psi(x) = sum_k k(k+1) w(k+1) x^k / sum_k (k+1) w(k+1) x^k,

which is null at 0 and increasing on ``[0, rho)``.  The critical ``b`` solves
``Psi(b) = 1``, and the shape of a ``w``-simply generated noncrossing tree is
then a modified BGW tree with

    mu(k)      = a (k+1) w(k+1) b^k,   k >= 0,
    mu_root(k) = c w(k) b^k,           k >= 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import DivergentNormalizer, DivergentWeights, DomainError, NoCriticalPoint
from .laws import DiscreteLaw, NumericTail, PowerTail, finite_law, hurwitz_zeta, zeta

_TAIL_EPS = 1e-17
_MAX_TERMS = 50_000_000


@dataclass(frozen=True)
class WeightSeq:
    """Nonnegative weights ``w(k)`` on degrees ``k >= 1``.

    ``kind`` is one of ``"finite"`` (explicit ``table``), ``"uniform"``
    (``w = 1``), ``"geometric"`` (``w(k) = q^k``) or ``"zipf"``, the power-law
    family whose critical pair is the stable offspring law of index ``param``.
    """

    kind: str
    table: tuple[tuple[int, float], ...] = ()
    param: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind == "finite":
            if not self.table:
                raise DomainError("empty weight table")
            for k, v in self.table:
                if k < 1 or v < 0 or not math.isfinite(v):
                    raise DomainError(f"bad weight w({k}) = {v}")
            if all(v == 0 for _, v in self.table):
                raise DomainError("all weights vanish")
        elif self.kind == "geometric":
            if not self.param > 0:
                raise DomainError("geometric weights need q > 0")
        elif self.kind == "zipf":
            if not 1 < self.param < 2:
                raise DomainError("zipf weights need 1 < alpha < 2")
        elif self.kind != "uniform":
            raise DomainError(f"unknown weight kind {self.kind!r}")

    # constructors ---------------------------------------------------------

    @classmethod
    def finite(cls, weights: dict) -> "WeightSeq":
        table = tuple(sorted((int(k), float(v)) for k, v in weights.items() if float(v) != 0.0))
        if not table:
            raise DomainError("all weights vanish")
        return cls("finite", table)

    @classmethod
    def indicator(cls, degrees) -> "WeightSeq":
        return cls.finite({int(k): 1.0 for k in degrees})

    @classmethod
    def parse(cls, text: str) -> "WeightSeq":
        """Parse ``uniform``, ``set:1,3``, ``geometric:q``, ``zipf:alpha`` or JSON."""
        s = text.strip()
        try:
            if s.startswith("{"):
                obj = json.loads(s)
                return cls.finite({int(k): float(v) for k, v in obj["w"].items()})
            if s == "uniform":
                return cls("uniform", label=s)
            head, _, rest = s.partition(":")
            if head == "set":
                degs = [int(x) for x in rest.split(",") if x.strip()]
                if not degs:
                    raise DomainError("empty degree set")
                return cls.indicator(degs)
            if head == "geometric":
                return cls("geometric", param=float(rest), label=s)
            if head == "zipf":
                return cls("zipf", param=float(rest), label=s)
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"cannot parse weights {text!r}: {exc}") from None
        raise DomainError(f"cannot parse weights {text!r}")

    def spec(self) -> str:
        if self.kind == "finite":
            if all(v == 1.0 for _, v in self.table):
                return "set:" + ",".join(str(k) for k, _ in self.table)
            return json.dumps({"w": {str(k): v for k, v in self.table}}, sort_keys=True)
        if self.kind == "uniform":
            return "uniform"
        return f"{self.kind}:{self.param!r}"

    # evaluation -----------------------------------------------------------

    @property
    def max_degree(self) -> int | None:
        return self.table[-1][0] if self.kind == "finite" else None

    @property
    def radius(self) -> float:
        if self.kind == "finite":
            return math.inf
        if self.kind == "geometric":
            return 1.0 / self.param
        return 1.0

    def __call__(self, k):
        k = np.asarray(k, dtype=np.int64)
        out = np.zeros(k.shape, dtype=float)
        if self.kind == "finite":
            for deg, v in self.table:
                out[k == deg] = v
        elif self.kind == "uniform":
            out[k >= 1] = 1.0
        elif self.kind == "geometric":
            kk = k[k >= 1].astype(float)
            out[k >= 1] = self.param**kk
        else:
            a = self.param
            z = zeta(a)
            out[k == 1] = 1.0 - zeta(1.0 + a) / z
            big = k >= 2
            kk = k[big].astype(float)
            out[big] = (kk - 1.0) ** (-(1.0 + a)) / (z * kk)
        return out if out.shape else float(out)

    def boundary_psi(self) -> float | None:
        """``lim_{x -> rho} Psi(x)`` when known in closed form."""
        if self.kind == "zipf":
            return 1.0
        if self.kind in ("uniform", "geometric"):
            return math.inf
        return None

    def _terms(self, x: float) -> int:
        """Number of terms so that the neglected tail of the Psi series is < 1e-17."""
        if self.kind == "finite":
            return self.table[-1][0]
        r = x / self.radius
        if r <= 0:
            return 2
        if r >= 1:
            raise DomainError(f"x = {x} outside the disk of convergence (rho = {self.radius})")
        # terms are dominated by k^2 r^k (w(k) rho^k <= 1 for every infinite kind)
        K = 8
        while K**3 * r**K / (1 - r) >= _TAIL_EPS:
            K *= 2
            if K > _MAX_TERMS:
                raise DomainError(f"x = {x} too close to rho for certified truncation")
        lo, hi = K // 2, K
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mid**3 * r**mid / (1 - r) < _TAIL_EPS:
                hi = mid
            else:
                lo = mid
        return max(hi, 8)


def parse_weights(text: str) -> WeightSeq:
    return WeightSeq.parse(text)


def _coeffs(w: WeightSeq, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``k`` and ``(k+1) w(k+1) x^k`` for ``k = 0..K``."""
    K = w._terms(x)
    k = np.arange(K + 1, dtype=np.int64)
    wk = np.asarray(w(k + 1), dtype=float)
    if x == 0:
        xp = (k == 0).astype(float)
    else:
        xp = np.exp(k * math.log(x))
    return k, (k + 1) * wk * xp


def psi(w: WeightSeq, x: float) -> float:
    """The ratio ``Psi(x)``; ``DomainError`` if ``x`` is outside ``[0, rho)``."""
    if x < 0:
        raise DomainError("x must be nonnegative")
    if x >= w.radius:
        raise DomainError(f"x = {x} >= rho = {w.radius}")
    k, c = _coeffs(w, x)
    den = float(c.sum())
    if den == 0.0:
        # x = 0 with w(1) = 0: the ratio tends to the lowest charged degree
        deg = next(d for d, v in ((int(j), w(int(j))) for j in range(1, 10_000)) if v > 0)
        return float(deg - 1)
    return float(np.dot(k, c)) / den


def solve_critical_b(w: WeightSeq, scan_levels: int = 60) -> float:
    """Unique ``b`` in ``(0, rho]`` with ``Psi(b) = 1``.

    The bracket is found by scanning ``rho (1 - 2^-j)`` (or doubling ``x``
    when ``rho`` is infinite) and then bisected.  The boundary value is
    returned when ``Psi`` reaches 1 only in the limit ``x -> rho``.
    """
    rho = w.radius
    if rho <= 0:
        raise DivergentWeights("radius of convergence is 0")
    if w(1) == 0:
        raise NoCriticalPoint("w(1) = 0: no leaves, Psi >= 1 near 0")
    f = lambda x: psi(w, x) - 1.0  # noqa: E731

    hi = None
    if math.isinf(rho):
        top = w.max_degree - 1
        if top <= 1:
            raise NoCriticalPoint(f"Psi increases only to {top} < 1")
        x = 1.0
        while f(x) < 0:
            x *= 2.0
        hi = x
    else:
        bpsi = w.boundary_psi()
        if bpsi is not None and bpsi <= 1.0:
            if bpsi >= 1.0 - 1e-12:
                return rho
            raise NoCriticalPoint(f"Psi increases to {bpsi} < 1")
        for j in range(1, scan_levels + 1):
            x = rho * (1.0 - 2.0**-j)
            try:
                if f(x) >= 0:
                    hi = x
                    break
            except DomainError:
                break
        if hi is None:
            raise NoCriticalPoint("Psi stays below 1 on the scanned part of [0, rho)")
    b = optimize.bisect(f, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=2000)
    if abs(f(b)) >= 1e-12:
        raise NoCriticalPoint(f"bisection residual {f(b):.3e} too large")
    return float(b)


@dataclass(frozen=True)
class OffspringPair:
    """The pair ``(mu, mu_root)`` of a simply generated model at parameter ``b``."""

    weights: WeightSeq
    b: float
    a: float
    c: float
    mu: DiscreteLaw
    mu_root: DiscreteLaw

    @property
    def mean_mu(self) -> float:
        return self.mu.mean

    @property
    def var_mu(self) -> float:
        return self.mu.variance

    @property
    def sigma(self) -> float:
        return math.sqrt(self.var_mu)


def _zipf_pair(w: WeightSeq, head: int = 1024) -> OffspringPair:
    law = stable_offspring(w.param, head).law
    alpha = w.param
    z = zeta(alpha)
    # mu_root(k) is proportional to w(k); w(k) = (k-1)^-(1+a) / (z k) for k >= 2
    k = np.arange(head + 1)
    wk = np.asarray(w(k), dtype=float)
    # sum_{j > head-1} j^-(1+a)/(j+1) = sum_m (-1)^m zeta(2+a+m, head)
    tail_sum = sum((-1) ** m * hurwitz_zeta(2.0 + alpha + m, head) for m in range(12)) / z
    total = float(wk.sum()) + tail_sum
    c = 1.0 / total
    # sum_k k w(k) = p0 + zeta(1+a)/z = 1
    first = c * 1.0 - c * float(np.dot(k, wk))

    def fn(kk, _a=alpha, _z=z, _c=c):
        return _c * (kk - 1.0) ** (-(1.0 + _a)) / (_z * kk)

    tail = NumericTail(head + 1, fn, c * tail_sum, first, math.inf)
    root = DiscreteLaw(c * wk, tail)
    return OffspringPair(w, 1.0, 1.0, c, law, root)


def build_pair(w: WeightSeq, b: float) -> OffspringPair:
    """Offspring pair at parameter ``b``; both laws are normalised."""
    if not b > 0:
        raise DomainError("b must be positive")
    if w.kind == "zipf" and b == w.radius:
        return _zipf_pair(w)
    if b >= w.radius:
        raise DivergentNormalizer(f"b = {b} >= rho = {w.radius}: normalising sums diverge")
    k, c_mu = _coeffs(w, b)
    a = 1.0 / float(c_mu.sum())
    mu = finite_law(a * c_mu)
    kr = np.arange(k[-1] + 2)
    with np.errstate(divide="ignore"):
        c_root = np.asarray(w(kr), dtype=float) * np.exp(kr * math.log(b))
    c_root[0] = 0.0
    c = 1.0 / float(c_root.sum())
    root = finite_law(c * c_root)
    return OffspringPair(w, float(b), a, c, mu, root)


def critical_pair(w: WeightSeq) -> OffspringPair:
    return build_pair(w, solve_critical_b(w))


@dataclass(frozen=True)
class StableOffspring:
    """``mu(k) = k^-(1+alpha) / zeta(alpha)`` for ``k >= 1``; mean one."""

    alpha: float
    law: DiscreteLaw
    normalization: float

    @property
    def mu(self) -> DiscreteLaw:
        return self.law

    def pmf(self, k):
        return self.law.pmf(k)


def stable_offspring(alpha: float, head: int = 64) -> StableOffspring:
    """Critical offspring law in the domain of attraction of an ``alpha``-stable law."""
    if not 1 < alpha < 2:
        raise DomainError("alpha must lie in (1, 2)")
    z = zeta(alpha)
    k = np.arange(1, head + 1, dtype=float)
    p = np.empty(head + 1)
    p[0] = 1.0 - zeta(1.0 + alpha) / z
    p[1:] = k ** (-(1.0 + alpha)) / z
    law = DiscreteLaw(p, PowerTail(head + 1, 1.0 / z, alpha))
    return StableOffspring(float(alpha), law, z)


def geometric_critical() -> DiscreteLaw:
    """``mu(k) = 2^-(k+1)``: critical with variance 2, used for the Brownian regime."""
    k = np.arange(64)
    return finite_law(0.5 ** (k + 1.0))


def scaling_constant_B(obj, n: int) -> float:
    """Scaling ``B_n``: ``sigma sqrt(n/2)`` for finite variance, ``n^(1/alpha)`` for stable laws."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if isinstance(obj, StableOffspring):
        return float(n) ** (1.0 / obj.alpha)
    if isinstance(obj, OffspringPair):
        var = obj.var_mu
    elif isinstance(obj, DiscreteLaw):
        var = obj.variance
    else:
        var = float(obj) ** 2
    if not math.isfinite(var):
        raise DomainError("infinite variance: use a stable law")
    return math.sqrt(var) * math.sqrt(n / 2.0)
