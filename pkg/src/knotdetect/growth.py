"""Exact power series for the template generating functions and the growth constants.

Everything is exact (``Fraction`` or ``int``) until the final decimal report.
The closed forms are

    bt(z)   = [(1-4z)^(3/2)(z+1) - 2z^5 - 10z^4 - 10z^3 + 5z - 1] / [2(z+1)(z+2)^3]
    2rt     = 1 + z - y - sqrt((1 - z + y)^2 - 8(z^2 - yz + y)/(1 - z))
    0       = -2r^2(y-1) + r(y-1)(3y-z+1) - y^3 + y^2(z+1) + y + z^2/(1-z)   (r = rtp)

and ``at`` is the fixed point of ``at(z) = rt(bt(at(z)), z)`` with ``at(0) = 0``.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

DEFAULT_ORDER = 200


class GrowthError(ValueError):
    pass


class CompositionNeedsZeroConstantTerm(GrowthError):
    pass


class ReciprocalNeedsUnitConstant(GrowthError):
    pass


class BranchSelectionFailed(GrowthError):
    pass


class NoStabilization(GrowthError):
    pass


class SlackTooLarge(GrowthError):
    pass


class LengthMismatch(GrowthError):
    pass


# --------------------------------------------------------------------------- univariate series


class TruncatedSeries:
    """Power series in ``z`` known exactly up to ``z^order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        order = len(coeffs) - 1 if order is None else order
        cs = [Fraction(c) for c in list(coeffs)[: order + 1]]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = cs

    @classmethod
    def z(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def geometric(cls, order: int) -> "TruncatedSeries":
        """``1/(1-z)``."""
        return cls([1] * (order + 1), order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def __repr__(self) -> str:
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedSeries) and self.order == other.order and self.coeffs == other.coeffs

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.order)

    def _common(self, other) -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        other = self._lift(other)
        n = self._common(other)
        return TruncatedSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        n = self._common(other)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: order + 1], min(order, self.order))

    def valuation(self) -> int:
        return next((k for k, c in enumerate(self.coeffs) if c), self.order + 1)

    def reciprocal(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ReciprocalNeedsUnitConstant("constant term must be invertible")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / c0
        for k in range(1, n + 1):
            s = sum(self.coeffs[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s / c0
        return TruncatedSeries(inv, n)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return TruncatedSeries([c / other for c in self.coeffs], self.order)

    def pow_binomial(self, alpha) -> "TruncatedSeries":
        """``u^alpha`` for ``u(0) = 1`` via ``u f' = alpha u' f`` (binomial series)."""
        alpha = Fraction(alpha)
        u = self.coeffs
        if u[0] != 1:
            raise GrowthError("binomial powers need constant term 1")
        n = self.order
        f = [Fraction(0)] * (n + 1)
        f[0] = Fraction(1)
        for k in range(1, n + 1):
            # k f_k = sum_{j=1..k} (alpha*j - (k-j)) u_j f_{k-j}
            s = Fraction(0)
            for j in range(1, k + 1):
                if u[j]:
                    s += (alpha * j - (k - j)) * u[j] * f[k - j]
            f[k] = s / k
        return TruncatedSeries(f, n)

    def sqrt_binomial(self) -> "TruncatedSeries":
        return self.pow_binomial(Fraction(1, 2))

    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        """``self(g(z))`` for ``g(0) = 0`` (Horner)."""
        if g.coeffs[0]:
            raise CompositionNeedsZeroConstantTerm("inner series must have zero constant term")
        n = self._common(g)
        g = g.truncate(n)
        out = TruncatedSeries.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            out = out * g + self.coeffs[k]
        return out

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_counting(self) -> bool:
        """Nonnegative integer coefficients."""
        return all(c.denominator == 1 and c >= 0 for c in self.coeffs)

    def integers(self) -> list[int]:
        if not self.is_integral():
            raise GrowthError("series has non-integer coefficients")
        return [int(c) for c in self.coeffs]


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f.compose(g)


def sqrt_binomial(u: TruncatedSeries) -> TruncatedSeries:
    return u.sqrt_binomial()


def bt_series(order: int) -> TruncatedSeries:
    """Basic templates counted by number of slots."""
    if order < 1:
        raise GrowthError("order must be at least 1")
    z = TruncatedSeries.z(order)
    one = TruncatedSeries.constant(1, order)
    root = (one - 4 * z).pow_binomial(Fraction(3, 2))
    num = root * (z + 1) + TruncatedSeries([-1, 5, 0, -10, -10, -2], order)
    den = 2 * (z + 1) * (z + 2) * (z + 2) * (z + 2)
    return num / den


# --------------------------------------------------------------------------- bivariate series


class BivariateSeries:
    """Series in ``y`` and ``z``; ``coeffs[m][n]`` is the coefficient of ``y^m z^n``."""

    __slots__ = ("orders", "coeffs")

    def __init__(self, coeffs, orders: tuple[int, int]):
        M, N = orders
        cs = [[Fraction(0)] * (N + 1) for _ in range(M + 1)]
        for m, row in enumerate(coeffs):
            if m > M:
                break
            for n, c in enumerate(row):
                if n > N:
                    break
                cs[m][n] = Fraction(c)
        self.orders = (M, N)
        self.coeffs = cs

    @classmethod
    def from_terms(cls, terms: dict, orders) -> "BivariateSeries":
        M, N = orders
        cs = [[0] * (N + 1) for _ in range(M + 1)]
        for (m, n), c in terms.items():
            if m <= M and n <= N:
                cs[m][n] = c
        return cls(cs, orders)

    def __getitem__(self, key) -> Fraction:
        m, n = key
        return self.coeffs[m][n]

    def _lift(self, other):
        if isinstance(other, BivariateSeries):
            return other
        return BivariateSeries.from_terms({(0, 0): other}, self.orders)

    def __add__(self, other):
        other = self._lift(other)
        M, N = self.orders
        return BivariateSeries(
            [[self.coeffs[m][n] + other.coeffs[m][n] for n in range(N + 1)] for m in range(M + 1)], self.orders
        )

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries([[-c for c in row] for row in self.coeffs], self.orders)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        M, N = self.orders
        if not isinstance(other, BivariateSeries):
            return BivariateSeries([[c * other for c in row] for row in self.coeffs], self.orders)
        a, b = self.coeffs, other.coeffs
        out = [[Fraction(0)] * (N + 1) for _ in range(M + 1)]
        for m1 in range(M + 1):
            for n1 in range(N + 1):
                c = a[m1][n1]
                if not c:
                    continue
                for m2 in range(M + 1 - m1):
                    row = b[m2]
                    dst = out[m1 + m2]
                    for n2 in range(N + 1 - n1):
                        if row[n2]:
                            dst[n1 + n2] += c * row[n2]
        return BivariateSeries(out, self.orders)

    __rmul__ = __mul__

    def _solve(self, step):
        """Fill coefficients in (m, n) order; ``step(out, m, n)`` returns the new coefficient."""
        M, N = self.orders
        out = [[Fraction(0)] * (N + 1) for _ in range(M + 1)]
        for m in range(M + 1):
            for n in range(N + 1):
                out[m][n] = step(out, m, n)
        return BivariateSeries(out, self.orders)

    def _conv(self, a, b, m, n, skip_origin_pairs=True) -> Fraction:
        s = Fraction(0)
        for i in range(m + 1):
            for j in range(n + 1):
                if (i, j) == (0, 0) or (i, j) == (m, n):
                    continue
                if a[i][j] and b[m - i][n - j]:
                    s += a[i][j] * b[m - i][n - j]
        return s

    def reciprocal(self) -> "BivariateSeries":
        a = self.coeffs
        c0 = a[0][0]
        if not c0:
            raise ReciprocalNeedsUnitConstant("constant term must be invertible")

        def step(out, m, n):
            if (m, n) == (0, 0):
                return 1 / c0
            s = self._conv(a, out, m, n) + a[m][n] * out[0][0]
            return -s / c0

        return self._solve(step)

    def sqrt(self) -> "BivariateSeries":
        """Square root with constant term +1 (requires constant term 1)."""
        a = self.coeffs
        if a[0][0] != 1:
            raise GrowthError("square root needs constant term 1")

        def step(out, m, n):
            if (m, n) == (0, 0):
                return Fraction(1)
            return (a[m][n] - self._conv(out, out, m, n)) / 2

        return self._solve(step)

    def total_degree_terms(self, max_total: int):
        M, N = self.orders
        for m in range(M + 1):
            for n in range(N + 1):
                if m + n <= max_total:
                    yield (m, n), self.coeffs[m][n]

    def evaluate_y(self, y: TruncatedSeries) -> TruncatedSeries:
        """Substitute a univariate series ``y(z)`` (with ``y(0) = 0``) for ``y``."""
        if y[0]:
            raise CompositionNeedsZeroConstantTerm("y series must vanish at 0")
        M, N = self.orders
        order = min(N, y.order)
        out = TruncatedSeries.constant(0, order)
        power = TruncatedSeries.constant(1, order)
        for m in range(M + 1):
            out = out + power * TruncatedSeries(self.coeffs[m], order)
            power = power * y
        return out


def _yz(orders):
    y = BivariateSeries.from_terms({(1, 0): 1}, orders)
    z = BivariateSeries.from_terms({(0, 1): 1}, orders)
    return y, z


def rt_series(orders: tuple[int, int] = (12, 12)) -> BivariateSeries:
    """Rational templates by slots (``y``) and crossings (``z``)."""
    y, z = _yz(orders)
    inv = (1 - z).reciprocal()
    disc = (1 - z + y) * (1 - z + y) - 8 * (z * z - y * z + y) * inv
    return (1 + z - y - disc.sqrt()) * Fraction(1, 2)


def rtp_series(orders: tuple[int, int] = (12, 12), check_total: int = 10) -> BivariateSeries:
    """Rational templates modulo summand permutation: the root with ``r(0,0) = 0`` of the quadratic."""
    y, z = _yz(orders)
    M, N = orders
    const = -y * y * y + y * y * (z + 1) + y + z * z * (1 - z).reciprocal()
    lin = (1 - y) * (1 + 3 * y - z)
    inv = lin.reciprocal()
    r = BivariateSeries.from_terms({}, orders)
    for _ in range(M + N + 2):
        r = (const + 2 * (1 - y) * r * r) * inv
    residual = -2 * r * r * (y - 1) + r * (y - 1) * (3 * y - z + 1) + const
    if any(c for row in residual.coeffs for c in row):
        raise BranchSelectionFailed("fixed-point iteration did not solve the quadratic")
    for _, c in r.total_degree_terms(check_total):
        if c.denominator != 1 or c < 0:
            raise BranchSelectionFailed("branch through 0 is not a counting series")
    return r


def rt_of(y: TruncatedSeries) -> TruncatedSeries:
    """``rt(y(z), z)`` from the closed form, for a univariate ``y`` with ``y(0) = 0``."""
    n = y.order
    z = TruncatedSeries.z(n)
    one = TruncatedSeries.constant(1, n)
    disc = (one - z + y) * (one - z + y) - 8 * (z * z - y * z + y) * TruncatedSeries.geometric(n)
    return (one + z - y - disc.sqrt_binomial()) * Fraction(1, 2)


# --------------------------------------------------------------------------- at(z)


def _solve_at_relaxed(order: int, bt: TruncatedSeries | None = None) -> list[int]:
    """Coefficientwise solution of ``A = A^2 + Y A - z A + z + Y + 2z^2/(1-z)``, ``Y = bt(A)``.

    This is the rt quadratic rearranged; every right-hand coefficient of ``z^k``
    only involves ``A_j`` with ``j < k``, so the fixed point is built one
    coefficient at a time with integer arithmetic.
    """
    b = (bt if bt is not None and bt.order >= order else bt_series(order)).integers()
    A = [0] * (order + 1)
    Y = [0] * (order + 1)
    # P[m][k] = coefficient of z^k in A^m, for m >= 1
    P = [None, A] + [[0] * (order + 1) for _ in range(order - 1)]
    for k in range(1, order + 1):
        yk = 0
        for m in range(2, k + 1):
            prev = P[m - 1]
            s = 0
            for j in range(1, k - m + 2):
                if A[j] and prev[k - j]:
                    s += A[j] * prev[k - j]
            P[m][k] = s
            if b[m]:
                yk += b[m] * s
        Y[k] = yk
        a2 = P[2][k] if k >= 2 else 0
        ya = sum(Y[j] * A[k - j] for j in range(2, k))
        A[k] = a2 + ya - A[k - 1] + (1 if k == 1 else 0) + yk + (2 if k >= 2 else 0)
    return A


def _solve_at_picard(order: int, max_iter: int | None = None) -> TruncatedSeries:
    bt = bt_series(order)
    f = TruncatedSeries.z(order)
    budget = order + 10 if max_iter is None else max_iter
    for _ in range(budget):
        nxt = rt_of(bt.compose(f))
        if nxt == f:
            return f
        f = nxt
    raise NoStabilization(f"coefficients did not stabilize within {budget} iterations")


def solve_at(order: int = DEFAULT_ORDER, method: str = "relaxed", bt: TruncatedSeries | None = None) -> TruncatedSeries:
    """Alternating prime tangles by crossings: the fixed point of ``f -> rt(bt(f), z)``.

    ``method="picard"`` runs the literal iteration from ``f = z`` until the
    truncated series stops changing; ``"relaxed"`` (default) computes the same
    fixed point one coefficient at a time and is much faster at high order.
    """
    if order < 1:
        raise GrowthError("order must be at least 1")
    if method == "picard":
        return _solve_at_picard(order)
    if method != "relaxed":
        raise ValueError(f"unknown method {method!r}")
    return TruncatedSeries(_solve_at_relaxed(order, bt), order)


def coefficient_ratios(s: TruncatedSeries, start: int, stop: int) -> list[tuple[int, Fraction]]:
    return [(n, s[n + 1] / s[n]) for n in range(start, stop + 1) if s[n]]


# --------------------------------------------------------------------------- constants


@dataclass(frozen=True)
class Surd:
    """``(a + b*sqrt(d)) / c`` with integers ``a, b, c`` and squarefree-free ``d >= 0``."""

    a: int
    b: int
    d: int
    c: int = 1

    def decimal(self, digits: int = 50) -> decimal.Decimal:
        ctx = decimal.Context(prec=digits + 10)
        root = ctx.sqrt(decimal.Decimal(self.d))
        val = ctx.divide(ctx.add(decimal.Decimal(self.a), ctx.multiply(decimal.Decimal(self.b), root)), decimal.Decimal(self.c))
        return +val

    def __float__(self) -> float:
        return float(self.decimal(30))

    def __str__(self) -> str:
        inner = f"{self.a}+{self.b}*sqrt({self.d})" if self.b >= 0 else f"{self.a}-{-self.b}*sqrt({self.d})"
        return f"({inner})/{self.c}"

    def conj_norm(self) -> Fraction:
        """``(a + b sqrt d)(a - b sqrt d) / c^2``."""
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.c * self.c)

    def quadratic(self) -> tuple[int, int, int]:
        """Integer ``(p, q, r)`` with ``p x^2 + q x + r = 0`` at this value (minimal up to scaling)."""
        # x = (a + b sqrt d)/c  =>  (c x - a)^2 = b^2 d
        from math import gcd

        p, q, r = self.c * self.c, -2 * self.a * self.c, self.a * self.a - self.b * self.b * self.d
        g = gcd(gcd(p, q), r)
        return p // g, q // g, r // g


def _positive_root(p: int, q: int, r: int) -> Surd:
    """Positive root of ``p z^2 + q z + r`` (assumes ``p > 0`` and ``r < 0``)."""
    return Surd(-q, 1, q * q - 4 * p * r, 2 * p)


def _reciprocal_root(p: int, q: int, r: int) -> Surd:
    """Reciprocal of the positive root of ``p z^2 + q z + r``, i.e. the positive root of ``r w^2 + q w + p`` negated."""
    # w = 1/z solves r w^2 + q w + p = 0 ; with r < 0 the positive root is (-q - sqrt(D)) / (2r)
    disc = q * q - 4 * p * r
    return _reduce(Surd(q, 1, disc, -2 * r))


def _reduce(s: Surd) -> Surd:
    from math import gcd, isqrt

    a, b, d, c = s.a, s.b, s.d, s.c
    # pull square factors out of d
    k = 2
    while k * k <= d:
        while d % (k * k) == 0:
            d //= k * k
            b *= k
        k += 1
    if isqrt(d) ** 2 == d:
        a, b, d = a + b * isqrt(d), 0, 0
    g = gcd(gcd(a, b), c)
    if c < 0:
        g = -g
    return Surd(a // g, b // g, d, c // g)


@dataclass(frozen=True)
class SingularityConstants:
    z1: Surd
    z2: Surd
    growth_lower: Surd  # 1/z1, growth rate of alternating links
    growth_upper: Surd  # 1/z2, bound for alternating links modulo oriented mutation
    lower_quadratic: tuple[int, int, int] = (135, 101, -20)
    upper_quadratic: tuple[int, int, int] = (145530, 109417, -21667)


def singularity_constants() -> SingularityConstants:
    lo = (135, 101, -20)
    hi = (145530, 109417, -21667)
    z1 = _reduce(_positive_root(*lo))
    z2 = _reduce(_positive_root(*hi))
    g1 = _reciprocal_root(*lo)
    g2 = _reciprocal_root(*hi)
    out = SingularityConstants(z1, z2, g1, g2, lo, hi)
    if not (g1.decimal() > decimal.Decimal("6.1479") and g2.decimal() < decimal.Decimal("6.1433")):
        raise GrowthError("growth constants out of the expected range")
    return out


# closed forms as printed, for cross-checking the derived surds
LOWER_CLOSED_FORM = Surd(101, 1, 21001, 40)
UPPER_CLOSED_FORM = Surd(7 * 15631, 7, 501732121, 43334)


# --------------------------------------------------------------------------- sandwich and decay


def _exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


def sandwich_gamma(alpha, beta, epsilon):
    """``gamma = (alpha + eps) / (beta - eps)``; requires ``alpha >= 1``, ``eps > 0`` and ``alpha + eps < beta - eps``."""
    if alpha < 1:
        raise GrowthError("alpha must be at least 1")
    if epsilon <= 0:
        raise GrowthError("epsilon must be positive")
    if not alpha + epsilon < beta - epsilon:
        raise SlackTooLarge("need alpha + epsilon < beta - epsilon")
    vals = [_exact(v) for v in (alpha, beta, epsilon)]
    if all(v is not None for v in vals):
        a, b, e = vals
        return (a + e) / (b - e)
    return (alpha + epsilon) / (beta - epsilon)


@dataclass(frozen=True)
class GrowthSandwich:
    alpha: object  # upper growth rate of the quotient family
    beta: object  # lower growth rate of the ambient family
    epsilon: object
    gamma: object

    @classmethod
    def build(cls, alpha, beta, epsilon) -> "GrowthSandwich":
        return cls(alpha, beta, epsilon, sandwich_gamma(alpha, beta, epsilon))


@dataclass(frozen=True)
class DecayCertificate:
    delta: Fraction  # 6.1433 / 6.1479
    bound: Fraction  # 0.9993
    holds: bool
    supremum_ratio: decimal.Decimal  # (1/z2) / (1/z1), with no rounding of the constants


def decay_bound() -> DecayCertificate:
    consts = singularity_constants()
    delta = Fraction(61433, 10000) / Fraction(61479, 10000)
    bound = Fraction(9993, 10000)
    ratio = consts.growth_upper.decimal(40) / consts.growth_lower.decimal(40)
    return DecayCertificate(delta, bound, delta < bound, ratio)


@dataclass(frozen=True)
class DensityCurve:
    pointwise: list[Fraction]
    cumulative: list[Fraction]


def density_curve(counts_ambient: Sequence[int], counts_sub: Sequence[int]) -> DensityCurve:
    """Ratios ``#Y_n / #X_n`` and their cumulative versions ``sum_k #Y_k / sum_k #X_k``."""
    if len(counts_ambient) != len(counts_sub):
        raise LengthMismatch("ambient and subset counts differ in length")
    if any(x <= 0 for x in counts_ambient):
        raise GrowthError("ambient counts must be positive")
    point = [Fraction(y) / Fraction(x) for x, y in zip(counts_ambient, counts_sub)]
    cum = []
    sx = sy = Fraction(0)
    for x, y in zip(counts_ambient, counts_sub):
        sx += Fraction(x)
        sy += Fraction(y)
        cum.append(sy / sx)
    return DensityCurve(point, cum)
