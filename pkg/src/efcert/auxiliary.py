"""Auxiliary polynomial construction.

Given a system with m components and a degree bound n, find integer
polynomials P_1..P_m of degree <= n, not all zero, such that

    R := sum_i P_i f_i      vanishes at 0 to order >= tau,
    tau = m(n+1) - floor(eps1 n) - 1,       0 < eps1 < 1/(2m-1).

The vanishing conditions are tau exact linear equations in the m(n+1)
coefficients, so a nontrivial kernel always exists; the kernel is computed
exactly and the basis vector of least max-norm (ties broken lexicographically)
is returned after primitive scaling.  The achieved order of vanishing is then
computed, not assumed, by extending the series until a nonzero coefficient
appears.

The remainder R comes with a rigorous tail record: writing R = sum r_nu z^nu
and using |phi_{k,i}| <= C^(k+1) from the growth certificate,

    |r_nu| <= m (n+1) B Chat^(nu+1) / (nu - n)!     for nu > n,

with B the max coefficient modulus of the P_i and Chat = max(1, C): each of
the m(n+1) terms b_{i,j} phi_{nu-j,i}/(nu-j)! is at most B Chat^(nu+1)/(nu-n)!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Poly, RatSeries, Rational, kernel_basis
from .efunction import DiffSystem
from .errors import InputError, MissingGrowthCertificate

_ACHIEVED_SEARCH_SLACK = 8


def default_eps1(m: int) -> Fraction:
    return Fraction(1, 2 * m)


def validate_eps1(m: int, eps1: Rational) -> Fraction:
    eps1 = Fraction(eps1)
    if not 0 < eps1 < Fraction(1, 2 * m - 1):
        raise InputError(
            f"eps1 must lie in (0, 1/{2 * m - 1}) for m={m}, got {eps1}")
    return eps1


def vanishing_order_target(m: int, n: int, eps1: Rational) -> int:
    """tau = m(n+1) - floor(eps1 n) - 1."""
    eps1 = validate_eps1(m, eps1)
    return m * (n + 1) - math.floor(eps1 * n) - 1


@dataclass(frozen=True)
class AuxiliaryBasis:
    """Integer polynomials P_1..P_m with ord_0(sum P_i f_i) >= tau.

    achieved_order is the exact vanishing order when achieved_exact is True;
    otherwise the search hit its limit and the order is >= achieved_order.
    height is the max coefficient modulus over all P_i.
    """

    n: int
    eps1: Fraction
    tau: int
    polys: tuple[Poly, ...]
    achieved_order: int
    achieved_exact: bool
    height: int

    @property
    def m(self) -> int:
        return len(self.polys)


def _remainder_coefficient(polys: Sequence[Poly], series: Sequence[RatSeries],
                           k: int) -> Fraction:
    acc = Fraction(0)
    for p, s in zip(polys, series):
        for j, b in enumerate(p.coeffs):
            if b and j <= k:
                acc += b * s.coefficient(k - j)
    return acc


def construct(sys: DiffSystem, n: int, eps1: Rational | None = None
              ) -> AuxiliaryBasis:
    """Solve the vanishing conditions exactly and pick the smallest kernel
    vector (max-norm, then lexicographic) as the auxiliary basis."""
    if n < 1:
        raise InputError("construct requires n >= 1")
    m = sys.m
    if eps1 is None:
        eps1 = default_eps1(m)
    eps1 = validate_eps1(m, eps1)
    tau = vanishing_order_target(m, n, eps1)
    series = sys.coefficients(tau - 1 if tau > 0 else 0)
    cols = m * (n + 1)
    matrix = []
    for k in range(tau):
        row = []
        for i in range(m):
            for nu in range(n + 1):
                row.append(series[i].coefficient(k - nu) if nu <= k
                           else Fraction(0))
        matrix.append(row)
    if not matrix:
        matrix = [[Fraction(0)] * cols]
    kernel = kernel_basis(matrix)
    if not kernel:
        raise AssertionError(
            "vanishing system has full column rank; dimension count violated")
    vec = min(kernel, key=lambda v: (max(abs(e) for e in v), v))
    polys = tuple(Poly(vec[i * (n + 1):(i + 1) * (n + 1)]) for i in range(m))

    limit = tau + m * (n + 1) + _ACHIEVED_SEARCH_SLACK
    ext = sys.coefficients(limit)
    achieved = None
    for k in range(tau, limit + 1):
        if _remainder_coefficient(polys, ext, k) != 0:
            achieved = k
            break
    for k in range(min(tau, limit)):
        if _remainder_coefficient(polys, ext, k) != 0:
            raise AssertionError(f"vanishing condition failed at order {k}")
    if achieved is None:
        return AuxiliaryBasis(n=n, eps1=eps1, tau=tau, polys=polys,
                              achieved_order=limit + 1, achieved_exact=False,
                              height=max(abs(e) for e in vec))
    return AuxiliaryBasis(n=n, eps1=eps1, tau=tau, polys=polys,
                          achieved_order=achieved, achieved_exact=True,
                          height=max(abs(e) for e in vec))


@dataclass(frozen=True)
class RemainderSeries:
    """Exact leading coefficients of R plus a factorial-decay tail record.

    coeffs[nu] is the coefficient of z^nu for nu <= cutoff; for nu beyond the
    cutoff, tail_bound(nu) majorizes |coefficient of z^nu|.
    """

    coeffs: tuple[Fraction, ...]
    cutoff: int
    m: int
    n: int
    height: int
    c_hat: Fraction

    def tail_bound(self, nu: int) -> Fraction:
        if nu <= self.n:
            raise ValueError(f"tail bound needs nu > n = {self.n}")
        return (self.m * (self.n + 1) * self.height
                * self.c_hat ** (nu + 1) / math.factorial(nu - self.n))


def remainder(basis: AuxiliaryBasis, sys: DiffSystem, cutoff: int
              ) -> RemainderSeries:
    """Exact coefficients of R up to the cutoff with the certified tail."""
    if cutoff < basis.tau:
        raise InputError(f"cutoff {cutoff} below vanishing target {basis.tau}")
    if cutoff < basis.achieved_order and basis.achieved_exact:
        raise InputError(
            f"cutoff {cutoff} below achieved vanishing order "
            f"{basis.achieved_order}")
    if sys.growth is None:
        raise MissingGrowthCertificate("remainder tail needs a growth certificate")
    series = sys.coefficients(cutoff)
    coeffs = tuple(_remainder_coefficient(basis.polys, series, k)
                   for k in range(cutoff + 1))
    return RemainderSeries(coeffs=coeffs, cutoff=cutoff, m=sys.m, n=basis.n,
                           height=basis.height,
                           c_hat=max(Fraction(1), Fraction(sys.growth.C)))
