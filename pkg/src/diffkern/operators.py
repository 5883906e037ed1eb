"""Difference operators of Ruijsenaars type, numeric and exact.

Type A (first order and the commuting higher-order family):

    D_x f = sum_i A_i(x) f(x + delta e_i),
    A_i(x) = prod_{j != i} [x_i - x_j + kappa] / [x_i - x_j]

    D_{r,x} f = sum_{|I|=r} prod_{i in I, j not in I}
                [x_i - x_j + kappa]/[x_i - x_j] * f(x + delta sum_{i in I} e_i)

Type BC (van Diejen / Komori-Hikami first-order operator):

    E_x f = sum_i A_i^+ f(x + delta e_i) + sum_i A_i^- f(x - delta e_i)
            + (sum_r A_r^0) f(x)

with A_i^+ built from 2*rho numerator parameters mu_s, half-period
denominators, and pair interactions [x_i +- x_j + kappa]/[x_i +- x_j];
A_i^-(x) = A_i^+(-x); and constant terms A_r^0 carrying the quasi-period
exponential e(-(m kappa + c/2) eta_r).  The Koornwinder-type variant is

    D_x f = sum_i A_i^+ (f(x + delta e_i) - f(x))
          + sum_i A_i^- (f(x - delta e_i) - f(x))  =  E_x f - E_x(1) f.

The exact multiplicative operators act on Laurent polynomials over Fraction:
the Koornwinder operator in bracket normalization (eigenvalues
sum_i [alpha t^(m-i) q^(lambda_i); alpha t^(m-i)]) and the Macdonald
operators of order r.  Both are computed over an explicit product common
denominator followed by exact multivariate division; a nonzero remainder
(possible only on non-invariant input) surfaces as InexactDivisionError.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .laurent import ExactParams, LaurentPoly, divide_exact
from .sigma import (
    POLE_THRESHOLD,
    DomainError,
    FamilyKind,
    PoleError,
    SigmaFamily,
    phase,
    sigma_eval,
)

FnM = Callable[[Sequence[complex]], complex]

_LATTICE_TOL = 1e-9


# ======================================================================
# parameter bundles
# ======================================================================


def _in_period_lattice(fam: SigmaFamily, value: complex) -> bool:
    """Whether value lies in the zero lattice Omega of the family (within tolerance)."""
    v = complex(value)
    if fam.kind is FamilyKind.RATIONAL:
        return abs(v) < _LATTICE_TOL
    if fam.kind is FamilyKind.TRIGONOMETRIC:
        ratio = v / fam.omega1
        return abs(ratio - round(ratio.real)) < _LATTICE_TOL
    # elliptic: solve v = a*omega1 + b*omega2 over the reals
    w1, w2 = complex(fam.omega1), complex(fam.omega2)
    det = w1.real * w2.imag - w1.imag * w2.real
    a = (v.real * w2.imag - v.imag * w2.real) / det
    b = (w1.real * v.imag - w1.imag * v.real) / det
    return abs(a - round(a)) < _LATTICE_TOL and abs(b - round(b)) < _LATTICE_TOL


@dataclass(frozen=True)
class ParamsA:
    """Type-A operator data: shift unit delta, coupling kappa, sigma family."""

    delta: complex
    kappa: complex
    fam: SigmaFamily

    def __post_init__(self) -> None:
        for name in ("delta", "kappa"):
            if _in_period_lattice(self.fam, getattr(self, name)):
                raise DomainError(
                    f"{name} = {getattr(self, name)} lies in the period lattice"
                )


@dataclass(frozen=True)
class ParamsBC:
    """Type-BC operator data: 2*rho parameters mu_s plus (delta, kappa).

    The derived constant c = sum(mu) - (rho/2)(delta+kappa) + sum(omega_s)
    is recomputed on access, never stored.
    """

    mu: tuple[complex, ...]
    delta: complex
    kappa: complex
    fam: SigmaFamily

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(self.mu))
        if len(self.mu) != 2 * self.fam.rho:
            raise ValueError(
                f"need {2 * self.fam.rho} mu parameters for this family, "
                f"got {len(self.mu)}"
            )

    @property
    def c_const(self) -> complex:
        rho = self.fam.rho
        return (
            sum(self.mu)
            - (rho / 2) * (self.delta + self.kappa)
            + sum(self.fam.omegas)
        )

    def negated(self) -> "ParamsBC":
        """(-mu | -delta, -kappa), the sign-symmetry partner."""
        return ParamsBC(
            tuple(-m for m in self.mu), -self.delta, -self.kappa, self.fam
        )

    def dual_nu(self) -> "ParamsBC":
        """nu_r = (delta+kappa)/2 - mu_r, parameters for the y side of the
        Cauchy-kernel identity (same delta, kappa)."""
        half = (self.delta + self.kappa) / 2
        return ParamsBC(
            tuple(half - m for m in self.mu), self.delta, self.kappa, self.fam
        )

    def swapped(self) -> "ParamsBC":
        """(mu | kappa, delta): shift and coupling exchanged."""
        return ParamsBC(self.mu, self.kappa, self.delta, self.fam)


# ======================================================================
# numeric type A
# ======================================================================


def _sigma_ratio(fam: SigmaFamily, num_arg: complex, den_arg: complex, what: str) -> complex:
    den = sigma_eval(fam, den_arg)
    if abs(den) < POLE_THRESHOLD:
        raise PoleError(f"pole: [{what}] = {den}", where=what)
    return sigma_eval(fam, num_arg) / den

def coeff_A(p: ParamsA, x: Sequence[complex], i: int) -> complex:
    """A_i(x; kappa) = prod_{j != i} [x_i - x_j + kappa]/[x_i - x_j]."""
    out = 1 + 0j
    for j in range(len(x)):
        if j == i:
            continue
        out *= _sigma_ratio(
            p.fam, x[i] - x[j] + p.kappa, x[i] - x[j], f"x_{i} - x_{j}"
        )
    return out


def _shift(x: Sequence[complex], i: int, delta: complex) -> tuple[complex, ...]:
    out = list(x)
    out[i] = out[i] + delta
    return tuple(out)


def apply_A(p: ParamsA, f: FnM, x: Sequence[complex]) -> complex:
    """First-order type-A operator applied to a black-box function at x."""
    return sum(
        coeff_A(p, x, i) * f(_shift(x, i, p.delta)) for i in range(len(x))
    )


def apply_A_higher(p: ParamsA, r: int, f: FnM, x: Sequence[complex]) -> complex:
    """Order-r type-A operator: subsets I of size r shift simultaneously."""
    m = len(x)
    if not 1 <= r <= m:
        raise ValueError(f"order r must satisfy 1 <= r <= {m}, got {r}")
    total = 0 + 0j
    for subset in itertools.combinations(range(m), r):
        inside = set(subset)
        coeff = 1 + 0j
        for i in subset:
            for j in range(m):
                if j in inside:
                    continue
                coeff *= _sigma_ratio(
                    p.fam, x[i] - x[j] + p.kappa, x[i] - x[j], f"x_{i} - x_{j}"
                )
        shifted = tuple(
            xi + p.delta if k in inside else xi for k, xi in enumerate(x)
        )
        total += coeff * f(shifted)
    return total


# ======================================================================
# numeric type BC
# ======================================================================


def _coeff_BC_plus(p: ParamsBC, x: Sequence[complex], i: int) -> complex:
    fam = p.fam
    rho = fam.rho
    xi = x[i]
    num = 1 + 0j
    for mu_s in p.mu:
        num *= sigma_eval(fam, xi + mu_s)
    den = 1 + 0j
    for s in range(rho):
        w = fam.omegas[s]
        for arg, what in (
            (xi - w / 2, f"x_{i} - omega_{s + 1}/2"),
            (xi + (p.delta - w) / 2, f"x_{i} + (delta - omega_{s + 1})/2"),
        ):
            val = sigma_eval(fam, arg)
            if abs(val) < POLE_THRESHOLD:
                raise PoleError(f"pole: [{what}] = {val}", where=what)
            den *= val
    pair = 1 + 0j
    for j in range(len(x)):
        if j == i:
            continue
        for sgn in (1, -1):
            pair *= _sigma_ratio(
                fam,
                xi + sgn * x[j] + p.kappa,
                xi + sgn * x[j],
                f"x_{i} {'+' if sgn > 0 else '-'} x_{j}",
            )
    return num / den * pair


def coeff_BC(p: ParamsBC, x: Sequence[complex], i: int, sign: int) -> complex:
    """A_i^{+-}(x; mu | delta, kappa); sign +1 or -1, with A^-(x) = A^+(-x)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if sign == 1:
        return _coeff_BC_plus(p, x, i)
    return _coeff_BC_plus(p, tuple(-v for v in x), i)


def coeff_BC_zero(p: ParamsBC, x: Sequence[complex], r: int) -> complex:
    """A_r^0(x; mu | delta, kappa) for r = 0..rho-1 (table index).

    Includes the quasi-period exponential e(-(m kappa + c/2) eta_r); in the
    trigonometric and rational cases eta_r = 0 and the exponential is 1.
    """
    fam = p.fam
    rho = fam.rho
    if not 0 <= r < rho:
        raise ValueError(f"constant-term index r must be in 0..{rho - 1}")
    m = len(x)
    w_r = fam.omegas[r]
    eta_r = fam.etas[r]
    expo = phase(-(m * p.kappa + p.c_const / 2) * eta_r)

    num = 1 + 0j
    base = (w_r - p.delta) / 2
    for mu_s in p.mu:
        num *= sigma_eval(fam, base + mu_s)

    den = sigma_eval(fam, p.kappa)
    if abs(den) < POLE_THRESHOLD:
        raise PoleError("pole: [kappa] vanishes", where="kappa")
    for s in range(rho):
        if s != r:
            val = sigma_eval(fam, (w_r - fam.omegas[s]) / 2)
            if abs(val) < POLE_THRESHOLD:
                raise PoleError(
                    f"pole: [(omega_{r + 1} - omega_{s + 1})/2] vanishes",
                    where=f"(omega_{r + 1} - omega_{s + 1})/2",
                )
            den *= val
    for s in range(rho):
        val = sigma_eval(fam, (w_r - fam.omegas[s] + p.kappa - p.delta) / 2)
        if abs(val) < POLE_THRESHOLD:
            raise PoleError(
                f"pole: [(omega_{r + 1} - omega_{s + 1} + kappa - delta)/2]",
                where=f"(omega_{r + 1} - omega_{s + 1} + kappa - delta)/2",
            )
        den *= val

    pair = 1 + 0j
    for j in range(m):
        for sgn in (1, -1):
            pair *= _sigma_ratio(
                fam,
                base + sgn * x[j] + p.kappa,
                base + sgn * x[j],
                f"(omega_{r + 1} - delta)/2 {'+' if sgn > 0 else '-'} x_{j}",
            )
    return expo * num / den * pair


def apply_E_BC(p: ParamsBC, f: FnM, x: Sequence[complex]) -> complex:
    """Full BC Ruijsenaars operator E applied to f at x."""
    m = len(x)
    total = 0 + 0j
    for i in range(m):
        total += coeff_BC(p, x, i, +1) * f(_shift(x, i, p.delta))
        total += coeff_BC(p, x, i, -1) * f(_shift(x, i, -p.delta))
    zero_sum = sum(coeff_BC_zero(p, x, r) for r in range(p.fam.rho))
    return total + zero_sum * f(x)


def apply_D_BC(p: ParamsBC, f: FnM, x: Sequence[complex]) -> complex:
    """Koornwinder-type variant D = E - E(1): shifts minus the identity."""
    m = len(x)
    fx = f(x)
    total = 0 + 0j
    for i in range(m):
        total += coeff_BC(p, x, i, +1) * (f(_shift(x, i, p.delta)) - fx)
        total += coeff_BC(p, x, i, -1) * (f(_shift(x, i, -p.delta)) - fx)
    return total


def bc_constant(p: ParamsBC) -> complex:
    """C, the value of the BC operator in zero variables (multiplication constant)."""
    return sum(coeff_BC_zero(p, (), r) for r in range(p.fam.rho))


def apply_E_BC_dup(p: ParamsBC, f: FnM, x: Sequence[complex]) -> complex:
    """Duplication-rewritten form of (1/4) prod_{s<rho} [omega_s/2]^2 * E f.

    Used as a cross-check of the coefficient assembly: the half-period
    denominators collapse into [2x_i][2x_i + delta] at the cost of the
    modified constant-term exponential K_r.
    """
    fam = p.fam
    rho = fam.rho
    m = len(x)
    c = p.c_const
    total = 0 + 0j
    for i in range(m):
        for sgn in (1, -1):
            xi = sgn * x[i]
            num = 1 + 0j
            for mu_s in p.mu:
                num *= sigma_eval(fam, xi + mu_s)
            den = sigma_eval(fam, 2 * xi) * sigma_eval(fam, 2 * xi + p.delta)
            if abs(den) < POLE_THRESHOLD:
                raise PoleError("pole: [2x_i][2x_i + delta] vanishes")
            pair = 1 + 0j
            for j in range(m):
                if j == i:
                    continue
                for s2 in (1, -1):
                    pair *= _sigma_ratio(
                        fam,
                        xi + s2 * x[j] + p.kappa,
                        xi + s2 * x[j],
                        f"x_{i} +- x_{j}",
                    )
            total += num / den * pair * f(_shift(x, i, sgn * p.delta))

    kappa_br = sigma_eval(fam, p.kappa)
    kd_br = sigma_eval(fam, p.kappa - p.delta)
    if abs(kappa_br) < POLE_THRESHOLD or abs(kd_br) < POLE_THRESHOLD:
        raise PoleError("pole: [kappa] or [kappa - delta] vanishes")
    const = 0 + 0j
    for r in range(rho):
        w_r = fam.omegas[r]
        eta_r = fam.etas[r]
        k_factor = phase(-(w_r + (m + 1) * p.kappa - p.delta + c / 2) * eta_r)
        num = 1 + 0j
        base = (w_r - p.delta) / 2
        for mu_s in p.mu:
            num *= sigma_eval(fam, base + mu_s)
        pair = 1 + 0j
        for j in range(m):
            for sgn in (1, -1):
                pair *= _sigma_ratio(
                    fam,
                    base + sgn * x[j] + p.kappa,
                    base + sgn * x[j],
                    f"(omega_{r + 1} - delta)/2 +- x_{j}",
                )
        const += k_factor * num / (2 * kappa_br * kd_br) * pair
    return total + const * f(x)


def dup_prefactor(p: ParamsBC) -> complex:
    """(1/4) prod_{s=1}^{rho-1} [omega_s/2]^2, the left factor of the rewrite."""
    out = 0.25 + 0j
    for s in range(p.fam.rho - 1):
        out *= sigma_eval(p.fam, p.fam.omegas[s] / 2) ** 2
    return out


# ======================================================================
# exact multiplicative operators
# ======================================================================


def _two_term(m: int, entries: dict[int, int], root: Fraction) -> LaurentPoly:
    """root * z^(e/2) - (1/root) * z^(-e/2) for the monomial described by
    entries {var: doubled exponent}."""
    up = [0] * m
    for var, e2 in entries.items():
        up[var] = e2
    down = [-e for e in up]
    return LaurentPoly(m, {tuple(up): root, tuple(down): -1 / root})


def _koorn_own_factors(m: int, i: int, sq: Fraction) -> list[LaurentPoly]:
    """[z_i^2], [q z_i^2], [q z_i^-2] in canonical orientation."""
    return [
        _two_term(m, {i: 2}, Fraction(1)),
        _two_term(m, {i: 2}, sq),
        _two_term(m, {i: -2}, sq),
    ]


def _koorn_pair_factors(m: int, k: int, l: int) -> list[LaurentPoly]:
    """[z_k z_l], [z_k / z_l] for k < l in canonical orientation."""
    return [
        _two_term(m, {k: 1, l: 1}, Fraction(1)),
        _two_term(m, {k: 1, l: -1}, Fraction(1)),
    ]


def apply_koorn_mult(ep: ExactParams, f: LaurentPoly, m: int) -> LaurentPoly:
    """Exact Koornwinder operator in bracket normalization.

    D f = sum_i A_i^+(z) (T_{q,z_i} - 1) f + sum_i A_i^-(z) (T_{q,z_i}^-1 - 1) f,

    A_i^+ = [a z_i][b z_i][c z_i][d z_i] / ([z_i^2][q z_i^2])
            * prod_{j != i} [t z_i z_j][t z_i / z_j] / ([z_i z_j][z_i / z_j]),
    A_i^-(z) = A_i^+(z^-1)  (all variables inverted).

    Eigenvalues on P_lambda are sum_i [alpha t^(m-i) q^(lambda_i); alpha t^(m-i)].
    Computed over the common denominator
        prod_i [z_i^2][q z_i^2][q z_i^-2] * prod_{k<l} [z_k z_l][z_k/z_l]
    with exact division; the division is exact precisely on inputs the
    operator maps to Laurent polynomials (W-invariant f in particular), and
    raises InexactDivisionError otherwise.
    """
    if f.m != m:
        raise ValueError(f"f has {f.m} variables, expected {m}")
    if m < 1:
        raise ValueError("need at least one variable")
    sq = ep.sq
    d_total = LaurentPoly.one(m)
    for i in range(m):
        for fac in _koorn_own_factors(m, i, sq):
            d_total = d_total * fac
    for k in range(m):
        for l in range(k + 1, m):
            for fac in _koorn_pair_factors(m, k, l):
                d_total = d_total * fac

    numerator = LaurentPoly.zero(m)
    for i in range(m):
        # numerator brackets of A_i^+
        n_plus = LaurentPoly.one(m)
        for root in (ep.sa, ep.sb, ep.sc, ep.sd):
            n_plus = n_plus * _two_term(m, {i: 1}, root)
        for j in range(m):
            if j == i:
                continue
            n_plus = n_plus * _two_term(m, {i: 1, j: 1}, ep.st)
            n_plus = n_plus * _two_term(m, {i: 1, j: -1}, ep.st)
        n_minus = n_plus.invert_all()

        # complements: D_total / (denominator of A_i^{+-}), sign included
        comp_base = LaurentPoly.one(m)
        for k in range(m):
            if k == i:
                continue
            for fac in _koorn_own_factors(m, k, sq):
                comp_base = comp_base * fac
        for k in range(m):
            for l in range(k + 1, m):
                if k == i or l == i:
                    continue
                for fac in _koorn_pair_factors(m, k, l):
                    comp_base = comp_base * fac
        sign = Fraction(-1) ** i
        own = _koorn_own_factors(m, i, sq)
        comp_plus = comp_base * own[2] * sign  # leftover [q z_i^-2]
        comp_minus = comp_base * own[1] * (-sign)  # leftover [q z_i^2]

        up = f.substitute(i, sqrt_scale=sq) - f
        down = f.substitute(i, sqrt_scale=1 / sq) - f
        numerator = numerator + n_plus * up * comp_plus
        numerator = numerator + n_minus * down * comp_minus

    return divide_exact(numerator, d_total)


def koorn_denominator_check(ep: ExactParams, m: int, i: int) -> bool:
    """Internal consistency: denominator times complement equals D_total for
    both shift directions (exercised by the test suite on small m)."""
    sq = ep.sq
    d_total = LaurentPoly.one(m)
    for k in range(m):
        for fac in _koorn_own_factors(m, k, sq):
            d_total = d_total * fac
    for k in range(m):
        for l in range(k + 1, m):
            for fac in _koorn_pair_factors(m, k, l):
                d_total = d_total * fac

    # actual denominators, assembled exactly as the formulas read
    den_plus = _two_term(m, {i: 2}, Fraction(1)) * _two_term(m, {i: 2}, sq)
    for j in range(m):
        if j == i:
            continue
        den_plus = den_plus * _two_term(m, {i: 1, j: 1}, Fraction(1))
        den_plus = den_plus * _two_term(m, {i: 1, j: -1}, Fraction(1))
    den_minus = den_plus.invert_all()

    comp_base = LaurentPoly.one(m)
    for k in range(m):
        if k == i:
            continue
        for fac in _koorn_own_factors(m, k, sq):
            comp_base = comp_base * fac
    for k in range(m):
        for l in range(k + 1, m):
            if k == i or l == i:
                continue
            for fac in _koorn_pair_factors(m, k, l):
                comp_base = comp_base * fac
    sign = Fraction(-1) ** i
    own = _koorn_own_factors(m, i, sq)
    comp_plus = comp_base * own[2] * sign
    comp_minus = comp_base * own[1] * (-sign)
    return den_plus * comp_plus == d_total and den_minus * comp_minus == d_total


def _linear_factor(m: int, i: int, j: int, scale: Fraction) -> LaurentPoly:
    """scale * z_i - z_j on the doubled lattice (integral exponents)."""
    ei = [0] * m
    ei[i] = 2
    ej = [0] * m
    ej[j] = 2
    return LaurentPoly(m, {tuple(ei): scale, tuple(ej): Fraction(-1)})


def apply_macdonald_mult(
    q: Fraction, t: Fraction, r: int, f: LaurentPoly, m: int
) -> LaurentPoly:
    """Exact order-r Macdonald operator

        D_r f = t^binom(r,2) sum_{|I|=r} prod_{i in I, j not in I}
                (t z_i - z_j)/(z_i - z_j) * (prod_{i in I} T_{q,z_i}) f,

    computed over the common denominator prod_{k<l}(z_k - z_l).
    """
    if f.m != m:
        raise ValueError(f"f has {f.m} variables, expected {m}")
    if not 1 <= r <= m:
        raise ValueError(f"order r must satisfy 1 <= r <= {m}, got {r}")
    q = Fraction(q)
    t = Fraction(t)
    t_pref = t ** (r * (r - 1) // 2)

    vandermonde = LaurentPoly.one(m)
    for k in range(m):
        for l in range(k + 1, m):
            vandermonde = vandermonde * _linear_factor(m, k, l, Fraction(1))

    numerator = LaurentPoly.zero(m)
    for subset in itertools.combinations(range(m), r):
        inside = set(subset)
        outside = [j for j in range(m) if j not in inside]
        flips = sum(1 for i in inside for j in outside if i > j)
        piece = LaurentPoly.const(m, t_pref * Fraction(-1) ** flips)
        for i in subset:
            for j in outside:
                piece = piece * _linear_factor(m, i, j, t)
        # complement of the subset's denominator inside the Vandermonde
        for k in range(m):
            for l in range(k + 1, m):
                if (k in inside) == (l in inside):
                    piece = piece * _linear_factor(m, k, l, Fraction(1))
        shifted = f
        for i in subset:
            shifted = _scale_var(shifted, i, q)
        numerator = numerator + piece * shifted
    return divide_exact(numerator, vandermonde)


def _scale_var(f: LaurentPoly, i: int, q: Fraction) -> LaurentPoly:
    """T_{q,z_i}: z_i -> q z_i, exact for any rational q on even (integral)
    exponents; genuine half powers would need an irrational root and raise."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for exps, coeff in f.terms.items():
        e2 = exps[i]
        if e2 % 2:
            raise ValueError(
                "q-shift of a genuine half power needs q to be a perfect "
                "square; shift the squared variable instead"
            )
        terms[exps] = coeff * q ** (e2 // 2)
    return LaurentPoly(f.m, terms)
