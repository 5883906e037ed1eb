"""Tests for the difference operators, numeric and exact."""

import cmath
import random
from fractions import Fraction

import pytest

from diffkern.laurent import (
    ExactParams,
    InexactDivisionError,
    LaurentPoly,
    orbit_sum,
    sym_orbit_sum,
)
from diffkern.operators import (
    ParamsA,
    ParamsBC,
    apply_A,
    apply_A_higher,
    apply_D_BC,
    apply_E_BC,
    apply_E_BC_dup,
    apply_koorn_mult,
    apply_macdonald_mult,
    bc_constant,
    coeff_A,
    coeff_BC,
    coeff_BC_zero,
    dup_prefactor,
    koorn_denominator_check,
)
from diffkern.sigma import DomainError, FamilyKind, SigmaFamily, sigma_eval

RNG_SEED = 7041


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * (1 + abs(a) + abs(b))


def random_point(rng, m, spread=0.3):
    return tuple(
        complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        for _ in range(m)
    )


def probe_fn(x):
    return cmath.exp(0.31 * sum(x)) * (1 + 0.2 * x[0]) if x else 1.0 + 0j


@pytest.fixture(scope="module")
def families():
    return {
        "rational": SigmaFamily.rational(),
        "trig": SigmaFamily.trigonometric(),
        "elliptic": SigmaFamily.elliptic(),
    }


MU_POOL = (
    0.11 + 0.07j,
    -0.19 + 0.05j,
    0.23 - 0.14j,
    0.31 + 0.17j,
    -0.12 - 0.21j,
    0.16 + 0.25j,
    -0.27 + 0.09j,
    0.21 - 0.11j,
)

DELTA = 0.17 + 0.13j
KAPPA = -0.23 + 0.31j


def bc_params(fam):
    return ParamsBC(MU_POOL[: 2 * fam.rho], DELTA, KAPPA, fam)


# ======================================================================
# parameter validation
# ======================================================================


def test_params_A_rejects_lattice_points(families):
    with pytest.raises(DomainError):
        ParamsA(0.0, 0.3, families["rational"])
    with pytest.raises(DomainError):
        ParamsA(2.0, 0.3 + 0.1j, families["trig"])
    fam = families["elliptic"]
    with pytest.raises(DomainError):
        ParamsA(fam.omega2, 0.3 + 0.1j, fam)
    # generic values pass
    ParamsA(0.4 + 0.2j, 0.3 + 0.1j, fam)


def test_params_BC_requires_two_rho_parameters(families):
    for name, count in (("rational", 2), ("trig", 4), ("elliptic", 8)):
        fam = families[name]
        ParamsBC(MU_POOL[:count], DELTA, KAPPA, fam)
        with pytest.raises(ValueError):
            ParamsBC(MU_POOL[: count - 1], DELTA, KAPPA, fam)


def test_c_const_matches_definition(families):
    fam = families["trig"]
    p = bc_params(fam)
    expected = sum(MU_POOL[:4]) - (DELTA + KAPPA) + fam.omega1
    assert close(p.c_const, expected)


# ======================================================================
# type A
# ======================================================================


def test_coeff_A_single_variable_is_one(families):
    p = ParamsA(DELTA, KAPPA, families["trig"])
    assert coeff_A(p, (0.37 + 0.05j,), 0) == 1


def test_apply_A_on_constants_trig_rational(families):
    # sum_i A_i = [m kappa]/[kappa] in the trigonometric and rational cases
    rng = random.Random(RNG_SEED)
    for name in ("rational", "trig"):
        fam = families[name]
        p = ParamsA(DELTA, KAPPA, fam)
        for m in (1, 2, 3):
            x = random_point(rng, m)
            got = apply_A(p, lambda _: 1.0, x)
            want = sigma_eval(fam, m * KAPPA) / sigma_eval(fam, KAPPA)
            assert close(got, want), (name, m)


def test_apply_A_higher_r1_matches_first_order(families):
    rng = random.Random(RNG_SEED + 1)
    for fam in families.values():
        p = ParamsA(DELTA, KAPPA, fam)
        x = random_point(rng, 3)
        assert close(
            apply_A_higher(p, 1, probe_fn, x), apply_A(p, probe_fn, x), 1e-12
        )


def test_apply_A_higher_top_order_shifts_everything(families):
    rng = random.Random(RNG_SEED + 2)
    for fam in families.values():
        p = ParamsA(DELTA, KAPPA, fam)
        x = random_point(rng, 3)
        shifted = tuple(v + DELTA for v in x)
        assert close(apply_A_higher(p, 3, probe_fn, x), probe_fn(shifted), 1e-12)


def test_apply_A_higher_order_validation(families):
    p = ParamsA(DELTA, KAPPA, families["trig"])
    with pytest.raises(ValueError):
        apply_A_higher(p, 0, probe_fn, (0.1, 0.2))
    with pytest.raises(ValueError):
        apply_A_higher(p, 3, probe_fn, (0.1, 0.2))


def test_higher_A_operators_commute(families):
    # D_1 and D_2 commute; checked pointwise through nested application
    rng = random.Random(RNG_SEED + 3)
    for name in ("trig", "elliptic"):
        fam = families[name]
        p = ParamsA(DELTA, KAPPA, fam)
        x = random_point(rng, 3, 0.25)

        def d1_then_d2(pt):
            return apply_A_higher(p, 1, lambda y: apply_A_higher(p, 2, probe_fn, y), pt)

        def d2_then_d1(pt):
            return apply_A_higher(p, 2, lambda y: apply_A_higher(p, 1, probe_fn, y), pt)

        tol = 1e-9 if name == "elliptic" else 1e-11
        assert close(d1_then_d2(x), d2_then_d1(x), tol), name


# ======================================================================
# type BC, numeric
# ======================================================================


def test_coeff_BC_minus_is_plus_at_negated_point(families):
    rng = random.Random(RNG_SEED + 4)
    for fam in families.values():
        p = bc_params(fam)
        x = random_point(rng, 2)
        neg = tuple(-v for v in x)
        for i in range(2):
            assert close(coeff_BC(p, x, i, -1), coeff_BC(p, neg, i, +1), 1e-12)


def test_coeff_BC_zero_index_validation(families):
    p = bc_params(families["trig"])
    with pytest.raises(ValueError):
        coeff_BC_zero(p, (0.2,), 2)
    with pytest.raises(ValueError):
        coeff_BC(p, (0.2,), 0, 0)


def test_E_in_zero_variables_is_multiplication_by_C(families):
    for fam in families.values():
        p = bc_params(fam)
        got = apply_E_BC(p, lambda _: 3.5, ())
        assert close(got, 3.5 * bc_constant(p), 1e-10)


def test_sign_symmetry_of_E(families):
    # E with (mu | -delta, -kappa) equals E with (-mu | delta, kappa)
    rng = random.Random(RNG_SEED + 5)
    for name, fam in families.items():
        flipped = ParamsBC(MU_POOL[: 2 * fam.rho], -DELTA, -KAPPA, fam)
        negated = ParamsBC(
            tuple(-v for v in MU_POOL[: 2 * fam.rho]), DELTA, KAPPA, fam
        )
        x = random_point(rng, 2, 0.25)
        a = apply_E_BC(flipped, probe_fn, x)
        b = apply_E_BC(negated, probe_fn, x)
        tol = 1e-8 if name == "elliptic" else 1e-10
        assert close(a, b, tol), name


def test_negated_helper_matches_sign_symmetry(families):
    fam = families["trig"]
    p = bc_params(fam)
    q = p.negated()
    assert q.mu == tuple(-v for v in p.mu)
    assert q.delta == -DELTA and q.kappa == -KAPPA


def test_duplication_rewrite_of_E(families):
    # (1/4) prod [omega_s/2]^2 * E f agrees with the collapsed-denominator
    # form; this exercises every coefficient, including the constant-term
    # exponentials, against the duplication formula
    rng = random.Random(RNG_SEED + 6)
    for name, fam in families.items():
        p = bc_params(fam)
        for m in (1, 2):
            x = random_point(rng, m, 0.22)
            lhs = dup_prefactor(p) * apply_E_BC(p, probe_fn, x)
            rhs = apply_E_BC_dup(p, probe_fn, x)
            tol = 1e-7 if name == "elliptic" else 1e-9
            assert close(lhs, rhs, tol), (name, m)


def test_D_is_E_minus_constant_part(families):
    rng = random.Random(RNG_SEED + 7)
    for name, fam in families.items():
        p = bc_params(fam)
        x = random_point(rng, 2, 0.25)
        e_val = apply_E_BC(p, probe_fn, x)
        e_one = apply_E_BC(p, lambda _: 1.0, x)
        d_val = apply_D_BC(p, probe_fn, x)
        zero_sum = sum(coeff_BC_zero(p, x, r) for r in range(fam.rho))
        tol = 1e-8 if name == "elliptic" else 1e-10
        # E f = D f + E(1) f and E(1) = sum of shifts of 1 plus constants
        assert close(e_val, d_val + e_one * probe_fn(x), tol), name
        got_zero = e_one - (
            sum(coeff_BC(p, x, i, s) for i in range(2) for s in (1, -1))
        )
        assert close(got_zero, zero_sum, tol), name


def test_E_on_constants_trig_rational(families):
    # E(1) = C + ([2m kappa + c] - [c]) / [kappa] away from the elliptic case
    rng = random.Random(RNG_SEED + 8)
    for name in ("rational", "trig"):
        fam = families[name]
        p = bc_params(fam)
        for m in (1, 2, 3):
            x = random_point(rng, m, 0.24)
            got = apply_E_BC(p, lambda _: 1.0, x)
            c = p.c_const
            want = bc_constant(p) + (
                sigma_eval(fam, 2 * m * KAPPA + c) - sigma_eval(fam, c)
            ) / sigma_eval(fam, KAPPA)
            assert close(got, want, 1e-9), (name, m)


def test_balanced_elliptic_E_on_constants(families):
    # with 2 m kappa + c = 0, [kappa] E(1) = -[delta] C(mu | kappa, delta)
    fam = families["elliptic"]
    rng = random.Random(RNG_SEED + 9)
    m = 2
    mu = list(MU_POOL[: 2 * fam.rho])
    base = ParamsBC(tuple(mu), DELTA, KAPPA, fam)
    mu[-1] -= base.c_const + 2 * m * KAPPA
    p = ParamsBC(tuple(mu), DELTA, KAPPA, fam)
    assert abs(2 * m * KAPPA + p.c_const) < 1e-12
    x = random_point(rng, m, 0.2)
    lhs = sigma_eval(fam, KAPPA) * apply_E_BC(p, lambda _: 1.0, x)
    rhs = -sigma_eval(fam, DELTA) * bc_constant(p.swapped())
    assert close(lhs, rhs, 1e-7)


# ======================================================================
# exact Koornwinder operator
# ======================================================================


def numeric_koorn_apply(ep, f, sqrt_pt, m):
    """Independent float implementation of the bracket-form operator."""
    sa, sb, sc, sd = (complex(Fraction(v)) for v in (ep.sa, ep.sb, ep.sc, ep.sd))
    sq, st = complex(ep.sq), complex(ep.st)

    def br(w):
        return w - 1 / w

    def coeff(s_vec, i):
        si = s_vec[i]
        num = br(sa * si) * br(sb * si) * br(sc * si) * br(sd * si)
        den = br(si * si) * br(sq * si * si)
        for j in range(m):
            if j == i:
                continue
            sj = s_vec[j]
            num *= br(st * si * sj) * br(st * si / sj)
            den *= br(si * sj) * br(si / sj)
        return num / den

    inv = [1 / s for s in sqrt_pt]
    total = 0j
    base = f.eval_at(sqrt_pt)
    for i in range(m):
        up = list(sqrt_pt)
        up[i] *= sq
        down = list(sqrt_pt)
        down[i] /= sq
        total += coeff(sqrt_pt, i) * (f.eval_at(up) - base)
        total += coeff(inv, i) * (f.eval_at(down) - base)
    return total


@pytest.mark.parametrize("m", [1, 2, 3])
def test_koorn_denominator_complements(m):
    ep = ExactParams.default()
    for i in range(m):
        assert koorn_denominator_check(ep, m, i)


def test_koorn_kills_constants():
    ep = ExactParams.default()
    for m in (1, 2):
        assert apply_koorn_mult(ep, LaurentPoly.one(m), m).is_zero()


def test_koorn_matches_numeric_oracle():
    ep = ExactParams.default()
    rng = random.Random(RNG_SEED + 10)
    for m, mu in ((1, (1,)), (2, (1, 1)), (2, (2,))):
        f = orbit_sum(mu, m)
        exact = apply_koorn_mult(ep, f, m)
        for _ in range(3):
            pt = [
                cmath.rect(rng.uniform(0.85, 1.2), rng.uniform(0, 6.28))
                for _ in range(m)
            ]
            want = numeric_koorn_apply(ep, f, pt, m)
            got = exact.eval_at(pt)
            assert close(got, want, 1e-9), (m, mu)


def test_koorn_dominant_coefficient_is_eigenvalue():
    # triangular action: the coefficient on the dominant monomial of m_mu is
    # the eigenvalue sum_i [alpha t^(m-i) q^(mu_i); alpha t^(m-i)]
    ep = ExactParams.default()
    q, t, alpha = ep.q, ep.t, ep.alpha

    def pair_bracket(x, y):
        return x + 1 / x - y - 1 / y

    for m, mu in ((1, (1,)), (2, (1,)), (2, (1, 1)), (2, (2,))):
        f = orbit_sum(mu, m)
        result = apply_koorn_mult(ep, f, m)
        padded = tuple(mu) + (0,) * (m - len(mu))
        dominant = tuple(2 * e for e in padded)
        want = sum(
            pair_bracket(alpha * t ** (m - 1 - i) * q ** padded[i], alpha * t ** (m - 1 - i))
            for i in range(m)
        )
        assert result.coefficient(dominant) == want, (m, mu)


def test_koorn_output_invariant_and_triangular():
    from diffkern.laurent import is_W_invariant

    ep = ExactParams.default()
    f = orbit_sum((2, 1), 2)
    result = apply_koorn_mult(ep, f, 2)
    assert is_W_invariant(result)
    # support stays inside the doubled box of the input weight
    for exp in result.terms:
        assert max(abs(e) for e in exp) <= 4


def test_koorn_rejects_wrong_variable_count():
    ep = ExactParams.default()
    with pytest.raises(ValueError):
        apply_koorn_mult(ep, LaurentPoly.one(2), 3)


def test_koorn_non_invariant_input_fails_structurally():
    ep = ExactParams.default()
    bad = LaurentPoly.var_power(2, 0, 2)  # z_1 alone, not W-invariant
    with pytest.raises(InexactDivisionError):
        apply_koorn_mult(ep, bad, 2)


# ======================================================================
# exact Macdonald operators
# ======================================================================


def test_macdonald_on_constants():
    q, t = Fraction(1, 4), Fraction(4, 25)
    for m in (1, 2, 3):
        got = apply_macdonald_mult(q, t, 1, LaurentPoly.one(m), m)
        want = sum(t**k for k in range(m))
        assert got == LaurentPoly.const(m, want), m


def test_macdonald_top_order_is_global_shift():
    q, t = Fraction(1, 4), Fraction(4, 25)
    f = sym_orbit_sum((1,), 2)
    got = apply_macdonald_mult(q, t, 2, f, 2)
    # binom(2,2) coefficient is 1, so D_2 = t * T_{q,z_1} T_{q,z_2}
    assert got == f * (t * q)


def test_macdonald_order_validation():
    q, t = Fraction(1, 4), Fraction(4, 25)
    with pytest.raises(ValueError):
        apply_macdonald_mult(q, t, 0, LaurentPoly.one(2), 2)
    with pytest.raises(ValueError):
        apply_macdonald_mult(q, t, 3, LaurentPoly.one(2), 2)


def test_macdonald_operators_commute_exactly():
    q, t = Fraction(1, 3), Fraction(2, 7)
    f = sym_orbit_sum((2, 1), 3)
    d1 = lambda g: apply_macdonald_mult(q, t, 1, g, 3)
    d2 = lambda g: apply_macdonald_mult(q, t, 2, g, 3)
    assert d1(d2(f)) == d2(d1(f))


def test_macdonald_dominant_coefficient():
    q, t = Fraction(1, 4), Fraction(4, 25)
    f = sym_orbit_sum((2, 1), 2)
    got = apply_macdonald_mult(q, t, 1, f, 2)
    assert got.coefficient((4, 2)) == q**2 * t + q


def test_macdonald_numeric_cross_check():
    q, t = Fraction(1, 4), Fraction(4, 25)
    rng = random.Random(RNG_SEED + 11)
    m = 3
    f = sym_orbit_sum((2, 1, 1), m)
    exact = apply_macdonald_mult(q, t, 2, f, m)
    sq = cmath.sqrt(complex(q))
    for _ in range(2):
        pt = [
            cmath.rect(rng.uniform(0.9, 1.15), rng.uniform(0, 6.28))
            for _ in range(m)
        ]
        z = [s * s for s in pt]
        total = 0j
        import itertools as it

        for subset in it.combinations(range(m), 2):
            inside = set(subset)
            coeff = complex(t)  # t^binom(2,2... r=2 -> t^1
            for i in subset:
                for j in range(m):
                    if j not in inside:
                        coeff *= (complex(t) * z[i] - z[j]) / (z[i] - z[j])
            shifted = [s * sq if k in inside else s for k, s in enumerate(pt)]
            total += coeff * f.eval_at(shifted)
        assert close(exact.eval_at(pt), total, 1e-9)
