"""Tests for the residual verification harness."""

import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffkern.operators import ParamsBC
from diffkern.sigma import DomainError, FamilyKind, PoleError, SigmaFamily
from diffkern.verify import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    FAMILY_TOLERANCES,
    BalancingError,
    IdentityId,
    applicable_families,
    first_failure,
    load_defaults,
    reports_to_json,
    residual,
    run_suite,
    sample_params,
    sample_point,
    solve_balancing,
)


@pytest.fixture(scope="module")
def families():
    return {
        "rational": SigmaFamily.rational(),
        "trig": SigmaFamily.trigonometric(),
        "elliptic": SigmaFamily.elliptic(),
    }


def task_rng(seed, ident, fam, m, n):
    return random.Random(f"{seed}|{ident.value}|{fam.kind.value}|{m}|{n}")


def sampled_residual(ident, fam, m, n, seed=11, points=3):
    rng = task_rng(seed, ident, fam, m, n)
    params = sample_params(ident, fam, m, n, rng)
    worst = 0.0
    for _ in range(points):
        pt = sample_point(ident, fam, m, n, params, rng)
        worst = max(worst, residual(ident, fam, m, n, params, pt))
    return worst


# ======================================================================
# identity catalogue
# ======================================================================


def test_every_identity_has_a_unique_evaluator():
    assert len(IdentityId) == 22
    values = {i.value for i in IdentityId}
    assert len(values) == 22
    # spot-check the public spellings
    assert "thm-ae1" in values
    assert "prop-exp-f" in values
    assert "factorized-c" in values
    assert "quasi-period" in values


def test_tolerances_come_from_config():
    cfg = load_defaults()
    assert FAMILY_TOLERANCES[FamilyKind.RATIONAL] == cfg["tolerances"]["rational"]
    assert FAMILY_TOLERANCES[FamilyKind.TRIGONOMETRIC] == cfg["tolerances"]["trig"]
    assert FAMILY_TOLERANCES[FamilyKind.ELLIPTIC] == cfg["tolerances"]["elliptic"]
    assert DEFAULT_SEED == cfg["seed"]
    assert DEFAULT_SAMPLES == cfg["samples"]


def test_applicability_table(families):
    assert applicable_families(IdentityId.RIEMANN) == (
        FamilyKind.RATIONAL,
        FamilyKind.TRIGONOMETRIC,
        FamilyKind.ELLIPTIC,
    )
    assert FamilyKind.ELLIPTIC not in applicable_families(IdentityId.THM_AT1)
    assert applicable_families(IdentityId.THM41_1) == (FamilyKind.TRIGONOMETRIC,)
    with pytest.raises(DomainError):
        residual(IdentityId.THM_AT1, families["elliptic"], 1, 1, {}, {})
    with pytest.raises(DomainError):
        sample_params(
            IdentityId.THM41_2, families["rational"], 1, 1, random.Random(0)
        )


# ======================================================================
# balancing conditions
# ======================================================================


def test_balancing_ae2_linear_solve(families):
    delta = 0.21 + 0.33j
    out = solve_balancing(
        IdentityId.THM_AE2, families["trig"], 2, 3, {"delta": delta, "v": 0.1}
    )
    assert out["kappa"] == -3 * delta / 2
    assert out["delta"] == delta and out["v"] == 0.1


def test_balancing_ae1_asserts_square(families):
    params = {"delta": 0.2 + 0.3j, "kappa": 0.1, "v": 0.0}
    assert solve_balancing(IdentityId.THM_AE1, families["trig"], 2, 2, params) == params
    with pytest.raises(BalancingError):
        solve_balancing(IdentityId.THM_AE1, families["trig"], 2, 3, params)


def test_balancing_ae2_unsatisfiable(families):
    with pytest.raises(BalancingError):
        solve_balancing(IdentityId.THM_AE2, families["trig"], 0, 0, {"delta": 0.3j})


def test_balancing_bce_constraints(families):
    delta, kappa = 0.08 + 0.29j, 0.09 + 0.04j
    for name in ("rational", "trig", "elliptic"):
        fam = families[name]
        mu = tuple(0.1 * k + 0.05j * (-1) ** k for k in range(2 * fam.rho))
        for ident, m, n in (
            (IdentityId.THM_BCE1, 2, 3),
            (IdentityId.THM_BCE2, 1, 2),
        ):
            out = solve_balancing(
                ident, fam, m, n, {"mu": mu, "delta": delta, "kappa": kappa}
            )
            p = ParamsBC(tuple(out["mu"]), delta, kappa, fam)
            if ident is IdentityId.THM_BCE1:
                constraint = 2 * (m - n) * kappa + p.c_const
            else:
                constraint = 2 * m * kappa + 2 * n * delta + p.c_const
            assert abs(constraint) < 1e-13


def test_balancing_key_identity_sums_to_zero(families):
    out = solve_balancing(
        IdentityId.KEY_IDENTITY_ELLIPTIC,
        families["elliptic"],
        2,
        2,
        {"cs": (0.1 + 0.2j, -0.3j, 0.07, 0.5)},
    )
    assert abs(sum(out["cs"])) < 1e-15


def test_balancing_leaves_unconstrained_ids_alone(families):
    params = {"delta": 0.1 + 0.3j, "kappa": 0.05, "v": 0.2}
    assert solve_balancing(IdentityId.THM_AT1, families["trig"], 3, 1, params) == params


@settings(max_examples=60, deadline=None)
@given(
    m=st.integers(min_value=1, max_value=5),
    n=st.integers(min_value=1, max_value=5),
    re=st.floats(min_value=-0.4, max_value=0.4),
    im=st.floats(min_value=0.05, max_value=0.5),
)
def test_balancing_ae2_exact_property(m, n, re, im):
    delta = complex(re, im)
    out = solve_balancing(
        IdentityId.THM_AE2, SigmaFamily.trigonometric(), m, n, {"delta": delta}
    )
    assert abs(m * out["kappa"] + n * delta) <= 1e-14 * abs(n * delta)


# ======================================================================
# residual evaluators
# ======================================================================


def test_riemann_structural_zero_when_arguments_coincide(families):
    pt = {"x": 0.21 + 0.03j, "y": -0.11 + 0.02j, "u": 0.07 - 0.01j, "v": 0.07 - 0.01j}
    for fam in families.values():
        assert residual(IdentityId.RIEMANN, fam, 1, 1, {}, pt) == 0.0


def test_at2_small_case_example(families):
    worst = sampled_residual(IdentityId.THM_AT2, families["trig"], 1, 1, points=5)
    assert worst < 1e-10


def test_ae1_elliptic_nome_point_two():
    # |p| = 0.2 needs Im(omega2) = ln(5) / (2 pi)
    omega2 = 0.17 + math.log(5.0) / (2 * math.pi) * 1j
    fam = SigmaFamily.elliptic(omega2=omega2)
    assert abs(fam.nome) == pytest.approx(0.2, rel=1e-12)
    worst = sampled_residual(IdentityId.THM_AE1, fam, 2, 2, points=3)
    assert worst < 1e-8


def test_every_identity_meets_family_tolerance(families):
    for ident in IdentityId:
        for name, fam in families.items():
            if fam.kind not in applicable_families(ident):
                continue
            m, n = (2, 2) if ident in (IdentityId.THM_AE1, IdentityId.HIGHER_A_KERNEL) else (2, 1)
            worst = sampled_residual(ident, fam, m, n)
            assert worst < FAMILY_TOLERANCES[fam.kind], (ident, name, worst)


def test_prop_exp_f_matches_direct_evaluation_all_families(families):
    # the expansion evaluator compares the coefficient form against F(z)
    # directly, so a small residual is exactly the required agreement
    for name, fam in families.items():
        worst = sampled_residual(IdentityId.PROP_EXP_F, fam, 2, 2, points=5)
        assert worst < FAMILY_TOLERANCES[fam.kind], (name, worst)


def test_factorized_constant_is_scale_pinned(families):
    # incoming scale must not matter: the statement fixes the normalization
    fam_a = SigmaFamily.trigonometric(scale=1.0)
    fam_b = SigmaFamily.trigonometric(scale=-3.7j)
    params = {"kappa": 0.11 + 0.02j, "lambda": 0.07 - 0.03j, "c": 0.19 + 0.23j}
    r_a = residual(IdentityId.FACTORIZED_C, fam_a, 2, 1, params, {})
    r_b = residual(IdentityId.FACTORIZED_C, fam_b, 2, 1, params, {})
    assert r_a == r_b
    assert r_a < 1e-12


def test_bctd_respects_incoming_scale_via_pinning(families):
    fam = SigmaFamily.trigonometric(scale=0.7 + 0.1j)
    worst = sampled_residual(IdentityId.THM_BCTD1, fam, 2, 1)
    assert worst < 1e-10


def test_rational_difference_variant_rhs_is_zero(families):
    # same statement, rational family: the factor collapses and the
    # difference of operators annihilates the kernel outright
    for ident in (IdentityId.THM_BCTD1, IdentityId.THM_BCTD2, IdentityId.FACTORIZED_C):
        worst = sampled_residual(ident, families["rational"], 2, 2)
        assert worst < 1e-11, ident


def test_higher_order_kernel_identity_all_orders(families):
    rng = task_rng(3, IdentityId.HIGHER_A_KERNEL, families["trig"], 2, 2)
    params = sample_params(IdentityId.HIGHER_A_KERNEL, families["trig"], 2, 2, rng)
    pt = sample_point(IdentityId.HIGHER_A_KERNEL, families["trig"], 2, 2, params, rng)
    # r=None sweeps every order; a single order can also be pinned
    assert residual(IdentityId.HIGHER_A_KERNEL, families["trig"], 2, 2, params, pt) < 1e-10
    single = dict(params)
    single["r"] = 2
    assert residual(IdentityId.HIGHER_A_KERNEL, families["trig"], 2, 2, single, pt) < 1e-10


def test_pole_error_names_the_subexpression(families):
    fam = families["trig"]
    params = {"cs": (0.1 + 0.05j, -0.2 + 0.1j)}
    pt = {"xs": (0.3 + 0.01j, -0.2 + 0.04j), "z": 0.3 + 0.01j}
    with pytest.raises(PoleError) as err:
        residual(IdentityId.PARTIAL_FRACTION, fam, 1, 1, params, pt)
    assert "z - x" in str(err.value)


# ======================================================================
# negative control
# ======================================================================


def test_broken_balancing_is_detected(families):
    fam = families["elliptic"]
    ident = IdentityId.THM_BCE2
    rng = task_rng(7, ident, fam, 2, 2)
    params = sample_params(ident, fam, 2, 2, rng)
    # a wide fixed point keeps the kernel O(1), so the perturbation is visible
    pt = {"x": (0.31 + 0.04j, -0.17 + 0.09j), "y": (0.23 - 0.05j, 0.08 + 0.11j)}
    assert residual(ident, fam, 2, 2, params, pt) < 1e-7
    broken = dict(params)
    broken["kappa"] = params["kappa"] + 1e-3
    assert residual(ident, fam, 2, 2, broken, pt) > 1e-4


# ======================================================================
# suite runner
# ======================================================================

SUBSET = (
    IdentityId.RIEMANN,
    IdentityId.THM_AT1,
    IdentityId.THM_AT2,
    IdentityId.THM_BCT1,
    IdentityId.THM_BCE2,
    IdentityId.THM41_1,
)


def test_suite_trig_subset_passes_at_1e9():
    reports = run_suite(ids=SUBSET, fam=SigmaFamily.trigonometric(), samples=8, seed=5)
    assert reports
    assert first_failure(reports, 1e-9) is None


def test_suite_accepts_string_ids():
    reports = run_suite(
        ids=["riemann", "thm-at2"], fam=SigmaFamily.trigonometric(), samples=4
    )
    assert {r.id for r in reports} == {IdentityId.RIEMANN, IdentityId.THM_AT2}


def test_suite_reports_are_sorted_and_complete():
    reports = run_suite(
        ids=[IdentityId.THM_AT2, IdentityId.RIEMANN],
        fam=SigmaFamily.trigonometric(),
        size_grid=[(2, 1), (1, 1)],
        samples=3,
    )
    keys = [(r.id.value, r.m, r.n) for r in reports]
    assert keys == sorted(keys)
    assert len(reports) == 4


def test_suite_filters_inapplicable_and_nonsquare():
    assert run_suite(ids=[IdentityId.THM41_1], fam=SigmaFamily.rational(), samples=2) == []
    reports = run_suite(
        ids=[IdentityId.THM_AE1],
        fam=SigmaFamily.trigonometric(),
        size_grid=[(1, 2), (2, 2)],
        samples=2,
    )
    assert [(r.m, r.n) for r in reports] == [(2, 2)]


def test_suite_deterministic_json(monkeypatch):
    kwargs = dict(ids=SUBSET[:3], fam=SigmaFamily.trigonometric(), samples=4, seed=99)
    first = reports_to_json(run_suite(**kwargs))
    second = reports_to_json(run_suite(**kwargs))
    assert first == second
    monkeypatch.setenv("KERNEL_VERIFY_THREADS", "1")
    third = reports_to_json(run_suite(**kwargs))
    assert first == third


def test_suite_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        run_suite(ids=[IdentityId.RIEMANN], samples=1, tol=0.0)


def test_report_json_shape():
    reports = run_suite(ids=[IdentityId.THM_AT2], fam=SigmaFamily.trigonometric(), samples=2)
    payload = json.loads(reports_to_json(reports))
    assert isinstance(payload, list) and payload
    entry = payload[0]
    assert list(entry.keys()) == [
        "id",
        "family",
        "m",
        "n",
        "seed",
        "samples",
        "max_residual",
        "params",
    ]
    assert entry["id"] == "thm-at2"
    assert entry["family"] == "trig"
    assert entry["samples"] == 2
    # complex parameters serialize as strings that parse back
    assert complex(entry["params"]["delta"])


def test_first_failure_uses_family_tolerances():
    reports = run_suite(ids=[IdentityId.RIEMANN], fam=SigmaFamily.trigonometric(), samples=3)
    assert first_failure(reports) is None
    assert first_failure(reports, 1e-30) is reports[0]
