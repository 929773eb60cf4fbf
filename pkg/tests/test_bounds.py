import json

import numpy as np
import pytest

from opradius.bounds import (
    ABS_TOL,
    FURUTA_TOL,
    OPT_LOWER_TOL,
    REL_TOL,
    SIGN_PATTERN_LIMIT,
    TORUS_SAMPLES,
    TRIANGLE_TOL,
    InstanceContext,
    _tolerance,
    catalog,
    check_furuta_pointwise,
    draw_params,
    evaluate_bound,
    preload_radii,
    radius_preload_plan,
)
from opradius.linalg import apply_map_hermitian, hermitian_eig, operator_norm
from opradius.radius import OptimizerOptions
from opradius.scalarmap import from_spec

from conftest import random_operator


EXPECTED_IDS = [f"B{k}" for k in range(1, 23)] + ["B-P3"]


def _ctx(ops, seed=0, restarts=None):
    return InstanceContext(ops, OptimizerOptions(seed=seed, restarts=restarts))


def _params(n, d, seed=5):
    return draw_params(n, d, np.random.default_rng(seed))


# --- catalog shape -------------------------------------------------------


def test_catalog_ids_complete():
    cat = catalog()
    assert sorted(cat) == sorted(EXPECTED_IDS)
    for bid, spec in cat.items():
        assert spec.id == bid
        assert spec.description
        assert spec.arity in ("single", "tuple")
        assert spec.lhs_kind in ("exact", "optimized")
        assert spec.rhs_kind in ("exact", "optimized")


def test_catalog_is_cached_and_specs_frozen():
    cat = catalog()
    assert catalog() is cat
    with pytest.raises((AttributeError, TypeError)):
        cat["B1"].description = "tampered"


def test_unknown_bound_id_rejected(jordan2):
    with pytest.raises(ValueError, match="unknown bound"):
        evaluate_bound("B99", np.stack([jordan2]))


# --- tolerance ladder ----------------------------------------------------


def test_tolerance_exact_pair_small_scale():
    assert _tolerance(0.3, 0.4, "exact", "exact") == pytest.approx(
        ABS_TOL + REL_TOL, rel=1e-12
    )


def test_tolerance_scales_with_magnitude():
    tol = _tolerance(50.0, 2.0, "exact", "exact")
    assert tol == pytest.approx(ABS_TOL + 50.0 * REL_TOL, rel=1e-12)


def test_tolerance_optimized_rhs_is_looser():
    assert _tolerance(1.0, 1.0, "exact", "optimized") == pytest.approx(OPT_LOWER_TOL)
    assert _tolerance(1.0, 1.0, "exact", "optimized") > _tolerance(
        1.0, 1.0, "exact", "exact"
    )


def test_tolerance_double_optimized_is_loosest():
    assert _tolerance(1.0, 1.0, "optimized", "optimized") == pytest.approx(TRIANGLE_TOL)


def test_tolerance_optimized_lhs_only_stays_tight():
    # an under-estimated left side only makes an upper bound easier to meet
    assert _tolerance(1.0, 1.0, "optimized", "exact") == pytest.approx(
        ABS_TOL + REL_TOL
    )


# --- single-operator fixtures --------------------------------------------


def test_b1_identity_matrix():
    res = evaluate_bound("B1", np.stack([np.eye(2, dtype=complex)]))
    lower, upper = res.components
    assert lower["lhs"] == pytest.approx(0.5)
    assert lower["rhs"] == pytest.approx(1.0)
    assert upper["rhs"] == pytest.approx(1.0)
    assert res.passed


def test_b2_jordan_block_is_equality(jordan2):
    res = evaluate_bound("B2", np.stack([jordan2]))
    assert res.passed
    assert abs(res.slack) <= 1e-10


def test_b3_jordan_block(jordan2):
    # w(J)^2 = 1/4 while the half-sum of squared moduli is ||I||/2 = 1/2
    res = evaluate_bound("B3", np.stack([jordan2]))
    assert res.passed
    assert res.lhs == pytest.approx(0.25)
    assert res.rhs == pytest.approx(0.5)


def test_b4_shear_fixture():
    t = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    res = evaluate_bound("B4", np.stack([t]))
    # rhs = (golden ratio + 1)/2 since ||T^2|| = ||T||^2 fails but T^2 is a shear too
    assert res.passed
    assert res.rhs == pytest.approx(
        0.5 * ((1 + np.sqrt(5)) / 2 + np.sqrt(operator_norm(t @ t)))
    )


def test_b5_jordan_block(jordan2):
    res = evaluate_bound("B5", np.stack([jordan2]), opts=OptimizerOptions(seed=2))
    assert res.passed
    by_label = {c["label"]: c for c in res.components}
    # dw(J) = 1 sits between max{1/2, 1} = 1 and sqrt(1/4 + 1)
    assert by_label["norm2_le_dw"]["lhs"] == pytest.approx(1.0)
    assert by_label["norm2_le_dw"]["rhs"] == pytest.approx(1.0, abs=1e-7)
    assert by_label["w_le_dw"]["lhs"] == pytest.approx(0.5)
    assert by_label["dw_le_sqrt"]["rhs"] == pytest.approx(np.sqrt(1.25))


def test_b6_jordan_block(jordan2):
    res = evaluate_bound("B6", np.stack([jordan2]))
    # Aluthge transform of the shift vanishes, so the bound reads 1/2 <= 1/2
    assert res.passed
    assert abs(res.slack) <= 1e-10


# --- tuple fixtures -------------------------------------------------------


def test_b7_identity_pair_power2():
    ops = np.stack([np.eye(2, dtype=complex)] * 2)
    res = evaluate_bound("B7", ops, f=from_spec("power:2"), opts=OptimizerOptions(seed=4))
    first, second = res.components
    assert first["lhs"] == pytest.approx(np.sqrt(2.0), abs=1e-7)
    assert first["rhs"] == pytest.approx(np.sqrt(2.0))
    assert second["rhs"] == pytest.approx(2.0)
    assert res.passed


def test_b13_single_operator_collapses(jordan2):
    res = evaluate_bound("B13", np.stack([jordan2]), f=from_spec("power:2"))
    assert res.passed
    lower, upper = res.components
    assert lower["lhs"] == pytest.approx(0.5)
    assert upper["rhs"] == pytest.approx(0.5)
    assert lower["rhs"] == pytest.approx(0.5, abs=1e-7)


def test_b9_batch_rows_are_valid_lower_bounds(rng):
    ops = np.stack([random_operator(rng, 2) for _ in range(2)])
    ctx = _ctx(ops, seed=9)
    params = _params(2, 2)
    res = evaluate_bound("B9", ops, f=from_spec("power:2"), params=params, ctx=ctx)
    assert res.passed
    omegas, norms, lam = ctx.lam_batch(params)
    assert lam.shape == (TORUS_SAMPLES + 4, 2)
    assert np.allclose(np.abs(lam[:TORUS_SAMPLES]), 1.0)
    assert np.all(np.isin(lam[TORUS_SAMPLES:].real, (1.0, -1.0)))
    wf = ctx.wf("plain", from_spec("power:2"), params)
    assert np.max(omegas) <= wf + OPT_LOWER_TOL * max(1.0, wf)


def test_sign_patterns_dropped_for_large_tuples(rng):
    n = SIGN_PATTERN_LIMIT + 1
    ops = np.stack([random_operator(rng, 2) for _ in range(n)])
    ctx = _ctx(ops, seed=11)
    params = _params(n, 2)
    _, _, lam = ctx.lam_batch(params)
    assert lam.shape == (TORUS_SAMPLES, n)


# --- hypothesis gating ----------------------------------------------------


def test_map_missing_flag_skips_not_fails(rng):
    ops = np.stack([random_operator(rng, 2) for _ in range(2)])
    res = evaluate_bound("B8", ops, f=from_spec("expm1"))
    assert res.skipped
    assert res.passed  # a skip never counts against the suite
    assert "expm1" in res.skip_reason
    assert "concave" in res.skip_reason


def test_geometric_flag_gating(rng):
    ops = np.stack([random_operator(rng, 2)])
    res = evaluate_bound("B16", ops, f=from_spec("log1p"))
    assert res.skipped
    assert "geometrically_convex" in res.skip_reason


def test_missing_map_for_map_bound_raises(jordan2):
    with pytest.raises(ValueError, match="scalar map"):
        evaluate_bound("B7", np.stack([jordan2]))


def test_out_of_range_alpha_skips(jordan2):
    params = _params(1, 2)
    params["alpha"] = 1.5
    res = evaluate_bound("B17", np.stack([jordan2]), f=from_spec("power:2"), params=params)
    assert res.skipped
    assert "alpha" in res.skip_reason


def test_degenerate_holder_exponent_skips(jordan2):
    params = _params(1, 2)
    params["p_holder"] = 1.0
    res = evaluate_bound("B16", np.stack([jordan2]), f=from_spec("power:2"), params=params)
    assert res.skipped
    assert "exceed 1" in res.skip_reason


def test_bp3_requires_second_tuple(jordan2):
    params = _params(1, 2)
    del params["ops_prime"]
    with pytest.raises(ValueError, match="ops_prime"):
        evaluate_bound("B-P3", np.stack([jordan2]), f=from_spec("power:2"), params=params)


# --- result serialization -------------------------------------------------


def test_result_json_shape(jordan2):
    res = evaluate_bound("B2", np.stack([jordan2]))
    out = res.to_json()
    assert out["id"] == "B2"
    assert out["pass"] is True
    assert "passed" not in out
    assert set(out) >= {"lhs", "rhs", "slack", "tolerance_used", "fingerprint"}
    assert "skipped" not in out


def test_fingerprint_echoes_drawn_parameters(jordan2):
    params = draw_params(1, 2, np.random.default_rng(9))
    res = evaluate_bound("B6", np.stack([jordan2]), f=from_spec("power:2"),
                         params=params)
    echoed = res.fingerprint["params"]
    assert echoed["alpha"] == params["alpha"]
    assert echoed["alpha_f"] == params["alpha_f"]
    assert echoed["p_holder"] == params["p_holder"]
    assert echoed["weights"] == pytest.approx(list(params["weights"]))
    json.dumps(res.to_json())  # plain floats only, no ndarray leftovers


def test_skip_json_shape(jordan2):
    res = evaluate_bound("B8", np.stack([jordan2]), f=from_spec("expm1"))
    out = res.to_json()
    assert out["skipped"] is True
    assert out["skip_reason"].startswith("hypothesis")


# --- spectral shortcut used by the matrix-valued right sides ---------------


@pytest.mark.parametrize("spec", ["power:1", "power:2", "power:3", "power:0.5", "expm1", "log1p"])
def test_inverse_norm_identity_on_psd(rng, spec):
    # ||f^-1(M)|| for PSD M equals f^-1(lam_max(M)) because f^-1 is
    # increasing on [0, inf); the evaluators lean on this shortcut.
    f = from_spec(spec)
    g = random_operator(rng, 4)
    m = g @ g.conj().T
    direct = operator_norm(apply_map_hermitian(m, f.invert))
    top = float(np.max(hermitian_eig(m).eigenvalues))
    assert direct == pytest.approx(float(f.invert(top)), rel=1e-12, abs=1e-12)


# --- preload vs lazy ------------------------------------------------------


def test_preload_matches_lazy_evaluation(rng, six_maps):
    ops = np.stack([random_operator(rng, 3) for _ in range(2)])
    params = _params(2, 3, seed=17)
    opts = OptimizerOptions(seed=21)

    eager = InstanceContext(ops, opts)
    pairs = radius_preload_plan(EXPECTED_IDS, six_maps, eager, params)
    preload_radii(eager, pairs, params)
    lazy = InstanceContext(ops, opts)

    assert pairs, "plan should not be empty"
    for tag, f in pairs:
        assert eager.wf(tag, f, params) == pytest.approx(
            lazy.wf(tag, f, params), abs=1e-12
        )


def test_preload_plan_dedupes(rng, six_maps):
    ops = np.stack([random_operator(rng, 2)])
    ctx = _ctx(ops)
    params = _params(1, 2)
    pairs = radius_preload_plan(EXPECTED_IDS, six_maps, ctx, params)
    assert len(set((tag, f.name) for tag, f in pairs)) == len(pairs)
    # at n=1 the copies/weighted tuples alias the plain one
    tags = {tag for tag, _ in pairs}
    assert "copies" not in tags and "weighted" not in tags


def test_context_caches_radius_values(jordan2):
    ctx = _ctx(np.stack([jordan2]))
    params = _params(1, 2)
    f = from_spec("power:2")
    evaluate_bound("B7", np.stack([jordan2]), f=f, params=params, ctx=ctx)
    assert ("wf", "plain", "power:2") in ctx._c


# --- pointwise Cauchy-Schwarz check ---------------------------------------


def test_furuta_pointwise_endpoint(jordan2):
    res = check_furuta_pointwise(jordan2, 1.0, 1.0, trials=2000, seed=1)
    assert res.passed
    assert res.tolerance_used == FURUTA_TOL


def test_furuta_pointwise_interior(rng):
    t = random_operator(rng, 3)
    res = check_furuta_pointwise(t, 0.7, 0.6, trials=5000, seed=2)
    assert res.passed


def test_furuta_pointwise_range_validation(jordan2):
    with pytest.raises(ValueError):
        check_furuta_pointwise(jordan2, 1.2, 0.5)
    with pytest.raises(ValueError):
        check_furuta_pointwise(jordan2, 0.3, 0.3)


# --- documented failures --------------------------------------------------
#
# Two catalog entries are violated on open sets of instances; the checks
# below pin concrete certificates so any change that masks them is caught.
# The left sides are multistart values, hence certified lower bounds: a
# negative slack here cannot be an optimizer artifact.


def _violation_instance():
    rng = np.random.default_rng(4)
    t = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / np.sqrt(2.0)
    return np.stack([t]), _params(1, 2, seed=5)


def test_b22_known_violation_is_reported():
    ops, params = _violation_instance()
    res = evaluate_bound("B22", ops, f=from_spec("power:1"), params=params,
                         opts=OptimizerOptions(seed=3))
    assert not res.passed
    assert res.slack < -0.1


def test_b16_known_violation_is_reported():
    ops, params = _violation_instance()
    res = evaluate_bound("B16", ops, f=from_spec("power:0.5"), params=params,
                         opts=OptimizerOptions(seed=3))
    assert not res.passed
    assert res.slack < -0.05


def test_b22_violation_disappears_with_squared_norm_term():
    # replacing the smaller cross term w(|T|U|T|) by its ceiling ||T||^2
    # restores the inequality on the same certificate instance
    ops, params = _violation_instance()
    ctx = _ctx(ops, seed=3)
    f = from_spec("power:1")
    lhs = ctx.wf("dw", f, params)
    nrm = ctx.norm(0)
    w_alu = ctx.omega_of("aluthge0", ctx.aluthge(0))
    repaired = 0.5 * (f.eval(nrm) + f.eval(w_alu) + 2.0 * f.eval(nrm**2))
    assert lhs <= float(f.invert(repaired)) + 1e-9
