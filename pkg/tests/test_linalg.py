import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opradius.linalg import (
    ConvergenceError,
    HermitianError,
    ShapeError,
    SpectrumDomainError,
    abs_op,
    aluthge,
    apply_map_hermitian,
    arithmetic,
    as_operator,
    cartesian,
    decode_matrix,
    encode_matrix,
    hermitian_eig,
    jacobi_eigh,
    operator_norm,
    polar_decompose,
)
from opradius.scalarmap import builtin

from conftest import random_operator


GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0


def test_as_operator_rejects_nonsquare():
    with pytest.raises(ShapeError):
        as_operator(np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        as_operator(np.zeros(4))


def test_as_operator_rejects_nonfinite():
    bad = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        as_operator(bad)


def test_arithmetic_add_sub_mul():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1j], [1, 0]], dtype=complex)
    np.testing.assert_allclose(arithmetic(a, b, "add"), a + b)
    np.testing.assert_allclose(arithmetic(a, b, "sub"), a - b)
    np.testing.assert_allclose(arithmetic(a, b, "mul"), a @ b)
    np.testing.assert_allclose(arithmetic(a, 2.0 - 1j, "scale"), (2.0 - 1j) * a)
    np.testing.assert_allclose(arithmetic(a, kind="adjoint"), a.conj().T)


def test_arithmetic_dimension_mismatch_message():
    a = np.eye(2, dtype=complex)
    b = np.eye(3, dtype=complex)
    with pytest.raises(ShapeError, match="2x2 vs 3x3"):
        arithmetic(a, b, "add")


def test_hermitian_eig_rejects_asymmetric():
    t = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(HermitianError):
        hermitian_eig(t)


def test_hermitian_eig_matches_reconstruction(rng):
    for d in (2, 3, 4, 6):
        g = random_operator(rng, d)
        h = (g + g.conj().T) / 2
        dec = hermitian_eig(h)
        v, lam = dec.vectors, dec.eigenvalues
        np.testing.assert_allclose((v * lam) @ v.conj().T, h, atol=1e-12)
        assert np.all(np.diff(lam) >= 0)


def test_jacobi_agrees_with_lapack(rng):
    """Cross-check of the two independent Hermitian eigensolver routes."""
    for d in (2, 3, 5, 8):
        g = random_operator(rng, d)
        h = (g + g.conj().T) / 2
        lam_j = jacobi_eigh(h).eigenvalues
        lam_l = np.linalg.eigvalsh(h)
        np.testing.assert_allclose(lam_j, lam_l, atol=1e-12 * max(1, d))


def test_jacobi_eigenvector_residual(rng):
    g = random_operator(rng, 5)
    h = (g + g.conj().T) / 2
    dec = jacobi_eigh(h)
    res = h @ dec.vectors - dec.vectors * dec.eigenvalues
    assert np.abs(res).max() < 1e-12


def test_jacobi_convergence_error():
    g = np.random.default_rng(0).normal(size=(6, 6))
    h = (g + g.T) / 2 + 0j
    with pytest.raises(ConvergenceError):
        jacobi_eigh(h, sweeps=0)


def test_operator_norm_fixtures(jordan2):
    assert operator_norm(jordan2) == pytest.approx(1.0, abs=1e-12)
    t = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    assert operator_norm(t) == pytest.approx(GOLDEN, abs=1e-12)
    assert operator_norm(np.eye(3, dtype=complex)) == pytest.approx(1.0, abs=1e-14)


def test_abs_op(jordan2):
    np.testing.assert_allclose(abs_op(jordan2), np.diag([0.0, 1.0]), atol=1e-14)
    # |T| is PSD and satisfies |T|^2 = T*T
    g = random_operator(np.random.default_rng(3), 4)
    m = abs_op(g)
    np.testing.assert_allclose(m, m.conj().T, atol=1e-13)
    np.testing.assert_allclose(m @ m, g.conj().T @ g, atol=1e-12)


def test_polar_reconstruction(rng):
    for d in (2, 3, 5):
        t = random_operator(rng, d)
        parts = polar_decompose(t)
        np.testing.assert_allclose(parts.isometry @ parts.modulus, t, atol=1e-12)
        # U*U acts as the identity on the range of |T| (full rank here a.s.)
        np.testing.assert_allclose(
            parts.isometry.conj().T @ parts.isometry, np.eye(d), atol=1e-11
        )


def test_polar_rank_deficient(jordan2):
    parts = polar_decompose(jordan2)
    np.testing.assert_allclose(parts.isometry @ parts.modulus, jordan2, atol=1e-14)
    # the isometry is restricted to the range: one nonzero singular direction
    s = np.linalg.svd(parts.isometry, compute_uv=False)
    np.testing.assert_allclose(s, [1.0, 0.0], atol=1e-12)


def test_aluthge_of_nilpotent_is_zero(jordan2):
    np.testing.assert_allclose(aluthge(jordan2), np.zeros((2, 2)), atol=1e-14)


def test_aluthge_similar_spectrum(rng):
    # Aluthge transform preserves eigenvalues
    t = random_operator(rng, 4)
    ev_t = np.sort_complex(np.linalg.eigvals(t))
    ev_a = np.sort_complex(np.linalg.eigvals(aluthge(t)))
    np.testing.assert_allclose(ev_t, ev_a, atol=1e-9)


def test_cartesian_parts(rng):
    t = random_operator(rng, 3)
    b, c = cartesian(t)
    np.testing.assert_allclose(b, b.conj().T, atol=1e-14)
    np.testing.assert_allclose(c, c.conj().T, atol=1e-14)
    np.testing.assert_allclose(b + 1j * c, t, atol=1e-14)


def test_apply_map_hermitian_psd():
    h = np.diag([0.0, 1.0, 4.0]).astype(complex)
    sq = apply_map_hermitian(h, builtin("power", [0.5]))
    np.testing.assert_allclose(sq, np.diag([0.0, 1.0, 2.0]), atol=1e-12)


def test_apply_map_hermitian_clamps_roundoff():
    h = np.diag([-1e-14, 1.0]).astype(complex)
    out = apply_map_hermitian(h, builtin("power", [0.5]))
    np.testing.assert_allclose(out, np.diag([0.0, 1.0]), atol=1e-12)


def test_apply_map_hermitian_rejects_negative_spectrum():
    h = np.diag([-1.0, 1.0]).astype(complex)
    with pytest.raises(SpectrumDomainError):
        apply_map_hermitian(h, builtin("power", [0.5]))


def test_encode_decode_roundtrip(rng):
    t = random_operator(rng, 3)
    obj = encode_matrix(t)
    assert obj["dim"] == 3
    assert len(obj["entries"]) == 9
    np.testing.assert_array_equal(decode_matrix(obj), t)
    # stays valid through JSON text
    np.testing.assert_array_equal(decode_matrix(json.loads(json.dumps(obj))), t)


@pytest.mark.parametrize(
    "obj",
    [
        {"dim": 2, "entries": [[0, 0]] * 3},
        {"dim": 0, "entries": []},
        {"entries": [[0, 0]]},
        {"dim": 1, "entries": [[0]]},
        {"dim": 1, "entries": [[0, "x"]]},
    ],
)
def test_decode_rejects_malformed(obj):
    with pytest.raises(ValueError):
        decode_matrix(obj)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=8, max_size=8))
def test_encode_decode_exact_on_floats(vals):
    t = np.array(vals[:4]).reshape(2, 2) + 1j * np.array(vals[4:]).reshape(2, 2)
    np.testing.assert_array_equal(decode_matrix(encode_matrix(t)), t)


# --- bulk properties over random draws ---------------------------------------


def test_polar_roundtrip_bulk(rng):
    for d in (2, 3, 4, 8):
        for _ in range(100):
            t = random_operator(rng, d)
            parts = polar_decompose(t)
            u, mod = parts.isometry, parts.modulus
            scale = max(1.0, operator_norm(t))
            assert operator_norm(u @ mod - t) <= 1e-9 * scale
            assert operator_norm(u @ u.conj().T @ u - u) <= 1e-9


def test_abs_op_square_consistency(rng):
    for d in (2, 3, 4, 8):
        for _ in range(25):
            t = random_operator(rng, d)
            m = abs_op(t)
            scale = max(1.0, operator_norm(t) ** 2)
            assert operator_norm(m @ m - t.conj().T @ t) <= 1e-9 * scale


def test_eig_residuals_on_gue(rng):
    for d in (2, 3, 4, 8):
        for _ in range(25):
            g = random_operator(rng, d)
            h = (g + g.conj().T) / 2
            dec = hermitian_eig(h)
            lam, v = dec.eigenvalues, dec.vectors
            scale = max(1.0, operator_norm(h))
            assert np.linalg.norm(h @ v - v * lam) <= 1e-10 * scale * d
            assert np.abs(v.conj().T @ v - np.eye(d)).max() <= 1e-10
            assert np.all(np.diff(lam) >= 0)


def test_spectral_mapping_multiset(rng):
    maps = [builtin("power", [2]), builtin("power", [0.5]), builtin("log1p")]
    for _ in range(25):
        t = random_operator(rng, 4)
        h = t.conj().T @ t  # PSD, inside every map's domain
        lam = hermitian_eig(h).eigenvalues
        for m in maps:
            got = np.sort(hermitian_eig(apply_map_hermitian(h, m.eval)).eigenvalues)
            want = np.sort(m.eval_array(np.clip(lam, 0.0, None)))
            np.testing.assert_allclose(got, want, atol=1e-10, rtol=1e-10)


def test_normal_matrices_are_aluthge_fixed(rng):
    for _ in range(25):
        g = random_operator(rng, 4)
        h = (g + g.conj().T) / 2
        assert operator_norm(aluthge(h) - h) <= 1e-9
        q, r = np.linalg.qr(random_operator(rng, 4))
        u = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        assert operator_norm(aluthge(u) - u) <= 1e-9
